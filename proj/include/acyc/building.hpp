#pragma once
// Bruhat-Tits building of PGL_{d+1}(Q_p): homothety classes of Z_p-lattices
// at finite precision p^m, and congruence subgroups U^{(n)}_x.
//
// A lattice class is stored by the canonical column HNF of the Z-lattice
// L + p^m Z^n for the representative L with L in Z_p^n, L not in p Z_p^n.
// The HNF is lower triangular with p-power diagonal.

#include "acyc/exactla.hpp"
#include "acyc/region.hpp"

#include <algorithm>
#include <climits>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace acyc::bt {

struct PrecisionExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct HypothesisViolated : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PadicContext {
    long p = 2;
    int precision = 8;  // m: arithmetic modulo p^m
    std::size_t d = 1;
    int guard = 1;

    std::size_t n() const { return d + 1; }
    Integer modulus() const { return ipow(p, precision); }

    void validate() const
    {
        if (!is_prime(p))
            throw RingError("p must be prime, got " + std::to_string(p));
        if (precision < 2)
            throw std::invalid_argument("precision must be at least 2");
        if (d < 1)
            throw std::invalid_argument("d must be at least 1");
    }
};

constexpr int kInfiniteValuation = INT_MAX;

inline int val(const Rational& q, long p)
{
    return sgn(q) == 0 ? kInfiniteValuation : valuation(q, p);
}

inline int min_valuation(const RatMatrix& m, long p)
{
    int v = kInfiniteValuation;
    for (auto& x : m.data())
        v = std::min(v, val(x, p));
    return v;
}

/// Image of a p-integral rational in Z / p^m, in [0, p^m).
inline Integer residue(const Rational& q, const Integer& pm)
{
    Integer inv;
    Integer den = q.get_den();
    if (!mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), pm.get_mpz_t()))
        throw std::domain_error("rational is not p-integral");
    return mod_floor(Integer(q.get_num()) * inv, pm);
}

inline IntMatrix residue(const RatMatrix& m, const Integer& pm)
{
    IntMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.data().size(); ++i)
        out.data()[i] = residue(m.data()[i], pm);
    return out;
}

inline IntMatrix operator*(const IntMatrix& m, const Integer& s)
{
    IntMatrix out = m;
    for (auto& x : out.data())
        x *= s;
    return out;
}

inline Rational ppow(long p, int e)
{
    return e >= 0 ? Rational(ipow(p, e)) : Rational(Integer(1), ipow(p, -e));
}

inline RatMatrix scaled(const RatMatrix& m, const Rational& s)
{
    RatMatrix out = m;
    for (auto& x : out.data())
        x *= s;
    return out;
}

/// Exact inverse over Q.
inline RatMatrix inverse(const RatMatrix& m)
{
    const std::size_t n = m.rows();
    if (m.cols() != n)
        throw DimensionError("inverse of a non-square matrix");
    RatMatrix a = m, inv = RatMatrix::identity(n);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t r = c;
        while (r < n && sgn(a(r, c)) == 0)
            ++r;
        if (r == n)
            throw std::domain_error("singular matrix");
        a.swap_rows(r, c);
        inv.swap_rows(r, c);
        Rational s = 1 / a(c, c);
        for (std::size_t j = 0; j < n; ++j) {
            a(c, j) *= s;
            inv(c, j) *= s;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || sgn(a(i, c)) == 0)
                continue;
            Rational f = a(i, c);
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) -= f * a(c, j);
                inv(i, j) -= f * inv(c, j);
            }
        }
    }
    return inv;
}

/// p-adic elementary divisor exponents of an invertible rational matrix, ascending.
inline std::vector<int> elementary_exponents(const RatMatrix& t, long p)
{
    Integer den = 1;
    for (auto& x : t.data())
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
    IntMatrix m = to_int(scaled(t, Rational(den)));
    auto divs = la::smith_form(m);
    const int vd = valuation(den, p);
    std::vector<int> out;
    for (auto& dv : divs) {
        if (dv == 0)
            throw std::domain_error("singular transition matrix");
        out.push_back(valuation(dv, p) - vd);
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct LatticeClass {
    IntMatrix basis;

    RatMatrix rat() const { return to_rat(basis); }

    /// Diagonal exponents a_i with basis(i,i) = p^{a_i}.
    std::vector<int> exponents(long p) const
    {
        std::vector<int> a;
        for (std::size_t i = 0; i < basis.rows(); ++i)
            a.push_back(valuation(basis(i, i), p));
        return a;
    }

    friend bool operator==(const LatticeClass& a, const LatticeClass& b) { return a.basis == b.basis; }
    friend bool operator<(const LatticeClass& a, const LatticeClass& b)
    {
        return std::lexicographical_compare(a.basis.data().begin(), a.basis.data().end(), b.basis.data().begin(),
                                            b.basis.data().end());
    }

    std::string str() const
    {
        std::ostringstream os;
        os << basis;
        return os.str();
    }
};

/// Canonical class of the O-span of the columns of `gens` (n rows, full rank).
inline LatticeClass canon_class(const RatMatrix& gens, const PadicContext& ctx)
{
    const std::size_t n = ctx.n();
    if (gens.rows() != n)
        throw DimensionError("lattice generators need d+1 rows");
    int vmin = min_valuation(gens, ctx.p);
    if (vmin == kInfiniteValuation)
        throw PrecisionExhausted("zero generating set");
    const Integer pm = ctx.modulus();
    IntMatrix g = residue(scaled(gens, ppow(ctx.p, -vmin)), pm);
    IntMatrix pmI(n, n);
    for (std::size_t i = 0; i < n; ++i)
        pmI(i, i) = pm;
    IntMatrix h = la::hnf_basis(hconcat(g, pmI));
    auto e = elementary_exponents(to_rat(h), ctx.p);
    if (e.back() > ctx.precision - ctx.guard)
        throw PrecisionExhausted("lattice exponent " + std::to_string(e.back()) + " exceeds precision budget " +
                                 std::to_string(ctx.precision - ctx.guard));
    return LatticeClass{h};
}

inline LatticeClass canon_class(const IntMatrix& gens, const PadicContext& ctx)
{
    return canon_class(to_rat(gens), ctx);
}

inline LatticeClass base_vertex(const PadicContext& ctx)
{
    return LatticeClass{IntMatrix::identity(ctx.n())};
}

/// Exponents s_j (ascending) with L_y = sum p^{s_j} O f_j for a basis f of L_x.
inline std::vector<int> relative_exponents(const LatticeClass& x, const LatticeClass& y, long p)
{
    return elementary_exponents(inverse(x.rat()) * y.rat(), p);
}

/// i(x) relative to z0: top d of (max s - s_j) sorted descending.
inline IValue relative_position(const LatticeClass& z0, const LatticeClass& x, long p)
{
    auto s = relative_exponents(z0, x, p);
    IValue out;
    for (std::size_t j = 0; j + 1 < s.size(); ++j)
        out.push_back(s.back() - s[j]);
    return out;
}

inline bool incident(const LatticeClass& x, const LatticeClass& y, long p)
{
    auto s = relative_exponents(x, y, p);
    return s.back() - s.front() == 1;
}

/// -v_p(det) mod (d+1); agrees with the coordinate-sum label on embedded apartments.
inline int label(const LatticeClass& x, long p)
{
    int v = 0;
    for (auto a : x.exponents(p))
        v += a;
    const int n = static_cast<int>(x.basis.rows());
    return ((-v) % n + n) % n;
}

/// Representative p^t L_y with p L_x in it, contained in L_x, not in p L_x.
/// nullopt when x and y are neither equal nor incident.
inline std::optional<RatMatrix> representative_below(const LatticeClass& x, const LatticeClass& y, long p)
{
    auto s = relative_exponents(x, y, p);
    if (s.back() - s.front() > 1)
        return std::nullopt;
    return scaled(y.rat(), ppow(p, -s.front()));
}

/// Proper nonzero subspaces of F_p^n as reduced column echelon bases.
inline std::vector<IntMatrix> proper_subspaces(std::size_t n, long p)
{
    std::vector<IntMatrix> out;
    for (std::size_t r = 1; r < n; ++r) {
        std::vector<bool> sel(n, false);
        std::fill(sel.end() - static_cast<long>(r), sel.end(), true);
        do {
            std::vector<std::size_t> piv;
            for (std::size_t i = 0; i < n; ++i)
                if (sel[i])
                    piv.push_back(i);
            // Free slots: rows below a column's pivot that are not pivot rows.
            std::vector<std::pair<std::size_t, std::size_t>> free;
            for (std::size_t c = 0; c < r; ++c)
                for (std::size_t i = piv[c] + 1; i < n; ++i)
                    if (!sel[i])
                        free.emplace_back(i, c);
            std::vector<long> digits(free.size(), 0);
            for (;;) {
                IntMatrix b(n, r);
                for (std::size_t c = 0; c < r; ++c)
                    b(piv[c], c) = 1;
                for (std::size_t f = 0; f < free.size(); ++f)
                    b(free[f].first, free[f].second) = digits[f];
                out.push_back(b);
                std::size_t f = 0;
                while (f < digits.size() && digits[f] == p - 1) {
                    digits[f] = 0;
                    ++f;
                }
                if (f == digits.size())
                    break;
                ++digits[f];
            }
        } while (std::next_permutation(sel.begin(), sel.end()));
    }
    return out;
}

inline Integer gaussian_binomial(std::size_t n, std::size_t k, long p)
{
    Integer num = 1, den = 1;
    for (std::size_t i = 0; i < k; ++i) {
        num *= ipow(p, static_cast<int>(n - i)) - 1;
        den *= ipow(p, static_cast<int>(i + 1)) - 1;
    }
    return num / den;
}

/// Classes [L'] with p L_x < L' < L_x, one per proper nonzero subspace of L_x / p L_x.
inline std::vector<LatticeClass> vertex_neighbors(const LatticeClass& x, const PadicContext& ctx)
{
    std::vector<LatticeClass> out;
    IntMatrix pb = x.basis;
    for (auto& v : pb.data())
        v *= ctx.p;
    for (auto& w : proper_subspaces(ctx.n(), ctx.p))
        out.push_back(canon_class(hconcat(x.basis * w, pb), ctx));
    std::sort(out.begin(), out.end());
    return out;
}

/// Nested representatives p L_k < L_0 < ... < L_k, or nullopt.
inline std::optional<std::vector<RatMatrix>> pointed_chain_check(const std::vector<LatticeClass>& xs, long p)
{
    if (xs.empty())
        throw std::invalid_argument("empty tuple");
    for (std::size_t a = 0; a < xs.size(); ++a)
        for (std::size_t b = a + 1; b < xs.size(); ++b)
            if (xs[a] == xs[b])
                throw std::invalid_argument("vertices of a pointed simplex must be distinct");
    const LatticeClass& last = xs.back();
    std::vector<RatMatrix> reps;
    for (std::size_t t = 0; t + 1 < xs.size(); ++t) {
        auto r = representative_below(last, xs[t], p);
        if (!r)
            return std::nullopt;
        reps.push_back(*r);
    }
    reps.push_back(last.rat());
    for (std::size_t t = 0; t + 2 < xs.size(); ++t) {
        // L_t inside L_{t+1}: coordinates of L_t in a basis of L_{t+1} are p-integral.
        auto c = inverse(reps[t + 1]) * reps[t];
        if (min_valuation(c, p) < 0)
            return std::nullopt;
    }
    return reps;
}

inline bool is_pointed(const std::vector<LatticeClass>& xs, long p)
{
    return pointed_chain_check(xs, p).has_value();
}

/// dim of L_0 / p L_k subtracted from d+1.
inline int ell(const std::vector<LatticeClass>& xs, long p)
{
    if (!is_pointed(xs, p))
        throw std::invalid_argument("ell of a non-pointed tuple");
    if (xs.size() == 1)
        return 0;
    auto s = relative_exponents(xs.back(), xs.front(), p);
    return static_cast<int>(std::count(s.begin(), s.end(), s.back()));
}

/// Intersection of two lattices given by p-integral generator matrices that
/// both contain p^N Z_p^n.
inline IntMatrix intersect_lattices(const RatMatrix& a, const RatMatrix& b, long p, int N)
{
    const std::size_t n = a.rows();
    const Integer pn = ipow(p, N);
    IntMatrix pnI(n, n);
    for (std::size_t i = 0; i < n; ++i)
        pnI(i, i) = pn;
    auto sa = la::Submodule::span(Ring::integers(), hconcat(residue(a, pn), pnI));
    auto sb = la::Submodule::span(Ring::integers(), hconcat(residue(b, pn), pnI));
    return sa.intersect(sb).basis();
}

inline bool in_N(const std::vector<LatticeClass>& eta_hat, const LatticeClass& z, long p)
{
    if (std::find(eta_hat.begin(), eta_hat.end(), z) != eta_hat.end())
        return false;
    auto t = eta_hat;
    t.insert(t.begin(), z);
    return is_pointed(t, p);
}

/// [eta | u1, u2] realized as the class of L_{u1} n L_{u2} (representatives
/// between p L_k and L_k); undefined when the intersection is p L_k.
inline std::optional<LatticeClass> lattice_meet(const std::vector<LatticeClass>& eta_hat, const LatticeClass& u1,
                                                const LatticeClass& u2, const PadicContext& ctx)
{
    if (!in_N(eta_hat, u1, ctx.p) || !in_N(eta_hat, u2, ctx.p))
        throw std::invalid_argument("meet arguments must lie in N");
    const LatticeClass& xk = eta_hat.back();
    auto r1 = *representative_below(xk, u1, ctx.p);
    auto r2 = *representative_below(xk, u2, ctx.p);
    auto e = xk.exponents(ctx.p);
    int N = 1 + *std::max_element(e.begin(), e.end());
    auto cap = intersect_lattices(r1, r2, ctx.p, N);
    IntMatrix pk = xk.basis;
    for (auto& v : pk.data())
        v *= ctx.p;
    auto pks = la::Submodule::span(Ring::integers(), hconcat(pk, IntMatrix::identity(ctx.n()) * ipow(ctx.p, N)));
    if (la::Submodule::span(Ring::integers(), cap) == pks)
        return std::nullopt;
    return canon_class(cap, ctx);
}

/// Class of sum_j p^{-m_j} O f_j for the columns f_j of `frame`.
inline LatticeClass embed_apartment(const RatMatrix& frame, const std::vector<long>& v, const PadicContext& ctx)
{
    if (v.size() != ctx.n() || frame.rows() != ctx.n() || frame.cols() != ctx.n())
        throw DimensionError("frame and vertex must have d+1 entries");
    RatMatrix g = frame;
    for (std::size_t j = 0; j < v.size(); ++j)
        for (std::size_t i = 0; i < g.rows(); ++i)
            g(i, j) *= ppow(ctx.p, -static_cast<int>(v[j]));
    return canon_class(g, ctx);
}

struct BuildingRegion {
    Region region;
    PadicContext ctx;
    std::vector<LatticeClass> vertex;
    std::map<LatticeClass, std::size_t> id;

    std::optional<std::size_t> find(const LatticeClass& v) const
    {
        auto it = id.find(v);
        if (it == id.end())
            return std::nullopt;
        return it->second;
    }

    std::vector<LatticeClass> vertices_of(const Simplex& s) const
    {
        std::vector<LatticeClass> out;
        for (auto v : s)
            out.push_back(vertex[v]);
        return out;
    }

    bool contains_ball(long r) const
    {
        IValue all(region.d, r);
        return all <= region.bound;
    }

    IValue i_by_layers(std::size_t x) const
    {
        return region.i_by_layers(
            x,
            [&](std::size_t a, std::size_t b) {
                auto s = relative_exponents(vertex[b], vertex[a], ctx.p);
                return std::count(s.begin(), s.end(), s.back()) == 1;
            },
            [&](long r) { return contains_ball(r); });
    }

    std::optional<std::size_t> meet(const Simplex& eta_hat, std::size_t u1, std::size_t u2) const
    {
        auto m = lattice_meet(vertices_of(eta_hat), vertex[u1], vertex[u2], ctx);
        if (!m)
            return std::nullopt;
        return find(*m);
    }

    Geometry geometry() const
    {
        return {[this](const std::vector<std::size_t>& t) { return is_pointed(vertices_of(t), ctx.p); },
                [this](const Simplex& e, std::size_t a, std::size_t b) { return meet(e, a, b); }};
    }
};

/// Vertices with relative position <=_lex B around z0, with all simplices among them.
inline BuildingRegion building_region(const LatticeClass& z0, const IValue& bound, const PadicContext& ctx)
{
    ctx.validate();
    if (bound.size() != ctx.d || !is_weakly_decreasing(bound))
        throw std::invalid_argument("bound must be a weakly decreasing d-tuple");
    BuildingRegion br;
    br.ctx = ctx;
    Region& r = br.region;
    r.d = ctx.d;
    r.bound = bound;
    std::vector<LatticeClass> found{z0};
    std::map<LatticeClass, std::size_t> seen{{z0, 0}};
    std::vector<std::vector<std::size_t>> adj(1);
    for (std::size_t q = 0; q < found.size(); ++q) {
        for (auto& y : vertex_neighbors(found[q], ctx)) {
            auto it = seen.find(y);
            if (it == seen.end()) {
                if (relative_position(z0, y, ctx.p) > bound)
                    continue;
                it = seen.emplace(y, found.size()).first;
                found.push_back(y);
                adj.emplace_back();
            }
            adj[q].push_back(it->second);
        }
    }
    // Renumber by (i, basis) so ids are canonical.
    std::vector<std::size_t> order(found.size());
    std::vector<IValue> iv(found.size());
    for (std::size_t v = 0; v < found.size(); ++v) {
        order[v] = v;
        iv[v] = relative_position(z0, found[v], ctx.p);
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return iv[a] != iv[b] ? iv[a] < iv[b] : found[a] < found[b];
    });
    std::vector<std::size_t> newid(found.size());
    for (std::size_t k = 0; k < order.size(); ++k)
        newid[order[k]] = k;
    r.adj.assign(found.size(), {});
    for (std::size_t k = 0; k < order.size(); ++k) {
        const auto& v = found[order[k]];
        br.vertex.push_back(v);
        br.id.emplace(v, k);
        r.ivalue.push_back(iv[order[k]]);
        r.label.push_back(label(v, ctx.p));
        r.name.push_back(v.str());
        for (auto w : adj[order[k]])
            r.adj[k].push_back(newid[w]);
    }
    r.z0 = br.id.at(z0);
    r.build_simplices();
    return br;
}

// ---------------------------------------------------------------------------
// Congruence subgroups.

/// B_x^{-1} g B_x = 1 mod p^n for g known modulo p^m.
inline bool congruence_membership(const IntMatrix& g, const LatticeClass& x, int n, const PadicContext& ctx)
{
    if (n >= ctx.precision)
        throw PrecisionExhausted("level must be below the precision");
    auto e = x.exponents(ctx.p);
    int a = 0;
    for (auto v : e)
        a += v;
    if (ctx.precision - a < n)
        throw PrecisionExhausted("conjugation by the vertex chart loses too much precision");
    RatMatrix b = x.rat();
    RatMatrix c = inverse(b) * to_rat(g) * b;
    for (std::size_t i = 0; i < c.rows(); ++i)
        c(i, i) -= 1;
    return min_valuation(c, ctx.p) >= n;
}

struct Factorization {
    IntMatrix g1, g2;
    int iterations = 0;
};

namespace detail_bt {

    inline IntMatrix mod_matrix(const IntMatrix& m, const Integer& pm)
    {
        IntMatrix out = m;
        for (auto& x : out.data())
            x = mod_floor(x, pm);
        return out;
    }

    inline IntMatrix inverse_mod(const IntMatrix& m, const Integer& pm)
    {
        return residue(inverse(to_rat(m)), pm);
    }

    /// Basis of the column span of an integer matrix modulo p (as integer lifts).
    inline IntMatrix span_mod_p(const IntMatrix& m, long p)
    {
        return la::canonical_span(Ring::prime_field(p), m);
    }

} // namespace detail_bt

/// Factor g in U_z^{(n)} as g1 g2 with g_s in U_{x_s}^{(n)}, where
/// L_z = L_{x1} n L_{x2} for representatives of x1, x2 containing L_z.
inline Factorization factor_congruence(const IntMatrix& g, const LatticeClass& z, const LatticeClass& x1,
                                       const LatticeClass& x2, int n, const PadicContext& ctx)
{
    using namespace detail_bt;
    const long p = ctx.p;
    const std::size_t dim = ctx.n();
    if (n < 1)
        throw std::invalid_argument("level must be at least 1");
    // Representatives p L_{x_s} < L_z < L_{x_s}.
    std::vector<RatMatrix> reps;
    for (const LatticeClass* x : {&x1, &x2}) {
        if (*x == z || !incident(z, *x, p))
            throw HypothesisViolated("x_s must be incident to z");
        auto s = relative_exponents(*x, z, p);
        reps.push_back(scaled(x->rat(), ppow(p, s.back() - 1)));
    }
    auto ez = z.exponents(p);
    int az = 0;
    for (auto v : ez)
        az += v;
    {
        auto cap = intersect_lattices(scaled(reps[0], Rational(p)), scaled(reps[1], Rational(p)), p, az + 2);
        auto want = la::hnf_basis(hconcat(z.basis * Integer(p), IntMatrix::identity(dim) * ipow(p, az + 2)));
        if (la::hnf_basis(cap) != want)
            throw HypothesisViolated("L_z is not the intersection of L_x1 and L_x2");
    }
    if (!congruence_membership(g, z, n, ctx))
        throw HypothesisViolated("g is not in U_z");

    // W_s = p L_{x_s} / p L_z inside L_z / p L_z, in coordinates of B_z.
    RatMatrix bz = z.rat();
    RatMatrix bzi = inverse(bz);
    std::vector<IntMatrix> w;
    std::vector<std::vector<std::size_t>> sets(2);
    for (int s = 0; s < 2; ++s) {
        auto coords = bzi * scaled(reps[s], Rational(p));
        w.push_back(span_mod_p(residue(coords, Integer(p)), p));
    }
    IntMatrix both = hconcat(w[0], w[1]);
    if (la::rank(both, Ring::prime_field(p)) != both.cols())
        throw HypothesisViolated("subspaces W_1 and W_2 are not independent");
    // Complete to a basis of F_p^n with unit vectors.
    IntMatrix c = both;
    for (std::size_t j = 0; j < dim && c.cols() < dim; ++j) {
        IntMatrix e(dim, 1);
        e(j, 0) = 1;
        auto t = hconcat(c, e);
        if (la::rank(t, Ring::prime_field(p)) == t.cols())
            c = t;
    }
    for (std::size_t j = 0; j < w[0].cols(); ++j)
        sets[0].push_back(j);
    for (std::size_t j = 0; j < w[1].cols(); ++j)
        sets[1].push_back(w[0].cols() + j);

    RatMatrix F = bz * to_rat(c);
    RatMatrix Fi = inverse(F);
    int aF = -min_valuation(Fi, p);
    const int M = ctx.precision + std::max(aF, 0);
    const Integer pM = ipow(p, M);
    IntMatrix gp = residue(Fi * to_rat(g) * F, pM);

    // Allowed valuation offsets c^s_ij.
    auto offset = [&](int s, std::size_t i, std::size_t j) {
        bool is = std::find(sets[s].begin(), sets[s].end(), i) != sets[s].end();
        bool js = std::find(sets[s].begin(), sets[s].end(), j) != sets[s].end();
        if (is && !js)
            return -1;
        if (!is && js)
            return 1;
        return 0;
    };

    Factorization out;
    IntMatrix h1 = IntMatrix::identity(dim), h2 = IntMatrix::identity(dim);
    for (;;) {
        IntMatrix err = mod_matrix(inverse_mod(h1, pM) * gp * inverse_mod(h2, pM), pM);
        for (std::size_t i = 0; i < dim; ++i)
            err(i, i) = mod_floor(err(i, i) - 1, pM);
        if (err.is_zero())
            break;
        if (++out.iterations > M + 1)
            throw std::logic_error("factorization did not converge");
        IntMatrix e1(dim, dim), e2(dim, dim);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) {
                if (err(i, j) == 0)
                    continue;
                if (offset(0, i, j) <= 0)
                    e1(i, j) = err(i, j);
                else
                    e2(i, j) = err(i, j);
            }
        h1 = mod_matrix(h1 * (IntMatrix::identity(dim) + e1), pM);
        h2 = mod_matrix((IntMatrix::identity(dim) + e2) * h2, pM);
    }
    const Integer pm = ctx.modulus();
    RatMatrix g1 = F * to_rat(h1) * Fi;
    RatMatrix g2 = F * to_rat(h2) * Fi;
    if (min_valuation(g1, p) < 0 || min_valuation(g2, p) < 0)
        throw PrecisionExhausted("factors are not p-integral in the standard chart");
    out.g1 = residue(g1, pm);
    out.g2 = residue(g2, pm);
    return out;
}

/// Uniform sample of g = B (1 + p^{n+a} X) B^{-1} in U_x^{(n)}, reduced mod p^m.
template <class Rng>
IntMatrix sample_congruence(const LatticeClass& x, int n, const PadicContext& ctx, Rng& rng)
{
    auto e = x.exponents(ctx.p);
    int a = 0;
    for (auto v : e)
        a += v;
    const std::size_t dim = ctx.n();
    const Integer pm = ctx.modulus();
    std::uniform_int_distribution<long> dist(0, 1L << 30);
    RatMatrix u = RatMatrix::identity(dim);
    Rational scale = ppow(ctx.p, n + a);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
            u(i, j) += scale * Rational(dist(rng));
    return residue(x.rat() * u * inverse(x.rat()), pm);
}

} // namespace acyc::bt
