#pragma once
// Orlik-Solomon data on a finite p-adic arrangement: standard generators of
// I(x), graded ideals of the exterior algebra, the quotients A~(sigma) and
// A(sigma) as free Z-presentations, and the coefficient systems they form on
// a building region.

#include "acyc/building.hpp"
#include "acyc/coeffsys.hpp"
#include "acyc/exactla.hpp"
#include "acyc/exterior.hpp"

#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace acyc::os {

using ext::ExtElement;
using ext::MonoMask;

/// A statement expected to hold failed; what() carries the instance.
struct Falsification : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Arrangement {
    bt::PadicContext ctx;
    std::vector<IntVector> lines;

    std::size_t size() const { return lines.size(); }

    void validate() const
    {
        ctx.validate();
        if (lines.empty())
            throw std::invalid_argument("arrangement must be non-empty");
        if (lines.size() > 20)
            throw std::invalid_argument("arrangement too large (at most 20 lines)");
        for (std::size_t a = 0; a < lines.size(); ++a) {
            if (lines[a].size() != ctx.n())
                throw DimensionError("line " + std::to_string(a) + " must have d+1 = " + std::to_string(ctx.n()) +
                                     " coordinates");
            Integer g = 0;
            for (auto& x : lines[a])
                g = gcd(g, x);
            if (g != 1)
                throw std::invalid_argument("line " + std::to_string(a) + " is not primitive");
        }
        for (std::size_t a = 0; a < lines.size(); ++a)
            for (std::size_t b = a + 1; b < lines.size(); ++b) {
                IntMatrix m(ctx.n(), 2);
                for (std::size_t i = 0; i < ctx.n(); ++i) {
                    m(i, 0) = lines[a][i];
                    m(i, 1) = lines[b][i];
                }
                if (la::rank(m, Ring::rationals()) < 2)
                    throw std::invalid_argument("lines " + std::to_string(a) + " and " + std::to_string(b) +
                                                " define the same point");
            }
    }

    std::string str() const
    {
        std::ostringstream os;
        os << "p=" << ctx.p << " d=" << ctx.d << " lines=[";
        for (std::size_t a = 0; a < lines.size(); ++a) {
            os << (a ? "," : "") << "(";
            for (std::size_t i = 0; i < lines[a].size(); ++i)
                os << (i ? "," : "") << lines[a][i];
            os << ")";
        }
        return os.str() + "]";
    }
};

inline RatVector lattice_coords(const RatMatrix& lattice, const IntVector& a)
{
    auto inv = bt::inverse(lattice);
    RatVector c(a.size(), Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j)
            c[i] += inv(i, j) * a[j];
    return c;
}

inline int min_val(const RatVector& c, long p)
{
    int v = bt::kInfiniteValuation;
    for (auto& x : c)
        if (sgn(x) != 0)
            v = std::min(v, bt::val(x, p));
    return v;
}

/// The p-power multiple of `a` lying in L - pL.
inline RatVector rep_at(const IntVector& a, const RatMatrix& lattice, long p)
{
    int v = min_val(lattice_coords(lattice, a), p);
    if (v == bt::kInfiniteValuation)
        throw std::invalid_argument("zero vector has no representative");
    RatVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = Rational(a[i]) * bt::ppow(p, -v);
    return out;
}

/// Coordinates of rep_at(a, L) in the basis of L, reduced mod p.
inline std::vector<long> reduction(const IntVector& a, const RatMatrix& lattice, long p)
{
    auto c = lattice_coords(lattice, a);
    int v = min_val(c, p);
    std::vector<long> out;
    Integer pz = p;
    for (auto& x : c)
        out.push_back(bt::residue(x * bt::ppow(p, -v), pz).get_si());
    return out;
}

/// Subspace of F_p^n stored as its set of members.
class ResidueSpace {
public:
    ResidueSpace() = default;
    ResidueSpace(long p, std::size_t n) : p_(p), n_(n)
    {
        std::size_t total = 1;
        for (std::size_t i = 0; i < n; ++i) {
            total *= static_cast<std::size_t>(p);
            if (total > (std::size_t(1) << 20))
                throw std::invalid_argument("residue space too large");
        }
        member_.assign(total, 0);
        member_[0] = 1;
    }

    static ResidueSpace span(long p, std::size_t n, const std::vector<std::vector<long>>& gens)
    {
        ResidueSpace s(p, n);
        for (auto& g : gens)
            s.add(g);
        return s;
    }
    static ResidueSpace whole(long p, std::size_t n)
    {
        std::vector<std::vector<long>> e;
        for (std::size_t i = 0; i < n; ++i) {
            e.emplace_back(n, 0);
            e.back()[i] = 1;
        }
        return span(p, n, e);
    }

    std::size_t encode(const std::vector<long>& v) const
    {
        std::size_t k = 0;
        for (std::size_t i = n_; i-- > 0;)
            k = k * p_ + static_cast<std::size_t>(((v[i] % p_) + p_) % p_);
        return k;
    }
    std::vector<long> decode(std::size_t k) const
    {
        std::vector<long> v(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            v[i] = static_cast<long>(k % p_);
            k /= p_;
        }
        return v;
    }

    bool contains(const std::vector<long>& v) const { return member_[encode(v)]; }

    /// Adds a generator; false when it was already in the span.
    bool add(const std::vector<long>& v)
    {
        if (contains(v))
            return false;
        std::vector<std::size_t> old;
        for (std::size_t k = 0; k < member_.size(); ++k)
            if (member_[k])
                old.push_back(k);
        for (auto k : old) {
            auto u = decode(k);
            for (long c = 1; c < p_; ++c) {
                for (std::size_t i = 0; i < n_; ++i)
                    u[i] = (u[i] + v[i]) % p_;
                member_[encode(u)] = 1;
            }
        }
        basis_.push_back(v);
        return true;
    }

    std::size_t dim() const { return basis_.size(); }
    const std::vector<std::vector<long>>& basis() const { return basis_; }
    long p() const { return p_; }
    std::size_t n() const { return n_; }

    bool subset_of(const ResidueSpace& o) const
    {
        for (auto& b : basis_)
            if (!o.contains(b))
                return false;
        return true;
    }

    ResidueSpace intersect(const ResidueSpace& o) const
    {
        ResidueSpace out(p_, n_);
        for (std::size_t k = 0; k < member_.size(); ++k)
            if (member_[k] && o.member_[k])
                out.add(decode(k));
        return out;
    }

    ResidueSpace sum(const ResidueSpace& o) const
    {
        ResidueSpace out = *this;
        for (auto& b : o.basis_)
            out.add(b);
        return out;
    }

    friend bool operator==(const ResidueSpace& a, const ResidueSpace& b) { return a.member_ == b.member_; }
    friend bool operator<(const ResidueSpace& a, const ResidueSpace& b) { return a.member_ < b.member_; }

private:
    long p_ = 2;
    std::size_t n_ = 0;
    std::vector<char> member_;
    std::vector<std::vector<long>> basis_;
};

inline bool dependent(const std::vector<std::vector<long>>& vs, long p)
{
    if (vs.empty())
        return false;
    return ResidueSpace::span(p, vs[0].size(), vs).dim() < vs.size();
}

inline std::vector<std::size_t> members(MonoMask s)
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; s; ++i, s >>= 1)
        if (s & 1)
            out.push_back(i);
    return out;
}

/// Reductions of all lines modulo p L_x.
inline std::vector<std::vector<long>> reductions(const Arrangement& arr, const RatMatrix& lattice)
{
    std::vector<std::vector<long>> out;
    for (auto& a : arr.lines)
        out.push_back(reduction(a, lattice, arr.ctx.p));
    return out;
}

/// All S (|S| >= 2) whose reductions are linearly dependent.
inline std::vector<MonoMask> dependent_sets(const std::vector<std::vector<long>>& red, long p)
{
    std::vector<MonoMask> out;
    const std::size_t n = red.size();
    for (MonoMask s = 1; s < (MonoMask(1) << n); ++s) {
        if (ext::degree(s) < 2)
            continue;
        std::vector<std::vector<long>> vs;
        for (auto i : members(s))
            vs.push_back(red[i]);
        if (dependent(vs, p))
            out.push_back(s);
    }
    return out;
}

/// Minimal dependent sets.
inline std::vector<MonoMask> circuits(const std::vector<std::vector<long>>& red, long p)
{
    auto dep = dependent_sets(red, p);
    std::vector<MonoMask> out;
    for (auto s : dep) {
        bool minimal = true;
        for (auto t : dep)
            if (t != s && (t & s) == t) {
                minimal = false;
                break;
            }
        if (minimal)
            out.push_back(s);
    }
    return out;
}

inline std::vector<ExtElement> standard_generators(const Arrangement& arr, const bt::LatticeClass& x,
                                                   bool circuits_only = true)
{
    auto red = reductions(arr, x.rat());
    auto sets = circuits_only ? circuits(red, arr.ctx.p) : dependent_sets(red, arr.ctx.p);
    std::vector<ExtElement> out;
    for (auto s : sets)
        out.push_back(ext::delta_monomial(Ring::integers(), s));
    return out;
}

/// Homogeneous ideal of the exterior algebra on n letters over Z, as a
/// canonical HNF basis per degree (columns in the monomial basis).
struct GradedIdeal {
    int n = 0;
    std::vector<IntMatrix> basis;

    static GradedIdeal zero(int n)
    {
        GradedIdeal g;
        g.n = n;
        for (int q = 0; q <= n; ++q)
            g.basis.emplace_back(ext::monomials(n, q).size(), 0);
        return g;
    }

    static GradedIdeal generated(int n, const std::vector<ExtElement>& gens)
    {
        GradedIdeal g = zero(n);
        std::vector<std::vector<IntVector>> cols(n + 1);
        for (auto& x : gens) {
            int r = x.homogeneous_degree();
            if (r < 0)
                continue;
            for (int q = r; q <= n; ++q) {
                auto mons = ext::monomials(n, q);
                for (auto t : ext::monomials(n, q - r)) {
                    auto y = ext::wedge(x, ExtElement::monomial(x.ring(), t));
                    if (!y.is_zero())
                        cols[q].push_back(ext::coordinates(y, mons));
                }
            }
        }
        for (int q = 0; q <= n; ++q) {
            IntMatrix m(g.basis[q].rows(), cols[q].size());
            for (std::size_t j = 0; j < cols[q].size(); ++j)
                for (std::size_t i = 0; i < m.rows(); ++i)
                    m(i, j) = cols[q][j][i];
            g.basis[q] = la::hnf_basis(m);
        }
        return g;
    }

    GradedIdeal sum(const GradedIdeal& o) const
    {
        GradedIdeal g = *this;
        for (int q = 0; q <= n; ++q)
            g.basis[q] = la::hnf_basis(hconcat(basis[q], o.basis[q]));
        return g;
    }

    la::Submodule over(const Ring& r, int q) const { return la::Submodule::span(r, basis[q]); }

    std::size_t quotient_rank(int q) const { return basis[q].rows() - basis[q].cols(); }
    std::size_t quotient_rank() const
    {
        std::size_t t = 0;
        for (int q = 0; q <= n; ++q)
            t += quotient_rank(q);
        return t;
    }

    friend bool operator==(const GradedIdeal& a, const GradedIdeal& b) { return a.n == b.n && a.basis == b.basis; }
};

inline GradedIdeal from_submodules(int n, const std::vector<la::Submodule>& parts)
{
    GradedIdeal g;
    g.n = n;
    for (auto& s : parts)
        g.basis.push_back(la::hnf_basis(s.basis()));
    return g;
}

/// Free presentation of Z^m / I: P (rank x m) with kernel I, section S with P S = 1.
struct Presentation {
    IntMatrix P, S;
    std::vector<std::size_t> complement;  // monomial positions forming the basis, when they do

    std::size_t rank() const { return P.rows(); }
    bool monomial_basis() const { return complement.size() == rank(); }
};

inline Presentation present_quotient(const IntMatrix& ideal, const std::string& what = "quotient")
{
    const std::size_t m = ideal.rows(), r = ideal.cols();
    for (auto& x : la::smith_form(ideal))
        if (x != 1)
            throw Falsification("torsion in " + what + ": elementary divisor " + x.get_str());
    Presentation out;
    std::vector<bool> is_pivot(m, false);
    bool unit_pivots = true;
    for (std::size_t j = 0; j < r; ++j) {
        std::size_t i = 0;
        while (i < m && ideal(i, j) == 0)
            ++i;
        if (abs(ideal(i, j)) != 1)
            unit_pivots = false;
        is_pivot[i] = true;
    }
    if (unit_pivots) {
        for (std::size_t i = 0; i < m; ++i)
            if (!is_pivot[i])
                out.complement.push_back(i);
        IntMatrix e(m, out.complement.size());
        for (std::size_t j = 0; j < out.complement.size(); ++j)
            e(out.complement[j], j) = 1;
        auto qinv = bt::inverse(to_rat(hconcat(ideal, e)));
        std::vector<std::size_t> tail;
        for (std::size_t i = r; i < m; ++i)
            tail.push_back(i);
        out.P = to_int(qinv.select_rows(tail));
        out.S = e;
        return out;
    }
    auto k = la::kernel_basis(la::ExactMatrix{Ring::integers(), ideal.transpose()});
    out.P = k.transpose();
    out.S = IntMatrix(m, out.P.rows());
    for (std::size_t j = 0; j < out.P.rows(); ++j) {
        RatVector u(out.P.rows(), Rational(0));
        u[j] = 1;
        auto s = la::solve_in_image(la::ExactMatrix{Ring::integers(), out.P}, u);
        if (!s)
            throw Falsification("no integral section for " + what);
        for (std::size_t i = 0; i < m; ++i)
            out.S(i, j) = (*s)[i].get_num();
    }
    return out;
}

/// Columns of `sub` expressed in the saturated basis `basis` (exact integral solve).
inline IntMatrix coordinates_in(const IntMatrix& basis, const IntMatrix& sub)
{
    IntMatrix out(basis.cols(), sub.cols());
    for (std::size_t j = 0; j < sub.cols(); ++j) {
        auto col = sub.column(j);
        RatVector b(col.begin(), col.end());
        auto x = la::solve_in_image(la::ExactMatrix{Ring::integers(), basis}, b);
        if (!x)
            throw Falsification("vector outside the expected submodule");
        for (std::size_t i = 0; i < basis.cols(); ++i)
            out(i, j) = (*x)[i].get_num();
    }
    return out;
}

/// A~(sigma) = E~/I and A(sigma) = E/(E n I) over Z, per degree.
struct OSModule {
    int n = 0;
    GradedIdeal ideal;
    std::vector<Presentation> tilde;  // A~^q
    std::vector<IntMatrix> a_basis;   // A^q inside A~^q, columns in A~^q coordinates

    std::size_t tilde_rank(int q) const { return q < 0 || q > n ? 0 : tilde[q].rank(); }
    std::size_t a_rank(int q) const { return q < 0 || q > n ? 0 : a_basis[q].cols(); }
    std::size_t tilde_rank() const
    {
        std::size_t t = 0;
        for (int q = 0; q <= n; ++q)
            t += tilde_rank(q);
        return t;
    }
    std::size_t a_rank() const
    {
        std::size_t t = 0;
        for (int q = 0; q <= n; ++q)
            t += a_rank(q);
        return t;
    }

    /// delta on A~, degree q -> q-1.
    IntMatrix delta_bar(int q) const
    {
        if (q == 0)
            return IntMatrix(0, tilde[0].rank());
        return tilde[q - 1].P * ext::delta_matrix(n, q) * tilde[q].S;
    }
};

inline OSModule os_module(const GradedIdeal& ideal)
{
    OSModule m;
    m.n = ideal.n;
    m.ideal = ideal;
    for (int q = 0; q <= m.n; ++q)
        m.tilde.push_back(present_quotient(ideal.basis[q], "A~ in degree " + std::to_string(q)));
    for (int q = 0; q <= m.n; ++q) {
        if (q == 0) {
            m.a_basis.push_back(IntMatrix::identity(m.tilde[0].rank()));
            continue;
        }
        m.a_basis.push_back(la::kernel_basis(la::ExactMatrix{Ring::integers(), m.delta_bar(q)}));
    }
    return m;
}

/// A~(sigma) -> A~(tau) for I(sigma) inside I(tau), degree q.
inline IntMatrix tilde_map(const OSModule& from, const OSModule& to, int q)
{
    IntMatrix r = to.tilde[q].P * from.tilde[q].S;
    if (!(to.tilde[q].P * from.ideal.basis[q]).is_zero())
        throw Falsification("ideal of the face is not contained in the ideal of the coface");
    return r;
}

inline IntMatrix a_map(const OSModule& from, const OSModule& to, int q)
{
    return coordinates_in(to.a_basis[q], tilde_map(from, to, q) * from.a_basis[q]);
}

/// Image of E^q in A~^q computed from generators delta(e_0 ^ e_T), as a check on a_basis.
inline std::size_t image_of_E_rank(const OSModule& m, int q)
{
    auto gens = ext::subalgebra_E_basis(m.n, q);
    auto mons = ext::monomials(m.n, q);
    IntMatrix g(mons.size(), gens.size());
    for (std::size_t j = 0; j < gens.size(); ++j) {
        auto c = ext::coordinates(gens[j], mons);
        for (std::size_t i = 0; i < mons.size(); ++i)
            g(i, j) = c[i];
    }
    return la::rank(m.tilde[q].P * g);
}

/// Per-arrangement cache of vertex ideals and simplex modules.
class OSContext {
public:
    explicit OSContext(Arrangement arr) : arr_(std::move(arr)) { arr_.validate(); }

    const Arrangement& arrangement() const { return arr_; }
    int letters() const { return static_cast<int>(arr_.size()); }

    const GradedIdeal& vertex_ideal(const bt::LatticeClass& x)
    {
        auto it = vertex_.find(x);
        if (it != vertex_.end())
            return it->second;
        return vertex_.emplace(x, GradedIdeal::generated(letters(), standard_generators(arr_, x))).first->second;
    }

    /// Compares the circuit-generated ideal with the all-dependent-sets ideal.
    bool circuits_generate(const bt::LatticeClass& x)
    {
        auto full = GradedIdeal::generated(letters(), standard_generators(arr_, x, false));
        return full == vertex_ideal(x);
    }

    GradedIdeal simplex_ideal(std::vector<bt::LatticeClass> sigma)
    {
        std::sort(sigma.begin(), sigma.end());
        GradedIdeal g = GradedIdeal::zero(letters());
        for (auto& x : sigma)
            g = g.sum(vertex_ideal(x));
        return g;
    }

    const OSModule& module(std::vector<bt::LatticeClass> sigma)
    {
        std::sort(sigma.begin(), sigma.end());
        auto it = module_.find(sigma);
        if (it != module_.end())
            return it->second;
        return module_.emplace(sigma, os_module(simplex_ideal(sigma))).first->second;
    }

private:
    Arrangement arr_;
    std::map<bt::LatticeClass, GradedIdeal> vertex_;
    std::map<std::vector<bt::LatticeClass>, OSModule> module_;
};

enum class Variant { tilde, plain };

inline std::string to_string(Variant v) { return v == Variant::tilde ? "A~" : "A"; }

/// The coefficient system sigma -> A~(sigma) or A(sigma) on a building region,
/// in one degree or summed over all degrees.
inline cs::CoeffSystem os_coeffsystem(OSContext& os, const bt::BuildingRegion& br, const Ring& ring, Variant variant,
                                      std::optional<int> degree = std::nullopt)
{
    if (!(br.ctx.p == os.arrangement().ctx.p && br.ctx.d == os.arrangement().ctx.d))
        throw std::invalid_argument("region and arrangement disagree on p or d");
    const int n = os.letters();
    if (degree && (*degree < 0 || *degree > n))
        throw std::invalid_argument("degree out of range");
    std::vector<int> qs;
    if (degree)
        qs.push_back(*degree);
    else
        for (int q = 0; q <= n; ++q)
            qs.push_back(q);

    auto rank_of = [&](const OSModule& m, int q) { return variant == Variant::tilde ? m.tilde_rank(q) : m.a_rank(q); };
    auto map_of = [&](const OSModule& a, const OSModule& b, int q) {
        return variant == Variant::tilde ? tilde_map(a, b, q) : a_map(a, b, q);
    };

    cs::CoeffSystem out;
    out.direction = cs::Direction::cohomological;
    out.ring = ring;
    const Region& region = br.region;
    for (auto& layer : region.simplices) {
        out.rank.emplace_back();
        for (auto& s : layer) {
            const OSModule& ms = os.module(br.vertices_of(s));
            std::size_t r = 0;
            for (int q : qs)
                r += rank_of(ms, q);
            out.rank.back().push_back(r);
            for (auto& f : cs::proper_faces(s)) {
                const OSModule& mf = os.module(br.vertices_of(f));
                std::size_t rows = 0, cols = 0;
                for (int q : qs) {
                    rows += rank_of(ms, q);
                    cols += rank_of(mf, q);
                }
                IntMatrix m(rows, cols);
                std::size_t ro = 0, co = 0;
                for (int q : qs) {
                    auto b = map_of(mf, ms, q);
                    for (std::size_t i = 0; i < b.rows(); ++i)
                        for (std::size_t j = 0; j < b.cols(); ++j)
                            m(ro + i, co + j) = b(i, j);
                    ro += b.rows();
                    co += b.cols();
                }
                out.restriction.emplace(std::make_pair(f, s), std::move(m));
            }
        }
    }
    return out;
}

} // namespace acyc::os
