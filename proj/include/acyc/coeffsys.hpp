#pragma once
// Coefficient systems on a Region, their (co)chain complexes, the local
// three-term criteria S(k) / S*(k), and the coboundary solver that walks
// (k-1)-simplices by increasing nabla.

#include "acyc/exactla.hpp"
#include "acyc/region.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace acyc::cs {

enum class Direction { cohomological, homological };

inline std::string to_string(Direction d) { return d == Direction::cohomological ? "cohomological" : "homological"; }

struct FunctorialityViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotStable : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct SInstanceFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotCocycle : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline std::string simplex_str(const Simplex& s)
{
    std::string out = "{";
    for (std::size_t j = 0; j < s.size(); ++j)
        out += (j ? "," : "") + std::to_string(s[j]);
    return out + "}";
}

/// Proper nonempty faces of a sorted simplex.
inline std::vector<Simplex> proper_faces(const Simplex& s)
{
    std::vector<Simplex> out;
    const std::size_t n = s.size();
    for (std::size_t mask = 1; mask + 1 < (std::size_t(1) << n); ++mask) {
        Simplex f;
        for (std::size_t j = 0; j < n; ++j)
            if (mask >> j & 1)
                f.push_back(s[j]);
        out.push_back(f);
    }
    return out;
}

inline Simplex with_vertex(Simplex s, std::size_t v)
{
    s.insert(std::lower_bound(s.begin(), s.end(), v), v);
    return s;
}

inline Simplex without_vertex(Simplex s, std::size_t v)
{
    s.erase(std::find(s.begin(), s.end(), v));
    return s;
}

/// Free modules on simplices with restriction matrices for proper face
/// inclusions (face, coface). Cohomological: F(face) -> F(coface);
/// homological: V(coface) -> V(face).
struct CoeffSystem {
    Direction direction = Direction::cohomological;
    Ring ring = Ring::integers();
    std::vector<std::vector<std::size_t>> rank;  // [dim][index in region.simplices[dim]]
    std::vector<std::vector<std::vector<std::string>>> labels;  // optional basis labels
    std::map<std::pair<Simplex, Simplex>, IntMatrix> restriction;

    std::size_t rank_of(const Region& r, const Simplex& s) const { return rank[s.size() - 1][r.index_of(s)]; }

    IntMatrix map(const Region& r, const Simplex& face, const Simplex& coface) const
    {
        if (face == coface)
            return IntMatrix::identity(rank_of(r, face));
        auto it = restriction.find({face, coface});
        if (it == restriction.end())
            throw std::out_of_range("no restriction for " + simplex_str(face) + " in " + simplex_str(coface));
        return it->second;
    }
};

inline bool equal_mod(const IntMatrix& a, const IntMatrix& b, const Ring& r)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        return false;
    if (!r.is_finite())
        return a == b;
    const Integer m(r.modulus);
    for (std::size_t i = 0; i < a.data().size(); ++i)
        if (mod_floor(a.data()[i] - b.data()[i], m) != 0)
            return false;
    return true;
}

/// Shapes and r o r = r on every chain face < mid < top; reports the offending triple.
inline void check_functoriality(const Region& region, const CoeffSystem& cs)
{
    const bool co = cs.direction == Direction::cohomological;
    for (std::size_t k = 0; k < region.simplices.size(); ++k)
        for (auto& top : region.simplices[k]) {
            auto faces = proper_faces(top);
            for (auto& f : faces) {
                auto m = cs.map(region, f, top);
                std::size_t want_r = co ? cs.rank_of(region, top) : cs.rank_of(region, f);
                std::size_t want_c = co ? cs.rank_of(region, f) : cs.rank_of(region, top);
                if (m.rows() != want_r || m.cols() != want_c)
                    throw FunctorialityViolation("restriction " + simplex_str(f) + " in " + simplex_str(top) +
                                                 " has the wrong shape");
            }
            for (auto& mid : faces)
                for (auto& f : proper_faces(mid)) {
                    IntMatrix lhs = co ? cs.map(region, mid, top) * cs.map(region, f, mid)
                                       : cs.map(region, f, mid) * cs.map(region, mid, top);
                    if (!equal_mod(lhs, cs.map(region, f, top), cs.ring))
                        throw FunctorialityViolation("functoriality fails on " + simplex_str(f) + " < " +
                                                     simplex_str(mid) + " < " + simplex_str(top));
                }
        }
}

inline CoeffSystem constant_system(const Ring& ring, const Region& region, Direction direction)
{
    CoeffSystem cs;
    cs.direction = direction;
    cs.ring = ring;
    for (auto& layer : region.simplices) {
        cs.rank.emplace_back(layer.size(), 1);
        for (auto& s : layer)
            for (auto& f : proper_faces(s))
                cs.restriction.emplace(std::make_pair(f, s), IntMatrix::identity(1));
    }
    return cs;
}

/// Transposed restrictions with the opposite direction.
inline CoeffSystem dual_system(const CoeffSystem& cs)
{
    CoeffSystem out = cs;
    out.direction = cs.direction == Direction::cohomological ? Direction::homological : Direction::cohomological;
    for (auto& [key, m] : out.restriction)
        m = m.transpose();
    return out;
}

struct CochainAssembly {
    const Region* region = nullptr;
    const CoeffSystem* cs = nullptr;
    la::ChainComplexData complex;
    std::vector<std::vector<std::size_t>> offset;  // [dim][index] start of the block

    std::size_t degrees() const { return complex.ranks.size(); }
};

/// Cochain: (dc)_s = sum_{t < s} [s:t] r^t_s(c_t). Chain: (dc)_t = sum_{s > t} [s:t] r^s_t(c_s).
inline CochainAssembly assemble(const Region& region, const CoeffSystem& cs)
{
    check_functoriality(region, cs);
    CochainAssembly a;
    a.region = &region;
    a.cs = &cs;
    auto& c = a.complex;
    c.ring = cs.ring;
    c.cochain = cs.direction == Direction::cohomological;
    std::size_t top = 0;
    while (top < region.simplices.size() && !region.simplices[top].empty())
        ++top;
    for (std::size_t k = 0; k < top; ++k) {
        std::size_t off = 0;
        a.offset.emplace_back();
        for (std::size_t j = 0; j < region.simplices[k].size(); ++j) {
            a.offset[k].push_back(off);
            off += cs.rank[k][j];
        }
        c.ranks.push_back(off);
        std::vector<std::string> lab;
        for (std::size_t j = 0; j < region.simplices[k].size(); ++j)
            for (std::size_t b = 0; b < cs.rank[k][j]; ++b)
                lab.push_back(simplex_str(region.simplices[k][j]) + "#" + std::to_string(b));
        c.labels.push_back(std::move(lab));
    }
    for (std::size_t k = 0; k + 1 < top; ++k) {
        IntMatrix m = c.cochain ? IntMatrix(c.ranks[k + 1], c.ranks[k]) : IntMatrix(c.ranks[k], c.ranks[k + 1]);
        for (std::size_t j = 0; j < region.simplices[k + 1].size(); ++j) {
            const Simplex& s = region.simplices[k + 1][j];
            for (auto v : s) {
                Simplex t = without_vertex(s, v);
                std::size_t jt = region.index_of(t);
                int sign = region.incidence_sign(s, v);
                IntMatrix r = cs.map(region, t, s);
                std::size_t ro = c.cochain ? a.offset[k + 1][j] : a.offset[k][jt];
                std::size_t co = c.cochain ? a.offset[k][jt] : a.offset[k + 1][j];
                for (std::size_t x = 0; x < r.rows(); ++x)
                    for (std::size_t y = 0; y < r.cols(); ++y)
                        m(ro + x, co + y) += sign * r(x, y);
            }
        }
        c.maps.push_back(std::move(m));
    }
    c.validate();
    return a;
}

inline la::HomologyGroup cohomology_of_region(const CochainAssembly& a, std::size_t k)
{
    if (k >= a.complex.ranks.size())
        return {};
    return la::homology(a.complex, k);
}

struct ExactnessReport {
    std::string instance;
    bool exact = true;
    std::size_t middle_rank = 0;
    std::size_t middle_kernel_rank = 0;
    std::size_t image_rank = 0;
    std::optional<IntVector> witness;
};

inline ExactnessReport make_report(std::string instance, const la::Exactness& e)
{
    return {std::move(instance), e.exact, e.middle_rank, e.kernel_rank, e.image_rank, e.witness};
}

/// The three-term subquotient data for (eta_hat, M_0) after validation.
struct LocalInstance {
    Simplex eta;  // sorted
    std::vector<std::size_t> m0;  // sorted
    std::vector<Simplex> sigma;  // eta + z, per z in m0
    std::vector<std::pair<std::size_t, std::size_t>> pairs;  // positions in m0
    std::vector<Simplex> rho;  // eta + z + z'

    std::string describe(const std::vector<std::size_t>& eta_hat) const
    {
        std::ostringstream os;
        os << "eta_hat=(";
        for (std::size_t j = 0; j < eta_hat.size(); ++j)
            os << (j ? "," : "") << eta_hat[j];
        os << ") M0=" << simplex_str(m0);
        return os.str();
    }
};

/// N of eta_hat inside the region.
inline std::vector<std::size_t> region_N(const Region& r, const Geometry& g, const std::vector<std::size_t>& eta_hat)
{
    std::vector<std::size_t> out;
    for (std::size_t z = 0; z < r.vertex_count(); ++z) {
        if (std::find(eta_hat.begin(), eta_hat.end(), z) != eta_hat.end())
            continue;
        if (!std::all_of(eta_hat.begin(), eta_hat.end(), [&](std::size_t x) { return r.incident(x, z); }))
            continue;
        std::vector<std::size_t> t{z};
        t.insert(t.end(), eta_hat.begin(), eta_hat.end());
        if (g.is_pointed(t))
            out.push_back(z);
    }
    return out;
}

/// Nonempty stable subsets of n (at most 20 elements) with at most `limit` members.
inline std::vector<std::vector<std::size_t>> region_stable_subsets(const std::vector<std::size_t>& n, const Geometry& g,
                                                                   const std::vector<std::size_t>& eta_hat,
                                                                   std::size_t limit = 64)
{
    if (n.size() > 20)
        throw std::invalid_argument("N too large to enumerate");
    std::vector<std::vector<std::size_t>> out;
    for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << n.size()); ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) > limit)
            continue;
        std::vector<std::size_t> m;
        for (std::size_t j = 0; j < n.size(); ++j)
            if (mask >> j & 1)
                m.push_back(n[j]);
        if (stability_with(m, [&](std::size_t a, std::size_t b) { return g.meet(eta_hat, a, b); }).is_stable)
            out.push_back(m);
    }
    return out;
}

inline LocalInstance local_instance(const Region& region, const Geometry& geo, const std::vector<std::size_t>& eta_hat,
                                    std::vector<std::size_t> m0)
{
    LocalInstance li;
    li.eta = eta_hat;
    std::sort(li.eta.begin(), li.eta.end());
    if (!region.find(li.eta))
        throw std::invalid_argument("eta is not a simplex of the region");
    if (!geo.is_pointed(eta_hat))
        throw std::invalid_argument("eta_hat is not pointed");
    std::sort(m0.begin(), m0.end());
    m0.erase(std::unique(m0.begin(), m0.end()), m0.end());
    for (auto z : m0) {
        std::vector<std::size_t> t{z};
        t.insert(t.end(), eta_hat.begin(), eta_hat.end());
        if (std::find(eta_hat.begin(), eta_hat.end(), z) != eta_hat.end() || !geo.is_pointed(t))
            throw std::invalid_argument("M0 is not contained in N of eta_hat");
    }
    auto st = stability_with(m0, [&](std::size_t a, std::size_t b) { return geo.meet(eta_hat, a, b); });
    if (!st.is_stable)
        throw NotStable("M0 " + simplex_str(m0) + " is not stable");
    li.m0 = m0;
    for (auto z : m0) {
        li.sigma.push_back(with_vertex(li.eta, z));
        if (!region.find(li.sigma.back()))
            throw std::invalid_argument("z + eta is not a simplex of the region");
    }
    for (std::size_t a = 0; a < m0.size(); ++a)
        for (std::size_t b = a + 1; b < m0.size(); ++b)
            if (region.incident(m0[a], m0[b])) {
                Simplex r = with_vertex(li.sigma[a], m0[b]);
                if (!region.find(r))
                    continue;
                li.pairs.emplace_back(a, b);
                li.rho.push_back(r);
            }
    return li;
}

namespace detail_cs {

    inline void put_block(IntMatrix& m, std::size_t ro, std::size_t co, const IntMatrix& b, int sign)
    {
        for (std::size_t x = 0; x < b.rows(); ++x)
            for (std::size_t y = 0; y < b.cols(); ++y)
                m(ro + x, co + y) += sign * b(x, y);
    }

    inline std::vector<std::size_t> offsets(const std::vector<std::size_t>& sizes)
    {
        std::vector<std::size_t> o;
        std::size_t acc = 0;
        for (auto s : sizes) {
            o.push_back(acc);
            acc += s;
        }
        o.push_back(acc);
        return o;
    }

    /// d_in : F(eta) -> prod F(sigma_z), d_out : prod F(sigma_z) -> prod F(rho), cohomological.
    inline std::pair<IntMatrix, IntMatrix> s_maps(const Region& region, const CoeffSystem& cs, const LocalInstance& li)
    {
        std::vector<std::size_t> ms, rs;
        for (auto& s : li.sigma)
            ms.push_back(cs.rank_of(region, s));
        for (auto& r : li.rho)
            rs.push_back(cs.rank_of(region, r));
        auto mo = offsets(ms), ro = offsets(rs);
        const std::size_t ne = cs.rank_of(region, li.eta);
        IntMatrix din(mo.back(), ne), dout(ro.back(), mo.back());
        for (std::size_t a = 0; a < li.m0.size(); ++a)
            put_block(din, mo[a], 0, cs.map(region, li.eta, li.sigma[a]),
                      region.incidence_sign(li.sigma[a], li.m0[a]));
        for (std::size_t q = 0; q < li.pairs.size(); ++q) {
            auto [a, b] = li.pairs[q];
            // rho minus z_b is sigma_a; rho minus z_a is sigma_b
            put_block(dout, ro[q], mo[a], cs.map(region, li.sigma[a], li.rho[q]),
                      region.incidence_sign(li.rho[q], li.m0[b]));
            put_block(dout, ro[q], mo[b], cs.map(region, li.sigma[b], li.rho[q]),
                      region.incidence_sign(li.rho[q], li.m0[a]));
        }
        return {din, dout};
    }

    /// d_in : prod V(rho) -> prod V(sigma_z), d_out : prod V(sigma_z) -> V(eta), homological.
    inline std::pair<IntMatrix, IntMatrix> s_star_maps(const Region& region, const CoeffSystem& cs,
                                                       const LocalInstance& li)
    {
        std::vector<std::size_t> ms, rs;
        for (auto& s : li.sigma)
            ms.push_back(cs.rank_of(region, s));
        for (auto& r : li.rho)
            rs.push_back(cs.rank_of(region, r));
        auto mo = offsets(ms), ro = offsets(rs);
        const std::size_t ne = cs.rank_of(region, li.eta);
        IntMatrix din(mo.back(), ro.back()), dout(ne, mo.back());
        for (std::size_t a = 0; a < li.m0.size(); ++a)
            put_block(dout, 0, mo[a], cs.map(region, li.eta, li.sigma[a]),
                      region.incidence_sign(li.sigma[a], li.m0[a]));
        for (std::size_t q = 0; q < li.pairs.size(); ++q) {
            auto [a, b] = li.pairs[q];
            put_block(din, mo[a], ro[q], cs.map(region, li.sigma[a], li.rho[q]),
                      region.incidence_sign(li.rho[q], li.m0[b]));
            put_block(din, mo[b], ro[q], cs.map(region, li.sigma[b], li.rho[q]),
                      region.incidence_sign(li.rho[q], li.m0[a]));
        }
        return {din, dout};
    }

} // namespace detail_cs

/// F(eta) -> prod_{z in M0} F(z + eta) -> prod_{z,z'} F(z + z' + eta), exactness in the middle.
inline ExactnessReport check_S(const Region& region, const Geometry& geo, const CoeffSystem& cs,
                               const std::vector<std::size_t>& eta_hat, const std::vector<std::size_t>& m0)
{
    if (cs.direction != Direction::cohomological)
        throw std::invalid_argument("check_S needs a cohomological system");
    auto li = local_instance(region, geo, eta_hat, m0);
    auto [din, dout] = detail_cs::s_maps(region, cs, li);
    return make_report(li.describe(eta_hat), la::exact_at(din, dout, cs.ring));
}

/// Dual: sum V(z + z' + eta) -> sum V(z + eta) -> V(eta), exactness in the middle.
inline ExactnessReport check_S_star(const Region& region, const Geometry& geo, const CoeffSystem& cs,
                                    const std::vector<std::size_t>& eta_hat, const std::vector<std::size_t>& m0)
{
    if (cs.direction != Direction::homological)
        throw std::invalid_argument("check_S_star needs a homological system");
    auto li = local_instance(region, geo, eta_hat, m0);
    auto [din, dout] = detail_cs::s_star_maps(region, cs, li);
    return make_report(li.describe(eta_hat), la::exact_at(din, dout, cs.ring));
}

// ---------------------------------------------------------------------------
// Coboundary solver.

inline RatVector apply(const IntMatrix& m, const RatVector& x, const Ring& r)
{
    RatVector y(m.rows(), Rational(0));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (m(i, j) != 0 && sgn(x[j]) != 0)
                y[i] += Rational(m(i, j)) * x[j];
    for (auto& v : y)
        v = reduce_scalar(r, v);
    return y;
}

inline bool is_zero_vector(const RatVector& v)
{
    return std::all_of(v.begin(), v.end(), [](const Rational& x) { return sgn(x) == 0; });
}

struct SolveResult {
    RatVector b;
    std::size_t instances = 0;  // (eta_hat, M0) with M0 nonempty
    std::size_t levels = 0;
};

/// b with db = c for a k-cocycle c (k >= 1), following the nabla induction:
/// each (k-1)-simplex eta is fixed once, by a preimage over canonical_M0(eta).
inline SolveResult solve_coboundary(const CochainAssembly& a, const Geometry& geo, const RatVector& c, std::size_t k,
                                    bool check_instances = true)
{
    const Region& region = *a.region;
    const CoeffSystem& cs = *a.cs;
    const auto& cx = a.complex;
    const Ring& ring = cs.ring;
    if (!cx.cochain)
        throw std::invalid_argument("solve_coboundary needs a cochain assembly");
    if (k == 0 || k >= cx.ranks.size())
        throw std::invalid_argument("degree out of range");
    if (c.size() != cx.ranks[k])
        throw DimensionError("cochain length mismatch");
    RatVector cc(c.size());
    for (std::size_t i = 0; i < c.size(); ++i)
        cc[i] = reduce_scalar(ring, c[i]);
    if (k + 1 < cx.ranks.size() && !is_zero_vector(apply(cx.maps[k], cc, ring)))
        throw NotCocycle("c is not a cocycle");

    const auto& etas = region.simplices[k - 1];
    std::vector<std::size_t> order(etas.size());
    for (std::size_t j = 0; j < order.size(); ++j)
        order[j] = j;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return region.nabla_compare(etas[x], etas[y]) < 0;
    });

    SolveResult out;
    out.b.assign(cx.ranks[k - 1], Rational(0));
    const IntMatrix& dk = cx.maps[k - 1];
    std::optional<std::size_t> prev;
    for (auto j : order) {
        const Simplex& eta = etas[j];
        if (!prev || region.nabla_compare(etas[*prev], eta) != 0)
            ++out.levels;
        prev = j;
        auto eta_hat = region.i_sorted(eta);
        auto m0 = region.canonical_M0(eta);
        if (m0.empty())
            continue;
        ++out.instances;
        if (check_instances) {
            auto rep = check_S(region, geo, cs, eta_hat, m0);
            if (!rep.exact)
                throw SInstanceFailed("S(k) fails at " + rep.instance);
        }
        auto li = local_instance(region, geo, eta_hat, m0);
        auto [din, dout] = detail_cs::s_maps(region, cs, li);
        // Residual (db - c) on the blocks z + eta.
        RatVector db = apply(dk, out.b, ring);
        RatVector rhs;
        for (auto& s : li.sigma) {
            std::size_t js = region.index_of(s);
            std::size_t o = a.offset[k][js];
            for (std::size_t t = 0; t < cs.rank[k][js]; ++t)
                rhs.push_back(reduce_scalar(ring, -(db[o + t] - cc[o + t])));
        }
        auto y = la::solve_in_image(la::ExactMatrix{ring, din}, rhs);
        if (!y)
            throw SInstanceFailed("no preimage at " + li.describe(eta_hat));
        std::size_t o = a.offset[k - 1][j];
        for (std::size_t t = 0; t < y->size(); ++t)
            out.b[o + t] = reduce_scalar(ring, (*y)[t]);
    }
    auto check = apply(dk, out.b, ring);
    for (std::size_t i = 0; i < check.size(); ++i)
        if (reduce_scalar(ring, check[i] - cc[i]) != 0)
            throw std::logic_error("coboundary solver produced db != c");
    return out;
}

} // namespace acyc::cs
