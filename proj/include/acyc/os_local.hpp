#pragma once
// Local Orlik-Solomon statements around a pointed simplex eta_hat = (x_1..x_k)
// with chain p L_k = L_0 < L_1 < ... < L_k.  Every lattice between p L_k and
// L_k is handled as its image in L_k / p L_k = F_p^{d+1}.

#include "acyc/orlik_solomon.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace acyc::os {

struct Chain {
    const Arrangement* arr = nullptr;
    std::vector<bt::LatticeClass> verts;  // x_1..x_k
    RatMatrix top;                        // representative of L_k
    std::vector<ResidueSpace> V;          // V[j] = L_j / p L_k, V[0] = 0
    std::vector<std::vector<long>> res;   // lines in L_k / p L_k
    std::vector<std::size_t> block;       // j with e in L_j - L_{j-1}

    std::size_t k() const { return verts.size(); }
    long p() const { return arr->ctx.p; }
    std::size_t n() const { return arr->ctx.n(); }

    std::string str() const
    {
        std::ostringstream os;
        os << "(";
        for (std::size_t j = 0; j < verts.size(); ++j)
            os << (j ? "; " : "") << verts[j].str();
        return os.str() + ")";
    }

    void compute_blocks()
    {
        block.assign(res.size(), 0);
        for (std::size_t e = 0; e < res.size(); ++e) {
            std::size_t j = 1;
            while (!V[j].contains(res[e]))
                ++j;
            block[e] = j;
        }
    }

    bool in(std::size_t e, const ResidueSpace& w) const { return w.contains(res[e]); }

    /// Class of the lattice between p L_k and L_k with image w.
    bt::LatticeClass class_of(const ResidueSpace& w) const
    {
        const std::size_t m = n();
        IntMatrix g(m, w.dim() + m);
        for (std::size_t j = 0; j < w.dim(); ++j)
            for (std::size_t i = 0; i < m; ++i)
                g(i, j) = w.basis()[j][i];
        for (std::size_t i = 0; i < m; ++i)
            g(i, w.dim() + i) = p();
        return bt::canon_class(top * to_rat(g), arr->ctx);
    }

    /// The chain of (z, eta_hat) for L_0 < L_z < L_1 given by w.
    Chain prepend(const ResidueSpace& w) const
    {
        if (!(w.dim() > 0 && w.subset_of(V[1]) && !(w == V[1])))
            throw std::invalid_argument("subspace does not give an element of N");
        Chain c = *this;
        c.verts.insert(c.verts.begin(), class_of(w));
        c.V.insert(c.V.begin() + 1, w);
        c.compute_blocks();
        return c;
    }
};

inline ResidueSpace residue_image(const RatMatrix& top, const RatMatrix& lattice, long p)
{
    auto c = bt::inverse(top) * lattice;
    std::vector<std::vector<long>> cols;
    Integer pz = p;
    for (std::size_t j = 0; j < c.cols(); ++j) {
        std::vector<long> v;
        for (std::size_t i = 0; i < c.rows(); ++i)
            v.push_back(bt::residue(c(i, j), pz).get_si());
        cols.push_back(v);
    }
    return ResidueSpace::span(p, c.rows(), cols);
}

inline Chain make_chain(const Arrangement& arr, const std::vector<bt::LatticeClass>& verts)
{
    auto reps = bt::pointed_chain_check(verts, arr.ctx.p);
    if (!reps)
        throw std::invalid_argument("vertices do not form a pointed simplex");
    Chain c;
    c.arr = &arr;
    c.verts = verts;
    c.top = reps->back();
    c.V.emplace_back(arr.ctx.p, arr.ctx.n());
    for (auto& r : *reps)
        c.V.push_back(residue_image(c.top, r, arr.ctx.p));
    c.res = reductions(arr, c.top);
    c.compute_blocks();
    return c;
}

/// All w with 0 < w < V_1, i.e. the set N of eta_hat, sorted.
inline std::vector<ResidueSpace> neighborhood(const Chain& c)
{
    const ResidueSpace& v1 = c.V[1];
    std::set<ResidueSpace> seen{ResidueSpace(c.p(), c.n())};
    std::vector<ResidueSpace> frontier{ResidueSpace(c.p(), c.n())};
    std::vector<std::vector<long>> vecs;
    std::size_t total = 1;
    for (std::size_t i = 0; i < c.n(); ++i)
        total *= static_cast<std::size_t>(c.p());
    for (std::size_t k = 1; k < total; ++k) {
        auto v = v1.decode(k);
        if (v1.contains(v))
            vecs.push_back(v);
    }
    while (!frontier.empty()) {
        std::vector<ResidueSpace> next;
        for (auto& s : frontier)
            for (auto& v : vecs) {
                if (s.contains(v))
                    continue;
                ResidueSpace t = s;
                t.add(v);
                if (seen.insert(t).second)
                    next.push_back(t);
            }
        frontier = std::move(next);
    }
    std::vector<ResidueSpace> out;
    for (auto& s : seen)
        if (s.dim() > 0 && !(s == v1))
            out.push_back(s);
    return out;
}

struct Ordering {
    std::vector<std::size_t> order;  // order[position] = line
    std::vector<std::size_t> pos;    // pos[line] = position

    static Ordering from_order(std::vector<std::size_t> o)
    {
        Ordering r;
        r.pos.assign(o.size(), 0);
        for (std::size_t i = 0; i < o.size(); ++i)
            r.pos.at(o[i]) = i;
        r.order = std::move(o);
        return r;
    }
    static Ordering sorted_by(std::size_t n, const std::function<bool(std::size_t, std::size_t)>& less)
    {
        std::vector<std::size_t> o(n);
        std::iota(o.begin(), o.end(), 0);
        std::stable_sort(o.begin(), o.end(), less);
        return from_order(o);
    }
    bool precedes(std::size_t a, std::size_t b) const { return pos[a] < pos[b]; }

    std::string str() const
    {
        std::string s;
        for (std::size_t i = 0; i < order.size(); ++i)
            s += (i ? "<" : "") + std::to_string(order[i]);
        return s;
    }
};

/// Block index first, base order inside blocks.
inline Ordering adapted_ordering(const Chain& c)
{
    return Ordering::sorted_by(c.res.size(), [&](std::size_t a, std::size_t b) { return c.block[a] < c.block[b]; });
}

/// Block index weakly increasing along the ordering.
inline bool is_adapted(const Ordering& o, const Chain& c)
{
    for (std::size_t i = 0; i + 1 < o.order.size(); ++i)
        if (c.block[o.order[i]] > c.block[o.order[i + 1]])
            return false;
    return true;
}

/// Random adapted ordering: blocks in order, shuffled inside.
template <class Rng>
Ordering random_adapted_ordering(const Chain& c, Rng& rng)
{
    std::vector<std::size_t> o(c.res.size());
    std::iota(o.begin(), o.end(), 0);
    std::shuffle(o.begin(), o.end(), rng);
    std::stable_sort(o.begin(), o.end(), [&](std::size_t a, std::size_t b) { return c.block[a] < c.block[b]; });
    return Ordering::from_order(o);
}

/// e = max of A n <L_{j-1}, {e' in S : e' <= e}>.
inline bool special_test(std::size_t e, MonoMask s, const Chain& c, const Ordering& o)
{
    if (!(s >> e & 1))
        throw std::invalid_argument("special_test needs e in S");
    ResidueSpace w = c.V[c.block[e] - 1];
    for (auto f : members(s))
        if (o.pos[f] <= o.pos[e])
            w.add(c.res[f]);
    std::size_t best = e;
    for (std::size_t f = 0; f < c.res.size(); ++f)
        if (c.in(f, w) && o.pos[f] > o.pos[best])
            best = f;
    return best == e;
}

inline bool all_special(MonoMask s, const Chain& c, const Ordering& o)
{
    for (auto e : members(s))
        if (!special_test(e, s, c, o))
            return false;
    return true;
}

inline std::vector<MonoMask> nbc_basis(const Chain& c, const Ordering& o)
{
    std::vector<MonoMask> out;
    const std::size_t n = c.res.size();
    for (MonoMask s = 0; s < (MonoMask(1) << n); ++s)
        if (all_special(s, c, o))
            out.push_back(s);
    return out;
}

/// Empty when `mons` is a Z-basis of A~(eta) = E~/I(eta); otherwise the reason.
inline std::optional<std::string> basis_defect(const OSModule& m, const std::vector<MonoMask>& mons)
{
    for (int q = 0; q <= m.n; ++q) {
        auto all = ext::monomials(m.n, q);
        std::vector<std::size_t> cols;
        for (auto s : mons)
            if (ext::degree(s) == q)
                cols.push_back(std::lower_bound(all.begin(), all.end(), s) - all.begin());
        if (cols.size() != m.tilde_rank(q))
            return "degree " + std::to_string(q) + ": " + std::to_string(cols.size()) + " monomials for rank " +
                   std::to_string(m.tilde_rank(q));
        IntMatrix e(all.size(), cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j)
            e(cols[j], j) = 1;
        for (auto& x : la::smith_form(m.tilde[q].P * e))
            if (x != 1)
                return "degree " + std::to_string(q) + ": change of basis has elementary divisor " + x.get_str();
    }
    return std::nullopt;
}

inline std::string mask_str(MonoMask s)
{
    std::string out = "{";
    bool first = true;
    for (auto i : members(s)) {
        out += (first ? "" : ",") + std::to_string(i);
        first = false;
    }
    return out + "}";
}

/// M_0 as images in L_k / p L_k.
using Family = std::vector<ResidueSpace>;

/// Stable: pairwise intersections are again members (hence non-zero).
inline bool is_stable(const Family& m0)
{
    for (std::size_t a = 0; a < m0.size(); ++a)
        for (std::size_t b = a + 1; b < m0.size(); ++b) {
            if (m0[a] == m0[b])
                return false;
            auto w = m0[a].intersect(m0[b]);
            if (std::find(m0.begin(), m0.end(), w) == m0.end())
                return false;
        }
    return true;
}

inline std::size_t minimal_member(const Family& m0)
{
    for (std::size_t a = 0; a < m0.size(); ++a) {
        bool ok = true;
        for (auto& w : m0)
            if (!m0[a].subset_of(w))
                ok = false;
        if (ok)
            return a;
    }
    throw std::invalid_argument("family has no minimal member");
}

struct Collection {
    std::vector<Ordering> orders;  // parallel to the family
    std::size_t x0 = 0;
};

inline std::vector<char> in_union(const Chain& c, const Family& m0)
{
    std::vector<char> in_u(c.res.size(), 0);
    for (std::size_t e = 0; e < c.res.size(); ++e)
        for (auto& w : m0)
            if (c.in(e, w))
                in_u[e] = 1;
    return in_u;
}

/// The three-tier construction (L_z, U - L_z, rest) refining a base ordering
/// adapted to eta_hat with U first.
inline Collection adapted_collection(const Chain& c, const Family& m0)
{
    if (m0.empty())
        throw std::invalid_argument("M0 must be non-empty");
    for (auto& w : m0)
        c.prepend(w);
    if (!is_stable(m0))
        throw cs::NotStable("M0 is not stable");
    auto in_u = in_union(c, m0);
    auto base = Ordering::sorted_by(c.res.size(), [&](std::size_t a, std::size_t b) {
        if (c.block[a] != c.block[b])
            return c.block[a] < c.block[b];
        return in_u[a] > in_u[b];
    });
    Collection col;
    col.x0 = minimal_member(m0);
    for (auto& w : m0) {
        auto tier = [&](std::size_t e) { return c.in(e, w) ? 0 : in_u[e] ? 1 : 2; };
        std::vector<std::size_t> o = base.order;
        std::stable_sort(o.begin(), o.end(), [&](std::size_t a, std::size_t b) { return tier(a) < tier(b); });
        col.orders.push_back(Ordering::from_order(o));
    }
    return col;
}

/// The four defining conditions; returns the violated ones.
inline std::vector<std::string> check_collection(const Chain& c, const Family& m0, const Collection& col)
{
    std::vector<std::string> bad;
    const std::size_t n = c.res.size();
    auto agree = [&](const Ordering& a, const Ordering& b, const std::function<bool(std::size_t)>& sel) {
        for (std::size_t e = 0; e < n; ++e)
            for (std::size_t f = 0; f < n; ++f)
                if (e != f && sel(e) && sel(f) && a.precedes(e, f) != b.precedes(e, f))
                    return false;
        return true;
    };
    for (std::size_t z = 0; z < m0.size(); ++z)
        if (!is_adapted(col.orders[z], c.prepend(m0[z])))
            bad.push_back("ordering " + std::to_string(z) + " is not adapted to (z, eta_hat)");
    for (std::size_t a = 0; a < m0.size(); ++a)
        for (std::size_t b = 0; b < m0.size(); ++b) {
            if (a == b || !m0[a].subset_of(m0[b]))
                continue;
            if (!agree(col.orders[a], col.orders[b], [&](std::size_t e) { return c.in(e, m0[a]); }) ||
                !agree(col.orders[a], col.orders[b],
                       [&](std::size_t e) { return c.in(e, m0[b]) && !c.in(e, m0[a]); }))
                bad.push_back("orderings " + std::to_string(a) + " and " + std::to_string(b) +
                              " disagree on nested lattices");
        }
    const Ordering& o0 = col.orders[col.x0];
    for (std::size_t z = 0; z < m0.size(); ++z)
        if (!agree(o0, col.orders[z], [&](std::size_t e) { return !c.in(e, m0[z]); }))
            bad.push_back("ordering " + std::to_string(z) + " disagrees with x0 outside L_z");
    auto in_u = in_union(c, m0);
    bool first = true;
    for (std::size_t e = 0; e < n; ++e)
        for (std::size_t f = 0; f < n; ++f)
            if (in_u[e] && !in_u[f] && !o0.precedes(e, f))
                first = false;
    if (!first)
        bad.push_back("x0 ordering does not put the union first");
    return bad;
}

/// Quantifier order in the definition of G: one z serving every e in S, or
/// a z chosen per element e.
enum class GReading { common_z, per_element };

/// G(eta_hat; M_0) for the given orderings.
inline std::vector<MonoMask> g_set(const Chain& c, const Family& m0, const std::vector<Ordering>& orders,
                                   GReading reading = GReading::common_z)
{
    std::vector<Chain> ext;
    for (auto& w : m0)
        ext.push_back(c.prepend(w));
    std::vector<MonoMask> out;
    const std::size_t n = c.res.size();
    for (MonoMask s = 0; s < (MonoMask(1) << n); ++s) {
        bool ok = true;
        if (reading == GReading::common_z) {
            ok = false;
            for (std::size_t z = 0; z < m0.size() && !ok; ++z)
                ok = all_special(s, ext[z], orders[z]);
        } else {
            for (auto e : members(s)) {
                bool some = false;
                for (std::size_t z = 0; z < m0.size() && !some; ++z)
                    some = special_test(e, s, ext[z], orders[z]);
                if (!some) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok)
            out.push_back(s);
    }
    return out;
}

inline GradedIdeal eta_ideal(OSContext& os, const Chain& c) { return os.simplex_ideal(c.verts); }

inline std::vector<bt::LatticeClass> plus_vertex(const Chain& c, const bt::LatticeClass& z)
{
    auto v = c.verts;
    v.push_back(z);
    return v;
}

/// Ideal generated by I(eta) and the elements that are standard generators of every I(z).
inline GradedIdeal j_ideal(OSContext& os, const Chain& c, const Family& m0)
{
    const auto& arr = os.arrangement();
    std::vector<std::vector<std::vector<long>>> red;
    for (auto& w : m0)
        red.push_back(reductions(arr, c.class_of(w).rat()));
    std::vector<ExtElement> gens;
    for (MonoMask s = 1; s < (MonoMask(1) << arr.size()); ++s) {
        if (ext::degree(s) < 2)
            continue;
        bool all = true;
        for (auto& r : red) {
            std::vector<std::vector<long>> vs;
            for (auto i : members(s))
                vs.push_back(r[i]);
            if (!dependent(vs, arr.ctx.p)) {
                all = false;
                break;
            }
        }
        if (all)
            gens.push_back(ext::delta_monomial(Ring::integers(), s));
    }
    return eta_ideal(os, c).sum(GradedIdeal::generated(os.letters(), gens));
}

/// Intersection of I(eta u {z}) over z in M_0, per degree over r.
inline std::vector<la::Submodule> cap_ideal(OSContext& os, const Chain& c, const Family& m0, const Ring& r)
{
    std::vector<la::Submodule> out;
    std::vector<GradedIdeal> parts;
    for (auto& w : m0)
        parts.push_back(os.simplex_ideal(plus_vertex(c, c.class_of(w))));
    for (int q = 0; q <= os.letters(); ++q) {
        la::Submodule s = parts[0].over(r, q);
        for (std::size_t i = 1; i < parts.size(); ++i)
            s = s.intersect(parts[i].over(r, q));
        out.push_back(s);
    }
    return out;
}

inline GradedIdeal cap_ideal_z(OSContext& os, const Chain& c, const Family& m0)
{
    return from_submodules(os.letters(), cap_ideal(os, c, m0, Ring::integers()));
}

/// Vertices of M_0 that together with eta span a simplex: index tuples by size.
inline std::vector<std::vector<std::vector<std::size_t>>> family_simplices(const Chain& c, const Family& m0)
{
    std::vector<bt::LatticeClass> cls;
    for (auto& w : m0)
        cls.push_back(c.class_of(w));
    std::vector<std::vector<std::vector<std::size_t>>> out;
    std::vector<std::vector<std::size_t>> layer;
    for (std::size_t i = 0; i < m0.size(); ++i)
        layer.push_back({i});
    while (!layer.empty()) {
        out.push_back(layer);
        std::vector<std::vector<std::size_t>> next;
        for (auto& t : layer)
            for (std::size_t j = t.back() + 1; j < m0.size(); ++j) {
                bool ok = true;
                for (auto i : t)
                    if (!bt::incident(cls[i], cls[j], c.p()))
                        ok = false;
                if (ok) {
                    auto u = t;
                    u.push_back(j);
                    next.push_back(u);
                }
            }
        layer = std::move(next);
    }
    return out;
}

/// K(eta_hat, M_0) in exterior degree q as a cochain complex; position 0 is E~/cap.
inline la::ChainComplexData k_complex(OSContext& os, const Chain& c, const Family& m0, int q, const Ring& r)
{
    auto simp = family_simplices(c, m0);
    auto cap = cap_ideal_z(os, c, m0);
    auto cap_p = present_quotient(cap.basis[q], "E~/cap in degree " + std::to_string(q));
    std::vector<bt::LatticeClass> cls;
    for (auto& w : m0)
        cls.push_back(c.class_of(w));
    auto sigma_of = [&](const std::vector<std::size_t>& t) {
        auto v = c.verts;
        for (auto i : t)
            v.push_back(cls[i]);
        return v;
    };

    la::ChainComplexData k;
    k.ring = r;
    k.cochain = true;
    k.ranks.push_back(cap_p.rank());
    std::vector<std::vector<std::size_t>> offs;
    for (auto& layer : simp) {
        std::size_t off = 0;
        offs.emplace_back();
        for (auto& t : layer) {
            offs.back().push_back(off);
            off += os.module(sigma_of(t)).tilde_rank(q);
        }
        k.ranks.push_back(off);
    }
    IntMatrix d0(k.ranks[1], k.ranks[0]);
    for (std::size_t j = 0; j < simp[0].size(); ++j) {
        const auto& m = os.module(sigma_of(simp[0][j]));
        IntMatrix b = m.tilde[q].P * cap_p.S;
        for (std::size_t x = 0; x < b.rows(); ++x)
            for (std::size_t y = 0; y < b.cols(); ++y)
                d0(offs[0][j] + x, y) = b(x, y);
    }
    k.maps.push_back(d0);
    for (std::size_t t = 0; t + 1 < simp.size(); ++t) {
        IntMatrix d(k.ranks[t + 2], k.ranks[t + 1]);
        for (std::size_t j = 0; j < simp[t + 1].size(); ++j) {
            const auto& tau = simp[t + 1][j];
            const auto& mt = os.module(sigma_of(tau));
            for (std::size_t i = 0; i < tau.size(); ++i) {
                auto face = tau;
                face.erase(face.begin() + i);
                std::size_t jf = std::lower_bound(simp[t].begin(), simp[t].end(), face) - simp[t].begin();
                IntMatrix b = tilde_map(os.module(sigma_of(face)), mt, q);
                int sign = i % 2 ? -1 : 1;
                for (std::size_t x = 0; x < b.rows(); ++x)
                    for (std::size_t y = 0; y < b.cols(); ++y)
                        d(offs[t + 1][j] + x, offs[t][jf] + y) += sign * b(x, y);
            }
        }
        k.maps.push_back(d);
    }
    k.validate();
    return k;
}

/// Exactness of K at every position and every exterior degree.
inline std::vector<cs::ExactnessReport> k_complex_check(OSContext& os, const Chain& c, const Family& m0, const Ring& r)
{
    std::vector<cs::ExactnessReport> out;
    for (int q = 0; q <= os.letters(); ++q) {
        auto k = k_complex(os, c, m0, q, r);
        for (std::size_t i = 0; i < k.ranks.size(); ++i) {
            auto e = la::exact_at(k.incoming(i), k.outgoing(i), r, false);
            out.push_back(cs::make_report("q=" + std::to_string(q) + " position=" + std::to_string(i), e));
        }
    }
    return out;
}

/// Failures, each prefixed by the statement it refutes:
///   spans:  G generates E~/J
///   J=cap:  J equals the intersection of the I(eta u {z}), per ring
///   free:   E~/cap is free over Z
///   basis:  G maps to a Z-basis of E~/cap
inline std::vector<std::string> check_g_and_j(OSContext& os, const Chain& c, const Family& m0, const Collection& col,
                                              const std::vector<Ring>& rings, GReading reading = GReading::common_z)
{
    std::vector<std::string> bad;
    auto g = g_set(c, m0, col.orders, reading);
    auto j = j_ideal(os, c, m0);
    auto capz = cap_ideal(os, c, m0, Ring::integers());
    const int n = os.letters();
    for (int q = 0; q <= n; ++q) {
        auto mons = ext::monomials(n, q);
        std::vector<std::size_t> cols;
        for (auto s : g)
            if (ext::degree(s) == q)
                cols.push_back(std::lower_bound(mons.begin(), mons.end(), s) - mons.begin());
        IntMatrix e(mons.size(), cols.size());
        for (std::size_t k = 0; k < cols.size(); ++k)
            e(cols[k], k) = 1;
        auto span = la::Submodule::span(Ring::integers(), hconcat(j.basis[q], e));
        if (!(span == la::Submodule::whole(Ring::integers(), mons.size())))
            bad.push_back("spans: G does not generate E~/J in degree " + std::to_string(q));
        if (!capz[q].quotient_is_free()) {
            bad.push_back("free: E~/cap has torsion in degree " + std::to_string(q));
            continue;
        }
        auto pres = present_quotient(la::hnf_basis(capz[q].basis()));
        if (pres.rank() != cols.size()) {
            bad.push_back("basis: degree " + std::to_string(q) + " has rank " + std::to_string(pres.rank()) +
                          " but " + std::to_string(cols.size()) + " elements of G");
            continue;
        }
        for (auto& x : la::smith_form(pres.P * e))
            if (x != 1) {
                bad.push_back("basis: G is not a basis of E~/cap in degree " + std::to_string(q));
                break;
            }
    }
    for (auto& r : rings) {
        auto cap = cap_ideal(os, c, m0, r);
        for (int q = 0; q <= n; ++q)
            if (!(j.over(r, q) == cap[q]))
                bad.push_back("J=cap: J differs from the intersection over " + r.name() + " in degree " +
                              std::to_string(q));
    }
    return bad;
}

/// Failures of the decomposition identities for every maximal y in M_0.
inline std::vector<std::string> check_decompositions(OSContext& os, const Chain& c, const Family& m0,
                                                     const Collection& col, GReading reading = GReading::common_z)
{
    std::vector<std::string> bad;
    if (m0.size() < 2)
        return bad;
    auto g0 = g_set(c, m0, col.orders, reading);
    auto cap_rank = [&](const Chain& ch, const Family& f) {
        std::size_t r = 0;
        for (auto& s : cap_ideal(os, ch, f, Ring::integers()))
            r += s.quotient_rank();
        return r;
    };
    const std::size_t r0 = cap_rank(c, m0);
    for (std::size_t y = 0; y < m0.size(); ++y) {
        bool maximal = true;
        for (std::size_t z = 0; z < m0.size(); ++z)
            if (z != y && m0[y].subset_of(m0[z]))
                maximal = false;
        if (!maximal)
            continue;
        std::string tag = "y=" + std::to_string(y) + ": ";
        Family m1, m1p;
        std::vector<Ordering> o1, o1p;
        Collection c1, c1p;
        for (std::size_t z = 0; z < m0.size(); ++z) {
            if (z == y)
                continue;
            m1.push_back(m0[z]);
            c1.orders.push_back(col.orders[z]);
            if (m0[z].subset_of(m0[y])) {
                m1p.push_back(m0[z]);
                c1p.orders.push_back(col.orders[z]);
            }
        }
        Chain cy = c.prepend(m0[y]);
        if (!is_stable(m1) || !is_stable(m1p) || m1p.empty()) {
            bad.push_back("stable: " + tag + "M1 or M1' is not stable");
            continue;
        }
        c1.x0 = minimal_member(m1);
        c1p.x0 = minimal_member(m1p);
        auto g1 = g_set(c, m1, c1.orders, reading);
        auto gy = g_set(c, {m0[y]}, {col.orders[y]}, reading);
        auto g1p = g_set(cy, m1p, c1p.orders, reading);
        std::vector<MonoMask> uni, inter;
        std::set_union(g1.begin(), g1.end(), gy.begin(), gy.end(), std::back_inserter(uni));
        std::set_intersection(g1.begin(), g1.end(), gy.begin(), gy.end(), std::back_inserter(inter));
        if (uni != g0)
            bad.push_back("union: " + tag + "G(M0) differs from G(M1) u G(y)");
        if (inter != g1p)
            bad.push_back("intersection: " + tag + "G((y,eta);M1') differs from G(M1) n G(y)");
        if (g0.size() + g1p.size() != g1.size() + gy.size())
            bad.push_back("cardinality: " + tag + "|G(M0)| + |G((y,eta);M1')| != |G(M1)| + |G(y)|");
        for (auto& b : check_collection(c, m1, c1))
            bad.push_back("restricted: " + tag + "on M1, " + b);
        for (auto& b : check_collection(cy, m1p, c1p))
            bad.push_back("restricted: " + tag + "on M1' at (y, eta_hat), " + b);
        const std::size_t r1 = cap_rank(c, m1), r1p = cap_rank(cy, m1p);
        const std::size_t ry = os.module(plus_vertex(c, c.class_of(m0[y]))).tilde_rank();
        if (r0 + r1p != r1 + ry)
            bad.push_back("rank: " + tag + "rank identity fails: " + std::to_string(r0) + " + " + std::to_string(r1p) +
                          " != " + std::to_string(r1) + " + " + std::to_string(ry));
    }
    return bad;
}

/// All stable subsets of N (by index), when N is small enough to enumerate.
inline std::vector<std::vector<std::size_t>> stable_subsets(const Family& n_set, std::size_t max_size = 64)
{
    if (n_set.size() > 20)
        throw std::invalid_argument("N too large to enumerate");
    std::vector<std::vector<std::size_t>> out;
    for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << n_set.size()); ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) > max_size)
            continue;
        Family f;
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < n_set.size(); ++i)
            if (mask >> i & 1) {
                f.push_back(n_set[i]);
                idx.push_back(i);
            }
        if (is_stable(f))
            out.push_back(idx);
    }
    return out;
}

} // namespace acyc::os
