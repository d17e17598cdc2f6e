#pragma once
// Apartment lemmas, building counts and congruence factorization suites.

#include "acyc/apartment.hpp"
#include "acyc/building.hpp"
#include "acyc/suite_config.hpp"

#include <numeric>
#include <set>

namespace acyc::suite {

namespace detail {

    inline apt::Vertex origin(std::size_t d) { return apt::normalize(std::vector<long>(d + 1, 0)); }

    inline std::vector<apt::Vertex> with_front(const apt::Vertex& u, std::vector<apt::Vertex> eh)
    {
        eh.insert(eh.begin(), u);
        return eh;
    }

    /// The region's simplices of dimension below d, i-sorted, as vertex tuples.
    inline std::vector<std::vector<apt::Vertex>> pointed_faces(const apt::ApartmentRegion& ar)
    {
        std::vector<std::vector<apt::Vertex>> out;
        const auto& r = ar.region;
        for (std::size_t k = 0; k < r.simplices.size() && k < r.d; ++k)
            for (auto& s : r.simplices[k])
                out.push_back(ar.vertices_of(r.i_sorted(s)));
        return out;
    }

    inline void meet_lemma(const apt::ApartmentRegion& ar, Record& rec)
    {
        for (auto& eh : pointed_faces(ar)) {
            auto n = apt::neighbor_set_N(eh);
            auto le = [&](const apt::Vertex& u, const apt::Vertex& v) {
                return u == v || apt::is_pointed(with_front(u, with_front(v, eh)));
            };
            for (auto& u1 : n)
                for (auto& u2 : n) {
                    std::vector<apt::Vertex> w;
                    for (auto& u : n)
                        if (le(u, u1) && le(u, u2))
                            w.push_back(u);
                    auto m = apt::meet_in_N(eh, u1, u2);
                    rec.count("meet");
                    std::string at = "eta=" + eh.front().str() + "..." + eh.back().str() + " u1=" + u1.str() +
                                     " u2=" + u2.str();
                    if (m.has_value() != !w.empty()) {
                        rec.fail("meet: definedness disagrees with W at " + at);
                        continue;
                    }
                    if (!m)
                        continue;
                    if (std::find(w.begin(), w.end(), *m) == w.end()) {
                        rec.fail("meet: result outside W at " + at);
                        continue;
                    }
                    int lm = apt::ell(with_front(*m, eh));
                    for (auto& u : w)
                        if (u != *m && apt::ell(with_front(u, eh)) <= lm)
                            rec.fail("meet: " + u.str() + " does not have larger ell at " + at);
                    auto m0 = apt::meet_in_N({eh.back()}, u1, u2);
                    if (!m0 || !(*m0 == *m))
                        rec.fail("meet: differs from the meet for (x_k) at " + at);
                }
        }
    }

    inline void i_layers(const apt::ApartmentRegion& ar, Record& rec)
    {
        const std::size_t d = ar.region.d;
        long far = 0;
        for (auto& v : ar.region.ivalue)
            far = std::max(far, v.empty() ? 0 : v[0]);
        const long radius = far << (d - 1);
        auto big = apt::ball_region(ar.z0, IValue(d, radius));
        for (auto& x : ar.vertex) {
            rec.count("i-layers");
            auto a = big.i_by_layers(x), b = apt::i_value(x, ar.z0);
            if (a != b)
                rec.fail("i-layers: " + x.str() + " layered and sorted definitions differ");
        }
    }

    inline void nu_lemma(const apt::ApartmentRegion& ar, Record& rec)
    {
        const std::size_t d = ar.region.d;
        const auto& z0 = ar.z0;
        for (auto& x : ar.vertex) {
            if (x == z0)
                continue;
            std::vector<apt::Vertex> inc;
            for (apt::Mask J = 1; J < apt::full_mask(d); ++J)
                inc.push_back(x + apt::indicator(J, d));
            auto nu = apt::nu_vertex(x, z0);
            IValue best = apt::i_value(inc[0], z0);
            for (auto& z : inc)
                best = std::min(best, apt::i_value(z, z0));
            std::size_t minimizers = 0;
            for (auto& z : inc)
                minimizers += apt::i_value(z, z0) == best;
            rec.count("nu-unique");
            if (minimizers != 1 || apt::i_value(nu, z0) != best ||
                std::find(inc.begin(), inc.end(), nu) == inc.end())
                rec.fail("nu-unique: " + x.str() + " has no unique incident vertex of minimal i at nu");
            for (auto& z : inc) {
                if (z == nu || !(apt::i_value(z, z0) < apt::i_value(x, z0)))
                    continue;
                rec.count("nu-incident");
                rec.count("nu-ell");
                if (!apt::incident(nu, z)) {
                    rec.fail("nu-incident: nu(" + x.str() + ") and " + z.str() + " are not incident");
                    continue;
                }
                if (apt::ell({nu, z}) > apt::ell({x, z}))
                    rec.fail("nu-ell: ell((nu(x), z)) > ell((x, z)) for x=" + x.str() + " z=" + z.str());
            }
        }
    }

    inline void i_sorted_pointed(const apt::ApartmentRegion& ar, Record& rec)
    {
        const auto& r = ar.region;
        for (auto& layer : r.simplices)
            for (auto& s : layer) {
                rec.count("i-sorted-pointed");
                auto t = ar.vertices_of(r.i_sorted(s));
                if (!apt::is_pointed(t)) {
                    rec.fail("i-sorted-pointed: " + t.front().str() + "... is not pointed");
                    continue;
                }
                for (std::size_t rot = 1; rot < t.size(); ++rot) {
                    std::rotate(t.begin(), t.begin() + 1, t.end());
                    rec.count("rotation-pointed");
                    if (!apt::is_pointed(t))
                        rec.fail("rotation-pointed: a rotation of " + t.front().str() + "... is not pointed");
                }
            }
    }

    inline void canonical_m0(const apt::ApartmentRegion& ar, Record& rec)
    {
        const auto& r = ar.region;
        for (auto& layer : r.simplices)
            for (auto& s : layer) {
                auto eh = ar.vertices_of(r.i_sorted(s));
                auto m0 = r.canonical_M0(s);
                std::vector<apt::Vertex> mv;
                rec.count("canonical-M0");
                bool inside = true;
                for (auto v : m0) {
                    inside = inside && apt::in_N(eh, ar.vertex[v]);
                    mv.push_back(ar.vertex[v]);
                }
                if (!inside) {
                    rec.fail("canonical-M0: not contained in N at " + eh.front().str());
                    continue;
                }
                if (!apt::stability(mv, eh).is_stable)
                    rec.fail("canonical-M0: not stable at " + eh.front().str());
                if (std::find(s.begin(), s.end(), r.z0) != s.end() && !m0.empty())
                    rec.fail("canonical-M0: nonempty on a simplex through z0");
            }
    }

} // namespace detail

inline std::vector<Record> apartment_lemmas(const SuiteConfig& cfg)
{
    using Check = void (*)(const apt::ApartmentRegion&, Record&);
    const std::vector<std::pair<std::string, Check>> checks = {{"canonical-M0", detail::canonical_m0},
                                                               {"i-layers", detail::i_layers},
                                                               {"i-sorted", detail::i_sorted_pointed},
                                                               {"meet", detail::meet_lemma},
                                                               {"nu", detail::nu_lemma}};
    auto ds = cfg.d_or({1, 2, 3});
    return run_jobs(ds.size() * checks.size(), [&](std::size_t i, Record& rec) {
        std::size_t d = ds[i / checks.size()];
        auto& [name, fn] = checks[i % checks.size()];
        IValue b = cfg.bound_or(d, 2);
        rec.key = "apartment/d=" + std::to_string(d) + "/" + name;
        rec.inputs = {{"d", d}, {"bound", b}, {"lemma", name}};
        auto ar = apt::ball_region(detail::origin(d), b);
        rec.data = {{"vertices", ar.region.count(0)}, {"simplices", ar.region.simplices.size()}};
        fn(ar, rec);
    });
}

/// Number of k-dimensional subspaces of F_p^n, as a product of orbit sizes.
inline Integer subspace_count(std::size_t n, std::size_t k, long p)
{
    Integer num = 1, den = 1;
    for (std::size_t i = 0; i < k; ++i) {
        num *= ipow(p, static_cast<int>(n)) - ipow(p, static_cast<int>(i));
        den *= ipow(p, static_cast<int>(k)) - ipow(p, static_cast<int>(i));
    }
    return num / den;
}

/// Flags of subspaces of F_p^n with the given increasing dimensions.
inline Integer flag_count(std::size_t n, const std::vector<std::size_t>& dims, long p)
{
    Integer c = 1;
    std::size_t prev = 0;
    for (auto k : dims) {
        c *= subspace_count(n - prev, k - prev, p);
        prev = k;
    }
    return c;
}

/// k-simplices of the star of a vertex: chains of k+1 proper nonzero
/// subspaces, plus chains of k subspaces together with the centre.
inline Integer star_simplex_count(std::size_t d, long p, std::size_t k)
{
    const std::size_t n = d + 1;
    Integer total = 0;
    for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
        std::vector<std::size_t> dims;
        for (std::size_t j = 0; j < d; ++j)
            if (mask >> j & 1)
                dims.push_back(j + 1);
        if (dims.size() == k + 1 || dims.size() == k)
            total += flag_count(n, dims, p);
    }
    return total;
}

namespace detail {

    inline std::vector<long> reduce_column(const RatMatrix& m, std::size_t j, long p)
    {
        std::vector<long> v;
        for (std::size_t i = 0; i < m.rows(); ++i)
            v.push_back(bt::residue(m(i, j), Integer(p)).get_si());
        return v;
    }

    /// Frame whose first columns span the subspaces of a chain of neighbours of x0.
    inline IntMatrix adapted_frame(const bt::BuildingRegion& br, const Simplex& chamber)
    {
        const auto& ctx = br.ctx;
        const std::size_t n = ctx.n();
        const auto x0 = br.vertex[br.region.z0];
        std::vector<os::ResidueSpace> subs;
        for (auto v : chamber) {
            if (v == br.region.z0)
                continue;
            auto rep = bt::representative_below(x0, br.vertex[v], ctx.p);
            if (!rep)
                throw std::logic_error("chamber vertex not incident to the base vertex");
            std::vector<std::vector<long>> gens;
            for (std::size_t j = 0; j < rep->cols(); ++j)
                gens.push_back(reduce_column(*rep, j, ctx.p));
            subs.push_back(os::ResidueSpace::span(ctx.p, n, gens));
        }
        std::sort(subs.begin(), subs.end(), [](auto& a, auto& b) { return a.dim() < b.dim(); });
        os::ResidueSpace acc(ctx.p, n);
        std::vector<std::vector<long>> cols;
        auto take = [&](const std::vector<long>& v) {
            if (!acc.contains(v)) {
                acc.add(v);
                cols.push_back(v);
            }
        };
        for (auto& s : subs)
            for (auto& b : s.basis())
                take(b);
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<long> e(n, 0);
            e[i] = 1;
            take(e);
        }
        IntMatrix f(n, n);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i)
                f(i, j) = cols[j][i];
        return f;
    }

    /// Apartment star of the frame: every vertex lands in the region with the
    /// same i, incidence and pointedness agree, and the chamber is covered.
    inline void embedding_check(const bt::BuildingRegion& br, const Simplex& chamber, Record& rec)
    {
        const auto& ctx = br.ctx;
        const std::size_t d = ctx.d;
        auto frame = to_rat(adapted_frame(br, chamber));
        auto star = apt::ball_region(origin(d), IValue(d, 1));
        std::vector<std::size_t> image;
        for (auto& v : star.vertex) {
            auto x = bt::embed_apartment(frame, v.c, ctx);
            auto id = br.find(x);
            rec.count("embed-vertex");
            if (!id) {
                rec.fail("embed-vertex: image of " + v.str() + " is outside the region");
                return;
            }
            if (bt::relative_position(br.vertex[br.region.z0], x, ctx.p) != apt::i_value(v, star.z0))
                rec.fail("embed-vertex: i differs at " + v.str());
            image.push_back(*id);
        }
        for (std::size_t a = 0; a < image.size(); ++a)
            for (std::size_t b = a + 1; b < image.size(); ++b) {
                rec.count("embed-incidence");
                if (apt::incident(star.vertex[a], star.vertex[b]) != br.region.incident(image[a], image[b]))
                    rec.fail("embed-incidence: " + star.vertex[a].str() + " " + star.vertex[b].str());
            }
        for (auto& layer : star.region.simplices)
            for (auto& s : layer) {
                auto t = s;
                std::sort(t.begin(), t.end());
                do {
                    std::vector<std::size_t> img;
                    for (auto v : t)
                        img.push_back(image[v]);
                    rec.count("embed-pointed");
                    if (apt::is_pointed(star.vertices_of(t)) != bt::is_pointed(br.vertices_of(img), ctx.p))
                        rec.fail("embed-pointed: orientation differs on " + star.vertices_of(t).front().str() + "...");
                } while (std::next_permutation(t.begin(), t.end()));
            }
        std::set<std::size_t> covered(image.begin(), image.end());
        rec.count("embed-covers");
        for (auto v : chamber)
            if (!covered.count(v))
                rec.fail("embed-covers: chamber vertex " + br.region.name[v] + " not in the adapted apartment");
    }

} // namespace detail

inline std::vector<Record> building_counts(const SuiteConfig& cfg)
{
    std::vector<std::pair<std::size_t, long>> dp;
    for (auto d : cfg.d_or({1, 2, 3}))
        for (auto p : cfg.p_or({2, 3}))
            dp.emplace_back(d, p);
    const int m = cfg.precision_or(8);
    // jobs: neighbours per (d,p), then the star region per (d,p) with d <= 2
    std::vector<std::pair<std::size_t, long>> regions;
    for (auto& x : dp)
        if (x.first <= 2)
            regions.push_back(x);
    return run_jobs(dp.size() + regions.size(), [&](std::size_t i, Record& rec) {
        if (i < dp.size()) {
            auto [d, p] = dp[i];
            rec.key = "building/d=" + std::to_string(d) + "/p=" + std::to_string(p) + "/neighbors";
            rec.inputs = {{"d", d}, {"p", p}, {"precision", m}};
            bt::PadicContext ctx{p, m, d, 1};
            Integer want = 0;
            for (std::size_t k = 1; k <= d; ++k) {
                want += subspace_count(d + 1, k, p);
                rec.count("gaussian-binomial");
                if (bt::gaussian_binomial(d + 1, k, p) != subspace_count(d + 1, k, p))
                    rec.fail("gaussian-binomial: k=" + std::to_string(k));
            }
            auto x0 = bt::base_vertex(ctx);
            auto x1 = bt::embed_apartment(RatMatrix::identity(d + 1), apt::indicator(1, d).c, ctx);
            json counts = json::array();
            for (auto& x : {x0, x1}) {
                auto nb = bt::vertex_neighbors(x, ctx);
                counts.push_back(nb.size());
                rec.count("neighbor-count");
                if (Integer(nb.size()) != want)
                    rec.fail("neighbor-count: " + std::to_string(nb.size()) + " != " + want.get_str());
                std::set<bt::LatticeClass> distinct(nb.begin(), nb.end());
                rec.count("neighbor-distinct");
                if (distinct.size() != nb.size())
                    rec.fail("neighbor-distinct: repeated classes");
                for (auto& y : nb) {
                    rec.count("neighbor-incident");
                    if (!bt::incident(x, y, p) || bt::label(x, p) == bt::label(y, p))
                        rec.fail("neighbor-incident: " + y.str());
                }
            }
            rec.data = {{"expected", want.get_str()}, {"found", counts}};
            return;
        }
        auto [d, p] = regions[i - dp.size()];
        IValue b = cfg.bound_or(d, 1);
        rec.key = "building/d=" + std::to_string(d) + "/p=" + std::to_string(p) + "/region";
        rec.inputs = {{"d", d}, {"p", p}, {"precision", m}, {"bound", b}};
        bt::PadicContext ctx{p, m, d, 1};
        auto br = bt::building_region(bt::base_vertex(ctx), b, ctx);
        json found = json::array();
        long euler = 0;
        for (std::size_t k = 0; k <= d; ++k) {
            found.push_back(br.region.count(k));
            euler += (k % 2 ? -1 : 1) * static_cast<long>(br.region.count(k));
        }
        rec.data = {{"simplices", found}, {"euler", euler}};
        if (b == IValue(d, 1))
            for (std::size_t k = 0; k <= d; ++k) {
                rec.count("flag-count");
                auto want = star_simplex_count(d, p, k);
                if (Integer(br.region.count(k)) != want)
                    rec.fail("flag-count: " + std::to_string(k) + "-simplices " + std::to_string(br.region.count(k)) +
                             " != " + want.get_str());
            }
        rec.count("euler");
        if (euler != 1)
            rec.fail("euler: characteristic " + std::to_string(euler));
        for (auto& ch : br.region.simplices[br.region.top_dimension()])
            if (std::find(ch.begin(), ch.end(), br.region.z0) != ch.end())
                detail::embedding_check(br, ch, rec);
    });
}

struct CongruenceCase {
    std::size_t d;
    long p;
    int n, m;
};

inline std::vector<Record> congruence(const SuiteConfig& cfg)
{
    std::vector<CongruenceCase> cases;
    if (cfg.d.empty() && cfg.p.empty())
        cases = {{1, 2, 1, 4}, {2, 2, 2, 5}, {2, 3, 2, 5}};
    else
        for (auto d : cfg.d_or({1, 2}))
            for (auto p : cfg.p_or({2, 3}))
                cases.push_back({d, p, cfg.level.value_or(d == 1 ? 1 : 2), cfg.precision_or(5)});
    const std::size_t samples = cfg.samples_or(1000);
    return run_jobs(cases.size(), [&](std::size_t i, Record& rec) {
        auto c = cases[i];
        rec.key = "congruence/d=" + std::to_string(c.d) + "/p=" + std::to_string(c.p) + "/n=" + std::to_string(c.n) +
                  "/m=" + std::to_string(c.m);
        rec.inputs = {{"d", c.d}, {"p", c.p}, {"n", c.n}, {"m", c.m}, {"samples", samples}};
        auto rng = job_rng(cfg.seed, rec.key);
        bt::PadicContext ctx{c.p, c.m, c.d, 1};
        const Integer pm = ctx.modulus();
        std::uniform_int_distribution<std::size_t> split(1, c.d);
        for (std::size_t t = 0; t < samples; ++t) {
            auto frame = to_rat(random_frame(c.d + 1, c.p, rng));
            std::vector<std::size_t> perm(c.d + 1);
            std::iota(perm.begin(), perm.end(), 0);
            std::shuffle(perm.begin(), perm.end(), rng);
            std::size_t k = split(rng);
            std::uniform_int_distribution<std::size_t> rest(k + 1, c.d + 1);
            std::size_t k2 = rest(rng);
            std::vector<long> v1(c.d + 1, 0), v2(c.d + 1, 0);
            for (std::size_t j = 0; j < k; ++j)
                v1[perm[j]] = 1;
            for (std::size_t j = k; j < k2; ++j)
                v2[perm[j]] = 1;
            auto z = bt::embed_apartment(frame, std::vector<long>(c.d + 1, 0), ctx);
            auto x1 = bt::embed_apartment(frame, v1, ctx);
            auto x2 = bt::embed_apartment(frame, v2, ctx);
            auto g = bt::sample_congruence(z, c.n, ctx, rng);
            auto dump = [&] {
                return json{{"g", show(g)}, {"z", z.str()}, {"x1", x1.str()}, {"x2", x2.str()}};
            };
            try {
                auto f = bt::factor_congruence(g, z, x1, x2, c.n, ctx);
                rec.count("factor");
                bool ok = true;
                auto prod = f.g1 * f.g2;
                for (std::size_t a = 0; a <= c.d; ++a)
                    for (std::size_t b = 0; b <= c.d; ++b)
                        ok = ok && mpz_divisible_p(Integer(prod(a, b) - g(a, b)).get_mpz_t(), pm.get_mpz_t());
                if (!ok)
                    rec.fail("product: g1 g2 differs from g mod p^m, sample " + std::to_string(t));
                bool in = bt::congruence_membership(f.g1, x1, c.n, ctx) && bt::congruence_membership(f.g2, x2, c.n, ctx);
                if (!in)
                    rec.fail("membership: a factor leaves its congruence subgroup, sample " + std::to_string(t));
                if (!(ok && in) && rec.dump.is_null())
                    rec.dump = dump();
            } catch (const bt::PrecisionExhausted& e) {
                rec.count("skipped-precision");
            } catch (const std::exception& e) {
                rec.fail("factor: sample " + std::to_string(t) + ": " + e.what());
                if (rec.dump.is_null())
                    rec.dump = dump();
            }
        }
        std::size_t skipped = rec.checks.value("skipped-precision", std::size_t(0));
        if (skipped)
            rec.reason = "precision exhausted on " + std::to_string(skipped) + " of " + std::to_string(samples) +
                         " samples";
        if (skipped == samples && rec.verdict == Verdict::pass)
            rec.verdict = Verdict::skipped;
    });
}

} // namespace acyc::suite
