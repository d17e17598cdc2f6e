#include "acyc/apartment.hpp"
#include "acyc/building.hpp"

#include <gtest/gtest.h>

#include <functional>
#include <random>
#include <set>

using namespace acyc;
using namespace acyc::bt;

namespace {

PadicContext ctx_of(std::size_t d, long p, int m = 8)
{
    PadicContext c;
    c.d = d;
    c.p = p;
    c.precision = m;
    return c;
}

// All vectors of F_p^n as integer tuples.
std::vector<std::vector<long>> all_vectors(std::size_t n, long p)
{
    std::vector<std::vector<long>> out;
    std::vector<long> v(n, 0);
    for (;;) {
        out.push_back(v);
        std::size_t j = 0;
        while (j < n && v[j] == p - 1)
            v[j++] = 0;
        if (j == n)
            break;
        ++v[j];
    }
    return out;
}

// Distinct proper nonzero subspaces found as spans of k-tuples, k < n.
std::size_t oracle_subspace_count(std::size_t n, long p)
{
    auto vs = all_vectors(n, p);
    std::set<std::set<std::vector<long>>> spans;
    std::function<void(std::set<std::vector<long>>, std::size_t, std::size_t)> rec =
        [&](std::set<std::vector<long>> cur, std::size_t start, std::size_t k) {
            if (cur.size() > 1 && cur.size() < vs.size())
                spans.insert(cur);
            if (k == n - 1)
                return;
            for (std::size_t a = start; a < vs.size(); ++a) {
                std::set<std::vector<long>> nxt;
                for (auto& u : cur)
                    for (long c = 0; c < p; ++c) {
                        std::vector<long> w(n);
                        for (std::size_t i = 0; i < n; ++i)
                            w[i] = (u[i] + c * vs[a][i]) % p;
                        nxt.insert(w);
                    }
                if (nxt.size() > cur.size())
                    rec(nxt, a + 1, k + 1);
            }
        };
    rec({std::vector<long>(n, 0)}, 0, 0);
    return spans.size();
}

IntMatrix random_unimodular_mod_p(std::size_t n, long p, std::mt19937& rng)
{
    std::uniform_int_distribution<long> dist(-20, 20);
    for (;;) {
        IntMatrix u(n, n);
        for (auto& x : u.data())
            x = dist(rng);
        if (la::rank(u, Ring::prime_field(p)) == n)
            return u;
    }
}

LatticeClass diag_class(const std::vector<int>& e, const PadicContext& ctx)
{
    RatMatrix b(ctx.n(), ctx.n());
    for (std::size_t i = 0; i < e.size(); ++i)
        b(i, i) = ppow(ctx.p, e[i]);
    return canon_class(b, ctx);
}

bool mat_eq_mod(const IntMatrix& a, const IntMatrix& b, const Integer& pm)
{
    for (std::size_t i = 0; i < a.data().size(); ++i)
        if (mod_floor(a.data()[i] - b.data()[i], pm) != 0)
            return false;
    return true;
}

} // namespace

TEST(Building, SubspaceCountsMatchEnumeration)
{
    for (auto [n, p] : std::vector<std::pair<std::size_t, long>>{{2, 2}, {2, 3}, {3, 2}, {3, 3}, {4, 2}}) {
        std::size_t got = proper_subspaces(n, p).size();
        EXPECT_EQ(got, oracle_subspace_count(n, p)) << n << " " << p;
        Integer gb = 0;
        for (std::size_t k = 1; k < n; ++k)
            gb += gaussian_binomial(n, k, p);
        EXPECT_EQ(Integer(static_cast<long>(got)), gb);
    }
    EXPECT_EQ(proper_subspaces(2, 2).size(), 3u);
    EXPECT_EQ(proper_subspaces(3, 2).size(), 14u);
    EXPECT_EQ(proper_subspaces(2, 3).size(), 4u);
}

TEST(Building, NeighboursAreDistinctIncidentWithOtherLabels)
{
    for (auto [d, p] : std::vector<std::pair<std::size_t, long>>{{1, 2}, {1, 3}, {2, 2}, {2, 3}, {3, 2}}) {
        auto ctx = ctx_of(d, p);
        auto z = base_vertex(ctx);
        auto nb = vertex_neighbors(z, ctx);
        std::set<LatticeClass> uniq(nb.begin(), nb.end());
        EXPECT_EQ(uniq.size(), nb.size());
        EXPECT_EQ(nb.size(), proper_subspaces(d + 1, p).size());
        for (auto& y : nb) {
            EXPECT_TRUE(incident(z, y, p));
            EXPECT_NE(label(y, p), label(z, p));
            auto back = vertex_neighbors(y, ctx);
            EXPECT_TRUE(std::binary_search(back.begin(), back.end(), z));
        }
    }
}

TEST(Building, CanonicalFormIsInvariant)
{
    std::mt19937 rng(7);
    auto ctx = ctx_of(2, 3, 10);
    std::uniform_int_distribution<int> ex(0, 3);
    for (int trial = 0; trial < 30; ++trial) {
        auto u = random_unimodular_mod_p(3, 3, rng);
        RatMatrix b = to_rat(u);
        for (std::size_t j = 0; j < 3; ++j) {
            Rational s = ppow(3, ex(rng));
            for (std::size_t i = 0; i < 3; ++i)
                b(i, j) *= s;
        }
        auto c = canon_class(b, ctx);
        // Change of basis by GL_3(Z_3), homothety, and units in scalars.
        auto v = random_unimodular_mod_p(3, 3, rng);
        RatMatrix b2 = scaled(b * to_rat(v), Rational(5, 27));
        EXPECT_EQ(canon_class(b2, ctx), c);
        // Canonical form is idempotent and diagonal entries are p-powers.
        EXPECT_EQ(canon_class(c.basis, ctx), c);
        for (std::size_t i = 0; i < 3; ++i) {
            Integer pa = ipow(3, valuation(c.basis(i, i), 3));
            EXPECT_EQ(c.basis(i, i), pa);
        }
    }
}

TEST(Building, PrecisionGuard)
{
    auto ctx = ctx_of(1, 2, 4);
    EXPECT_NO_THROW(diag_class({0, 3}, ctx));
    EXPECT_THROW(diag_class({0, 4}, ctx), PrecisionExhausted);
    RatMatrix sing(2, 2);
    sing(0, 0) = 1;
    EXPECT_THROW(canon_class(sing, ctx), PrecisionExhausted);
}

TEST(Building, RelativePositionExamples)
{
    auto ctx = ctx_of(1, 2);
    auto z = base_vertex(ctx);
    EXPECT_EQ(relative_position(z, diag_class({0, 1}, ctx), 2), (IValue{1}));
    EXPECT_EQ(relative_position(z, diag_class({3, 0}, ctx), 2), (IValue{3}));
    auto c3 = ctx_of(3, 3);
    EXPECT_EQ(relative_position(base_vertex(c3), diag_class({0, 2, 5, 5}, c3), 3), (IValue{5, 3, 0}));
}

TEST(Building, TreeRegionMatchesValence)
{
    for (long p : {2L, 3L}) {
        auto ctx = ctx_of(1, p);
        auto br = building_region(base_vertex(ctx), {3}, ctx);
        // 1 + (p+1) + (p+1)p + (p+1)p^2
        long want = 1 + (p + 1) * (1 + p + p * p);
        EXPECT_EQ(static_cast<long>(br.region.count(0)), want);
        EXPECT_EQ(static_cast<long>(br.region.count(1)), want - 1);
        auto dist = br.region.bfs({br.region.z0});
        for (std::size_t v = 0; v < br.vertex.size(); ++v)
            EXPECT_EQ(br.region.ivalue[v], (IValue{dist[v]}));
    }
}

TEST(Building, SmallRegionCountsAndEuler)
{
    auto ctx = ctx_of(2, 2);
    auto br = building_region(base_vertex(ctx), {1, 1}, ctx);
    const auto& r = br.region;
    EXPECT_EQ(r.count(0), 15u);
    EXPECT_EQ(r.count(1), 35u);
    EXPECT_EQ(r.count(2), 21u);
    long chi = static_cast<long>(r.count(0)) - static_cast<long>(r.count(1)) + static_cast<long>(r.count(2));
    EXPECT_EQ(chi, 1);
    auto small = building_region(base_vertex(ctx), {1, 0}, ctx);
    EXPECT_EQ(small.region.count(0), 8u);
    for (auto& t : r.simplices[2]) {
        std::set<int> labels;
        for (auto v : t)
            labels.insert(r.label[v]);
        EXPECT_EQ(labels.size(), 3u);
    }
}

TEST(Building, ApartmentEmbeddingIntertwines)
{
    std::mt19937 rng(11);
    for (auto [d, p] : std::vector<std::pair<std::size_t, long>>{{1, 3}, {2, 2}, {3, 2}}) {
        auto ctx = ctx_of(d, p, 12);
        RatMatrix frame = to_rat(random_unimodular_mod_p(d + 1, p, rng));
        auto ar = apt::ball_region(apt::normalize(std::vector<long>(d + 1, 0)), IValue(d, 2));
        std::vector<LatticeClass> img;
        for (auto& v : ar.vertex)
            img.push_back(embed_apartment(frame, v.c, ctx));
        std::set<LatticeClass> uniq(img.begin(), img.end());
        ASSERT_EQ(uniq.size(), img.size());
        const auto& z0 = img[ar.region.z0];
        for (std::size_t a = 0; a < img.size(); ++a) {
            EXPECT_EQ(relative_position(z0, img[a], p), ar.region.ivalue[a]);
            EXPECT_EQ(label(img[a], p), apt::label(ar.vertex[a]));
            for (std::size_t b = 0; b < img.size(); ++b)
                if (a != b)
                    EXPECT_EQ(incident(img[a], img[b], p), apt::incident(ar.vertex[a], ar.vertex[b]));
        }
        // Pointedness and ell on ordered edges and triangles.
        for (std::size_t k = 1; k < ar.region.simplices.size() && k <= 2; ++k)
            for (auto& s : ar.region.simplices[k]) {
                auto t = s;
                std::sort(t.begin(), t.end());
                do {
                    auto av = ar.vertices_of(t);
                    std::vector<LatticeClass> bv;
                    for (auto v : t)
                        bv.push_back(img[v]);
                    bool pa = apt::is_pointed(av);
                    ASSERT_EQ(is_pointed(bv, p), pa);
                    if (pa)
                        EXPECT_EQ(ell(bv, p), apt::ell(av));
                } while (std::next_permutation(t.begin(), t.end()));
            }
    }
}

TEST(Building, MeetAgreesWithApartment)
{
    std::mt19937 rng(5);
    auto ctx = ctx_of(3, 2, 12);
    RatMatrix frame = to_rat(random_unimodular_mod_p(4, 2, rng));
    auto emb = [&](const apt::Vertex& v) { return embed_apartment(frame, v.c, ctx); };
    auto x = apt::normalize({1, 1, 2, 0});
    std::vector<std::vector<apt::Vertex>> etas = {{x}, {x + apt::indicator(0b0111, 3), x}};
    for (auto& eta : etas) {
        auto N = apt::neighbor_set_N(eta);
        std::vector<LatticeClass> beta;
        for (auto& v : eta)
            beta.push_back(emb(v));
        for (auto& u1 : N)
            for (auto& u2 : N) {
                auto am = apt::meet_in_N(eta, u1, u2);
                auto bm = lattice_meet(beta, emb(u1), emb(u2), ctx);
                ASSERT_EQ(am.has_value(), bm.has_value());
                if (am)
                    EXPECT_EQ(emb(*am), *bm);
            }
    }
}

TEST(Building, LayeredDistancesMatchElementaryDivisors)
{
    auto ctx = ctx_of(2, 2);
    auto br = building_region(base_vertex(ctx), {2, 2}, ctx);
    std::size_t checked = 0;
    for (std::size_t v = 0; v < br.vertex.size(); ++v) {
        if (br.region.ivalue[v][0] > 1)
            continue;
        EXPECT_EQ(br.i_by_layers(v), br.region.ivalue[v]);
        ++checked;
    }
    EXPECT_EQ(checked, 15u);
    std::size_t far = 0;
    while (br.region.ivalue[far][0] < 2)
        ++far;
    EXPECT_THROW(br.i_by_layers(far), RegionTooSmall);
}

TEST(Building, PointedOrderings)
{
    auto ctx = ctx_of(2, 3);
    auto z = base_vertex(ctx);
    for (auto& y : vertex_neighbors(z, ctx)) {
        EXPECT_TRUE(is_pointed({y, z}, 3));
        EXPECT_TRUE(is_pointed({z, y}, 3));
    }
    auto c2 = ctx_of(2, 2);
    auto br = building_region(base_vertex(c2), {1, 1}, c2);
    for (auto& s : br.region.simplices[2]) {
        auto t = s;
        std::vector<Simplex> good;
        do {
            if (is_pointed(br.vertices_of(t), 2))
                good.push_back(t);
        } while (std::next_permutation(t.begin(), t.end()));
        ASSERT_EQ(good.size(), 3u);
        // The pointed orderings are the rotations of one of them.
        for (auto& g : good) {
            Simplex r{g[1], g[2], g[0]};
            EXPECT_TRUE(std::find(good.begin(), good.end(), r) != good.end());
        }
    }
}

TEST(Congruence, MembershipOfSamples)
{
    std::mt19937 rng(3);
    auto ctx = ctx_of(2, 3, 6);
    auto x = diag_class({0, 1, 1}, ctx);
    for (int t = 0; t < 10; ++t) {
        auto g = sample_congruence(x, 2, ctx, rng);
        EXPECT_TRUE(congruence_membership(g, x, 2, ctx));
    }
    IntMatrix g = IntMatrix::identity(3);
    g(0, 1) = 3;
    EXPECT_FALSE(congruence_membership(g, base_vertex(ctx), 2, ctx));
    EXPECT_TRUE(congruence_membership(g, base_vertex(ctx), 1, ctx));
    // In the diag(1,p,p) chart the (0,1) entry only needs valuation n - 1.
    EXPECT_TRUE(congruence_membership(g, x, 2, ctx));
    IntMatrix h = IntMatrix::identity(3);
    h(1, 0) = 3;
    EXPECT_FALSE(congruence_membership(h, x, 2, ctx));
    EXPECT_THROW(congruence_membership(h, x, 6, ctx), PrecisionExhausted);
}

namespace {

void check_factorization(std::size_t d, long p, int n, int m, int samples, unsigned seed, bool random_frame)
{
    std::mt19937 rng(seed);
    auto ctx = ctx_of(d, p, m);
    std::uniform_int_distribution<std::size_t> split(1, d);
    const Integer pm = ctx.modulus();
    for (int t = 0; t < samples; ++t) {
        RatMatrix frame = random_frame ? to_rat(random_unimodular_mod_p(d + 1, p, rng)) : RatMatrix::identity(d + 1);
        // x1 = e_S, x2 = e_T with S, T disjoint nonempty; z = 0.
        std::vector<std::size_t> perm(d + 1);
        for (std::size_t i = 0; i <= d; ++i)
            perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), rng);
        std::size_t k = split(rng);
        std::uniform_int_distribution<std::size_t> rest(k + 1, d + 1);
        std::size_t k2 = rest(rng);
        std::vector<long> v1(d + 1, 0), v2(d + 1, 0);
        for (std::size_t i = 0; i < k; ++i)
            v1[perm[i]] = 1;
        for (std::size_t i = k; i < k2; ++i)
            v2[perm[i]] = 1;
        auto z = embed_apartment(frame, std::vector<long>(d + 1, 0), ctx);
        auto x1 = embed_apartment(frame, v1, ctx);
        auto x2 = embed_apartment(frame, v2, ctx);
        auto g = sample_congruence(z, n, ctx, rng);
        ASSERT_TRUE(congruence_membership(g, z, n, ctx));
        auto f = factor_congruence(g, z, x1, x2, n, ctx);
        EXPECT_TRUE(mat_eq_mod(f.g1 * f.g2, g, pm));
        EXPECT_TRUE(congruence_membership(f.g1, x1, n, ctx));
        EXPECT_TRUE(congruence_membership(f.g2, x2, n, ctx));
    }
}

} // namespace

TEST(Congruence, FactorizationTree)
{
    check_factorization(1, 2, 1, 4, 100, 1, false);
}

TEST(Congruence, FactorizationRankTwo)
{
    check_factorization(2, 3, 2, 5, 100, 2, false);
    check_factorization(2, 3, 2, 5, 30, 3, true);
}

TEST(Congruence, FactorizationRankThree)
{
    check_factorization(3, 2, 1, 6, 30, 4, true);
}

TEST(Congruence, FactorizationRejectsBadInput)
{
    auto ctx = ctx_of(1, 2, 4);
    auto z = base_vertex(ctx);
    auto x1 = diag_class({-1, 0}, ctx);
    auto x2 = diag_class({0, -1}, ctx);
    IntMatrix g = IntMatrix::identity(2);
    EXPECT_THROW(factor_congruence(g, z, x1, x1, 1, ctx), HypothesisViolated);
    EXPECT_THROW(factor_congruence(g, z, x1, diag_class({2, 0}, ctx), 1, ctx), HypothesisViolated);
    g(0, 1) = 1;
    EXPECT_THROW(factor_congruence(g, z, x1, x2, 1, ctx), HypothesisViolated);
}
