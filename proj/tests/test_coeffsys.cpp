#include "acyc/apartment.hpp"
#include "acyc/building.hpp"
#include "acyc/coeffsys.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace acyc;
using namespace acyc::cs;

namespace {

Region single_triangle()
{
    Region r;
    r.d = 2;
    r.ivalue = {{0, 0}, {1, 0}, {1, 1}};
    r.label = {0, 1, 2};
    r.name = {"a", "b", "c"};
    r.adj = {{1, 2}, {0, 2}, {0, 1}};
    r.bound = {1, 1};
    r.build_simplices();
    return r;
}

apt::ApartmentRegion apartment(std::size_t d, IValue b)
{
    return apt::ball_region(apt::normalize(std::vector<long>(d + 1, 0)), b);
}

// Stable subsets of n up to the given size, by brute force.
std::vector<std::vector<std::size_t>> stable_subsets(const std::vector<std::size_t>& n, const Geometry& g,
                                                     const std::vector<std::size_t>& eta_hat, std::size_t limit)
{
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t mask = 1; mask < (std::size_t(1) << n.size()); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcountll(mask)) > limit)
            continue;
        std::vector<std::size_t> m;
        for (std::size_t j = 0; j < n.size(); ++j)
            if (mask >> j & 1)
                m.push_back(n[j]);
        auto st = stability_with(m, [&](std::size_t a, std::size_t b) { return g.meet(eta_hat, a, b); });
        if (st.is_stable)
            out.push_back(m);
    }
    return out;
}

RatVector to_rat_vec(const std::vector<Integer>& v) { return RatVector(v.begin(), v.end()); }

} // namespace

TEST(Assemble, TriangleIsSimplicialCochainComplex)
{
    auto r = single_triangle();
    auto cs = constant_system(Ring::integers(), r, Direction::cohomological);
    auto a = assemble(r, cs);
    ASSERT_EQ(a.complex.ranks, (std::vector<std::size_t>{3, 3, 1}));
    // Oracle: coboundary of the vertex v into edge {u,v} is (-1)^(position of v's partner).
    const auto& d0 = a.complex.maps[0];
    for (std::size_t e = 0; e < 3; ++e) {
        const auto& s = r.simplices[1][e];
        // labels equal ids here, so the face omitting s[0] has sign +1 and omitting s[1] has sign -1.
        EXPECT_EQ(d0(e, s[1]), 1);
        EXPECT_EQ(d0(e, s[0]), -1);
    }
    EXPECT_EQ(cohomology_of_region(a, 0).rank, 1u);
    EXPECT_TRUE(cohomology_of_region(a, 1).is_zero());
    EXPECT_TRUE(cohomology_of_region(a, 2).is_zero());
}

TEST(Assemble, StarRegionInDimensionOne)
{
    auto ar = apartment(1, {1});
    auto cs = constant_system(Ring::integers(), ar.region, Direction::cohomological);
    auto a = assemble(ar.region, cs);
    EXPECT_EQ(cohomology_of_region(a, 0).rank, 1u);
    EXPECT_TRUE(cohomology_of_region(a, 1).is_zero());
}

TEST(Assemble, ContractibleRegionsAreAcyclic)
{
    for (Ring ring : {Ring::integers(), Ring::rationals(), Ring::prime_field(2), Ring::residues(4)}) {
        for (auto& ar : {apartment(2, {2, 2}), apartment(3, {1, 1, 1})}) {
            auto cs = constant_system(ring, ar.region, Direction::cohomological);
            auto a = assemble(ar.region, cs);
            EXPECT_EQ(cohomology_of_region(a, 0).rank, 1u);
            for (std::size_t k = 1; k < a.degrees(); ++k)
                EXPECT_TRUE(cohomology_of_region(a, k).is_zero()) << ring.name() << " k=" << k;
            auto h = constant_system(ring, ar.region, Direction::homological);
            auto ah = assemble(ar.region, h);
            for (std::size_t k = 1; k < ah.degrees(); ++k)
                EXPECT_TRUE(la::homology(ah.complex, k).is_zero());
        }
    }
    auto ctx = bt::PadicContext{2, 8, 2, 1};
    auto br = bt::building_region(bt::base_vertex(ctx), {1, 1}, ctx);
    auto a = assemble(br.region, constant_system(Ring::integers(), br.region, Direction::cohomological));
    EXPECT_EQ(cohomology_of_region(a, 0).rank, 1u);
    EXPECT_TRUE(cohomology_of_region(a, 1).is_zero());
    EXPECT_TRUE(cohomology_of_region(a, 2).is_zero());
}

TEST(Assemble, EmptyRegion)
{
    Region r;
    r.d = 2;
    r.build_simplices();
    auto cs = constant_system(Ring::integers(), r, Direction::cohomological);
    auto a = assemble(r, cs);
    for (std::size_t k = 0; k < 3; ++k)
        EXPECT_TRUE(cohomology_of_region(a, k).is_zero());
}

TEST(Assemble, CorruptedRestrictionIsReported)
{
    auto r = single_triangle();
    auto cs = constant_system(Ring::integers(), r, Direction::cohomological);
    cs.restriction.at({Simplex{0}, Simplex{0, 1}}) = IntMatrix{{2}};
    try {
        assemble(r, cs);
        FAIL() << "expected a functoriality violation";
    } catch (const FunctorialityViolation& e) {
        EXPECT_NE(std::string(e.what()).find("{0} < {0,1} < {0,1,2}"), std::string::npos) << e.what();
    }
}

TEST(CriterionS, ConstantSystemOnApartment)
{
    auto ar = apartment(2, {2, 2});
    auto g = ar.geometry();
    const auto& r = ar.region;
    auto cs = constant_system(Ring::integers(), r, Direction::cohomological);
    auto dual = dual_system(constant_system(Ring::rationals(), r, Direction::cohomological));
    std::size_t checked = 0;
    for (std::size_t k = 0; k < 2; ++k)
        for (auto& s : r.simplices[k]) {
            auto t = s;
            do {
                if (!g.is_pointed(t))
                    continue;
                auto n = region_N(r, g, t);
                EXPECT_TRUE(check_S(r, g, cs, t, {}).exact);
                for (auto& m0 : stable_subsets(n, g, t, 4)) {
                    auto rep = check_S(r, g, cs, t, m0);
                    EXPECT_TRUE(rep.exact) << rep.instance;
                    EXPECT_TRUE(check_S_star(r, g, dual, t, m0).exact) << rep.instance;
                    ++checked;
                }
            } while (std::next_permutation(t.begin(), t.end()));
        }
    EXPECT_GT(checked, 100u);
}

TEST(CriterionS, RejectsUnstableAndOutsideN)
{
    auto ar = apartment(2, {2, 2});
    auto g = ar.geometry();
    auto cs = constant_system(Ring::integers(), ar.region, Direction::cohomological);
    std::vector<std::size_t> eta_hat{ar.region.z0};
    auto n = region_N(ar.region, g, eta_hat);
    ASSERT_EQ(n.size(), 6u);
    // Two vertices whose meet is undefined.
    bool found = false;
    for (std::size_t a = 0; a < n.size() && !found; ++a)
        for (std::size_t b = a + 1; b < n.size() && !found; ++b)
            if (!g.meet(eta_hat, n[a], n[b])) {
                EXPECT_THROW(check_S(ar.region, g, cs, eta_hat, {n[a], n[b]}), NotStable);
                found = true;
            }
    EXPECT_TRUE(found);
    std::size_t far = ar.region.vertex_count() - 1;
    EXPECT_THROW(check_S(ar.region, g, cs, eta_hat, {far}), std::invalid_argument);
}

TEST(CriterionS, CorruptedSystemFailsS)
{
    // One edge restriction multiplied by 2: S(1) must fail there over Z.
    auto ar = apartment(1, {2});
    auto g = ar.geometry();
    const auto& r = ar.region;
    auto cs = constant_system(Ring::integers(), r, Direction::cohomological);
    Simplex e = r.simplices[1][0];
    for (auto v : e)
        cs.restriction.at({Simplex{v}, e}) = IntMatrix{{2}};
    bool failed = false;
    for (auto v : e) {
        auto n = region_N(r, g, {v});
        for (auto z : n) {
            auto rep = check_S(r, g, cs, {v}, {z});
            failed = failed || !rep.exact;
        }
    }
    EXPECT_TRUE(failed);
}

TEST(Solver, ConstantSystemAllCocycles)
{
    std::mt19937 rng(9);
    for (Ring ring : {Ring::integers(), Ring::prime_field(3), Ring::residues(4)}) {
        for (auto& ar : {apartment(2, {2, 2}), apartment(1, {3})}) {
            auto g = ar.geometry();
            auto cs = constant_system(ring, ar.region, Direction::cohomological);
            auto a = assemble(ar.region, cs);
            for (std::size_t k = 1; k < a.degrees(); ++k) {
                IntMatrix out = k + 1 < a.degrees() ? a.complex.maps[k] : IntMatrix(0, a.complex.ranks[k]);
                auto ker = la::kernel_basis(la::ExactMatrix{ring, out});
                for (std::size_t j = 0; j < ker.cols(); ++j) {
                    auto c = to_rat_vec(ker.column(j));
                    auto direct = la::solve_in_image(la::ExactMatrix{ring, a.complex.maps[k - 1]}, c);
                    auto res = solve_coboundary(a, g, c, k);
                    ASSERT_TRUE(direct.has_value());
                    auto db = apply(a.complex.maps[k - 1], res.b, ring);
                    for (std::size_t i = 0; i < db.size(); ++i)
                        EXPECT_EQ(reduce_scalar(ring, db[i] - c[i]), 0);
                }
                // Coboundary of a random cochain.
                std::uniform_int_distribution<int> dist(-3, 3);
                RatVector b0(a.complex.ranks[k - 1]);
                for (auto& x : b0)
                    x = reduce_scalar(ring, Rational(dist(rng)));
                auto c = apply(a.complex.maps[k - 1], b0, ring);
                auto res = solve_coboundary(a, g, c, k);
                EXPECT_EQ(apply(a.complex.maps[k - 1], res.b, ring), c);
            }
        }
    }
}

TEST(Solver, RejectsNonCocycle)
{
    auto ar = apartment(2, {1, 1});
    auto g = ar.geometry();
    auto cs = constant_system(Ring::integers(), ar.region, Direction::cohomological);
    auto a = assemble(ar.region, cs);
    RatVector c(a.complex.ranks[1], Rational(0));
    c[0] = 1;
    EXPECT_THROW(solve_coboundary(a, g, c, 1), NotCocycle);
}

TEST(Solver, BuildingRegion)
{
    auto ctx = bt::PadicContext{2, 8, 2, 1};
    auto br = bt::building_region(bt::base_vertex(ctx), {1, 1}, ctx);
    auto g = br.geometry();
    auto cs = constant_system(Ring::integers(), br.region, Direction::cohomological);
    auto a = assemble(br.region, cs);
    for (std::size_t k = 1; k < a.degrees(); ++k) {
        IntMatrix out = k + 1 < a.degrees() ? a.complex.maps[k] : IntMatrix(0, a.complex.ranks[k]);
        auto ker = la::kernel_basis(la::ExactMatrix{Ring::integers(), out});
        for (std::size_t j = 0; j < ker.cols(); ++j) {
            auto c = to_rat_vec(ker.column(j));
            auto res = solve_coboundary(a, g, c, k);
            EXPECT_EQ(apply(a.complex.maps[k - 1], res.b, Ring::integers()), c);
        }
    }
}
