#include <gtest/gtest.h>

#include <set>

#include "support.hpp"
#include "tqm/bounds.hpp"
#include "tqm/saturated.hpp"

using namespace tqm;
using tqm::testing::H;

namespace {

// phi must be attained by the reported certificate.
void expect_certified(const Torus& t, const Deployment& w, const SaturatedSolution& sol) {
    if (sol.binding >= 0) {
        const auto& c = sol.cycles.at(sol.binding);
        std::int64_t sum = 0;
        for (int e : c.links) sum += w[e];
        EXPECT_EQ(ceil_div(sum, static_cast<std::int64_t>(c.size())), sol.phi);
    } else {
        ASSERT_FALSE(sol.limiting_path.empty());
        EXPECT_TRUE(is_conflict_path(t, sol.limiting_path) || sol.limiting_path.size() <= 2);
        EXPECT_EQ(path_lower_bound(w, sol.limiting_path, t.psi()), sol.phi);
    }
    for (const auto& c : sol.cycles) EXPECT_TRUE(phi_dense(w, c.links, sol.phi));
}

}  // namespace

TEST(Saturated, UniformIsAlreadyOptimal) {
    Torus t(3, 4);
    Deployment w(t.num_links(), 6);
    auto sol = minimize_saturated(t, w);
    EXPECT_EQ(sol.phi, 6);
    EXPECT_EQ(max_queue(step(t, w, sol.shifts)), 6);
    ASSERT_GE(sol.binding, 0);
    std::set<int> covered;
    for (const auto& c : sol.cycles) covered.insert(c.links.begin(), c.links.end());
    for (const auto& it : sol.iterations)
        if (it.pinned) covered.insert(it.root);
    EXPECT_EQ(covered.size(), static_cast<std::size_t>(t.num_links()));
}

TEST(Saturated, RejectsUnsaturated) {
    Torus t(2, 4);
    Deployment w(t.num_links(), 5);
    w[3] = 3;
    EXPECT_THROW(minimize_saturated(t, w), NotSaturated);
    EXPECT_NO_THROW(minimize_saturated(t, w, {.require_saturated = false}));
}

TEST(Saturated, SingleHeavyLinkMatchesOracle) {
    Torus t(2, 4);
    Deployment w(t.num_links(), 5);
    w[H(t, 0, 0)] = 7;
    auto sol = minimize_saturated(t, w);
    auto ora = brute_force_optimum(t, w);
    EXPECT_EQ(sol.phi, ora.phi_star);
    EXPECT_EQ(sol.phi, 6);
    EXPECT_EQ(max_queue(step(t, w, sol.shifts)), sol.phi);
    expect_certified(t, w, sol);
}

TEST(Saturated, MatchesOracleOnRandomInstances) {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        int n = trial < 70 ? 2 : 3;
        int psi = trial % 2 ? 4 : 6;
        Torus t(n, psi);
        auto w = tqm::testing::uniform_deployment(t, psi, psi + 5, rng);
        auto sol = minimize_saturated(t, w);
        std::int64_t expect = n == 2 || psi == 4 ? brute_force_optimum(t, w).phi_star : linear_optimum(t, w).phi_star;
        ASSERT_EQ(sol.phi, expect) << "trial " << trial;
        EXPECT_EQ(max_queue(step(t, w, sol.shifts)), sol.phi);
        EXPECT_TRUE(shifts_bounded(t, sol.shifts));
        expect_certified(t, w, sol);
    }
}

TEST(Saturated, MatchesLinearOptimumOnLargerTori) {
    std::mt19937_64 rng(88);
    for (int trial = 0; trial < 60; ++trial) {
        int n = 4 + trial % 4;
        int psi = 2 + 2 * static_cast<int>(rng() % 4);
        Torus t(n, psi);
        auto w = tqm::testing::uniform_deployment(t, psi, psi + 2 + static_cast<int>(rng() % 10), rng);
        auto sol = minimize_saturated(t, w);
        EXPECT_EQ(sol.phi, linear_optimum(t, w).phi_star) << "trial " << trial;
        EXPECT_EQ(max_queue(step(t, w, sol.shifts)), sol.phi);
        expect_certified(t, w, sol);
    }
}

TEST(Saturated, BoxLimitedInstanceUsesPathCertificate) {
    // Small psi with a wide spread: the shift box, not a cycle, decides phi.
    std::mt19937_64 rng(4);
    bool seen = false;
    for (int trial = 0; trial < 200 && !seen; ++trial) {
        Torus t(5, 2);
        auto w = tqm::testing::uniform_deployment(t, 2, 12, rng);
        auto sol = minimize_saturated(t, w);
        if (sol.binding >= 0) continue;
        seen = true;
        EXPECT_GT(sol.phi, sol.cycle_bound);
        EXPECT_EQ(sol.phi, linear_optimum(t, w).phi_star);
        expect_certified(t, w, sol);
    }
    EXPECT_TRUE(seen);
}

TEST(Saturated, PhiDominatesEveryCycleBound) {
    std::mt19937_64 rng(31);
    for (int n : {2, 3}) {
        Torus t(n, 6);
        auto cycles = enumerate_cycles(t);
        for (int trial = 0; trial < 20; ++trial) {
            auto w = tqm::testing::uniform_deployment(t, 6, 11, rng);
            auto sol = minimize_saturated(t, w);
            std::int64_t lb = lower_bound_saturated(w, cycles);
            EXPECT_GE(sol.phi, lb);
            EXPECT_EQ(lb, cycle_ceiling(t, w));
            if (sol.binding >= 0) EXPECT_EQ(sol.phi, lb);
        }
    }
}

TEST(Saturated, CycleSumsInvariantUnderStep) {
    std::mt19937_64 rng(12);
    for (int n : {2, 3}) {
        Torus t(n, 6);
        auto cycles = enumerate_cycles(t);
        for (int trial = 0; trial < 10; ++trial) {
            auto w = tqm::testing::uniform_deployment(t, 6, 12, rng);
            auto next = step(t, w, tqm::testing::random_shifts(t, rng));
            for (const auto& c : cycles) EXPECT_EQ(cycle_total(w, c.links), cycle_total(next, c.links));
        }
    }
}

TEST(Extract, OverfullRingIsFound) {
    Torus t(3, 4);
    Deployment w(t.num_links(), 5);
    w[H(t, 1, 2)] = 7;
    std::vector<int> ring{H(t, 1, 0), H(t, 1, 1), H(t, 1, 2)};
    auto cs = extract_phi_cycles(t, w, ring, 6);
    ASSERT_EQ(cs.size(), 1u);
    EXPECT_EQ(cs[0].links, make_cycle(t, ring).links);
    // Restricted to one ring link there is nothing to close.
    EXPECT_TRUE(extract_phi_cycles(t, w, {H(t, 1, 2)}, 6).empty());
}

TEST(Extract, CyclesStayInsideTheGivenLinks) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        Torus t(4, 4);
        auto w = tqm::testing::uniform_deployment(t, 4, 9, rng);
        std::vector<int> links;
        for (int e = 0; e < t.num_links(); ++e)
            if (rng() % 4) links.push_back(e);
        std::int64_t phi = cycle_ceiling(t, w);
        for (const auto& c : extract_phi_cycles(t, w, links, phi)) {
            EXPECT_TRUE(is_conflict_cycle(t, c.links));
            EXPECT_TRUE(phi_dense(w, c.links, phi));
            for (int e : c.links) EXPECT_TRUE(std::binary_search(links.begin(), links.end(), e));
        }
    }
}
