#include <gtest/gtest.h>

#include "support.hpp"
#include "tqm/bounds.hpp"
#include "tqm/saturated.hpp"
#include "tqm/unsaturated.hpp"

using namespace tqm;
using tqm::testing::H;
using tqm::testing::V;

namespace {

Deployment random_roads(const Torus& t, std::int64_t k, std::mt19937_64& rng) {
    Deployment w(t.num_links(), 0);
    std::uniform_int_distribution<int> pick(0, t.n() - 1);
    for (int r = 0; r < 2 * t.n(); ++r) {
        auto ring = t.ring_links(r);
        for (std::int64_t a = 0; a < k * t.n(); ++a) ++w[ring[pick(rng)]];
    }
    return w;
}

void expect_replays(const Torus& t, const StrategyTrace& tr) {
    Deployment cur = tr.initial;
    auto totals = ring_totals(t, cur);
    for (const auto& r : tr.rounds) {
        EXPECT_TRUE(shifts_balanced(t, r.shifts));
        EXPECT_TRUE(shifts_bounded(t, r.shifts));
        cur = step(t, cur, r.shifts);
        EXPECT_EQ(cur, r.after);
        EXPECT_EQ(ring_totals(t, cur), totals);
    }
    EXPECT_EQ(tr.rounds.back().event, StrategyEvent::Converged);
    EXPECT_EQ(max_queue(cur), tr.k);
}

}  // namespace

TEST(Rotate, ZeroAmountIsIdentity) {
    Torus t(3, 6);
    std::mt19937_64 rng(1);
    auto s = tqm::testing::random_shifts(t, 2, rng);
    auto cycles = enumerate_cycles(t);
    EXPECT_EQ(rotate(t, {cycles, 0}, s), s);
}

TEST(Rotate, RingQueuesUnchanged) {
    Torus t(4, 6);
    std::vector<int> ring = t.ring_links(1);
    auto c = make_cycle(t, ring);
    std::mt19937_64 rng(2);
    auto w = tqm::testing::uniform_deployment(t, 7, 12, rng);
    auto s = tqm::testing::random_shifts(t, 1, rng);
    auto s2 = rotate(t, {{c}, 1}, s);
    auto a = step(t, w, s), b = step(t, w, s2);
    for (int e : ring) EXPECT_EQ(a[e], b[e]);
    // One extra agent leaves and one arrives on every ring link.
    for (int e : ring) EXPECT_EQ(green_time(t, e, s2), green_time(t, e, s) + 1);
}

TEST(Rotate, InCycleQueuesDoNotGrowWhenSaturated) {
    Torus t(4, 6);
    auto cycles = enumerate_cycles(t, {.max_len = 8});
    std::mt19937_64 rng(3);
    int checked = 0;
    for (const auto& c : cycles) {
        if (c.segments.size() < 2) continue;
        auto w = tqm::testing::uniform_deployment(t, 7, 12, rng);
        auto s = tqm::testing::random_shifts(t, 2, rng);
        auto s2 = rotate(t, {{c}, 1}, s);
        auto a = step(t, w, s), b = step(t, w, s2);
        for (int e : c.links) EXPECT_LE(b[e], a[e]);
        EXPECT_EQ(cycle_total(a, c.links), cycle_total(b, c.links));
        ++checked;
    }
    EXPECT_GT(checked, 0);
}

TEST(Rotate, SlackExceeded) {
    Torus t(3, 4);
    auto s = zero_shifts(t);
    auto c = make_cycle(t, t.ring_links(0));
    EXPECT_NO_THROW(rotate(t, {{c}, 2}, s));
    EXPECT_THROW(rotate(t, {{c}, 3}, s), SlackExceeded);
    auto s1 = rotate(t, {{c}, 2}, s);
    EXPECT_THROW(rotate(t, {{c}, 1}, s1), SlackExceeded);
}

TEST(Release, NothingToDo) {
    Torus t(3, 6);
    Deployment w(t.num_links(), 4);
    auto s = zero_shifts(t);
    auto r = release(t, w, s, H(t, 0, 0), 5, {});
    EXPECT_TRUE(r.ok);
    EXPECT_EQ(r.shifts, s);
}

TEST(Release, OneUnitOfBackwardFlow) {
    Torus t(4, 4);
    Deployment w(t.num_links(), 3);
    int e = H(t, 2, 1);
    w[e] = 4;
    auto s = zero_shifts(t);
    auto r = release(t, w, s, e, 4, {});
    ASSERT_TRUE(r.ok);
    EXPECT_EQ(linear_queue(t, w, r.shifts, e), 3);
    EXPECT_EQ(r.shifts[t.pred(e)], -1);
    for (int f = 0; f < t.num_links(); ++f) EXPECT_LE(linear_queue(t, w, r.shifts, f), 4);
}

TEST(Release, BoxedInByTightCycle) {
    // Below the threshold the light link cannot shed load: its ring mate
    // sits on a dense cycle of heavy links.
    Torus t(2, 8);
    auto w = threshold_construction(t, 10);
    int light = t.ring_links(0)[1];
    ASSERT_EQ(w[light], 9);
    auto s = zero_shifts(t);
    auto r = release(t, w, s, light, 11, {});
    EXPECT_FALSE(r.ok);
    EXPECT_EQ(r.shifts, s);
    ASSERT_FALSE(r.added.empty());
    for (const auto& c : r.added) EXPECT_TRUE(phi_dense(w, c.links, 11));
    // Known cycles are not reported again.
    auto again = release(t, w, s, light, 11, r.added);
    EXPECT_FALSE(again.ok);
    EXPECT_TRUE(again.added.empty());
}

TEST(Unsaturated, UniformConvergesImmediately) {
    Torus t(3, 4);
    Deployment w(t.num_links(), 4);
    auto tr = minimize_unsaturated(t, w, 4);
    ASSERT_EQ(tr.rounds.size(), 1u);
    EXPECT_EQ(tr.rounds[0].event, StrategyEvent::Converged);
    EXPECT_EQ(max_queue(tr.final_deployment()), 4);
}

TEST(Unsaturated, SkewedRoad) {
    Torus t(3, 4);
    Deployment w(t.num_links(), 4);
    auto ring = t.ring_links(1);
    w[ring[0]] = 2;
    w[ring[1]] = 5;
    w[ring[2]] = 5;
    auto tr = minimize_unsaturated(t, w, 4);
    expect_replays(t, tr);
    EXPECT_LE(tr.rounds.size(), 10u * 4 * 9);
}

TEST(Unsaturated, ThresholdAndTotalsChecked) {
    Torus t8(2, 8);
    EXPECT_THROW(minimize_unsaturated(t8, threshold_construction(t8, 10), 10), ThresholdViolated);
    Torus t(3, 4);
    Deployment w(t.num_links(), 4);
    w[0] = 5;
    EXPECT_THROW(minimize_unsaturated(t, w, 4), BadRoadTotals);
}

TEST(Unsaturated, ThresholdConstructionConverges) {
    Torus t(2, 10);
    auto tr = minimize_unsaturated(t, threshold_construction(t, 10), 10);
    expect_replays(t, tr);
}

TEST(Unsaturated, RandomInstancesConverge) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 2 + trial % 3;
        std::int64_t k = 1 + static_cast<std::int64_t>(rng() % 6);
        int psi = static_cast<int>(std::max<std::int64_t>(2, k + k % 2));
        Torus t(n, psi);
        auto w = random_roads(t, k, rng);
        auto tr = minimize_unsaturated(t, w, k);
        expect_replays(t, tr);
        EXPECT_LE(tr.rounds.size(), static_cast<std::size_t>(10 * k * n * n));
        for (std::size_t i = 0; i + 1 < tr.rounds.size(); ++i)
            EXPECT_NE(tr.rounds[i].event, StrategyEvent::Converged);
    }
}

TEST(Unsaturated, CandidatesAreValid) {
    std::mt19937_64 rng(5);
    Torus t(4, 6);
    auto w = random_roads(t, 5, rng);
    auto cands = round_candidates(t, w, 5);
    EXPECT_GE(cands.size(), 4u);
    for (const auto& s : cands) {
        EXPECT_TRUE(shifts_balanced(t, s));
        EXPECT_TRUE(shifts_bounded(t, s));
    }
}
