// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "tqm/bounds.hpp"
#include "tqm/conflict.hpp"
#include "tqm/flooding.hpp"
#include "tqm/io.hpp"
#include "tqm/saturated.hpp"
#include "tqm/unsaturated.hpp"

using namespace tqm;

namespace {

constexpr double kConservationBudgetS = 10.0;
constexpr double kOracleBudgetS = 60.0;
constexpr double kReproduceSeedBudgetS = 1.0;
// Quadratic growth is x4 per doubling of n; allow another x4 on top.
constexpr double kScalingRatioPerDoubling = 16.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Deployment uniform(const Torus& t, std::int64_t lo, std::int64_t hi, std::mt19937_64& rng) {
    Deployment w(t.num_links());
    for (auto& x : w) x = io::draw(rng, lo, hi);
    return w;
}

ShiftAssignment random_shifts(const Torus& t, std::mt19937_64& rng) {
    std::vector<std::int64_t> tv(t.num_vertices());
    for (auto& x : tv) x = io::draw(rng, -t.half(), t.half());
    return shifts_from_vertex(t, tv);
}

std::vector<int> all_links(const Torus& t) {
    std::vector<int> v(t.num_links());
    for (int e = 0; e < t.num_links(); ++e) v[e] = e;
    return v;
}

struct Outcome {
    bool pass;
    std::string detail;
};

Outcome conservation() {
    auto t0 = Clock::now();
    std::mt19937_64 rng(101);
    int bad = 0;
    for (int inst = 0; inst < 200; ++inst) {
        int n = static_cast<int>(io::draw(rng, 2, 5));
        int psi = 2 * static_cast<int>(io::draw(rng, 2, 13));
        Torus t(n, psi);
        Deployment w = uniform(t, 0, 3 * psi, rng);
        auto totals = ring_totals(t, w);
        for (int r = 0; r < 20; ++r) {
            w = step(t, w, random_shifts(t, rng));
            if (ring_totals(t, w) != totals || *std::min_element(w.begin(), w.end()) < 0) ++bad;
        }
    }
    double secs = seconds_since(t0);
    return {bad == 0 && secs < kConservationBudgetS,
            "4000 steps, " + std::to_string(bad) + " violations, " + std::to_string(secs) + " s"};
}

Outcome cycle_invariance() {
    std::mt19937_64 rng(202);
    int bad = 0;
    std::size_t checked = 0;
    for (int n : {2, 3}) {
        for (int psi : {4, 6}) {
            Torus t(n, psi);
            auto cycles = enumerate_cycles(t);
            for (int trial = 0; trial < 50; ++trial) {
                Deployment w = uniform(t, psi, psi + 6, rng);
                Deployment next = step(t, w, random_shifts(t, rng));
                for (const auto& c : cycles) {
                    ++checked;
                    if (cycle_total(w, c.links) != cycle_total(next, c.links)) ++bad;
                }
            }
        }
    }
    return {bad == 0, std::to_string(checked) + " cycle checks, " + std::to_string(bad) + " changed"};
}

Outcome entry_exit_balance() {
    int bad = 0;
    std::size_t count = 0;
    for (int n : {2, 3, 4}) {
        Torus t(n, 4);
        for (const auto& c : enumerate_cycles(t)) {
            ++count;
            if (c.boundary.entry_vertices.size() != c.boundary.exit_vertices.size()) ++bad;
        }
    }
    return {bad == 0 && count > 0, std::to_string(count) + " cycles, " + std::to_string(bad) + " unbalanced"};
}

Outcome oracle_equivalence() {
    auto t0 = Clock::now();
    std::mt19937_64 rng(404);
    int bad = 0;
    for (int inst = 0; inst < 100; ++inst) {
        int psi = inst % 2 ? 6 : 4;
        Torus t(2, psi);
        Deployment w = uniform(t, psi, psi + 5, rng);
        auto phi = minimize_saturated(t, w).phi;
        auto star = brute_force_optimum(t, w).phi_star;
        auto bound = lower_bound_saturated(w, enumerate_cycles(t));
        if (phi != star || phi != bound) ++bad;
    }
    double secs = seconds_since(t0);
    return {bad == 0 && secs < kOracleBudgetS,
            "100 instances, " + std::to_string(bad) + " mismatches, " + std::to_string(secs) + " s"};
}

Outcome flooding_postconditions() {
    std::mt19937_64 rng(505);
    int bad = 0, ok = 0, doubles = 0;
    for (int call = 0; call < 500; ++call) {
        int n = static_cast<int>(io::draw(rng, 2, 4));
        int psi = call % 2 ? 6 : 4;
        Torus t(n, psi);
        Deployment w = uniform(t, psi, psi + 5, rng);
        ShiftAssignment s = zero_shifts(t);
        if (rng() % 2) {
            std::vector<std::int64_t> tv(t.num_vertices());
            for (auto& x : tv) x = io::draw(rng, -1, 1);
            s = shifts_from_vertex(t, tv);
        }
        Deployment q(t.num_links());
        for (int e = 0; e < t.num_links(); ++e) q[e] = linear_queue(t, w, s, e);
        std::int64_t top = max_queue(q);
        std::vector<int> tops;
        for (int e = 0; e < t.num_links(); ++e)
            if (q[e] == top) tops.push_back(e);
        int root = tops[rng() % tops.size()];
        bool succeeded = false;
        for (auto dir : {FlowDir::Forward, FlowDir::Backward}) {
            auto r = flooding(t, w, s, root, dir, top - 1);
            if (!r.ok) continue;
            succeeded = true;
            ++ok;
            Deployment next = step(t, w, r.shifts);
            bool good = r.tree.acyclic() && shifts_bounded(t, r.shifts) && shifts_balanced(t, r.shifts);
            for (int e : r.tree.members) good = good && next[e] == top - 1;
            if (!good) ++bad;
            break;
        }
        if (succeeded) continue;
        ++doubles;
        auto cs = extract_phi_cycles(t, q, all_links(t), top, root);
        if (cs.empty()) cs = extract_phi_cycles(t, q, all_links(t), top);
        if (cs.empty()) ++bad;
        for (const auto& c : cs) {
            auto len = static_cast<std::int64_t>(c.size());
            auto sum = cycle_total(q, c.links);
            if (sum < len * (top - 1) || sum > len * top || !is_conflict_cycle(t, c.links)) ++bad;
        }
    }
    return {bad == 0, std::to_string(ok) + " trees, " + std::to_string(doubles) + " double failures, " +
                          std::to_string(bad) + " violations"};
}

Outcome threshold_case() {
    const std::int64_t k = 10;
    Torus t8(2, 8), t10(2, 10);
    Deployment w = threshold_construction(t8, k);
    auto short_round = brute_force_optimum(t8, w).phi_star;
    auto long_round = brute_force_optimum(t10, w).phi_star;
    bool converged = false;
    std::size_t rounds = 0;
    try {
        auto tr = minimize_unsaturated(t10, w, k);
        rounds = tr.rounds.size();
        converged = max_queue(tr.final_deployment()) == k;
    } catch (const std::exception&) {
    }
    return {short_round > k && long_round <= k + 1 && converged,
            "psi=8 phi*=" + std::to_string(short_round) + ", psi=10 phi*=" + std::to_string(long_round) +
                ", strategy " + (converged ? "converged in " + std::to_string(rounds) + " rounds" : "failed")};
}

Outcome unsaturated_convergence() {
    int bad = 0;
    std::size_t most = 0;
    for (int inst = 0; inst < 50; ++inst) {
        int n = 3 + inst % 2;
        std::int64_t k = 2 + (inst / 2) % 4;
        int psi = static_cast<int>(std::max<std::int64_t>(4, k));
        psi += psi % 2;
        Torus t(n, psi);
        Deployment w = io::road_instance(t, k, 700 + inst);
        try {
            auto tr = minimize_unsaturated(t, w, k);
            most = std::max(most, tr.rounds.size());
            if (max_queue(tr.final_deployment()) != k || tr.rounds.size() > static_cast<std::size_t>(10 * k * n * n))
                ++bad;
        } catch (const std::exception&) {
            ++bad;
        }
    }
    return {bad == 0, "50 instances, " + std::to_string(bad) + " failed, longest plan " + std::to_string(most) + " rounds"};
}

Outcome reproduce_5x5() {
    Torus t(5, 26);
    int not_worse = 0, tight = 0, fast = 0, real_higher = 0;
    double slowest = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        Deployment w = io::uniform_instance(t, 10, 20, seed);
        auto t0 = Clock::now();
        auto sol = minimize_saturated(t, w, {.require_saturated = false});
        double secs = seconds_since(t0);
        slowest = std::max(slowest, secs);
        not_worse += sol.phi <= max_queue(w);
        tight += sol.binding >= 0 && sol.phi == sol.cycle_bound;
        fast += secs < kReproduceSeedBudgetS;
        real_higher += max_queue(step(t, w, sol.shifts)) > sol.phi;
    }
    return {not_worse == 50 && tight == 50 && fast == 50,
            "not worse " + std::to_string(not_worse) + "/50, bound tight " + std::to_string(tight) +
                "/50, slowest " + std::to_string(slowest) + " s; true step above the linear value on " +
                std::to_string(real_higher) + "/50"};
}

// Mean time per call, repeating until the sample is long enough to trust.
double time_per_call(const Torus& t, const Deployment& w) {
    int calls = 0;
    auto t0 = Clock::now();
    do {
        minimize_saturated(t, w);
        ++calls;
    } while (seconds_since(t0) < 0.05);
    return seconds_since(t0) / calls;
}

Outcome scaling() {
    std::vector<double> times;
    std::string detail;
    for (int n : {10, 20, 40}) {
        Torus t(n, 6);
        double best = 1e9;
        for (std::uint64_t seed = 900; seed < 903; ++seed)
            best = std::min(best, time_per_call(t, io::uniform_instance(t, 6, 11, seed)));
        times.push_back(best);
        detail += "n=" + std::to_string(n) + " " + std::to_string(best * 1e3) + " ms; ";
    }
    bool ok = true;
    for (std::size_t i = 1; i < times.size(); ++i) {
        double ratio = times[i] / times[i - 1];
        detail += "ratio " + std::to_string(ratio) + (i + 1 < times.size() ? "; " : "");
        ok = ok && ratio <= kScalingRatioPerDoubling;
    }
    return {ok, detail};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"conservation", conservation},
        {"cycle invariance", cycle_invariance},
        {"entry/exit balance", entry_exit_balance},
        {"oracle equivalence", oracle_equivalence},
        {"flooding postconditions", flooding_postconditions},
        {"threshold construction", threshold_case},
        {"unsaturated convergence", unsaturated_convergence},
        {"reproduce 5x5", reproduce_5x5},
        {"scaling", scaling},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
        std::fflush(stdout);
    }
    return failed ? 1 : 0;
}
