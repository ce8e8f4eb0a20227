#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tqm/conflict.hpp"
#include "tqm/torus.hpp"

namespace tqm {

class SlackExceeded : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

class ThresholdViolated : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

class BadRoadTotals : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

class NonTermination : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Rotating by a gives every vertex on the cycles a more horizontal and a
// less vertical green: f+(a) on horizontal links, f-(-a) on vertical ones.
struct RotationPlan {
    std::vector<ConflictCycle> cycles;
    std::int64_t amount = 0;
};

ShiftAssignment rotate(const Torus& t, const RotationPlan& plan, const ShiftAssignment& s);

struct ReleaseResult {
    bool ok = false;
    ShiftAssignment shifts;
    std::vector<ConflictCycle> added;  // cycles found when a repair flood failed
};

// Lowers the linear queue of entry link e below psi one unit of backward
// flow at a time, re-flooding pred(e) and bconf(e) at phi. On failure the
// shifts are restored and fresh phi-cycles near e are returned.
ReleaseResult release(const Torus& t, const Deployment& w, const ShiftAssignment& s, int e, std::int64_t phi,
                      const std::vector<ConflictCycle>& covered);

enum class StrategyEvent { CycleExtended, AgentsReduced, Converged };

std::string to_string(StrategyEvent e);

struct StrategyRound {
    ShiftAssignment shifts;
    Deployment after;
    StrategyEvent event;
    std::int64_t max_queue;
    std::int64_t deviation;  // sum |w_e - k|
};

struct StrategyTrace {
    int n = 0;
    int psi = 0;
    std::int64_t k = 0;
    Deployment initial;
    std::vector<StrategyRound> rounds;
    std::size_t explored = 0;  // search states expanded

    const Deployment& final_deployment() const { return rounds.empty() ? initial : rounds.back().after; }
};

struct UnsaturatedOptions {
    std::size_t max_rounds = 0;      // 0: 10 k n^2
    std::size_t max_states = 20000;  // search budget
};

// Per-road totals must all be k n. Plans a sequence of rounds ending with
// every queue at k; throws NonTermination when the plan would exceed the
// round cap or the search budget runs out.
StrategyTrace minimize_unsaturated(const Torus& t, const Deployment& w, std::int64_t k,
                                   const UnsaturatedOptions& opt = {});

// Candidate shift assignments for one round from deployment w, in the order
// the planner tries them. Exposed for tests.
std::vector<ShiftAssignment> round_candidates(const Torus& t, const Deployment& w, std::int64_t k);

std::int64_t deviation(const Deployment& w, std::int64_t k);

}  // namespace tqm
