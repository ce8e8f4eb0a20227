#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "tqm/conflict.hpp"
#include "tqm/torus.hpp"

namespace tqm {

class EmptyCycleSet : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// max over cycles of ceil(sum w / |C|)
std::int64_t lower_bound_saturated(const Deployment& w, const std::vector<ConflictCycle>& cycles);
std::int64_t lower_bound_saturated(const Deployment& w, const std::vector<std::vector<int>>& cycles);

// ceil((sum over C + sum over entries) / |C|), clamped at 0.
std::int64_t lower_bound_unsaturated(const Deployment& w, const std::vector<int>& cycle, const std::vector<int>& entries);

bool psi_threshold_ok(int n, std::int64_t k, int psi);

// Every road holds k n agents: the link at position (r + 1) mod n of road r
// has k - n + 1, the others k + 1. On n = 2 the heavy links close a 4-cycle.
Deployment threshold_construction(const Torus& t, std::int64_t k);

struct BoundReport {
    std::int64_t saturated_bound = 0;
    std::int64_t unsaturated_bound = 0;
    ConflictCycle binding_cycle;  // attains saturated_bound
};

BoundReport bound_report(const Deployment& w, const std::vector<ConflictCycle>& cycles);

struct OracleOptions {
    std::uint64_t cap = 50'000'000;  // assignments
    bool linear = false;             // evaluate w - s + s_pred instead of step()
};

struct OracleResult {
    std::int64_t phi_star = 0;
    ShiftAssignment shifts;  // lexicographically smallest optimal assignment
    std::uint64_t evaluated = 0;
};

OracleResult brute_force_optimum(const Torus& t, const Deployment& w, const OracleOptions& opt = {});

// Exact optimum of the linear queue model (saturated dynamics) for any n:
// binary search on phi, each probe a system of difference constraints
// t_to - t_from >= w_e - phi inside the shift box, solved by Bellman-Ford.
OracleResult linear_optimum(const Torus& t, const Deployment& w);

// Exact one-round optimum of the true step() for any n, saturated or not:
// binary search on phi, each probe a window closure with upper window phi.
// evaluated counts probes.
OracleResult step_optimum(const Torus& t, const Deployment& w);

// max over every conflict cycle of ceil(sum w / |C|), without enumerating:
// the smallest c for which no cycle has positive total of w - c.
std::int64_t cycle_ceiling(const Torus& t, const Deployment& w);

// A conflict path P forces t_end - t_start >= sum(w - phi), which the shift
// box caps at psi, so phi >= ceil((sum_P w - psi) / |P|).
std::int64_t path_lower_bound(const Deployment& w, const std::vector<int>& path, int psi);

// Path whose bound exceeds phi, or nullopt when phi is reachable.
std::optional<std::vector<int>> shift_limit_path(const Torus& t, const Deployment& w, std::int64_t phi);

}  // namespace tqm
