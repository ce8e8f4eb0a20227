#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "tqm/conflict.hpp"
#include "tqm/flooding.hpp"
#include "tqm/torus.hpp"

namespace tqm {

class NotSaturated : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

class NoCycleFound : public std::logic_error {
    using std::logic_error::logic_error;
};

class InternalInvariantViolation : public std::logic_error {
    using std::logic_error::logic_error;
};

struct SaturatedOptions {
    // Off: accept any deployment and optimise the linear queue model w - s + s_pred.
    bool require_saturated = true;
    std::size_t max_iterations = 0;  // 0 derives a cap from the instance
};

struct SaturatedIteration {
    int root;
    std::int64_t phi;
    bool forward_ok;
    bool backward_ok;
    int cycle = -1;  // index into cycles when a cycle was added
    bool pinned = false;
};

struct SaturatedSolution {
    std::int64_t phi = 0;
    ShiftAssignment shifts;
    std::vector<ConflictCycle> cycles;
    int binding = -1;  // cycle whose rounded-up average equals phi
    std::int64_t cycle_bound = 0;     // max over all cycles of the rounded-up average
    std::vector<int> limiting_path;   // set instead of binding when the shift box decides phi
    std::vector<SaturatedIteration> iterations;
};

SaturatedSolution minimize_saturated(const Torus& t, const Deployment& w, const SaturatedOptions& opt = {});

// A cycle inside `links` whose total over q satisfies |C|(phi-1) < sum <= |C| phi.
// With a root: the least-slack cycle through it, if dense. Without: a positive
// cycle of q - (phi-1), which is dense whenever no link exceeds phi.
std::vector<ConflictCycle> extract_phi_cycles(const Torus& t, const Deployment& q, const std::vector<int>& links,
                                              std::int64_t phi, int root = -1);

bool phi_dense(const Deployment& w, const std::vector<int>& cycle, std::int64_t phi);

}  // namespace tqm
