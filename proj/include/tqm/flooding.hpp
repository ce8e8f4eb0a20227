#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "tqm/torus.hpp"

namespace tqm {

enum class FlowDir { Forward, Backward };

// f+_e(x): s_e += x, s_conf(e) -= x.
void forward_flow(const Torus& t, ShiftAssignment& s, int e, std::int64_t x);
// f-_e(x): s_pred(e) += x, s_conf(pred(e)) -= x. Equal to f+_pred(e)(x).
void backward_flow(const Torus& t, ShiftAssignment& s, int e, std::int64_t x);

struct ConflictTree {
    int root = -1;
    std::int64_t phi = 0;
    std::vector<int> parent;   // -1 outside the tree, root maps to itself
    std::vector<int> members;  // insertion order, root first

    bool contains(int e) const { return e >= 0 && e < static_cast<int>(parent.size()) && parent[e] >= 0; }
    std::size_t size() const { return members.size(); }
    bool acyclic() const;
};

struct FloodStep {
    int link;
    FlowDir mode;
    std::int64_t flow;       // excess removed from the link
    int shifted;             // link whose shift was raised by the flow
    std::int64_t shift_after;
};

struct FloodResult {
    bool ok = false;
    ConflictTree tree;
    ShiftAssignment shifts;
    std::size_t pushes = 0;
    int failed_at = -1;
    std::vector<FloodStep> trace;
};

struct FloodOptions {
    bool record_trace = false;
};

// Stack-driven flooding on predicted saturated queues w - s + s_pred. Works
// on a private copy of s; callers keep their own backup.
FloodResult flooding(const Torus& t, const Deployment& w, const ShiftAssignment& s, int root, FlowDir dir,
                     std::int64_t phi, const FloodOptions& opt = {});

// Reusable flooding engine that edits shifts in place and undoes its own
// edits on failure. Scratch space is kept between runs, so one run costs
// time proportional to the tree it builds.
class Flooder {
public:
    Flooder(const Torus& t, const Deployment& w);

    bool run(ShiftAssignment& s, int root, FlowDir dir, std::int64_t phi, std::vector<FloodStep>* trace = nullptr);

    const std::vector<int>& members() const { return members_; }
    int parent(int e) const { return in_tree(e) ? parent_[e] : -1; }
    bool in_tree(int e) const { return stamp_[e] == epoch_; }
    // Links whose shift the last successful run changed (may repeat).
    const std::vector<int>& changed() const { return changed_; }
    std::size_t pushes() const { return pushes_; }
    int failed_at() const { return failed_at_; }

private:
    const Torus& t_;
    const Deployment& w_;
    std::vector<int> parent_;
    std::vector<unsigned> stamp_;
    unsigned epoch_ = 0;
    std::vector<int> members_;
    std::vector<std::pair<int, std::int64_t>> undo_;
    std::vector<int> changed_;
    std::vector<std::pair<int, FlowDir>> stack_;
    std::size_t pushes_ = 0;
    int failed_at_ = -1;
};

// Least vertex-shift assignment whose true one-round step keeps every link
// inside [lo_e, hi_e], or nullopt. Each queue after the step is monotone in
// the two vertex shifts it depends on, so raising shifts only where a
// window is violated reaches the smallest solution if one exists.
std::optional<ShiftAssignment> settle_window(const Torus& t, const Deployment& w, const std::vector<std::int64_t>& lo,
                                             const std::vector<std::int64_t>& hi);

}  // namespace tqm
