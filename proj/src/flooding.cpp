#include "tqm/flooding.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <stdexcept>

#include "tqm/conflict.hpp"

namespace tqm {

void forward_flow(const Torus& t, ShiftAssignment& s, int e, std::int64_t x) {
    s[e] += x;
    s[t.conf(e)] -= x;
}

void backward_flow(const Torus& t, ShiftAssignment& s, int e, std::int64_t x) {
    int p = t.pred(e);
    s[p] += x;
    s[t.conf(p)] -= x;
}

bool ConflictTree::acyclic() const {
    if (root < 0 || !contains(root) || parent[root] != root) return false;
    for (int e : members) {
        int cur = e;
        std::size_t hops = 0;
        while (cur != root) {
            cur = parent[cur];
            if (cur < 0 || ++hops > members.size()) return false;
        }
    }
    return true;
}

Flooder::Flooder(const Torus& t, const Deployment& w)
    : t_(t), w_(w), parent_(t.num_links(), -1), stamp_(t.num_links(), 0) {}

bool Flooder::run(ShiftAssignment& s, int root, FlowDir dir, std::int64_t phi, std::vector<FloodStep>* trace) {
    if (++epoch_ == 0) {
        std::fill(stamp_.begin(), stamp_.end(), 0);
        epoch_ = 1;
    }
    members_.clear();
    undo_.clear();
    changed_.clear();
    stack_.clear();
    pushes_ = 0;
    failed_at_ = -1;

    auto q = [&](int e) { return linear_queue(t_, w_, s, e); };
    auto adopt = [&](int e, int par) {
        stamp_[e] = epoch_;
        parent_[e] = par;
        members_.push_back(e);
    };
    // The pair (e, conf e) moves together: s_e += x, s_conf -= x.
    auto shift = [&](int e, std::int64_t x) {
        int c = t_.conf(e);
        undo_.push_back({e, s[e]});
        undo_.push_back({c, s[c]});
        s[e] += x;
        s[c] -= x;
        changed_.push_back(e);
        changed_.push_back(c);
    };
    auto fail = [&](int e) {
        for (auto it = undo_.rbegin(); it != undo_.rend(); ++it) s[it->first] = it->second;
        changed_.clear();
        failed_at_ = e;
        return false;
    };
    const std::int64_t half = t_.half();

    adopt(root, root);
    // Each entry carries the mode it was reached in; the root takes dir.
    if (q(root) > phi) stack_.push_back({root, dir});

    while (!stack_.empty()) {
        auto [e, mode] = stack_.back();
        stack_.pop_back();
        std::int64_t x = q(e) - phi;
        std::array<int, 2> next;
        int shifted;
        // Besides the two neighbours, one more link's queue moves: the
        // successor of conf(e) going forward, conf(pred(e)) going backward.
        int side;
        if (mode == FlowDir::Forward) {
            shifted = e;
            shift(e, x);
            next = {t_.succ(e), t_.conf(e)};
            side = t_.succ(t_.conf(e));
        } else {
            shifted = t_.pred(e);
            shift(shifted, -x);
            next = {t_.pred(e), t_.bconf(e)};
            side = t_.conf(t_.pred(e));
        }
        if (trace) trace->push_back({e, mode, x, shifted, s[shifted]});
        for (int c : next)
            if (in_tree(c) && q(c) > phi) return fail(e);
        if (std::llabs(s[shifted]) > half) return fail(e);
        if (side != next[0] && side != next[1] && in_tree(side) && q(side) != phi) return fail(e);
        for (int k = 0; k < 2; ++k) {
            int c = next[k];
            if (in_tree(c) || q(c) <= phi) continue;
            // succ and bconf continue forward; conf and pred continue backward.
            FlowDir child = (mode == FlowDir::Forward) ? (k == 0 ? FlowDir::Forward : FlowDir::Backward)
                                                       : (k == 0 ? FlowDir::Backward : FlowDir::Forward);
            adopt(c, e);
            stack_.push_back({c, child});
            if (++pushes_ > static_cast<std::size_t>(t_.num_links()))
                throw std::logic_error("flooding pushed more links than exist");
        }
    }
    return true;
}

FloodResult flooding(const Torus& t, const Deployment& w, const ShiftAssignment& s0, int root, FlowDir dir,
                     std::int64_t phi, const FloodOptions& opt) {
    Flooder f(t, w);
    FloodResult r;
    r.shifts = s0;
    r.ok = f.run(r.shifts, root, dir, phi, opt.record_trace ? &r.trace : nullptr);
    r.pushes = f.pushes();
    r.failed_at = f.failed_at();
    r.tree.root = root;
    r.tree.phi = phi;
    r.tree.parent.assign(t.num_links(), -1);
    r.tree.members = f.members();
    for (int e : r.tree.members) r.tree.parent[e] = f.parent(e);
    return r;
}

std::optional<ShiftAssignment> settle_window(const Torus& t, const Deployment& w, const std::vector<std::int64_t>& lo,
                                             const std::vector<std::int64_t>& hi) {
    const std::int64_t half = t.half();
    std::vector<std::int64_t> tv(t.num_vertices(), -half);
    auto green = [&](int e) { return half + (t.horizontal(e) ? tv[t.head_vertex(e)] : -tv[t.head_vertex(e)]); };
    auto value = [&](int e) {
        int p = t.pred(e);
        return w[e] - std::min(green(e), w[e]) + std::min(green(p), w[p]);
    };
    std::deque<int> work;
    std::vector<char> queued(t.num_links(), 1);
    for (int e = 0; e < t.num_links(); ++e) work.push_back(e);
    auto touch = [&](int v) {
        for (int e : {2 * v, 2 * v + 1}) {
            for (int f : {e, t.succ(e)}) {
                if (!queued[f]) {
                    queued[f] = 1;
                    work.push_back(f);
                }
            }
        }
    };
    while (!work.empty()) {
        int e = work.front();
        work.pop_front();
        queued[e] = 0;
        ShiftArc a = shift_arc(t, e);
        // Raising the arc's head shift lowers the queue, raising its tail shift lifts it.
        int v = -1;
        std::int64_t val = value(e);
        while (val > hi[e] || val < lo[e]) {
            v = val > hi[e] ? a.to : a.from;
            if (tv[v] >= half) return std::nullopt;
            ++tv[v];
            val = value(e);
            if (val > hi[e] && v == a.from) return std::nullopt;
        }
        if (v >= 0) {
            touch(a.to);
            touch(a.from);
        }
    }
    return shifts_from_vertex(t, tv);
}

}  // namespace tqm
