#include "tqm/unsaturated.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <map>
#include <queue>
#include <tuple>
#include <unordered_map>

#include "tqm/bounds.hpp"
#include "tqm/flooding.hpp"
#include "tqm/saturated.hpp"

namespace tqm {

ShiftAssignment rotate(const Torus& t, const RotationPlan& plan, const ShiftAssignment& s) {
    validate_shifts(t, s);
    std::int64_t a = plan.amount;
    // Both ends of every in-cycle arc move by a, so in-cycle linear queues
    // stay put.
    std::vector<char> raise(t.num_vertices(), 0);
    for (const auto& c : plan.cycles)
        for (int e : c.links) raise[shift_arc(t, e).to] = 1;
    for (int v = 0; v < t.num_vertices(); ++v) {
        if (raise[v] && std::llabs(s[2 * v]) > t.half() - std::llabs(a))
            throw SlackExceeded("vertex " + std::to_string(v) + " has no room to rotate by " + std::to_string(a));
    }
    ShiftAssignment out = s;
    for (int v = 0; v < t.num_vertices(); ++v)
        if (raise[v]) forward_flow(t, out, 2 * v, a);
    return out;
}

namespace {

Deployment linear_queues(const Torus& t, const Deployment& w, const ShiftAssignment& s) {
    Deployment q(w.size());
    for (int e = 0; e < t.num_links(); ++e) q[e] = linear_queue(t, w, s, e);
    return q;
}

}  // namespace

ReleaseResult release(const Torus& t, const Deployment& w, const ShiftAssignment& s, int e, std::int64_t phi,
                      const std::vector<ConflictCycle>& covered) {
    ReleaseResult res;
    res.shifts = s;
    ShiftAssignment& cur = res.shifts;
    Flooder fl(t, w);
    std::vector<int> touched{e};
    int p = t.pred(e);
    int bc = t.bconf(e);
    bool failed = false;
    while (linear_queue(t, w, cur, e) > t.psi() - 1) {
        if (cur[p] - 1 < -t.half()) {
            failed = true;
            break;
        }
        forward_flow(t, cur, p, -1);
        if (linear_queue(t, w, cur, p) > phi) {
            if (!fl.run(cur, p, FlowDir::Backward, phi)) {
                failed = true;
                touched.insert(touched.end(), fl.members().begin(), fl.members().end());
                break;
            }
            touched.insert(touched.end(), fl.members().begin(), fl.members().end());
        }
        if (linear_queue(t, w, cur, bc) > phi) {
            if (!fl.run(cur, bc, FlowDir::Forward, phi)) {
                failed = true;
                touched.insert(touched.end(), fl.members().begin(), fl.members().end());
                break;
            }
            touched.insert(touched.end(), fl.members().begin(), fl.members().end());
        }
    }
    if (!failed) {
        res.ok = true;
        return res;
    }
    cur = s;
    for (const auto& c : covered) touched.insert(touched.end(), c.links.begin(), c.links.end());
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    Deployment q = linear_queues(t, w, s);
    auto found = extract_phi_cycles(t, q, touched, phi);
    if (found.empty()) {
        std::vector<int> all(t.num_links());
        for (int f = 0; f < t.num_links(); ++f) all[f] = f;
        found = extract_phi_cycles(t, q, all, phi);
    }
    for (auto& c : found) {
        bool known = std::any_of(covered.begin(), covered.end(), [&](const ConflictCycle& o) { return o.links == c.links; });
        if (!known) res.added.push_back(std::move(c));
    }
    return res;
}

std::string to_string(StrategyEvent e) {
    switch (e) {
        case StrategyEvent::CycleExtended: return "CycleExtended";
        case StrategyEvent::AgentsReduced: return "AgentsReduced";
        case StrategyEvent::Converged: return "Converged";
    }
    return "?";
}

std::int64_t deviation(const Deployment& w, std::int64_t k) {
    std::int64_t d = 0;
    for (auto x : w) d += std::llabs(x - k);
    return d;
}

namespace {

constexpr std::int64_t kFree = std::numeric_limits<std::int64_t>::max() / 4;

// Every link kept between its current queue and k, then each link in turn
// pulled towards k as far as the others allow.
std::optional<ShiftAssignment> contract(const Torus& t, const Deployment& w, std::int64_t k, bool far_first) {
    int m = t.num_links();
    std::vector<std::int64_t> lo(m), hi(m);
    for (int e = 0; e < m; ++e) {
        lo[e] = std::min(w[e], k);
        hi[e] = std::max(w[e], k);
    }
    auto best = settle_window(t, w, lo, hi);
    if (!best) return std::nullopt;
    std::vector<int> order(m);
    for (int e = 0; e < m; ++e) order[e] = e;
    if (far_first)
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return std::llabs(w[a] - k) > std::llabs(w[b] - k); });
    for (int e : order) {
        while (lo[e] < hi[e]) {
            auto lo2 = lo;
            auto hi2 = hi;
            if (w[e] > k)
                hi2[e] = hi[e] - 1;
            else
                lo2[e] = lo[e] + 1;
            auto s2 = settle_window(t, w, lo2, hi2);
            if (!s2) break;
            lo = std::move(lo2);
            hi = std::move(hi2);
            best = std::move(s2);
        }
    }
    return best;
}

// Smallest reachable maximum, then every level below it squeezed link by link.
ShiftAssignment squeeze(const Torus& t, const Deployment& w, std::int64_t k) {
    int m = t.num_links();
    std::vector<std::int64_t> lo(m, -kFree), hi(m, kFree);
    std::int64_t top = max_queue(w) + t.psi();
    ShiftAssignment best = settle_window(t, w, lo, hi).value();
    while (top - 1 >= k) {
        std::vector<std::int64_t> h2(m, top - 1);
        auto s2 = settle_window(t, w, lo, h2);
        if (!s2) break;
        --top;
        best = std::move(*s2);
    }
    hi.assign(m, top);
    for (std::int64_t lvl = top; lvl > k; --lvl) {
        for (int e = 0; e < m; ++e) {
            if (hi[e] < lvl) continue;
            auto h2 = hi;
            h2[e] = lvl - 1;
            if (auto s2 = settle_window(t, w, lo, h2)) {
                hi = std::move(h2);
                best = std::move(*s2);
            }
        }
    }
    return best;
}

// Release and rotation moves around the phi-cycles of the linear model.
std::vector<ShiftAssignment> cycle_moves(const Torus& t, const Deployment& w) {
    std::vector<ShiftAssignment> out;
    SaturatedSolution sol;
    try {
        sol = minimize_saturated(t, w, {.require_saturated = false});
    } catch (const std::exception&) {
        return out;
    }
    if (sol.cycles.empty()) return out;
    Deployment q = linear_queues(t, w, sol.shifts);
    std::vector<ConflictCycle> covered = sol.cycles;
    std::vector<char> in_c(t.num_links(), 0);
    for (const auto& c : covered)
        for (int e : c.links) in_c[e] = 1;
    for (int e = 0; e < t.num_links(); ++e) {
        if (in_c[e] || !in_c[t.succ(e)]) continue;
        auto rel = release(t, w, sol.shifts, e, sol.phi, covered);
        if (!rel.ok) continue;
        out.push_back(rel.shifts);
        for (std::int64_t a = 1; t.half() + a <= q[e] + 1 || a == 1; ++a) {
            try {
                out.push_back(rotate(t, {covered, a}, rel.shifts));
            } catch (const SlackExceeded&) {
                break;
            }
        }
    }
    return out;
}

struct VecHash {
    std::size_t operator()(const Deployment& v) const {
        std::size_t h = 1469598103934665603ull;
        for (auto x : v) {
            h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return h;
    }
};

}  // namespace

std::vector<ShiftAssignment> round_candidates(const Torus& t, const Deployment& w, std::int64_t k) {
    std::vector<ShiftAssignment> out;
    if (auto s = contract(t, w, k, true)) out.push_back(std::move(*s));
    if (auto s = contract(t, w, k, false)) out.push_back(std::move(*s));
    out.push_back(squeeze(t, w, k));
    for (auto& s : cycle_moves(t, w)) out.push_back(std::move(s));
    out.push_back(zero_shifts(t));
    return out;
}

StrategyTrace minimize_unsaturated(const Torus& t, const Deployment& w, std::int64_t k, const UnsaturatedOptions& opt) {
    validate_deployment(t, w);
    auto totals = ring_totals(t, w);
    for (std::size_t r = 0; r < totals.size(); ++r) {
        if (totals[r] != k * t.n())
            throw BadRoadTotals("road " + std::to_string(r) + " holds " + std::to_string(totals[r]) +
                                        " agents, expected k*n = " + std::to_string(k * t.n()));
    }
    if (!psi_threshold_ok(t.n(), k, t.psi()))
        throw ThresholdViolated("psi = " + std::to_string(t.psi()) + " must exceed k - n + 1 = " +
                                std::to_string(k - t.n() + 1));
    std::size_t cap = opt.max_rounds ? opt.max_rounds : static_cast<std::size_t>(10 * k * t.n() * t.n());

    StrategyTrace tr;
    tr.n = t.n();
    tr.psi = t.psi();
    tr.k = k;
    tr.initial = w;

    struct Node {
        Deployment w;
        int parent;
        ShiftAssignment via;
        std::size_t depth;
    };
    std::vector<Node> nodes;
    std::unordered_map<Deployment, int, VecHash> seen;
    using Key = std::tuple<std::int64_t, std::int64_t, std::size_t, int>;
    std::priority_queue<Key, std::vector<Key>, std::greater<>> open;
    auto add = [&](Deployment d, int parent, ShiftAssignment via, std::size_t depth) {
        if (seen.count(d)) return;
        int id = static_cast<int>(nodes.size());
        seen.emplace(d, id);
        open.emplace(deviation(d, k), max_queue(d), depth, id);
        nodes.push_back({std::move(d), parent, std::move(via), depth});
    };
    add(w, -1, {}, 0);
    int goal = -1;
    while (!open.empty()) {
        int id = std::get<3>(open.top());
        open.pop();
        if (deviation(nodes[id].w, k) == 0) {
            goal = id;
            break;
        }
        if (nodes[id].depth >= cap) continue;
        if (++tr.explored > opt.max_states) break;
        Deployment cur = nodes[id].w;
        std::size_t depth = nodes[id].depth;
        for (auto& s : round_candidates(t, cur, k)) {
            Deployment next = step(t, cur, s);
            add(std::move(next), id, std::move(s), depth + 1);
        }
    }
    if (goal < 0)
        throw NonTermination("no plan reaching max queue " + std::to_string(k) + " within " + std::to_string(cap) +
                             " rounds after " + std::to_string(tr.explored) + " states");

    std::vector<int> path;
    for (int id = goal; nodes[id].parent >= 0; id = nodes[id].parent) path.push_back(id);
    std::reverse(path.begin(), path.end());
    if (path.empty()) {
        tr.rounds.push_back({zero_shifts(t), w, StrategyEvent::Converged, max_queue(w), 0});
        return tr;
    }
    Deployment prev = w;
    for (int id : path) {
        StrategyRound r;
        r.shifts = nodes[id].via;
        r.after = nodes[id].w;
        r.max_queue = max_queue(r.after);
        r.deviation = deviation(r.after, k);
        if (r.deviation == 0)
            r.event = StrategyEvent::Converged;
        else if (r.deviation < deviation(prev, k))
            r.event = StrategyEvent::AgentsReduced;
        else
            r.event = StrategyEvent::CycleExtended;
        prev = r.after;
        tr.rounds.push_back(std::move(r));
    }
    return tr;
}

}  // namespace tqm
