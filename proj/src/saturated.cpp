#include "tqm/saturated.hpp"

#include "tqm/bounds.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <set>
#include <tuple>

namespace tqm {

bool phi_dense(const Deployment& w, const std::vector<int>& cycle, std::int64_t phi) {
    auto len = static_cast<std::int64_t>(cycle.size());
    std::int64_t total = cycle_total(w, cycle);
    return total > len * (phi - 1) && total <= len * phi;
}

namespace {

using Adjacency = std::vector<std::vector<std::pair<int, int>>>;  // vertex -> (to, link)

Adjacency build_adjacency(const Torus& t, const std::vector<char>& allowed, int skip) {
    Adjacency out(t.num_vertices());
    for (int e = 0; e < t.num_links(); ++e) {
        if (!allowed[e] || e == skip) continue;
        ShiftArc a = shift_arc(t, e);
        out[a.from].push_back({a.to, e});
    }
    return out;
}

// Path closing the root arc with the least total slack phi - q, shorter on ties.
std::optional<std::vector<int>> least_slack_cycle(const Torus& t, const Deployment& q, const Adjacency& adj, int root,
                                                  std::int64_t phi) {
    ShiftArc r = shift_arc(t, root);
    using Key = std::pair<std::int64_t, std::int64_t>;  // (slack, length)
    const Key inf{std::numeric_limits<std::int64_t>::max(), 0};
    std::vector<Key> dist(t.num_vertices(), inf);
    std::vector<int> via(t.num_vertices(), -1);
    std::priority_queue<std::tuple<Key, int>, std::vector<std::tuple<Key, int>>, std::greater<>> pq;
    dist[r.to] = {0, 0};
    pq.push({dist[r.to], r.to});
    while (!pq.empty()) {
        auto [k, v] = pq.top();
        pq.pop();
        if (k != dist[v]) continue;
        if (v == r.from) break;
        for (auto [to, e] : adj[v]) {
            Key nk{k.first + std::max<std::int64_t>(0, phi - q[e]), k.second + 1};
            if (nk < dist[to]) {
                dist[to] = nk;
                via[to] = e;
                pq.push({nk, to});
            }
        }
    }
    if (r.from == r.to || dist[r.from] == inf) return std::nullopt;
    std::vector<int> path;
    for (int v = r.from; v != r.to;) {
        int e = via[v];
        path.push_back(e);
        v = shift_arc(t, e).from;
    }
    std::vector<int> cyc{root};
    cyc.insert(cyc.end(), path.rbegin(), path.rend());
    return cyc;
}

// Cycle of a predecessor map (vertex -> link into it), if any.
std::optional<std::vector<int>> predecessor_cycle(const Torus& t, const std::vector<int>& via) {
    const int nv = static_cast<int>(via.size());
    std::vector<int> mark(nv, -1);
    for (int s = 0; s < nv; ++s) {
        int v = s;
        while (v >= 0 && mark[v] < 0) {
            mark[v] = s;
            v = via[v] >= 0 ? shift_arc(t, via[v]).from : -1;
        }
        if (v < 0 || mark[v] != s) continue;
        std::vector<int> cyc;
        int u = v;
        do {
            cyc.push_back(via[u]);
            u = shift_arc(t, via[u]).from;
        } while (u != v);
        return std::vector<int>(cyc.rbegin(), cyc.rend());
    }
    return std::nullopt;
}

// A cycle whose total over q - (phi - 1) is positive. Bellman-Ford with
// strict improvements only closes a predecessor cycle on such a cycle, so
// the predecessor map is checked after every pass.
std::optional<std::vector<int>> positive_cycle(const Torus& t, const Deployment& q, const Adjacency& adj,
                                               std::int64_t phi) {
    const int nv = t.num_vertices();
    std::vector<std::int64_t> d(nv, 0);
    std::vector<int> via(nv, -1);
    for (int round = 0; round <= nv; ++round) {
        bool changed = false;
        for (int v = 0; v < nv; ++v) {
            for (auto [to, e] : adj[v]) {
                std::int64_t cand = d[v] + q[e] - (phi - 1);
                if (cand > d[to]) {
                    d[to] = cand;
                    via[to] = e;
                    changed = true;
                }
            }
        }
        if (!changed) return std::nullopt;
        if (auto c = predecessor_cycle(t, via)) return c;
    }
    return predecessor_cycle(t, via);
}

std::optional<std::vector<int>> dense_cycle(const Torus& t, const Deployment& q, const std::vector<char>& allowed,
                                            int root, std::int64_t phi) {
    if (root >= 0) {
        Adjacency adj = build_adjacency(t, allowed, root);
        if (auto c = least_slack_cycle(t, q, adj, root, phi); c && phi_dense(q, *c, phi)) return c;
        return std::nullopt;
    }
    Adjacency adj = build_adjacency(t, allowed, -1);
    if (auto c = positive_cycle(t, q, adj, phi); c && phi_dense(q, *c, phi)) return c;
    return std::nullopt;
}

}  // namespace

std::vector<ConflictCycle> extract_phi_cycles(const Torus& t, const Deployment& q, const std::vector<int>& links,
                                              std::int64_t phi, int root) {
    std::vector<char> allowed(t.num_links(), 0);
    for (int e : links) allowed[e] = 1;
    if (root >= 0 && !allowed[root]) return {};
    auto c = dense_cycle(t, q, allowed, root, phi);
    if (!c) return {};
    return {make_cycle(t, *c)};
}

SaturatedSolution minimize_saturated(const Torus& t, const Deployment& w, const SaturatedOptions& opt) {
    validate_deployment(t, w);
    if (opt.require_saturated && !saturated(t, w)) throw NotSaturated("some link holds fewer than psi agents");

    const int links = t.num_links();
    SaturatedSolution sol;
    sol.shifts = zero_shifts(t);
    std::vector<char> covered(links, 0);  // cycle links and pinned links
    std::vector<int> all(links);
    for (int e = 0; e < links; ++e) all[e] = e;
    std::size_t cap = opt.max_iterations;
    if (cap == 0) {
        std::int64_t spread = max_queue(w) + t.psi();
        cap = static_cast<std::size_t>(links) * static_cast<std::size_t>(spread + 1) * 4;
    }

    // Cycle totals do not depend on the shifts, so neither does this bound.
    sol.cycle_bound = cycle_ceiling(t, w);
    Deployment q = linear_step(t, w, sol.shifts);

    // Queues ordered longest first, ties by link index; uncovered and
    // covered links are kept apart.
    using Entry = std::pair<std::int64_t, int>;
    std::set<Entry> open, closed;
    for (int e = 0; e < links; ++e) open.insert({-q[e], e});
    auto refresh = [&](int e) {
        std::int64_t nq = linear_queue(t, w, sol.shifts, e);
        if (nq == q[e]) return;
        auto& bucket = covered[e] ? closed : open;
        bucket.erase({-q[e], e});
        q[e] = nq;
        bucket.insert({-q[e], e});
    };
    auto cover = [&](int e) {
        if (covered[e]) return;
        open.erase({-q[e], e});
        covered[e] = 1;
        closed.insert({-q[e], e});
    };

    Flooder flooder(t, w);
    for (std::size_t it = 0;; ++it) {
        if (it >= cap) throw InternalInvariantViolation("saturated optimisation did not settle");
        if (open.empty()) break;
        auto [neg, root] = *open.begin();
        std::int64_t phi = -neg;
        if (!closed.empty() && phi < -closed.begin()->first) break;

        SaturatedIteration rec{root, phi, false, false, -1};
        bool ok = flooder.run(sol.shifts, root, FlowDir::Forward, phi - 1);
        std::vector<int> scope;
        if (ok) {
            rec.forward_ok = true;
        } else {
            scope = flooder.members();
            ok = flooder.run(sol.shifts, root, FlowDir::Backward, phi - 1);
            rec.backward_ok = ok;
        }
        if (ok) {
            for (int e : flooder.changed()) {
                refresh(e);
                refresh(t.succ(e));
            }
        } else {
            scope.insert(scope.end(), flooder.members().begin(), flooder.members().end());
            for (const auto& c : sol.cycles) scope.insert(scope.end(), c.links.begin(), c.links.end());
            auto fresh = [&](std::vector<ConflictCycle> found) {
                std::erase_if(found, [&](const ConflictCycle& c) {
                    return std::any_of(sol.cycles.begin(), sol.cycles.end(),
                                       [&](const ConflictCycle& o) { return o.links == c.links; });
                });
                return found;
            };
            // Prefer a cycle through the root; otherwise the root is held at
            // phi by a dense cycle it does not belong to, or by the shift box,
            // and is pinned.
            std::vector<ConflictCycle> found;
            if (phi <= sol.cycle_bound) {
                found = fresh(extract_phi_cycles(t, q, scope, phi, root));
                if (found.empty()) found = fresh(extract_phi_cycles(t, q, all, phi, root));
                if (found.empty()) found = fresh(extract_phi_cycles(t, q, scope, phi));
                if (found.empty()) found = fresh(extract_phi_cycles(t, q, all, phi));
                bool known = std::any_of(sol.cycles.begin(), sol.cycles.end(),
                                         [&](const ConflictCycle& c) { return phi_dense(w, c.links, phi); });
                if (found.empty() && !known) throw NoCycleFound("no dense cycle at a level the cycle bound reaches");
            }
            if (!found.empty()) {
                for (int e : found.front().links) cover(e);
                rec.cycle = static_cast<int>(sol.cycles.size());
                sol.cycles.push_back(std::move(found.front()));
            }
            if (!covered[root]) {
                cover(root);
                rec.pinned = true;
            }
        }
        sol.iterations.push_back(rec);
    }

    sol.phi = max_queue(q);
    std::int64_t best = std::numeric_limits<std::int64_t>::min();
    for (std::size_t i = 0; i < sol.cycles.size(); ++i) {
        const auto& c = sol.cycles[i];
        if (!phi_dense(w, c.links, sol.phi)) throw InternalInvariantViolation("certified cycle breaks its density bound");
        std::int64_t avg = ceil_div(cycle_total(w, c.links), static_cast<std::int64_t>(c.size()));
        if (avg > best) {
            best = avg;
            sol.binding = static_cast<int>(i);
        }
    }
    if (best != sol.phi) {
        // No cycle reaches phi: the shift box is what holds it up.
        auto path = shift_limit_path(t, w, sol.phi - 1);
        if (!path || path_lower_bound(w, *path, t.psi()) != sol.phi)
            throw InternalInvariantViolation("phi is certified by neither a cycle nor a path");
        sol.limiting_path = std::move(*path);
        sol.binding = -1;
    }
    return sol;
}

}  // namespace tqm
