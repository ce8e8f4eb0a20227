#include "tqm/bounds.hpp"
#include "tqm/flooding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace tqm {

std::int64_t lower_bound_saturated(const Deployment& w, const std::vector<std::vector<int>>& cycles) {
    if (cycles.empty()) throw EmptyCycleSet("no cycles supplied");
    std::int64_t best = std::numeric_limits<std::int64_t>::min();
    for (const auto& c : cycles)
        best = std::max(best, ceil_div(cycle_total(w, c), static_cast<std::int64_t>(c.size())));
    return best;
}

std::int64_t lower_bound_saturated(const Deployment& w, const std::vector<ConflictCycle>& cycles) {
    std::vector<std::vector<int>> raw;
    raw.reserve(cycles.size());
    for (const auto& c : cycles) raw.push_back(c.links);
    return lower_bound_saturated(w, raw);
}

std::int64_t lower_bound_unsaturated(const Deployment& w, const std::vector<int>& cycle, const std::vector<int>& entries) {
    if (cycle.empty()) throw EmptyCycleSet("empty cycle");
    std::int64_t total = cycle_total(w, cycle) + cycle_total(w, entries);
    return std::max<std::int64_t>(0, ceil_div(total, static_cast<std::int64_t>(cycle.size())));
}

bool psi_threshold_ok(int n, std::int64_t k, int psi) { return psi > k - n + 1; }

Deployment threshold_construction(const Torus& t, std::int64_t k) {
    int n = t.n();
    if (k - n + 1 < 0) throw std::invalid_argument("k must be at least n - 1");
    Deployment w(t.num_links(), k + 1);
    for (int r = 0; r < 2 * n; ++r) w[t.ring_links(r)[(r + 1) % n]] = k - n + 1;
    return w;
}

BoundReport bound_report(const Deployment& w, const std::vector<ConflictCycle>& cycles) {
    if (cycles.empty()) throw EmptyCycleSet("no cycles supplied");
    BoundReport r;
    r.saturated_bound = std::numeric_limits<std::int64_t>::min();
    r.unsaturated_bound = 0;
    for (const auto& c : cycles) {
        std::int64_t b = ceil_div(cycle_total(w, c.links), static_cast<std::int64_t>(c.size()));
        if (b > r.saturated_bound) {
            r.saturated_bound = b;
            r.binding_cycle = c;
        }
        r.unsaturated_bound = std::max(r.unsaturated_bound, lower_bound_unsaturated(w, c.links, c.boundary.entries));
    }
    return r;
}

OracleResult brute_force_optimum(const Torus& t, const Deployment& w, const OracleOptions& opt) {
    validate_deployment(t, w);
    const int nv = t.num_vertices();
    const std::int64_t half = t.half();
    const double space = std::pow(static_cast<double>(t.psi() + 1), nv);
    if (space > static_cast<double>(opt.cap)) throw BudgetExceeded("oracle enumeration exceeds cap");

    std::vector<std::int64_t> tv(nv, -half);
    OracleResult best;
    best.phi_star = std::numeric_limits<std::int64_t>::max();
    for (;;) {
        ShiftAssignment s = shifts_from_vertex(t, tv);
        Deployment next = opt.linear ? linear_step(t, w, s) : step(t, w, s);
        std::int64_t m = max_queue(next);
        ++best.evaluated;
        // Enumeration runs in lexicographic order, so the first optimum is the smallest.
        if (m < best.phi_star) {
            best.phi_star = m;
            best.shifts = std::move(s);
        }
        int v = nv - 1;
        while (v >= 0 && tv[v] == half) tv[v--] = -half;
        if (v < 0) break;
        ++tv[v];
    }
    return best;
}

OracleResult step_optimum(const Torus& t, const Deployment& w) {
    validate_deployment(t, w);
    OracleResult r;
    r.shifts = zero_shifts(t);
    r.phi_star = max_queue(step(t, w, r.shifts));
    std::vector<std::int64_t> lo(t.num_links(), 0);
    std::int64_t low = 0, high = r.phi_star;
    while (low < high) {
        std::int64_t mid = low + (high - low) / 2;
        ++r.evaluated;
        auto s = settle_window(t, w, lo, std::vector<std::int64_t>(t.num_links(), mid));
        if (s) {
            high = mid;
            r.phi_star = max_queue(step(t, w, *s));
            r.shifts = std::move(*s);
        } else {
            low = mid + 1;
        }
    }
    return r;
}

namespace {

std::optional<std::vector<std::int64_t>> linear_feasible(const Torus& t, const Deployment& w, std::int64_t phi) {
    const std::int64_t half = t.half();
    std::vector<std::int64_t> tv(t.num_vertices(), -half);
    for (int round = 0; round <= t.num_vertices(); ++round) {
        bool changed = false;
        for (int e = 0; e < t.num_links(); ++e) {
            ShiftArc a = shift_arc(t, e);
            std::int64_t need = tv[a.from] + w[e] - phi;
            if (need > tv[a.to]) {
                if (need > half) return std::nullopt;
                tv[a.to] = need;
                changed = true;
            }
        }
        if (!changed) return tv;
    }
    return std::nullopt;
}

}  // namespace

namespace {

// Positive-cycle test for weights w - c. Strict improvements can only close
// a predecessor cycle on a positive cycle, so the map is checked each pass.
bool has_positive_cycle(const std::vector<ShiftArc>& arcs, const Deployment& w, int nv, std::int64_t c) {
    std::vector<std::int64_t> d(nv, 0);
    std::vector<int> via(nv, -1);
    std::vector<int> mark(nv);
    for (int round = 0; round <= nv; ++round) {
        bool changed = false;
        for (std::size_t e = 0; e < arcs.size(); ++e) {
            std::int64_t cand = d[arcs[e].from] + w[e] - c;
            if (cand > d[arcs[e].to]) {
                d[arcs[e].to] = cand;
                via[arcs[e].to] = static_cast<int>(e);
                changed = true;
            }
        }
        if (!changed) return false;
        std::fill(mark.begin(), mark.end(), -1);
        for (int s = 0; s < nv; ++s) {
            int v = s;
            while (v >= 0 && mark[v] < 0) {
                mark[v] = s;
                v = via[v] >= 0 ? arcs[via[v]].from : -1;
            }
            if (v >= 0 && mark[v] == s) return true;
        }
    }
    return true;
}

}  // namespace

std::int64_t cycle_ceiling(const Torus& t, const Deployment& w) {
    std::vector<ShiftArc> arcs(t.num_links());
    for (int e = 0; e < t.num_links(); ++e) arcs[e] = shift_arc(t, e);
    std::int64_t lo = 0, hi = max_queue(w);
    while (lo < hi) {
        std::int64_t mid = lo + (hi - lo) / 2;
        if (has_positive_cycle(arcs, w, t.num_vertices(), mid)) lo = mid + 1;
        else hi = mid;
    }
    return lo;
}

std::int64_t path_lower_bound(const Deployment& w, const std::vector<int>& path, int psi) {
    return ceil_div(cycle_total(w, path) - psi, static_cast<std::int64_t>(path.size()));
}

std::optional<std::vector<int>> shift_limit_path(const Torus& t, const Deployment& w, std::int64_t phi) {
    const std::int64_t half = t.half();
    std::vector<std::int64_t> tv(t.num_vertices(), -half);
    std::vector<int> via(t.num_vertices(), -1);
    for (int round = 0; round <= t.num_vertices(); ++round) {
        bool changed = false;
        for (int e = 0; e < t.num_links(); ++e) {
            ShiftArc a = shift_arc(t, e);
            std::int64_t need = tv[a.from] + w[e] - phi;
            if (need <= tv[a.to]) continue;
            tv[a.to] = need;
            via[a.to] = e;
            changed = true;
            if (need <= half) continue;
            std::vector<int> path;
            std::vector<char> seen(t.num_vertices(), 0);
            for (int v = a.to; via[v] >= 0; v = shift_arc(t, via[v]).from) {
                if (seen[v]) return std::nullopt;  // positive cycle, not a path
                seen[v] = 1;
                path.push_back(via[v]);
            }
            return std::vector<int>(path.rbegin(), path.rend());
        }
        if (!changed) return std::nullopt;
    }
    return std::nullopt;
}

OracleResult linear_optimum(const Torus& t, const Deployment& w) {
    validate_deployment(t, w);
    std::int64_t lo = 0, hi = max_queue(w);
    while (lo < hi) {
        std::int64_t mid = lo + (hi - lo) / 2;
        if (linear_feasible(t, w, mid)) hi = mid;
        else lo = mid + 1;
    }
    OracleResult r;
    r.phi_star = lo;
    r.shifts = shifts_from_vertex(t, *linear_feasible(t, w, lo));
    r.phi_star = max_queue(linear_step(t, w, r.shifts));
    return r;
}

}  // namespace tqm
