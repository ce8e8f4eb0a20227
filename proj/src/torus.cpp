#include "tqm/torus.hpp"

#include <algorithm>

namespace tqm {

Heading direction(Orientation road, int ring_index) {
    bool even = ring_index % 2 == 0;
    if (road == Orientation::Horizontal) return even ? Heading::East : Heading::West;
    return even ? Heading::South : Heading::North;
}

const char* to_string(Heading h) {
    switch (h) {
        case Heading::East: return "East";
        case Heading::West: return "West";
        case Heading::South: return "South";
        case Heading::North: return "North";
    }
    return "?";
}

std::string to_string(const LinkRef& e) {
    return std::string(e.orientation == Orientation::Horizontal ? "H" : "V") + "(" +
           std::to_string(e.head_row) + "," + std::to_string(e.head_col) + ")";
}

Torus::Torus(int n, int psi) : n_(n), psi_(psi) {
    if (n < 2) throw InvalidGeometry("n must be at least 2");
    if (psi < 2 || psi % 2 != 0) throw InvalidGeometry("psi must be an even integer >= 2");
    int links = num_links();
    succ_.resize(links);
    pred_.resize(links);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            int h = (r * n + c) * 2;
            int pc = (r % 2 == 0) ? (c - 1 + n) % n : (c + 1) % n;
            pred_[h] = (r * n + pc) * 2;
            int v = h + 1;
            int pr = (c % 2 == 0) ? (r - 1 + n) % n : (r + 1) % n;
            pred_[v] = (pr * n + c) * 2 + 1;
        }
    }
    for (int e = 0; e < links; ++e) succ_[pred_[e]] = e;
}

int Torus::index(const LinkRef& e) const {
    if (!valid(e)) throw std::out_of_range("link outside the torus: " + to_string(e));
    return (e.head_row * n_ + e.head_col) * 2 + static_cast<int>(e.orientation);
}

LinkRef Torus::link(int idx) const {
    int v = idx >> 1;
    return {v / n_, v % n_, (idx & 1) ? Orientation::Vertical : Orientation::Horizontal};
}

bool Torus::valid(const LinkRef& e) const {
    return e.head_row >= 0 && e.head_row < n_ && e.head_col >= 0 && e.head_col < n_;
}

int Torus::ring(int e) const {
    int v = e >> 1;
    return horizontal(e) ? v / n_ : n_ + v % n_;
}

std::vector<int> Torus::ring_links(int r) const {
    if (r < 0 || r >= 2 * n_) throw std::out_of_range("ring " + std::to_string(r));
    std::vector<int> out;
    for (int i = 0; i < n_; ++i) out.push_back(r < n_ ? (r * n_ + i) * 2 : (i * n_ + r - n_) * 2 + 1);
    return out;
}

ShiftAssignment zero_shifts(const Torus& t) { return ShiftAssignment(t.num_links(), 0); }

ShiftAssignment shifts_from_vertex(const Torus& t, const std::vector<std::int64_t>& tv) {
    ShiftAssignment s(t.num_links());
    for (int v = 0; v < t.num_vertices(); ++v) {
        s[2 * v] = tv[v];
        s[2 * v + 1] = -tv[v];
    }
    return s;
}

std::vector<std::int64_t> vertex_shifts(const Torus& t, const ShiftAssignment& s) {
    std::vector<std::int64_t> tv(t.num_vertices());
    for (int v = 0; v < t.num_vertices(); ++v) tv[v] = s[2 * v];
    return tv;
}

bool shifts_balanced(const Torus& t, const ShiftAssignment& s) {
    if (static_cast<int>(s.size()) != t.num_links()) return false;
    for (int v = 0; v < t.num_vertices(); ++v)
        if (s[2 * v] + s[2 * v + 1] != 0) return false;
    return true;
}

bool shifts_bounded(const Torus& t, const ShiftAssignment& s) {
    return std::all_of(s.begin(), s.end(), [&](std::int64_t x) { return x >= -t.half() && x <= t.half(); });
}

void validate_shifts(const Torus& t, const ShiftAssignment& s) {
    if (static_cast<int>(s.size()) != t.num_links())
        throw InvalidShifts("expected " + std::to_string(t.num_links()) + " shifts");
    if (!shifts_balanced(t, s)) throw InvalidShifts("shifts are not vertex-balanced");
    if (!shifts_bounded(t, s)) throw InvalidShifts("shift outside [-psi/2, psi/2]");
}

void validate_deployment(const Torus& t, const Deployment& w) {
    if (static_cast<int>(w.size()) != t.num_links())
        throw std::invalid_argument("expected " + std::to_string(t.num_links()) + " queue lengths");
    for (auto x : w)
        if (x < 0) throw std::invalid_argument("negative queue length");
}

std::int64_t green_time(const Torus& t, int e, const ShiftAssignment& s) { return t.half() + s[e]; }

Deployment step(const Torus& t, const Deployment& w, const ShiftAssignment& s) {
    int links = t.num_links();
    std::vector<std::int64_t> out(links);
    for (int e = 0; e < links; ++e) out[e] = std::min(green_time(t, e, s), w[e]);
    Deployment next(links);
    for (int e = 0; e < links; ++e) next[e] = w[e] - out[e] + out[t.pred(e)];
    return next;
}

std::int64_t linear_queue(const Torus& t, const Deployment& w, const ShiftAssignment& s, int e) {
    return w[e] - s[e] + s[t.pred(e)];
}

Deployment linear_step(const Torus& t, const Deployment& w, const ShiftAssignment& s) {
    Deployment next(t.num_links());
    for (int e = 0; e < t.num_links(); ++e) next[e] = linear_queue(t, w, s, e);
    return next;
}

bool saturated(const Torus& t, const Deployment& w) {
    return std::all_of(w.begin(), w.end(), [&](std::int64_t x) { return x >= t.psi(); });
}

std::vector<std::int64_t> ring_totals(const Torus& t, const Deployment& w) {
    std::vector<std::int64_t> tot(2 * t.n(), 0);
    for (int e = 0; e < t.num_links(); ++e) tot[t.ring(e)] += w[e];
    return tot;
}

std::int64_t max_queue(const Deployment& w) {
    return w.empty() ? 0 : *std::max_element(w.begin(), w.end());
}

}  // namespace tqm
