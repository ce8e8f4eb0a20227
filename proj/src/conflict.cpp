#include "tqm/conflict.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace tqm {

const char* to_string(EdgeKind k) {
    switch (k) {
        case EdgeKind::Succ: return "succ";
        case EdgeKind::Pred: return "pred";
        case EdgeKind::Conf: return "conf";
        case EdgeKind::Bconf: return "bconf";
    }
    return "?";
}

std::array<int, 2> neighbors_forward(const Torus& t, int e) { return {t.succ(e), t.conf(e)}; }
std::array<int, 2> neighbors_backward(const Torus& t, int e) { return {t.pred(e), t.bconf(e)}; }

std::vector<EdgeKind> kinds_between(const Torus& t, int a, int b) {
    std::vector<EdgeKind> out;
    if (b == t.succ(a)) out.push_back(EdgeKind::Succ);
    if (b == t.conf(a)) out.push_back(EdgeKind::Conf);
    if (b == t.pred(a)) out.push_back(EdgeKind::Pred);
    if (b == t.bconf(a)) out.push_back(EdgeKind::Bconf);
    return out;
}

std::optional<EdgeKind> edge_kind(const Torus& t, int a, int b) {
    auto k = kinds_between(t, a, b);
    if (k.empty()) return std::nullopt;
    return k.front();
}

ShiftArc shift_arc(const Torus& t, int e) {
    if (t.horizontal(e)) return {t.tail_vertex(e), t.head_vertex(e)};
    return {t.head_vertex(e), t.tail_vertex(e)};
}

namespace {

// Walk modes: after succ or bconf the next link must be a forward neighbour
// (succ, conf); after conf or pred it must be a backward one (pred, bconf).
constexpr unsigned kFwd = 1, kBwd = 2;

unsigned advance(const Torus& t, unsigned modes, int a, int b) {
    unsigned next = 0;
    if (modes & kFwd) {
        if (b == t.succ(a)) next |= kFwd;
        if (b == t.conf(a)) next |= kBwd;
    }
    if (modes & kBwd) {
        if (b == t.pred(a)) next |= kBwd;
        if (b == t.bconf(a)) next |= kFwd;
    }
    return next;
}

bool distinct(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    return std::adjacent_find(v.begin(), v.end()) == v.end();
}

bool in_range(const Torus& t, const std::vector<int>& seq) {
    return std::all_of(seq.begin(), seq.end(), [&](int e) { return e >= 0 && e < t.num_links(); });
}

std::vector<int> to_indices(const Torus& t, const std::vector<LinkRef>& seq) {
    std::vector<int> out;
    out.reserve(seq.size());
    for (const auto& e : seq) out.push_back(t.index(e));
    return out;
}

// Arcs must chain head to tail in one consistent direction through distinct vertices.
bool chains_simply(const Torus& t, const std::vector<int>& seq) {
    std::size_t l = seq.size();
    for (int dir = 0; dir < 2; ++dir) {
        bool ok = true;
        std::vector<int> seen;
        for (std::size_t i = 0; i < l && ok; ++i) {
            ShiftArc a = shift_arc(t, seq[i]);
            ShiftArc b = shift_arc(t, seq[(i + 1) % l]);
            ok = dir == 0 ? a.to == b.from : a.from == b.to;
            seen.push_back(a.from);
        }
        if (ok && distinct(seen)) return true;
    }
    return false;
}

}  // namespace

bool is_conflict_path(const Torus& t, const std::vector<int>& seq) {
    if (seq.size() <= 2 || !in_range(t, seq) || !distinct(seq)) return false;
    unsigned modes = kFwd | kBwd;
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
        modes = advance(t, modes, seq[i], seq[i + 1]);
        if (!modes) return false;
    }
    return true;
}

bool is_conflict_cycle(const Torus& t, const std::vector<int>& input) {
    std::vector<int> seq = input;
    if (seq.size() >= 2 && seq.front() == seq.back()) seq.pop_back();
    if (seq.size() < 2 || !in_range(t, seq) || !distinct(seq)) return false;
    bool closed = false;
    for (unsigned start : {kFwd, kBwd}) {
        unsigned modes = start;
        for (std::size_t i = 0; i < seq.size() && modes; ++i)
            modes = advance(t, modes, seq[i], seq[(i + 1) % seq.size()]);
        if (modes & start) closed = true;
    }
    return closed && chains_simply(t, seq);
}

bool is_conflict_path(const Torus& t, const std::vector<LinkRef>& seq) {
    return is_conflict_path(t, to_indices(t, seq));
}

bool is_conflict_cycle(const Torus& t, const std::vector<LinkRef>& seq) {
    return is_conflict_cycle(t, to_indices(t, seq));
}

bool ConflictCycle::contains(int e) const {
    return std::find(links.begin(), links.end(), e) != links.end();
}

Boundary classify_boundary(const Torus& t, const std::vector<int>& cycle) {
    std::vector<char> in(t.num_links(), 0);
    for (int e : cycle) in[e] = 1;
    Boundary b;
    std::vector<char> entry(t.num_links(), 0), exit(t.num_links(), 0);
    for (int e = 0; e < t.num_links(); ++e) {
        bool next_in = in[t.succ(e)];
        if (!in[e] && next_in) {
            b.entries.push_back(e);
            entry[e] = 1;
        }
        if (in[e] && !next_in) {
            b.exits.push_back(e);
            exit[e] = 1;
        }
    }
    for (int v = 0; v < t.num_vertices(); ++v) {
        if (entry[2 * v] && entry[2 * v + 1]) b.entry_vertices.push_back(v);
        if (exit[2 * v] && exit[2 * v + 1]) b.exit_vertices.push_back(v);
    }
    if (b.entry_vertices.size() != b.exit_vertices.size())
        throw InvalidCycle("entry/exit vertex counts differ");
    return b;
}

std::vector<int> canonical_cycle(const std::vector<int>& seq) {
    std::vector<int> best;
    auto consider = [&](const std::vector<int>& s) {
        for (std::size_t r = 0; r < s.size(); ++r) {
            std::vector<int> rot(s.begin() + r, s.end());
            rot.insert(rot.end(), s.begin(), s.begin() + r);
            if (best.empty() || rot < best) best = std::move(rot);
        }
    };
    consider(seq);
    consider(std::vector<int>(seq.rbegin(), seq.rend()));
    return best;
}

std::vector<std::vector<int>> split_segments(const Torus& t, const std::vector<int>& seq) {
    std::size_t l = seq.size();
    std::size_t start = 0;
    bool found = false;
    for (std::size_t i = 0; i < l; ++i) {
        if (t.horizontal(seq[i]) != t.horizontal(seq[(i + l - 1) % l])) {
            start = i;
            found = true;
            break;
        }
    }
    if (!found) return {seq};
    std::vector<std::vector<int>> segs;
    for (std::size_t k = 0; k < l; ++k) {
        int e = seq[(start + k) % l];
        if (segs.empty() || t.horizontal(e) != t.horizontal(segs.back().back())) segs.emplace_back();
        segs.back().push_back(e);
    }
    return segs;
}

ConflictCycle make_cycle(const Torus& t, const std::vector<int>& seq) {
    if (!is_conflict_cycle(t, seq)) throw InvalidCycle("not a conflict cycle");
    std::vector<int> open = seq;
    if (open.size() >= 2 && open.front() == open.back()) open.pop_back();
    ConflictCycle c;
    c.links = canonical_cycle(open);
    c.segments = split_segments(t, c.links);
    c.boundary = classify_boundary(t, c.links);
    return c;
}

std::vector<ConflictCycle> enumerate_cycles(const Torus& t, EnumerateOptions opt) {
    int max_len = opt.max_len > 0 ? opt.max_len : 4 * t.n();
    int nv = t.num_vertices();
    std::vector<std::vector<std::pair<int, int>>> out(nv);  // (to, link)
    for (int e = 0; e < t.num_links(); ++e) {
        ShiftArc a = shift_arc(t, e);
        out[a.from].push_back({a.to, e});
    }
    std::vector<ConflictCycle> result;
    std::vector<char> on_path(nv, 0);
    std::vector<int> path;
    // Each simple cycle is found once, from its smallest vertex.
    auto dfs = [&](auto&& self, int s, int v) -> void {
        for (auto [to, e] : out[v]) {
            if (to == s) {
                path.push_back(e);
                if (result.size() >= opt.cap) throw BudgetExceeded("cycle enumeration cap reached");
                result.push_back(make_cycle(t, path));
                path.pop_back();
            } else if (to > s && !on_path[to] && static_cast<int>(path.size()) + 1 < max_len) {
                on_path[to] = 1;
                path.push_back(e);
                self(self, s, to);
                path.pop_back();
                on_path[to] = 0;
            }
        }
    };
    for (int s = 0; s < nv; ++s) {
        on_path[s] = 1;
        dfs(dfs, s, s);
        on_path[s] = 0;
    }
    std::sort(result.begin(), result.end(),
              [](const ConflictCycle& a, const ConflictCycle& b) { return a.links < b.links; });
    return result;
}

std::int64_t cycle_total(const Deployment& w, const std::vector<int>& links) {
    std::int64_t s = 0;
    for (int e : links) s += w[e];
    return s;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) == (b < 0))) ++q;
    return q;
}

namespace {

std::string node_name(const Torus& t, int e) {
    LinkRef l = t.link(e);
    return std::string("\"") + to_string(l) + "\"";
}

std::string edge_attrs(const DotStyle& style, const std::set<int>& hi, int e, std::int64_t maxq) {
    bool red = hi.count(e) > 0;
    if (!style.queues && !red) return "";
    std::ostringstream a;
    a << "[";
    if (style.queues) {
        double width = maxq > 0 ? 1.0 + 4.0 * static_cast<double>((*style.queues)[e]) / static_cast<double>(maxq) : 1.0;
        a << "penwidth=" << width << ", label=\"" << (*style.queues)[e] << "\"";
    }
    if (red) a << (style.queues ? ", " : "") << "color=red";
    a << "]";
    return a.str();
}

}  // namespace

std::string conflict_graph_dot(const Torus& t, const DotStyle& style) {
    std::set<int> hi(style.highlight.begin(), style.highlight.end());
    std::ostringstream os;
    os << "digraph conflict {\n  node [shape=box];\n";
    for (int e = 0; e < t.num_links(); ++e) {
        os << "  " << node_name(t, e);
        std::vector<std::string> attrs;
        if (hi.count(e)) attrs.push_back("color=red");
        if (style.queues) attrs.push_back("label=\"" + to_string(t.link(e)) + " " + std::to_string((*style.queues)[e]) + "\"");
        if (!attrs.empty()) {
            os << " [";
            for (std::size_t i = 0; i < attrs.size(); ++i) os << (i ? ", " : "") << attrs[i];
            os << "]";
        }
        os << ";\n";
    }
    for (int e = 0; e < t.num_links(); ++e) {
        bool both = hi.count(e) && hi.count(t.succ(e));
        os << "  " << node_name(t, e) << " -> " << node_name(t, t.succ(e)) << (both ? " [color=red]" : "") << ";\n";
    }
    // conf and bconf are symmetric relations; emit each pair once.
    for (int e = 0; e < t.num_links(); ++e) {
        int c = t.conf(e);
        if (e < c) os << "  " << node_name(t, e) << " -> " << node_name(t, c) << " [dir=none, style=dashed];\n";
        int b = t.bconf(e);
        if (e < b) os << "  " << node_name(t, e) << " -> " << node_name(t, b) << " [dir=none, style=dotted];\n";
    }
    os << "}\n";
    return os.str();
}

std::string network_dot(const Torus& t, const DotStyle& style) {
    std::set<int> hi(style.highlight.begin(), style.highlight.end());
    std::int64_t maxq = style.queues ? max_queue(*style.queues) : 0;
    std::ostringstream os;
    os << "digraph torus {\n  node [shape=circle];\n";
    for (int v = 0; v < t.num_vertices(); ++v) {
        Vertex x = t.vertex(v);
        os << "  v" << v << " [label=\"" << x.row << "," << x.col << "\", pos=\"" << x.col << "," << -x.row << "!\"];\n";
    }
    for (int e = 0; e < t.num_links(); ++e) {
        os << "  v" << t.tail_vertex(e) << " -> v" << t.head_vertex(e) << " " << edge_attrs(style, hi, e, maxq) << ";\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace tqm
