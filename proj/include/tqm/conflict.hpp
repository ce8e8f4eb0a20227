#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tqm/torus.hpp"

namespace tqm {

enum class EdgeKind { Succ, Pred, Conf, Bconf };
const char* to_string(EdgeKind k);

std::array<int, 2> neighbors_forward(const Torus& t, int e);   // {succ, conf}
std::array<int, 2> neighbors_backward(const Torus& t, int e);  // {pred, bconf}

// First matching kind in the order Succ, Conf, Pred, Bconf. On n=2 several
// kinds can hold for the same pair; see kinds_between.
std::optional<EdgeKind> edge_kind(const Torus& t, int a, int b);
std::vector<EdgeKind> kinds_between(const Torus& t, int a, int b);

// Every link maps to one arc of a digraph on the vertices (the "shift graph"):
// horizontal links keep their direction, vertical links are reversed. Its
// value after a saturated step is w - (t_to - t_from) for vertex shifts t.
// Simple directed cycles of this digraph are exactly the conflict cycles.
struct ShiftArc {
    int from;
    int to;
};
ShiftArc shift_arc(const Torus& t, int e);

bool is_conflict_path(const Torus& t, const std::vector<int>& seq);
// seq lists each link once; a trailing copy of seq[0] is accepted.
bool is_conflict_cycle(const Torus& t, const std::vector<int>& seq);
bool is_conflict_path(const Torus& t, const std::vector<LinkRef>& seq);
bool is_conflict_cycle(const Torus& t, const std::vector<LinkRef>& seq);

struct Boundary {
    std::vector<int> entries;
    std::vector<int> exits;
    std::vector<int> entry_vertices;
    std::vector<int> exit_vertices;
};

struct ConflictCycle {
    std::vector<int> links;                  // canonical closed order
    std::vector<std::vector<int>> segments;  // maximal same-road runs
    Boundary boundary;

    std::size_t size() const { return links.size(); }
    bool contains(int e) const;
};

class BudgetExceeded : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class InvalidCycle : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

Boundary classify_boundary(const Torus& t, const std::vector<int>& cycle);

// Smallest rotation of the sequence or of its reversal.
std::vector<int> canonical_cycle(const std::vector<int>& seq);
std::vector<std::vector<int>> split_segments(const Torus& t, const std::vector<int>& seq);

// Validates, canonicalizes and fills segments and boundary.
ConflictCycle make_cycle(const Torus& t, const std::vector<int>& seq);

struct EnumerateOptions {
    int max_len = 0;           // 0 means 4n
    std::size_t cap = 1000000;
};

std::vector<ConflictCycle> enumerate_cycles(const Torus& t, EnumerateOptions opt = {});

std::int64_t cycle_total(const Deployment& w, const std::vector<int>& links);
std::int64_t ceil_div(std::int64_t a, std::int64_t b);

struct DotStyle {
    const Deployment* queues = nullptr;  // edge thickness follows queue length
    std::vector<int> highlight;          // drawn in red
};

// Conflict graph: one node per link; succ edges solid, conf/bconf dashed.
std::string conflict_graph_dot(const Torus& t, const DotStyle& style = {});
// Road network: one node per vertex, one edge per link.
std::string network_dot(const Torus& t, const DotStyle& style = {});

}  // namespace tqm
