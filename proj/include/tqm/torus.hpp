#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace tqm {

enum class Orientation : std::uint8_t { Horizontal = 0, Vertical = 1 };
enum class Heading { East, West, South, North };

// Fixed alternation: even rings run East/South, odd rings West/North.
Heading direction(Orientation road, int ring_index);
const char* to_string(Heading h);

struct Vertex {
    int row = 0;
    int col = 0;
    auto operator<=>(const Vertex&) const = default;
};

// A link is named by its head vertex and orientation.
struct LinkRef {
    int head_row = 0;
    int head_col = 0;
    Orientation orientation = Orientation::Horizontal;
    auto operator<=>(const LinkRef&) const = default;
    Vertex head() const { return {head_row, head_col}; }
};

std::string to_string(const LinkRef& e);

using Deployment = std::vector<std::int64_t>;
using ShiftAssignment = std::vector<std::int64_t>;

class InvalidGeometry : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

class InvalidShifts : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Dense link index: (row * n + col) * 2 + orientation. Index order is the
// canonical LinkRef order used for every tie-break.
class Torus {
public:
    Torus(int n, int psi);

    int n() const { return n_; }
    int psi() const { return psi_; }
    int half() const { return psi_ / 2; }
    int num_vertices() const { return n_ * n_; }
    int num_links() const { return 2 * n_ * n_; }

    int index(const LinkRef& e) const;
    LinkRef link(int idx) const;
    bool valid(const LinkRef& e) const;
    int vertex_index(const Vertex& v) const { return v.row * n_ + v.col; }
    Vertex vertex(int idx) const { return {idx / n_, idx % n_}; }

    // Index-based navigation; the hot paths use these.
    int succ(int e) const { return succ_[e]; }
    int pred(int e) const { return pred_[e]; }
    int conf(int e) const { return e ^ 1; }
    int bconf(int e) const { return succ_[conf(pred_[e])]; }
    int head_vertex(int e) const { return e >> 1; }
    int tail_vertex(int e) const { return pred_[e] >> 1; }
    bool horizontal(int e) const { return (e & 1) == 0; }
    // Ring id: rows 0..n-1 are horizontal rings, n..2n-1 vertical rings.
    int ring(int e) const;
    // Links of ring r in index order.
    std::vector<int> ring_links(int r) const;

    LinkRef succ(const LinkRef& e) const { return link(succ(index(e))); }
    LinkRef pred(const LinkRef& e) const { return link(pred(index(e))); }
    LinkRef conf(const LinkRef& e) const { return link(conf(index(e))); }
    LinkRef bconf(const LinkRef& e) const { return link(bconf(index(e))); }
    Vertex tail(const LinkRef& e) const { return vertex(tail_vertex(index(e))); }

private:
    int n_;
    int psi_;
    std::vector<int> succ_;
    std::vector<int> pred_;
};

ShiftAssignment zero_shifts(const Torus& t);
// Shifts from one scalar per vertex: the horizontal link into v gets t_v,
// the vertical link gets -t_v.
ShiftAssignment shifts_from_vertex(const Torus& t, const std::vector<std::int64_t>& tv);
std::vector<std::int64_t> vertex_shifts(const Torus& t, const ShiftAssignment& s);

bool shifts_balanced(const Torus& t, const ShiftAssignment& s);
bool shifts_bounded(const Torus& t, const ShiftAssignment& s);
void validate_shifts(const Torus& t, const ShiftAssignment& s);
void validate_deployment(const Torus& t, const Deployment& w);

std::int64_t green_time(const Torus& t, int e, const ShiftAssignment& s);

// One round of store-and-forward.
Deployment step(const Torus& t, const Deployment& w, const ShiftAssignment& s);

// w - g + g_pred, exact for saturated deployments; may go negative otherwise.
Deployment linear_step(const Torus& t, const Deployment& w, const ShiftAssignment& s);
std::int64_t linear_queue(const Torus& t, const Deployment& w, const ShiftAssignment& s, int e);

bool saturated(const Torus& t, const Deployment& w);
std::vector<std::int64_t> ring_totals(const Torus& t, const Deployment& w);
std::int64_t max_queue(const Deployment& w);

}  // namespace tqm
