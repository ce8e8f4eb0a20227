#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "tqm/torus.hpp"

namespace tqm::testing {

inline Deployment uniform_deployment(const Torus& t, std::int64_t lo, std::int64_t hi, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::int64_t> d(lo, hi);
    Deployment w(t.num_links());
    for (auto& x : w) x = d(rng);
    return w;
}

inline ShiftAssignment random_shifts(const Torus& t, std::int64_t bound, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::int64_t> d(-bound, bound);
    std::vector<std::int64_t> tv(t.num_vertices());
    for (auto& x : tv) x = d(rng);
    return shifts_from_vertex(t, tv);
}

inline ShiftAssignment random_shifts(const Torus& t, std::mt19937_64& rng) { return random_shifts(t, t.half(), rng); }

inline int H(const Torus& t, int r, int c) { return t.index({r, c, Orientation::Horizontal}); }
inline int V(const Torus& t, int r, int c) { return t.index({r, c, Orientation::Vertical}); }

}  // namespace tqm::testing
