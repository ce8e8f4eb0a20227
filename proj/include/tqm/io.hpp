#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tqm/flooding.hpp"
#include "tqm/saturated.hpp"
#include "tqm/torus.hpp"
#include "tqm/unsaturated.hpp"

namespace tqm::io {

using json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "v1";

// Malformed input; the message names the line or the offending field.
class FormatError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// {"version":"v1","n":..,"psi":..,"w":[2n rows],"s":[2n rows],"k":..}
// Rows 0..n-1 hold the horizontal links into row r, rows n..2n-1 the
// vertical links into row r-n; column c is the head column. "s" and "k"
// are optional.
struct Scenario {
    int n = 0;
    int psi = 0;
    Deployment w;
    std::optional<ShiftAssignment> s;
    std::optional<std::int64_t> k;

    Torus torus() const { return Torus(n, psi); }
};

json to_json(const Scenario& sc);
Scenario scenario_from_json(const json& j);
Scenario parse_scenario(const std::string& text);
std::string dump_scenario(const Scenario& sc);

json grid(const Torus& t, const std::vector<std::int64_t>& per_link);
std::vector<std::int64_t> from_grid(const Torus& t, const json& rows, const std::string& field);

// Draws in [lo, hi] by rejection on raw 64-bit outputs, so a seed gives the
// same instance with any standard library.
std::int64_t draw(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi);

Deployment uniform_instance(const Torus& t, std::int64_t lo, std::int64_t hi, std::uint64_t seed);
// Each road gets k n agents, each placed on a uniformly drawn link of the road.
Deployment road_instance(const Torus& t, std::int64_t k, std::uint64_t seed);

json links_json(const Torus& t, const std::vector<int>& links);
json cycle_json(const Torus& t, const Deployment& w, const ConflictCycle& c);
json solution_json(const Torus& t, const Deployment& w, const SaturatedSolution& sol);

// One JSON object per line.
std::string flood_trace_jsonl(const Torus& t, const std::vector<FloodStep>& steps);
std::string saturated_trace_jsonl(const Torus& t, const SaturatedSolution& sol);
std::string strategy_trace_jsonl(const Torus& t, const StrategyTrace& tr);

}  // namespace tqm::io
