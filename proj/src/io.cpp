#include "tqm/io.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace tqm::io {

json grid(const Torus& t, const std::vector<std::int64_t>& per_link) {
    int n = t.n();
    json rows = json::array();
    for (int r = 0; r < 2 * n; ++r) {
        json row = json::array();
        for (int c = 0; c < n; ++c) {
            LinkRef e{r % n, c, r < n ? Orientation::Horizontal : Orientation::Vertical};
            row.push_back(per_link[t.index(e)]);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<std::int64_t> from_grid(const Torus& t, const json& rows, const std::string& field) {
    int n = t.n();
    if (!rows.is_array() || static_cast<int>(rows.size()) != 2 * n)
        throw FormatError("field " + field + ": expected " + std::to_string(2 * n) + " rows");
    std::vector<std::int64_t> out(t.num_links());
    for (int r = 0; r < 2 * n; ++r) {
        const json& row = rows[r];
        std::string where = field + "[" + std::to_string(r) + "]";
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            throw FormatError("field " + where + ": expected " + std::to_string(n) + " integers");
        for (int c = 0; c < n; ++c) {
            if (!row[c].is_number_integer())
                throw FormatError("field " + where + "[" + std::to_string(c) + "]: expected an integer");
            LinkRef e{r % n, c, r < n ? Orientation::Horizontal : Orientation::Vertical};
            out[t.index(e)] = row[c].get<std::int64_t>();
        }
    }
    return out;
}

json to_json(const Scenario& sc) {
    Torus t = sc.torus();
    json j;
    j["version"] = kSchemaVersion;
    j["n"] = sc.n;
    j["psi"] = sc.psi;
    if (sc.k) j["k"] = *sc.k;
    j["w"] = grid(t, sc.w);
    if (sc.s) j["s"] = grid(t, *sc.s);
    return j;
}

namespace {

int int_field(const json& j, const char* name) {
    if (!j.contains(name)) throw FormatError(std::string("field ") + name + ": missing");
    if (!j[name].is_number_integer()) throw FormatError(std::string("field ") + name + ": expected an integer");
    auto v = j[name].get<std::int64_t>();
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
        throw FormatError(std::string("field ") + name + ": out of range");
    return static_cast<int>(v);
}

}  // namespace

Scenario scenario_from_json(const json& j) {
    if (!j.is_object()) throw FormatError("top level: expected an object");
    if (!j.contains("version") || j["version"] != kSchemaVersion)
        throw FormatError(std::string("field version: expected \"") + kSchemaVersion + "\"");
    Scenario sc;
    sc.n = int_field(j, "n");
    sc.psi = int_field(j, "psi");
    std::optional<Torus> t;
    try {
        t.emplace(sc.n, sc.psi);
    } catch (const InvalidGeometry& e) {
        throw FormatError(std::string("field n/psi: ") + e.what());
    }
    if (!j.contains("w")) throw FormatError("field w: missing");
    sc.w = from_grid(*t, j["w"], "w");
    for (int e = 0; e < t->num_links(); ++e)
        if (sc.w[e] < 0) throw FormatError("field w: negative queue at " + to_string(t->link(e)));
    if (j.contains("s")) {
        sc.s = from_grid(*t, j["s"], "s");
        try {
            validate_shifts(*t, *sc.s);
        } catch (const InvalidShifts& e) {
            throw FormatError(std::string("field s: ") + e.what());
        }
    }
    if (j.contains("k")) {
        if (!j["k"].is_number_integer() || j["k"].get<std::int64_t>() < 0)
            throw FormatError("field k: expected a non-negative integer");
        sc.k = j["k"].get<std::int64_t>();
    }
    return sc;
}

Scenario parse_scenario(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t upto = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
        auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
        throw FormatError("line " + std::to_string(line) + ": " + e.what());
    }
    return scenario_from_json(j);
}

std::string dump_scenario(const Scenario& sc) {
    // One grid row per line keeps diffs and hand edits readable.
    json j = to_json(sc);
    std::ostringstream out;
    out << "{\n";
    bool first = true;
    for (const char* key : {"version", "n", "psi", "k", "w", "s"}) {
        if (!j.contains(key)) continue;
        if (!first) out << ",\n";
        first = false;
        out << "  \"" << key << "\": ";
        if (j[key].is_array()) {
            out << "[\n";
            for (std::size_t r = 0; r < j[key].size(); ++r)
                out << "    " << j[key][r].dump() << (r + 1 < j[key].size() ? ",\n" : "\n");
            out << "  ]";
        } else {
            out << j[key].dump();
        }
    }
    out << "\n}\n";
    return out.str();
}

std::int64_t draw(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw std::invalid_argument("empty range");
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(rng());
    std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t x;
    do x = rng();
    while (x >= limit);
    return lo + static_cast<std::int64_t>(x % span);
}

Deployment uniform_instance(const Torus& t, std::int64_t lo, std::int64_t hi, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Deployment w(t.num_links());
    for (auto& x : w) x = draw(rng, lo, hi);
    return w;
}

Deployment road_instance(const Torus& t, std::int64_t k, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Deployment w(t.num_links(), 0);
    for (int r = 0; r < 2 * t.n(); ++r) {
        auto ring = t.ring_links(r);
        for (std::int64_t a = 0; a < k * t.n(); ++a) ++w[ring[draw(rng, 0, t.n() - 1)]];
    }
    return w;
}

json links_json(const Torus& t, const std::vector<int>& links) {
    json a = json::array();
    for (int e : links) a.push_back(to_string(t.link(e)));
    return a;
}

json cycle_json(const Torus& t, const Deployment& w, const ConflictCycle& c) {
    std::int64_t total = cycle_total(w, c.links);
    auto len = static_cast<std::int64_t>(c.size());
    return {{"links", links_json(t, c.links)}, {"length", len}, {"total", total}, {"ceiling", ceil_div(total, len)}};
}

json solution_json(const Torus& t, const Deployment& w, const SaturatedSolution& sol) {
    json j;
    j["phi"] = sol.phi;
    j["initial_max"] = max_queue(w);
    j["shifts"] = grid(t, sol.shifts);
    Deployment next = step(t, w, sol.shifts);
    j["next_w"] = grid(t, next);
    j["next_max"] = max_queue(next);
    j["cycle_bound"] = sol.cycle_bound;
    json cs = json::array();
    for (const auto& c : sol.cycles) cs.push_back(cycle_json(t, w, c));
    j["cycles"] = std::move(cs);
    if (sol.binding >= 0)
        j["binding_cycle"] = cycle_json(t, w, sol.cycles[sol.binding]);
    else
        j["binding_cycle"] = nullptr;
    if (!sol.limiting_path.empty()) j["limiting_path"] = links_json(t, sol.limiting_path);
    j["iterations"] = sol.iterations.size();
    return j;
}

namespace {

const char* dir_name(FlowDir d) { return d == FlowDir::Forward ? "forward" : "backward"; }

}  // namespace

std::string flood_trace_jsonl(const Torus& t, const std::vector<FloodStep>& steps) {
    std::string out;
    for (const auto& s : steps) {
        json j{{"link", to_string(t.link(s.link))},
               {"mode", dir_name(s.mode)},
               {"flow", s.flow},
               {"shifted", to_string(t.link(s.shifted))},
               {"shift_after", s.shift_after}};
        out += j.dump() + "\n";
    }
    return out;
}

std::string saturated_trace_jsonl(const Torus& t, const SaturatedSolution& sol) {
    std::string out;
    for (std::size_t i = 0; i < sol.iterations.size(); ++i) {
        const auto& it = sol.iterations[i];
        json j{{"iteration", i},
               {"root", to_string(t.link(it.root))},
               {"phi", it.phi},
               {"forward_ok", it.forward_ok},
               {"backward_ok", it.backward_ok},
               {"pinned", it.pinned}};
        j["cycle"] = it.cycle >= 0 ? json(links_json(t, sol.cycles[it.cycle].links)) : json(nullptr);
        out += j.dump() + "\n";
    }
    return out;
}

std::string strategy_trace_jsonl(const Torus& t, const StrategyTrace& tr) {
    std::string out;
    for (std::size_t i = 0; i < tr.rounds.size(); ++i) {
        const auto& r = tr.rounds[i];
        json j{{"round", i + 1},
               {"event", to_string(r.event)},
               {"max_queue", r.max_queue},
               {"deviation", r.deviation},
               {"shifts", grid(t, r.shifts)},
               {"w", grid(t, r.after)}};
        out += j.dump() + "\n";
    }
    return out;
}

}  // namespace tqm::io
