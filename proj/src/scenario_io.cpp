#include "flock/scenario_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace flock {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::string strip_comment(const std::string& line) {
    const auto hash = line.find('#');
    return hash == std::string::npos ? line : line.substr(0, hash);
}

double parse_real(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double out = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return out;
    } catch (const std::exception&) {
        throw ValidationError(key, "expected a number, got '" + value + "'");
    }
}

long long parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const long long out = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return out;
    } catch (const std::exception&) {
        throw ValidationError(key, "expected an integer, got '" + value + "'");
    }
}

// Shortest decimal form that parses back to the same double.
std::string format_real(double v) {
    char buffer[64];
    for (int precision = 15; precision <= 17; ++precision) {
        std::snprintf(buffer, sizeof buffer, "%.*g", precision, v);
        if (std::stod(buffer) == v) break;
    }
    return buffer;
}

} // namespace

ScenarioSpec parse_scenario(const std::string& text) {
    ScenarioSpec spec;
    enum class Section { Top, Placement, InitialStates, Overrides };
    Section section = Section::Top;

    bool have_placement_mode = false;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    std::vector<std::string> seen_keys;

    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        const std::string where = "line " + std::to_string(line_no);

        if (line.front() == '[') {
            if (line.back() != ']') throw ValidationError(where, "unterminated section header");
            const std::string name = trim(line.substr(1, line.size() - 2));
            if (name == "placement") section = Section::Placement;
            else if (name == "initial_states") section = Section::InitialStates;
            else if (name == "overrides") section = Section::Overrides;
            else throw ValidationError(where, "unknown section '" + name + "'");
            continue;
        }

        if (section == Section::InitialStates) {
            std::istringstream row(line);
            long long id = 0;
            double px, py, vx, vy;
            if (!(row >> id >> px >> py >> vx >> vy)) {
                throw ValidationError(where, "expected: id px py vx vy");
            }
            if (id != static_cast<long long>(spec.initial_states.size())) {
                throw ValidationError(where, "initial_states ids must be 0,1,2,... in order");
            }
            spec.initial_states.push_back({{px, py}, {vx, vy}});
            continue;
        }
        if (section == Section::Overrides) {
            std::istringstream row(line);
            long long id = 0;
            std::string key;
            double value = 0.0;
            if (!(row >> id >> key >> value) || id < 0) {
                throw ValidationError(where, "expected: id key value");
            }
            AgentOverride& ov = spec.overrides[static_cast<AgentId>(id)];
            if (key == "alpha") ov.alpha = value;
            else if (key == "v_max") ov.v_max = value;
            else if (key == "u_max") ov.u_max = value;
            else throw ValidationError(key, "overridable keys are alpha, v_max, u_max");
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ValidationError(where, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) throw ValidationError(where, "expected key = value");
        seen_keys.push_back(key);

        if (section == Section::Placement) {
            if (key == "mode") {
                have_placement_mode = true;
                if (value == "uniform-disk") spec.placement.mode = PlacementMode::UniformDisk;
                else if (value == "grid") spec.placement.mode = PlacementMode::Grid;
                else if (value == "explicit") spec.placement.mode = PlacementMode::Explicit;
                else throw ValidationError("placement.mode", "unknown mode '" + value + "'");
            } else if (key == "radius") spec.placement.radius = parse_real(key, value);
            else if (key == "spacing") spec.placement.spacing = parse_real(key, value);
            else if (key == "columns") spec.placement.columns = static_cast<int>(parse_int(key, value));
            else if (key == "speed_max") spec.placement.speed_max = parse_real(key, value);
            else if (key == "min_separation") spec.placement.min_separation = parse_real(key, value);
            else throw ValidationError(key, "unknown placement key");
            continue;
        }

        FlockConfig& c = spec.config;
        if (key == "n_agents") c.n_agents = static_cast<int>(parse_int(key, value));
        else if (key == "k") c.k = static_cast<int>(parse_int(key, value));
        else if (key == "body_radius") c.body_radius = parse_real(key, value);
        else if (key == "flock_radius") c.flock_radius = parse_real(key, value);
        else if (key == "alpha") c.alpha = parse_real(key, value);
        else if (key == "v_max") c.v_max = parse_real(key, value);
        else if (key == "u_max") c.u_max = parse_real(key, value);
        else if (key == "horizon") c.horizon = parse_real(key, value);
        else if (key == "plan_steps") c.plan_steps = static_cast<int>(parse_int(key, value));
        else if (key == "sim_dt") c.sim_dt = parse_real(key, value);
        else if (key == "replan_interval") c.replan_interval = parse_real(key, value);
        else if (key == "total_time") c.total_time = parse_real(key, value);
        else if (key == "seed") c.seed = parse_int(key, value);
        else if (key == "topology_mode") {
            if (value == "dynamic-knn") spec.topology_mode = TopologyMode::DynamicKnn;
            else if (value == "fixed") spec.topology_mode = TopologyMode::Fixed;
            else throw ValidationError("topology_mode", "must be dynamic-knn or fixed");
        } else {
            throw ValidationError(key, "unknown scenario key");
        }
    }

    const char* required[] = {"n_agents", "k",          "body_radius",  "flock_radius",
                              "alpha",    "v_max",      "u_max",        "horizon",
                              "plan_steps", "sim_dt",   "replan_interval", "total_time",
                              "seed",     "topology_mode"};
    for (const char* key : required) {
        if (std::find(seen_keys.begin(), seen_keys.end(), key) == seen_keys.end()) {
            throw ValidationError(key, "missing required key");
        }
    }
    if (!have_placement_mode) {
        throw ValidationError("placement.mode", "missing required key");
    }
    if (spec.placement.mode == PlacementMode::Explicit && spec.initial_states.empty()) {
        throw ValidationError("initial_states",
                              "explicit placement requires an [initial_states] section");
    }
    for (const auto& [id, ov] : spec.overrides) {
        if (static_cast<int>(id) >= spec.config.n_agents) {
            throw ValidationError("overrides", "agent id out of range");
        }
        (void)ov;
    }
    validate(spec.config);
    return spec;
}

ScenarioSpec load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError(path.string(), "cannot open scenario file");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str());
}

std::string serialize_scenario(const ScenarioSpec& spec) {
    const FlockConfig& c = spec.config;
    std::ostringstream out;
    out << "n_agents = " << c.n_agents << "\n";
    out << "k = " << c.k << "\n";
    out << "body_radius = " << format_real(c.body_radius) << "\n";
    out << "flock_radius = " << format_real(c.flock_radius) << "\n";
    out << "alpha = " << format_real(c.alpha) << "\n";
    out << "v_max = " << format_real(c.v_max) << "\n";
    out << "u_max = " << format_real(c.u_max) << "\n";
    out << "horizon = " << format_real(c.horizon) << "\n";
    out << "plan_steps = " << c.plan_steps << "\n";
    out << "sim_dt = " << format_real(c.sim_dt) << "\n";
    out << "replan_interval = " << format_real(c.replan_interval) << "\n";
    out << "total_time = " << format_real(c.total_time) << "\n";
    out << "seed = " << c.seed << "\n";
    out << "topology_mode = "
        << (spec.topology_mode == TopologyMode::Fixed ? "fixed" : "dynamic-knn") << "\n";
    out << "\n[placement]\n";
    switch (spec.placement.mode) {
    case PlacementMode::UniformDisk:
        out << "mode = uniform-disk\n";
        out << "radius = " << format_real(spec.placement.radius) << "\n";
        break;
    case PlacementMode::Grid:
        out << "mode = grid\n";
        out << "spacing = " << format_real(spec.placement.spacing) << "\n";
        if (spec.placement.columns > 0) out << "columns = " << spec.placement.columns << "\n";
        break;
    case PlacementMode::Explicit:
        out << "mode = explicit\n";
        break;
    }
    out << "speed_max = " << format_real(spec.placement.speed_max) << "\n";
    if (spec.placement.min_separation > 0.0) {
        out << "min_separation = " << format_real(spec.placement.min_separation) << "\n";
    }
    if (!spec.initial_states.empty()) {
        out << "\n[initial_states]\n";
        for (std::size_t i = 0; i < spec.initial_states.size(); ++i) {
            const BoidState& s = spec.initial_states[i];
            out << i << " " << format_real(s.position.x) << " " << format_real(s.position.y)
                << " " << format_real(s.velocity.x) << " " << format_real(s.velocity.y)
                << "\n";
        }
    }
    if (!spec.overrides.empty()) {
        out << "\n[overrides]\n";
        for (const auto& [id, ov] : spec.overrides) {
            if (ov.alpha) out << id << " alpha " << format_real(*ov.alpha) << "\n";
            if (ov.v_max) out << id << " v_max " << format_real(*ov.v_max) << "\n";
            if (ov.u_max) out << id << " u_max " << format_real(*ov.u_max) << "\n";
        }
    }
    return out.str();
}

void save_scenario(const std::filesystem::path& path, const ScenarioSpec& spec) {
    std::ofstream out(path);
    if (!out) throw ValidationError(path.string(), "cannot write scenario file");
    out << serialize_scenario(spec);
}

} // namespace flock
