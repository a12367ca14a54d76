#include "r3r/config.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace r3r {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (...) {
        throw std::runtime_error("config: bad numeric value for " + key + ": '" + v + "'");
    }
}

long to_long(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        long d = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (...) {
        throw std::runtime_error("config: bad integer value for " + key + ": '" + v + "'");
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw std::runtime_error("config: bad boolean value for " + key + ": '" + v + "'");
}

template <typename T, typename Conv>
std::vector<T> to_list(const std::string& key, const std::string& v, Conv conv) {
    std::vector<T> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(conv(key, item));
    }
    return out;
}

}  // namespace

void apply_override(RunConfig& c, const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    if (key == "scenario.kind") {
        if (v != "swap" && v != "city" && v != "mapfile" && v != "density") {
            throw std::runtime_error("config: unknown scenario.kind '" + v + "'");
        }
        c.scenario_kind = v;
    } else if (key == "scenario.n") {
        c.n_agents = static_cast<int>(to_long(key, v));
        if (c.n_agents < 1) throw std::runtime_error("config: scenario.n must be >= 1");
    } else if (key == "scenario.seed") {
        c.seed = static_cast<uint64_t>(to_long(key, v));
    } else if (key == "scenario.duration") {
        c.duration = to_double(key, v);
    } else if (key == "scenario.swap_radius") {
        c.swap_radius = to_double(key, v);
    } else if (key == "scenario.city_side") {
        c.city_side = to_double(key, v);
    } else if (key == "scenario.map") {
        c.map_path = v;
    } else if (key == "r3r.delta") {
        c.delta = to_double(key, v);
    } else if (key == "r3r.r_comm") {
        c.r_comm = to_double(key, v);
    } else if (key == "dubins.v") {
        c.dyn.v = to_double(key, v);
    } else if (key == "dubins.omega_max") {
        c.dyn.omega_max = to_double(key, v);
    } else if (key == "planner.max_iterations") {
        c.planner.max_iterations = static_cast<int>(to_long(key, v));
    } else if (key == "planner.goal_bias") {
        c.planner.goal_bias = to_double(key, v);
        if (c.planner.goal_bias < 0.0 || c.planner.goal_bias > 1.0) {
            throw std::runtime_error("config: planner.goal_bias must be in [0, 1]");
        }
    } else if (key == "planner.step_arc_length") {
        c.planner.step_arc_length = to_double(key, v);
    } else if (key == "planner.rewire_radius") {
        c.planner.rewire_radius = to_double(key, v);
    } else if (key == "planner.goal_tolerance") {
        c.planner.goal_tolerance = to_double(key, v);
    } else if (key == "planner.check_ds") {
        c.planner.check_ds = to_double(key, v);
    } else if (key == "planner.neighbor_margin") {
        c.planner.neighbor_margin = to_double(key, v);
    } else if (key == "planner.traj_dt") {
        c.planner.traj_dt = to_double(key, v);
    } else if (key == "gatekeeper.horizon") {
        c.gatekeeper.horizon = to_double(key, v);
        if (!(c.gatekeeper.horizon > 0.0)) {
            throw std::runtime_error("config: gatekeeper.horizon must be > 0");
        }
    } else if (key == "gatekeeper.switch_grid") {
        c.gatekeeper.switch_grid = static_cast<int>(to_long(key, v));
        if (c.gatekeeper.switch_grid < 2) {
            throw std::runtime_error("config: gatekeeper.switch_grid must be >= 2");
        }
    } else if (key == "gatekeeper.check_dt") {
        c.gatekeeper.check_dt = to_double(key, v);
    } else if (key == "gatekeeper.margin") {
        c.gatekeeper.margin = to_double(key, v);
    } else if (key == "sim.dt") {
        c.sim_dt = to_double(key, v);
    } else if (key == "sim.oracle_dt") {
        c.oracle_dt = to_double(key, v);
    } else if (key == "sim.trigger") {
        if (v != "periodic" && v != "nearswitch" && v != "hybrid") {
            throw std::runtime_error("config: unknown sim.trigger '" + v + "'");
        }
        c.trigger = v;
    } else if (key == "sim.period") {
        c.trigger_period = to_double(key, v);
    } else if (key == "sim.lead") {
        c.trigger_lead = to_double(key, v);
    } else if (key == "sim.goal_tolerance") {
        c.goal_tolerance = to_double(key, v);
    } else if (key == "sim.deadlock_window") {
        c.deadlock_window = to_double(key, v);
    } else if (key == "sim.log_wall_times") {
        c.log_wall_times = to_bool(key, v);
    } else if (key == "sweep.sides") {
        c.sweep_sides = to_list<double>(key, v, to_double);
    } else if (key == "sweep.trials") {
        c.sweep_trials = static_cast<int>(to_long(key, v));
    } else if (key == "batch.seeds") {
        c.batch_seeds = to_list<uint64_t>(key, v, [](const std::string& k, const std::string& s) {
            return static_cast<uint64_t>(to_long(k, s));
        });
    } else {
        throw std::runtime_error("config: unknown key '" + key + "'");
    }
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("config: line " + std::to_string(lineno) +
                                     ": expected key = value");
        }
        apply_override(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

SimConfig RunConfig::sim_config() const {
    SimConfig sim;
    sim.sim_dt = sim_dt;
    sim.oracle_dt = oracle_dt > 0.0 ? oracle_dt : sim_dt;
    sim.gatekeeper = gatekeeper;
    if (sim.gatekeeper.margin <= 0.0) sim.gatekeeper.margin = dyn.v * sim.gatekeeper.check_dt;
    sim.planner = planner;
    sim.planner.horizon = gatekeeper.horizon;
    if (trigger == "periodic") sim.trigger.policy = ReplanTrigger::Policy::Periodic;
    if (trigger == "nearswitch") sim.trigger.policy = ReplanTrigger::Policy::NearSwitch;
    if (trigger == "hybrid") sim.trigger.policy = ReplanTrigger::Policy::Hybrid;
    sim.trigger.period = trigger_period;
    sim.trigger.lead = trigger_lead;
    sim.goal_tolerance = goal_tolerance;
    sim.deadlock_window = deadlock_window;
    sim.log_wall_times = log_wall_times;
    return sim;
}

Scenario RunConfig::build_scenario() const {
    R3RParams p = params();
    Scenario sc = [&] {
        if (scenario_kind == "swap") {
            return generate_swap_scenario({n_agents, swap_radius}, p, dyn, seed);
        }
        if (scenario_kind == "city") {
            return generate_city_scenario({n_agents, city_side}, p, dyn, seed);
        }
        if (scenario_kind == "mapfile") {
            return generate_mapfile_scenario({map_path, n_agents}, p, dyn, seed);
        }
        throw std::runtime_error("build_scenario: kind '" + scenario_kind +
                                 "' does not build a single scenario");
    }();
    if (duration > 0.0) sc.duration = duration;
    return sc;
}

std::string dump_config(const RunConfig& c) {
    std::ostringstream os;
    os.precision(17);
    os << "scenario.kind = " << c.scenario_kind << '\n';
    os << "scenario.n = " << c.n_agents << '\n';
    os << "scenario.seed = " << c.seed << '\n';
    os << "scenario.duration = " << c.duration << '\n';
    os << "scenario.swap_radius = " << c.swap_radius << '\n';
    os << "scenario.city_side = " << c.city_side << '\n';
    if (!c.map_path.empty()) os << "scenario.map = " << c.map_path << '\n';
    os << "r3r.delta = " << c.delta << '\n';
    os << "r3r.r_comm = " << c.r_comm << '\n';
    os << "dubins.v = " << c.dyn.v << '\n';
    os << "dubins.omega_max = " << c.dyn.omega_max << '\n';
    os << "planner.max_iterations = " << c.planner.max_iterations << '\n';
    os << "planner.goal_bias = " << c.planner.goal_bias << '\n';
    os << "planner.step_arc_length = " << c.planner.step_arc_length << '\n';
    os << "planner.rewire_radius = " << c.planner.rewire_radius << '\n';
    os << "planner.goal_tolerance = " << c.planner.goal_tolerance << '\n';
    os << "planner.check_ds = " << c.planner.check_ds << '\n';
    os << "planner.neighbor_margin = " << c.planner.neighbor_margin << '\n';
    os << "planner.traj_dt = " << c.planner.traj_dt << '\n';
    os << "gatekeeper.horizon = " << c.gatekeeper.horizon << '\n';
    os << "gatekeeper.switch_grid = " << c.gatekeeper.switch_grid << '\n';
    os << "gatekeeper.check_dt = " << c.gatekeeper.check_dt << '\n';
    os << "gatekeeper.margin = " << c.gatekeeper.margin << '\n';
    os << "sim.dt = " << c.sim_dt << '\n';
    os << "sim.oracle_dt = " << c.oracle_dt << '\n';
    os << "sim.trigger = " << c.trigger << '\n';
    os << "sim.period = " << c.trigger_period << '\n';
    os << "sim.lead = " << c.trigger_lead << '\n';
    os << "sim.goal_tolerance = " << c.goal_tolerance << '\n';
    os << "sim.deadlock_window = " << c.deadlock_window << '\n';
    os << "sim.log_wall_times = " << (c.log_wall_times ? "true" : "false") << '\n';
    if (c.scenario_kind == "density") {
        os << "sweep.sides = ";
        for (size_t i = 0; i < c.sweep_sides.size(); ++i) {
            os << (i ? "," : "") << c.sweep_sides[i];
        }
        os << '\n';
        os << "sweep.trials = " << c.sweep_trials << '\n';
    }
    if (!c.batch_seeds.empty()) {
        os << "batch.seeds = ";
        for (size_t i = 0; i < c.batch_seeds.size(); ++i) {
            os << (i ? "," : "") << c.batch_seeds[i];
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace r3r
