#include "r3r/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

namespace r3r {

namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << content;
}

RunConfig load_config(const std::string& config_path, const std::vector<std::string>& overrides) {
    RunConfig cfg;
    if (!config_path.empty()) cfg = parse_config(read_file(config_path));
    for (const std::string& kv : overrides) {
        size_t eq = kv.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("override must look like key=value: '" + kv + "'");
        }
        apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    return cfg;
}

std::string metrics_csv_header() {
    return "scenario,n,seed,safety_pct,success_pct,avg_neighbors,max_neighbors,mean_replan_ms,"
           "fail_rate,deadlocks\n";
}

std::string metrics_csv_row(const std::string& scenario, int n, uint64_t seed, const Metrics& m) {
    char buf[320];
    std::snprintf(buf, sizeof(buf), "%s,%d,%llu,%.1f,%.1f,%.3f,%d,%.3f,%.4f,%d\n",
                  scenario.c_str(), n, static_cast<unsigned long long>(seed),
                  m.safety_violations == 0 ? 100.0 : 0.0, 100.0 * m.success_fraction,
                  m.avg_neighbors_per_replan, m.max_neighbors, m.mean_replan_ms,
                  m.replan_failure_rate, m.deadlocked_agents);
    return buf;
}

struct RunArtifacts {
    RunConfig cfg;
    Scenario scenario;
    RunResult result;
};

RunArtifacts execute(const RunConfig& cfg) {
    RunArtifacts art{cfg, cfg.build_scenario(), {}};
    art.cfg.duration = art.scenario.duration;  // resolved, so the dump round-trips
    art.result = run(art.scenario, cfg.sim_config());
    return art;
}

void write_run_outputs(const RunArtifacts& art, const fs::path& dir) {
    fs::create_directories(dir);
    write_file(dir / "effective.cfg", dump_config(art.cfg));
    write_file(dir / "map.txt", art.scenario.env.save());

    {
        std::ofstream ev(dir / "events.log");
        for (const auto& e : art.result.events) write_event_line(ev, e);
    }
    {
        std::ofstream at(dir / "attempts.log");
        for (const auto& a : art.result.attempts) write_attempt_line(at, a);
    }
    {
        std::ofstream m(dir / "metrics.csv");
        m << metrics_csv_header();
        m << metrics_csv_row(art.scenario.name, static_cast<int>(art.scenario.agents.size()),
                             art.scenario.seed, art.result.metrics);
    }
    {
        std::ofstream ag(dir / "agents.csv");
        ag << "id,spawn_x,spawn_y,spawn_theta,goal_x,goal_y,join_time,final_anchor_x,"
              "final_anchor_y\n";
        for (size_t i = 0; i < art.scenario.agents.size(); ++i) {
            const AgentSpawn& a = art.scenario.agents[i];
            const AgentRecord& rec = art.result.world.agents[i];
            char buf[256];
            if (rec.committed) {
                std::snprintf(buf, sizeof(buf), "%zu,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n",
                              i, a.spawn.x, a.spawn.y, a.spawn.theta, a.goal.x, a.goal.y,
                              a.join_time, rec.committed->cand.anchor.x,
                              rec.committed->cand.anchor.y);
            } else {
                std::snprintf(buf, sizeof(buf), "%zu,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,,\n", i,
                              a.spawn.x, a.spawn.y, a.spawn.theta, a.goal.x, a.goal.y,
                              a.join_time);
            }
            ag << buf;
        }
    }
    for (const AgentTrace& tr : art.result.traces) {
        std::ofstream f(dir / ("agent_" + std::to_string(tr.id) + ".trace"));
        for (const TraceSample& s : tr.samples) write_trace_line(f, s);
    }
}

int run_density(const RunConfig& cfg, const fs::path& dir) {
    fs::create_directories(dir);
    write_file(dir / "effective.cfg", dump_config(cfg));
    auto rows = density_sweep(cfg.n_agents, cfg.sweep_sides, cfg.sweep_trials, cfg.seed,
                              cfg.params(), cfg.dyn, cfg.sim_config(),
                              cfg.duration > 0.0 ? cfg.duration : 40.0);
    std::ofstream f(dir / "density.csv");
    f << "side,density,trial,mean_replan_ms,fail_rate\n";
    for (const auto& r : rows) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%.2f,%.6f,%d,%.3f,%.4f\n", r.side, r.density, r.trial,
                      r.mean_replan_ms, r.failure_rate);
        f << buf;
    }
    return kExitOk;
}

}  // namespace

int cmd_run(const std::string& config_path, const std::vector<std::string>& overrides,
            const std::string& out_dir) {
    RunConfig cfg;
    try {
        cfg = load_config(config_path, overrides);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    try {
        fs::path dir = out_dir.empty() ? fs::path("out") : fs::path(out_dir);
        if (cfg.scenario_kind == "density") return run_density(cfg, dir);
        RunArtifacts art = execute(cfg);
        write_run_outputs(art, dir);
        std::cout << metrics_csv_header()
                  << metrics_csv_row(art.scenario.name,
                                     static_cast<int>(art.scenario.agents.size()),
                                     art.scenario.seed, art.result.metrics);
        return art.result.metrics.safety_violations == 0 ? kExitOk : kExitSafety;
    } catch (const std::logic_error& e) {
        std::cerr << "invariant violated: " << e.what() << '\n';
        return kExitInvariant;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
}

int cmd_batch(const std::string& config_path, const std::vector<std::string>& overrides,
              int trials, const std::string& out_dir) {
    RunConfig base;
    try {
        base = load_config(config_path, overrides);
        if (trials < 1) throw std::runtime_error("batch needs trials >= 1");
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    std::vector<uint64_t> seeds;
    if (!base.batch_seeds.empty()) {
        seeds = base.batch_seeds;
        if (static_cast<int>(seeds.size()) != trials) {
            trials = static_cast<int>(seeds.size());
        }
    } else {
        for (int i = 0; i < trials; ++i) seeds.push_back(base.seed + static_cast<uint64_t>(i));
    }
    {
        std::set<uint64_t> uniq(seeds.begin(), seeds.end());
        if (uniq.size() != seeds.size()) {
            std::cerr << "warning: duplicate seeds in batch\n";
        }
    }

    fs::path dir = out_dir.empty() ? fs::path("out") : fs::path(out_dir);
    fs::create_directories(dir);

    struct TrialOut {
        int code;
        Metrics metrics;
        uint64_t seed;
    };
    std::vector<std::future<TrialOut>> futures;
    for (int i = 0; i < trials; ++i) {
        RunConfig cfg = base;
        cfg.seed = seeds[static_cast<size_t>(i)];
        fs::path tdir = dir / ("trial_" + std::to_string(i));
        futures.push_back(std::async(std::launch::async, [cfg, tdir]() -> TrialOut {
            try {
                RunArtifacts art = execute(cfg);
                write_run_outputs(art, tdir);
                int code = art.result.metrics.safety_violations == 0 ? kExitOk : kExitSafety;
                return {code, art.result.metrics, cfg.seed};
            } catch (const std::logic_error&) {
                return {kExitInvariant, {}, cfg.seed};
            } catch (const std::exception&) {
                return {kExitConfig, {}, cfg.seed};
            }
        }));
    }

    int worst = kExitOk;
    double safety_sum = 0.0, safety_min = 100.0;
    double success_sum = 0.0, success_min = 100.0;
    std::ofstream rows(dir / "summary_trials.csv");
    rows << "trial,seed,safety_pct,success_pct,mean_replan_ms,fail_rate,deadlocks\n";
    for (int i = 0; i < trials; ++i) {
        TrialOut to = futures[static_cast<size_t>(i)].get();
        worst = std::max(worst, to.code);
        double safety = to.metrics.safety_violations == 0 ? 100.0 : 0.0;
        double success = 100.0 * to.metrics.success_fraction;
        safety_sum += safety;
        safety_min = std::min(safety_min, safety);
        success_sum += success;
        success_min = std::min(success_min, success);
        char buf[240];
        std::snprintf(buf, sizeof(buf), "%d,%llu,%.1f,%.1f,%.3f,%.4f,%d\n", i,
                      static_cast<unsigned long long>(to.seed), safety, success,
                      to.metrics.mean_replan_ms, to.metrics.replan_failure_rate,
                      to.metrics.deadlocked_agents);
        rows << buf;
    }
    std::ofstream sum(dir / "summary.csv");
    sum << "scenario,trials,mean_safety_pct,min_safety_pct,mean_success_pct,min_success_pct\n";
    char buf[240];
    std::snprintf(buf, sizeof(buf), "%s,%d,%.1f,%.1f,%.1f,%.1f\n", base.scenario_kind.c_str(),
                  trials, safety_sum / trials, safety_min, success_sum / trials, success_min);
    sum << buf;
    std::cout << buf;
    return worst;
}

int cmd_check(const std::string& run_dir) {
    fs::path dir(run_dir);
    RunConfig cfg;
    std::vector<AgentTrace> traces;
    OccupancyEnvironment env(1, 1, 1.0);
    try {
        cfg = parse_config(read_file((dir / "effective.cfg").string()));
        env = load_map(read_file((dir / "map.txt").string()), default_inflation(cfg.delta));
        for (const auto& entry : fs::directory_iterator(dir)) {
            std::string name = entry.path().filename().string();
            if (name.rfind("agent_", 0) == 0 && entry.path().extension() == ".trace") {
                AgentTrace tr;
                tr.id = std::stoi(name.substr(6, name.size() - 6 - 6));
                std::ifstream f(entry.path());
                tr.samples = read_trace(f);
                traces.push_back(std::move(tr));
            }
        }
        if (traces.empty()) throw std::runtime_error("no trace files in " + run_dir);
    } catch (const std::exception& e) {
        std::cerr << "check: " << e.what() << '\n';
        return kExitConfig;
    }
    std::sort(traces.begin(), traces.end(),
              [](const AgentTrace& a, const AgentTrace& b) { return a.id < b.id; });

    Scenario sc{std::move(env), {}, cfg.params(), cfg.dyn, 0.0, cfg.seed, cfg.scenario_kind};
    double oracle_dt = cfg.oracle_dt > 0.0 ? cfg.oracle_dt : cfg.sim_dt;
    auto violations = oracle_check(traces, sc, oracle_dt);
    for (const auto& v : violations) {
        if (v.agent_b >= 0) {
            std::printf("violation pair (%d,%d) t=[%.3f,%.3f] min_dist=%.4f\n", v.agent_a,
                        v.agent_b, v.t_begin, v.t_end, v.worst);
        } else {
            std::printf("violation static agent %d t=[%.3f,%.3f]\n", v.agent_a, v.t_begin,
                        v.t_end);
        }
    }
    std::printf("%zu violation(s)\n", violations.size());
    return violations.empty() ? kExitOk : kExitSafety;
}

int cmd_export(const std::string& run_dir, const std::string& kind) {
    fs::path dir(run_dir);
    try {
        if (kind == "trajectories_svg") {
            RunConfig cfg = parse_config(read_file((dir / "effective.cfg").string()));
            OccupancyEnvironment env =
                load_map(read_file((dir / "map.txt").string()), default_inflation(cfg.delta));
            std::vector<AgentTrace> traces;
            for (const auto& entry : fs::directory_iterator(dir)) {
                std::string name = entry.path().filename().string();
                if (name.rfind("agent_", 0) == 0 && entry.path().extension() == ".trace") {
                    AgentTrace tr;
                    tr.id = std::stoi(name.substr(6, name.size() - 6 - 6));
                    std::ifstream f(entry.path());
                    tr.samples = read_trace(f);
                    traces.push_back(std::move(tr));
                }
            }
            if (traces.empty()) throw std::runtime_error("no trace files in " + run_dir);
            std::sort(traces.begin(), traces.end(),
                      [](const AgentTrace& a, const AgentTrace& b) { return a.id < b.id; });

            std::vector<ExportAgentInfo> agents;
            {
                std::ifstream ag(dir / "agents.csv");
                if (!ag) throw std::runtime_error("missing agents.csv");
                std::string line;
                std::getline(ag, line);  // header
                while (std::getline(ag, line)) {
                    if (line.empty()) continue;
                    std::vector<std::string> cols;
                    std::stringstream ss(line);
                    std::string c;
                    while (std::getline(ss, c, ',')) cols.push_back(c);
                    if (cols.size() < 7) continue;
                    ExportAgentInfo info;
                    info.id = std::stoi(cols[0]);
                    info.goal = {std::stod(cols[4]), std::stod(cols[5])};
                    if (cols.size() >= 9 && !cols[7].empty()) {
                        info.final_anchor = {std::stod(cols[7]), std::stod(cols[8])};
                        info.has_anchor = true;
                    }
                    agents.push_back(info);
                }
            }
            std::ofstream svg(dir / "trajectories.svg");
            write_svg(svg, env, traces, agents, cfg.params().r_plan());
            std::cout << (dir / "trajectories.svg").string() << '\n';
            return kExitOk;
        }
        if (kind == "density_csv") {
            std::ifstream f(dir / "density.csv");
            if (!f) throw std::runtime_error("missing density.csv in " + run_dir);
            std::string line;
            std::getline(f, line);  // header
            std::map<double, std::vector<std::pair<double, double>>> by_side;
            std::map<double, double> densities;
            while (std::getline(f, line)) {
                if (line.empty()) continue;
                std::vector<std::string> cols;
                std::stringstream ss(line);
                std::string c;
                while (std::getline(ss, c, ',')) cols.push_back(c);
                if (cols.size() < 5) continue;
                double side = std::stod(cols[0]);
                densities[side] = std::stod(cols[1]);
                by_side[side].push_back({std::stod(cols[3]), std::stod(cols[4])});
            }
            if (by_side.empty()) throw std::runtime_error("density.csv has no rows");
            std::ofstream outf(dir / "density_summary.csv");
            outf << "density,side,trials,replan_ms_mean,replan_ms_std,fail_rate_mean,"
                    "fail_rate_std\n";
            for (const auto& [side, rows] : by_side) {
                double n = static_cast<double>(rows.size());
                double ms = 0.0, fr = 0.0;
                for (const auto& [m, r] : rows) {
                    ms += m;
                    fr += r;
                }
                ms /= n;
                fr /= n;
                double ms_var = 0.0, fr_var = 0.0;
                for (const auto& [m, r] : rows) {
                    ms_var += (m - ms) * (m - ms);
                    fr_var += (r - fr) * (r - fr);
                }
                char buf[240];
                std::snprintf(buf, sizeof(buf), "%.6f,%.2f,%zu,%.3f,%.3f,%.4f,%.4f\n",
                              densities[side], side, rows.size(), ms, std::sqrt(ms_var / n), fr,
                              std::sqrt(fr_var / n));
                outf << buf;
            }
            std::cout << (dir / "density_summary.csv").string() << '\n';
            return kExitOk;
        }
        std::cerr << "export: unknown kind '" << kind << "'\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "export: " << e.what() << '\n';
        return kExitConfig;
    }
}

}  // namespace r3r
