#include <string>
#include <vector>

#include <CLI11.hpp>

#include "r3r/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"r3r: decentralized multi-agent motion planning simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir = "out";
    std::string run_dir;
    std::string kind = "trajectories_svg";
    int trials = 5;
    long long seed = -1;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "config file (key = value lines)");
        cmd->add_option("--set", overrides, "override, key=value (repeatable)");
        cmd->add_option("--seed", seed, "override scenario.seed");
        cmd->add_option("--out", out_dir, "output directory");
    };

    CLI::App* run = app.add_subcommand("run", "execute one scenario and write its artifacts");
    add_common(run);

    CLI::App* batch = app.add_subcommand("batch", "run several seeded trials and summarize");
    add_common(batch);
    batch->add_option("--trials", trials, "number of trials");

    CLI::App* check = app.add_subcommand("check", "re-verify a finished run with the oracle");
    check->add_option("dir", run_dir, "run directory")->required();

    CLI::App* exp = app.add_subcommand("export", "derive plot-ready files from a run");
    exp->add_option("dir", run_dir, "run directory")->required();
    exp->add_option("--kind", kind, "trajectories_svg | density_csv");

    CLI11_PARSE(app, argc, argv);

    if (seed >= 0) overrides.push_back("scenario.seed=" + std::to_string(seed));

    if (run->parsed()) return r3r::cmd_run(config_path, overrides, out_dir);
    if (batch->parsed()) return r3r::cmd_batch(config_path, overrides, trials, out_dir);
    if (check->parsed()) return r3r::cmd_check(run_dir);
    if (exp->parsed()) return r3r::cmd_export(run_dir, kind);
    return r3r::kExitConfig;
}
