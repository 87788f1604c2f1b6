#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fricflow/config.hpp"
#include "fricflow/output.hpp"
#include "fricflow/verify.hpp"

namespace {

using namespace fricflow;

enum Exit { kPass = 0, kRuntime = 1, kUsage = 2, kFail = 3 };

struct Options {
    std::string config;
    std::string out;
    std::uint64_t seed = 20240611;
    bool quiet = false;
    bool dump_mesh = false;
};

void print(const VerifyReport& rep, bool quiet) {
    if (!quiet)
        for (const auto& n : rep.notes) std::cout << "  " << rep.title << ": " << n << "\n";
    for (const auto& c : rep.checks)
        std::cout << (c.passed ? "PASS " : "FAIL ") << rep.title << ": " << c.name << " -- " << c.detail << "\n";
    std::cout.flush();
}

ParsedConfig load(const Options& o) {
    ParsedConfig pc = parse_config(o.config);
    if (!o.out.empty()) pc.run.output.directory = o.out;
    return pc;
}

int cmd_run(const Options& o) {
    const ParsedConfig pc = load(o);
    const TimeStepper stepper(pc.run);
    OutputWriter writer(pc.run.output.directory, stepper.discretization(), pc.run);
    if (o.dump_mesh) writer.write_mesh_dump();
    const Trajectory traj = run(stepper, [&](const State& s, const DiagnosticsRow& row) {
        writer.observe(s, row);
        if (!o.quiet)
            std::printf("t = %.6f  energy = %.6e  newton = %d  max_defect = %.3e\n", row.t, row.energy,
                        row.newton_iters, row.max_defect);
    });
    std::printf("run: %d steps, %zu snapshots, output in %s\n", pc.run.num_steps(), writer.snapshots().size(),
                writer.directory().string().c_str());
    return kPass;
}

int cmd_stationary(const Options& o) {
    const ParsedConfig pc = load(o);
    std::filesystem::path dir = pc.run.output.directory;
    std::filesystem::create_directories(dir);
    StationaryStudy st = stationary_study(pc, pc.run.mesh.n);
    const auto& inc = st.continuation.h1_increments;
    st.report.add("continuation converged", true, strf("%zu stages down to eps = %.1e", st.eps.size(), st.eps.back()));
    const bool cauchy = inc.empty() || inc.back() < inc.front();
    st.report.add("increments shrink", cauchy,
                  inc.empty() ? std::string("single stage")
                              : strf("first %.3e, last %.3e", inc.front(), inc.back()));
    std::ofstream f(dir / "stationary.txt", std::ios::binary);
    f << format_snapshot(*st.disc, st.continuation.final_state, 0.0, st.eps.back());
    if (!f) throw std::runtime_error("cannot write " + (dir / "stationary.txt").string());
    print(st.report, o.quiet);
    return st.report.passed() ? kPass : kFail;
}

int cmd_verify(const std::string& what, const Options& o) {
    const ParsedConfig pc = load(o);
    VerifyReport rep;
    if (what == "energy") rep = verify_energy(pc, o.seed);
    else if (what == "eps-rate") rep = verify_eps_rate(pc);
    else if (what == "limits") rep = verify_limits(pc);
    else if (what == "complementarity") rep = verify_complementarity(pc, o.seed);
    else rep = verify_convergence(pc);
    print(rep, o.quiet);
    return rep.passed() ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-subdomain Stokes / Navier-Stokes solver with a friction interface"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--config", o.config, "configuration file");
    app.add_option("--out", o.out, "output directory (overrides [output].directory)");
    app.add_option("--seed", o.seed, "seed for randomized property checks");
    app.add_flag("--quiet", o.quiet, "only print verdicts and summaries");

    auto positional = [&](CLI::App* sub) { sub->add_option("cfg", o.config, "configuration file"); };

    auto* run_cmd = app.add_subcommand("run", "time-dependent run, writes timeseries.csv and snapshots");
    positional(run_cmd);
    run_cmd->add_flag("--dump-mesh", o.dump_mesh, "also write mesh.txt");
    auto* stat_cmd = app.add_subcommand("stationary", "stationary solve with eps continuation");
    positional(stat_cmd);
    auto* conv_cmd = app.add_subcommand("convergence", "manufactured-solution mesh study");
    positional(conv_cmd);
    auto* verify_cmd = app.add_subcommand("verify", "verification checks");
    verify_cmd->require_subcommand(1);
    verify_cmd->fallthrough();
    std::string which;
    for (const char* name : {"energy", "eps-rate", "limits", "complementarity"}) {
        auto* s = verify_cmd->add_subcommand(name);
        s->fallthrough();
        positional(s);
        s->callback([&which, name] { which = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }
    if (o.config.empty()) {
        std::cerr << "error: no config file given (positional <cfg> or --config)\n";
        return kUsage;
    }

    try {
        if (run_cmd->parsed()) return cmd_run(o);
        if (stat_cmd->parsed()) return cmd_stationary(o);
        if (conv_cmd->parsed()) return cmd_verify("convergence", o);
        return cmd_verify(which, o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
    }
    return kRuntime;
}
