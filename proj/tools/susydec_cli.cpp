#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <vector>

#include "susydec/scenario.hpp"

namespace {

// exit codes: 0 success, 2 config error, 3 numerical-contract violation,
// 4 cross-method deviation beyond tolerance, 5 convergence order out of range
constexpr int exit_config = 2;
constexpr int exit_numerical = 3;
constexpr int exit_deviation = 4;
constexpr int exit_order = 5;

struct CommonArgs {
    std::string config_path;
    std::string out_path;
    std::string superpotential;
    bool quiet = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "scenario config file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", args.out_path, "output path (overrides [output].path)");
    cmd->add_option("--superpotential", args.superpotential,
                    "W(x) expression (overrides [model].w)");
    cmd->add_flag("--quiet", args.quiet, "suppress progress messages");
}

void note(const CommonArgs& args, const std::string& msg) {
    if (!args.quiet) std::fprintf(stderr, "%s\n", msg.c_str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SUSY quantum mechanics decoherence simulator"};
    app.require_subcommand(1);

    CommonArgs args;
    std::vector<double> times;
    int halvings = 2;
    int k = 6;

    CLI::App* c_pot = app.add_subcommand("potentials", "partner potentials and their harmonic models");
    add_common(c_pot, args);
    CLI::App* c_wav = app.add_subcommand("wavepackets", "channel densities at requested times");
    add_common(c_wav, args);
    c_wav->add_option("--times", times, "sample times")->required()->delimiter(',');
    CLI::App* c_dec = app.add_subcommand("decoherence", "decoherence factor D(t) per configured method");
    add_common(c_dec, args);
    CLI::App* c_chk = app.add_subcommand("susy-check", "SUSY operator algebra residuals under grid refinement");
    add_common(c_chk, args);
    c_chk->add_option("--halvings", halvings, "number of dx halvings")->check(CLI::PositiveNumber);
    CLI::App* c_spe = app.add_subcommand("spectrum", "lowest eigenvalues of the two channel Hamiltonians");
    add_common(c_spe, args);
    c_spe->add_option("--k", k, "number of eigenvalues")->check(CLI::PositiveNumber);
    CLI::App* c_cmp = app.add_subcommand("compare", "run all configured methods and report deviations");
    add_common(c_cmp, args);

    CLI11_PARSE(app, argc, argv);

    try {
        susydec::ScenarioConfig cfg = susydec::load_config(args.config_path);
        if (!args.superpotential.empty()) cfg.w_text = args.superpotential;
        long rows = 0;
        if (c_pot->parsed()) rows = susydec::cmd_potentials(cfg, args.out_path);
        if (c_wav->parsed()) rows = susydec::cmd_wavepackets(cfg, times, args.out_path);
        if (c_dec->parsed()) rows = susydec::cmd_decoherence(cfg, args.out_path);
        if (c_chk->parsed()) rows = susydec::cmd_susy_check(cfg, halvings, args.out_path);
        if (c_spe->parsed()) rows = susydec::cmd_spectrum(cfg, k, args.out_path);
        if (c_cmp->parsed()) rows = susydec::cmd_compare(cfg, args.out_path);
        note(args, "wrote " + std::to_string(rows) + " rows");
        return 0;
    } catch (const susydec::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return exit_config;
    } catch (const susydec::ParseError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return exit_config;
    } catch (const susydec::DeviationError& e) {
        std::fprintf(stderr, "deviation: %s\n", e.what());
        return exit_deviation;
    } catch (const susydec::ConvergenceOrderError& e) {
        std::fprintf(stderr, "convergence: %s\n", e.what());
        return exit_order;
    } catch (const susydec::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_numerical;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
