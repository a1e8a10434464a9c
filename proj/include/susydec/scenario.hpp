#pragma once

#include <optional>
#include <string>
#include <vector>

#include "susydec/expr.hpp"
#include "susydec/grid.hpp"
#include "susydec/harmonic.hpp"
#include "susydec/potential.hpp"

namespace susydec {

/// Parsed scenario file. Sections: [model] (required), [grid], [evolution],
/// [initial], [output]. Unknown sections or keys are ConfigErrors with line
/// numbers.
struct ScenarioConfig {
    // [model]
    std::string w_text;
    double mass = 1.0;
    double hbar = 1.0;
    // [grid]
    int n = 2048;
    std::optional<double> box_half_width;  // auto: 4 (max|x0| + 3 max sigma_vac)
    // [evolution]
    std::optional<double> dt;  // auto: min channel period / 20000
    long steps = 20000;
    long sample_every = 100;
    bool clamp_harmonic = true;
    // [initial]
    double center = 0.0;
    std::optional<double> width;  // auto: geometric-mean vacuum width
    double momentum = 0.0;
    cplx c_plus{M_SQRT1_2, 0.0};
    cplx c_minus{M_SQRT1_2, 0.0};
    // [output]
    std::string out_path;
    std::string format = "csv";
    std::vector<Method> methods{Method::equal_freq_eq34, Method::gaussian_oracle};
    double tolerance = 1e-5;  // cross-method deviation gate
};

ScenarioConfig parse_config_text(const std::string& text, const std::string& origin);
ScenarioConfig load_config(const std::string& path);

/// Model and per-channel harmonic data resolved from a config, with the
/// auto box/step/width defaults filled in.
struct ResolvedScenario {
    SuperpotentialModel model;
    /// empty when the channel has no stable equilibrium (e.g. W = 0); the
    /// analytic methods then refuse to run while grid propagation still can
    std::optional<HarmonicChannel> hc_plus;
    std::optional<HarmonicChannel> hc_minus;
    double box_half_width;
    double dt;
    double width;
};

ResolvedScenario resolve_scenario(const ScenarioConfig& cfg);

struct MethodSummary {
    Method method;
    double min_abs;
    double min_abs_time;
    std::vector<double> revival_times;  // interior |D| = 1 recurrences
};

/// One decoherence run: resolved channels, all requested series on a shared
/// time grid, per-method summaries and timings.
struct RunReport {
    ResolvedScenario resolved;
    std::vector<double> times;
    std::vector<DecoherenceSeries> series;
    std::vector<MethodSummary> summaries;
    double max_cross_deviation = 0.0;  // among eq34 / oracle / grid
    double paper_eq30_deviation = 0.0; // reported, never gated
    double wall_seconds = 0.0;
};

RunReport run_decoherence(const ScenarioConfig& cfg);

/// "%.17g" rendering used by every CSV/JSON number (byte determinism).
std::string format_g17(double v);

// Each command writes its primary output to out_path (config [output].path
// when empty) atomically and returns the number of data rows written.
// cmd_decoherence also writes a JSON summary next to the CSV
// (extension replaced by .json).
long cmd_potentials(const ScenarioConfig& cfg, const std::string& out_path);
long cmd_wavepackets(const ScenarioConfig& cfg, const std::vector<double>& times,
                     const std::string& out_path);
long cmd_decoherence(const ScenarioConfig& cfg, const std::string& out_path);
/// Throws ConvergenceOrderError when a fitted order leaves [1.5, 2.5]
/// (residuals at the exact floor are reported as "exact" and pass).
long cmd_susy_check(const ScenarioConfig& cfg, int halvings,
                    const std::string& out_path);
long cmd_spectrum(const ScenarioConfig& cfg, int k, const std::string& out_path);
/// Runs all configured methods and writes a JSON deviation report; throws
/// DeviationError when the cross-method deviation exceeds cfg.tolerance.
long cmd_compare(const ScenarioConfig& cfg, const std::string& out_path);

}  // namespace susydec
