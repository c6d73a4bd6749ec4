#pragma once

#include "wsnsis/model.hpp"
#include "wsnsis/montecarlo.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wsnsis {

enum class Command { GenerateGraph, RunMmc, RunMc, Temporal, SweepBeta, SweepGamma, SweepRatio, Threshold };

std::string_view to_string(Command c);
Command parse_command(std::string_view text);

/// Everything one CLI invocation needs. Defaults reproduce the reference
/// setup: Price graph N = 1000, m = 2; 10 seeds; 50 runs; 1000 steps.
struct ExperimentSpec {
    Command command = Command::Threshold;

    // [graph]
    std::string graph_file; ///< edge list; empty means generate a Price graph
    std::size_t n = 1000;
    std::size_t m = 2;
    std::uint64_t graph_seed = 1;

    // [model]
    ModelParams params;

    // [run]
    std::size_t steps = 1000;
    std::size_t seeds = 10;
    std::size_t runs = 50;
    std::uint64_t sim_seed = 1;
    InitActivity init_active = InitActivity::Stationary;
    double settle_tol = 1e-9;
    std::size_t max_steps = 10000; ///< run-mmc step cap

    // [sweep]
    std::vector<double> beta_grid; ///< empty: automatic grid around the threshold
    std::vector<double> gamma_grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    std::vector<std::pair<double, double>> schedules{{0.3, 0.7}, {0.5, 0.5}, {0.7, 0.3}};
    std::vector<double> u_grid{0.2, 0.3, 0.4, 0.5, 0.6, 0.7};
    std::vector<double> v_grid{0.2, 0.3, 0.4, 0.5, 0.6, 0.7};
    double detection_eps = 0.005;
    bool simulate = true;

    // [output]
    std::string out_dir = ".";
    std::size_t jobs = 1;

    friend bool operator==(const ExperimentSpec&, const ExperimentSpec&) = default;
};

/// One `key = value` assignment applied after the document, e.g. from a CLI flag.
struct Override {
    std::string section;
    std::string key;
    std::string value;
};

/// Parses a `key = value` document with `[section]` headers and `#` comments,
/// then applies `overrides` in order. Keys before the first header belong to
/// [general]. Unknown sections or keys, malformed values, a missing
/// `command`, and out-of-range values throw ValidationError naming the key and
/// line. u = v = 0 throws DegenerateSchedulingError.
ExperimentSpec parse_config(std::string_view text, const std::vector<Override>& overrides = {});

/// Config text that parse_config maps back to an equal spec.
std::string to_config_text(const ExperimentSpec& spec);

} // namespace wsnsis
