#pragma once

#include "wsnsis/graph.hpp"
#include "wsnsis/mmc.hpp"
#include "wsnsis/model.hpp"
#include "wsnsis/montecarlo.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

namespace wsnsis {

/// Shared knobs of the figure experiments.
struct ExperimentConfig {
    std::size_t steps = 1000;     ///< Monte Carlo horizon
    std::size_t seed_count = 10;  ///< initially infected nodes
    std::size_t runs = 50;        ///< ensemble size per point
    std::uint64_t base_seed = 1;  ///< simulation base seed
    InitActivity init_active = InitActivity::Stationary;
    std::size_t jobs = 1;
    double detection_eps = 0.005; ///< infected fraction that counts as persistence
    double equilibrium_tol = 1e-10;
    std::size_t equilibrium_max_iter = 1000000;
    bool simulate = true;         ///< run the Monte Carlo side of sweeps

    /// Simulation equilibrium is the mean over the last quarter of the horizon.
    std::size_t tail_window() const { return steps / 4 > 0 ? steps / 4 : 1; }
};

struct TemporalResult {
    FractionSeries mmc;
    EnsembleResult mc;
};

/// Both engines from matched initial conditions, aligned on t = 0 .. cfg.steps.
/// The MMC start gives every node infected mass seed_count / n, split between
/// awake and asleep like the Monte Carlo start.
TemporalResult temporal_experiment(const Graph& g, const ModelParams& params, const ExperimentConfig& cfg);

enum class Engine { Mmc, Mc };

struct SweepPoint {
    ModelParams params;
    Fractions rho_inf;
    Engine source = Engine::Mmc;
};

/// Equilibrium fractions per beta: one Mmc point from solve_equilibrium and,
/// when cfg.simulate, one Mc point from the ensemble tail average. Ordered by
/// beta, Mmc before Mc.
std::vector<SweepPoint> sweep_beta(const Graph& g, double gamma, double u, double v,
                                   const std::vector<double>& beta_grid, const ExperimentConfig& cfg);

/// Points of one engine, in input order.
std::vector<SweepPoint> points_from(const std::vector<SweepPoint>& points, Engine source);

struct ThresholdEstimate {
    double beta_c_theory = 0.0;
    std::optional<double> beta_c_sim; ///< empty: no grid point exceeded detection_eps
    double detection_eps = 0.0;

    bool observed() const noexcept { return beta_c_sim.has_value(); }
};

/// beta_c_sim is the smallest beta whose infected fraction exceeds
/// detection_eps; beta_c_theory comes from lambda_max and the points' gamma, u, v.
/// Points must come from one engine and be sorted by beta.
ThresholdEstimate detect_threshold(const std::vector<SweepPoint>& points, double detection_eps, double lambda_max);

/// Beta grid for threshold detection: 0.005 spacing within 0.05 of the
/// theoretical threshold, 0.02 spacing below that window and above it up to
/// 0.15 past the threshold; clipped to (0, 1].
std::vector<double> threshold_grid(double beta_c_theory);

struct ThresholdRow {
    double gamma = 0.0;
    double u = 0.0;
    double v = 0.0;
    double beta_c_theory = 0.0;
    std::optional<double> beta_c_sim;

    double ratio() const { return u / v; }
};

/// Both thresholds for every (gamma, (u, v)) pair; ordered by schedule, then gamma.
std::vector<ThresholdRow> sweep_gamma(const Graph& g, const std::vector<double>& gamma_grid,
                                      const std::vector<std::pair<double, double>>& schedules,
                                      const ExperimentConfig& cfg);

/// Both thresholds over the Cartesian grid u_grid x v_grid; ordered by u/v, then u.
std::vector<ThresholdRow> sweep_ratio(const Graph& g, double gamma, const std::vector<double>& u_grid,
                                      const std::vector<double>& v_grid, const ExperimentConfig& cfg);

/// Evenly spaced values first, first + step, ..., up to last (inclusive, with
/// rounding slack), each rounded to 12 decimals.
std::vector<double> linspace_step(double first, double last, double step);

// CSV writers for the figure tables.
void write_temporal_csv(std::ostream& out, const TemporalResult& result);
void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points);
void write_gamma_csv(std::ostream& out, const std::vector<ThresholdRow>& rows);
void write_ratio_csv(std::ostream& out, const std::vector<ThresholdRow>& rows);

} // namespace wsnsis
