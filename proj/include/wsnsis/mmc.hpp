#pragma once

#include "wsnsis/graph.hpp"
#include "wsnsis/model.hpp"

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace wsnsis {

/// Probability that one node is in each of the four joint states.
struct NodeProbabilities {
    double us = 0.0;
    double as = 0.0;
    double ui = 0.0;
    double ai = 0.0;

    double sum() const noexcept { return us + as + ui + ai; }

    friend bool operator==(const NodeProbabilities&, const NodeProbabilities&) = default;
};

/// One row per node; each row sums to one.
using MmcState = std::vector<NodeProbabilities>;

/// Disease-free state at the stationary sleep split, with `infected_share` of
/// every node's mass moved to the infected states (same split).
MmcState uniform_state(std::size_t n, const ModelParams& params, double infected_share);

/// q_i = prod over neighbors j of (1 - beta * P_j^AI).
std::vector<double> escape_probability(const Graph& g, std::span<const double> p_ai, double beta);

/// One synchronous step of the four-state microscopic Markov chain.
MmcState mmc_step(const Graph& g, const MmcState& state, const ModelParams& params);

Fractions state_fractions(const MmcState& state);

/// Largest absolute entry-wise difference between two states.
double max_abs_change(const MmcState& a, const MmcState& b);

inline constexpr double kDefaultSettleTol = 1e-9;
inline constexpr std::size_t kDefaultMaxSteps = 10000;

/// Iterates mmc_step from `init`, recording fractions at t = 0, 1, ...
/// Stops once the full state moves by less than settle_tol (inf-norm) in one
/// step, or after max_steps steps; `settled` reports which.
FractionSeries run_mmc(const Graph& g, const ModelParams& params, MmcState init,
                       std::size_t max_steps = kDefaultMaxSteps, double settle_tol = kDefaultSettleTol,
                       MmcState* final_state = nullptr);

/// Stationary state of the chain, by fixed-point iteration on the active
/// infected probabilities
///     P^AI_i = v/(u+v) * (1 - q_i) / (1 - q_i + gamma)
/// started from P^AI_i = v/(u+v). The other three entries follow in closed
/// form. Below threshold this lands on the disease-free state.
/// Throws DegenerateSchedulingError for v = 0 and ConvergenceError (with the
/// last P^AI iterate) when max_iter is exhausted.
MmcState solve_equilibrium(const Graph& g, const ModelParams& params, double tol = 1e-12,
                           std::size_t max_iter = 1000000);

/// Returned by epidemic_threshold when the graph has no edges.
inline constexpr double kNoEpidemicPossible = std::numeric_limits<double>::infinity();

/// beta_c = (1 + u/v) * gamma / lambda_max.
double epidemic_threshold(double lambda_max, double gamma, double u, double v);

} // namespace wsnsis
