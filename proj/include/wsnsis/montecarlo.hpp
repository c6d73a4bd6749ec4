#pragma once

#include "wsnsis/graph.hpp"
#include "wsnsis/model.hpp"
#include "wsnsis/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace wsnsis {

enum class NodeState : std::uint8_t { US, AS, UI, AI };

constexpr bool is_active(NodeState s) noexcept { return s == NodeState::AS || s == NodeState::AI; }
constexpr bool is_infected(NodeState s) noexcept { return s == NodeState::UI || s == NodeState::AI; }

/// How sleep bits are assigned at t = 0.
enum class InitActivity { Stationary, AllActive };

std::string_view to_string(InitActivity a);
InitActivity parse_init_activity(std::string_view text);

struct AgentPopulation {
    std::vector<NodeState> states;
    std::size_t step = 0;

    friend bool operator==(const AgentPopulation&, const AgentPopulation&) = default;
};

struct RunConfig {
    ModelParams params;
    std::size_t steps = 1000;
    std::size_t seed_count = 10;
    std::uint64_t rng_seed = 1;
    InitActivity init_active = InitActivity::Stationary;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Sleep bits from `cfg.init_active`; then cfg.seed_count distinct nodes,
/// uniformly chosen, are marked infected.
AgentPopulation init_population(const Graph& g, const RunConfig& cfg, Rng& rng);

/// One synchronous step.
///  1. From the time-t states only: an AS node with k AI neighbors becomes
///     infected with probability 1 - (1 - beta)^k; an AI node recovers with
///     probability gamma. Sleeping nodes are untouched.
///  2. Every active node falls asleep with probability u, every sleeping node
///     wakes with probability v; the infection label is carried over.
AgentPopulation mc_step(const Graph& g, const AgentPopulation& pop, const ModelParams& params, Rng& rng);

Fractions population_fractions(const AgentPopulation& pop);

/// Single realization, t = 0 .. cfg.steps. Deterministic in (g, cfg).
FractionSeries run_mc(const Graph& g, const RunConfig& cfg);

struct EnsembleResult {
    FractionSeries mean;
    std::vector<Fractions> sd; ///< per-row sample standard deviation (0 for a single run)

    friend bool operator==(const EnsembleResult&, const EnsembleResult&) = default;
};

/// `runs` realizations; run i uses rng seed derive_seed(base_seed, i).
/// Runs are spread over `jobs` threads; the result does not depend on `jobs`.
EnsembleResult run_ensemble(const Graph& g, const RunConfig& cfg, std::size_t runs, std::uint64_t base_seed,
                            std::size_t jobs = 1);

/// Tail-window mean of the ensemble infected fraction (UI + AI). Equal, bit
/// for bit, to tail_average(run_ensemble(...).mean, window).infected(), but a
/// realization stops as soon as no infected node is left.
double ensemble_tail_infected(const Graph& g, const RunConfig& cfg, std::size_t runs, std::uint64_t base_seed,
                              std::size_t window, std::size_t jobs = 1);

/// CSV with header t,rho_US,rho_AS,rho_UI,rho_AI,sd_US,sd_AS,sd_UI,sd_AI.
void write_ensemble_csv(std::ostream& out, const EnsembleResult& ensemble);

} // namespace wsnsis
