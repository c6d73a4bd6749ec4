#include "wsnsis/montecarlo.hpp"

#include "wsnsis/error.hpp"
#include "wsnsis/parallel.hpp"

#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

namespace wsnsis {

std::string_view to_string(InitActivity a) {
    return a == InitActivity::Stationary ? "stationary" : "all_active";
}

InitActivity parse_init_activity(std::string_view text) {
    if (text == "stationary") return InitActivity::Stationary;
    if (text == "all_active") return InitActivity::AllActive;
    throw ValidationError("init_active must be 'stationary' or 'all_active', got '" + std::string(text) + "'");
}

namespace {

void validate(const Graph& g, const RunConfig& cfg) {
    cfg.params.validate();
    if (cfg.seed_count > g.node_count()) {
        throw ValidationError("seed_count (" + std::to_string(cfg.seed_count) + ") exceeds node count (" +
                              std::to_string(g.node_count()) + ")");
    }
}

/// Reusable buffers for the in-place step used by run_mc.
struct StepScratch {
    std::vector<std::uint32_t> ai_neighbors;
    std::vector<NodeId> infectious;
};

void advance(const Graph& g, std::vector<NodeState>& states, const ModelParams& params, Rng& rng,
             StepScratch& scratch) {
    const std::size_t n = states.size();
    scratch.ai_neighbors.assign(n, 0);
    scratch.infectious.clear();
    for (NodeId i = 0; i < n; ++i) {
        if (states[i] == NodeState::AI) scratch.infectious.push_back(i);
    }
    for (NodeId i : scratch.infectious) {
        for (NodeId j : g.neighbors(i)) ++scratch.ai_neighbors[j];
    }

    // Phase 1. Each node is visited once and infection pressure comes from the
    // AI list gathered above, so every decision uses time-t labels only.
    for (NodeId i = 0; i < n; ++i) {
        NodeState& s = states[i];
        if (s == NodeState::AS) {
            const std::uint32_t k = scratch.ai_neighbors[i];
            if (k > 0 && bernoulli(rng, 1.0 - std::pow(1.0 - params.beta, static_cast<double>(k)))) {
                s = NodeState::AI;
            }
        } else if (s == NodeState::AI) {
            if (bernoulli(rng, params.gamma)) s = NodeState::AS;
        }
    }

    // Phase 2: sleep schedule.
    for (NodeState& s : states) {
        switch (s) {
        case NodeState::AS: if (bernoulli(rng, params.u)) s = NodeState::US; break;
        case NodeState::AI: if (bernoulli(rng, params.u)) s = NodeState::UI; break;
        case NodeState::US: if (bernoulli(rng, params.v)) s = NodeState::AS; break;
        case NodeState::UI: if (bernoulli(rng, params.v)) s = NodeState::AI; break;
        }
    }
}

} // namespace

AgentPopulation init_population(const Graph& g, const RunConfig& cfg, Rng& rng) {
    validate(g, cfg);
    const std::size_t n = g.node_count();
    const double active = stationary_active_fraction(cfg.params);

    AgentPopulation pop;
    pop.states.resize(n);
    for (auto& s : pop.states) {
        const bool awake = cfg.init_active == InitActivity::AllActive || bernoulli(rng, active);
        s = awake ? NodeState::AS : NodeState::US;
    }

    // Partial Fisher-Yates: the first seed_count entries are a uniform sample.
    std::vector<NodeId> order(n);
    std::iota(order.begin(), order.end(), NodeId{0});
    for (std::size_t k = 0; k < cfg.seed_count; ++k) {
        const std::size_t pick = k + uniform_index(rng, n - k);
        std::swap(order[k], order[pick]);
        NodeState& s = pop.states[order[k]];
        s = is_active(s) ? NodeState::AI : NodeState::UI;
    }
    return pop;
}

AgentPopulation mc_step(const Graph& g, const AgentPopulation& pop, const ModelParams& params, Rng& rng) {
    if (pop.states.size() != g.node_count()) throw ValidationError("mc_step: population size does not match graph");
    AgentPopulation next = pop;
    StepScratch scratch;
    advance(g, next.states, params, rng, scratch);
    ++next.step;
    return next;
}

Fractions population_fractions(const AgentPopulation& pop) {
    std::size_t counts[4] = {0, 0, 0, 0};
    for (NodeState s : pop.states) ++counts[static_cast<int>(s)];
    const auto n = static_cast<double>(pop.states.size());
    return {counts[0] / n, counts[1] / n, counts[2] / n, counts[3] / n};
}

FractionSeries run_mc(const Graph& g, const RunConfig& cfg) {
    Rng rng(cfg.rng_seed);
    AgentPopulation pop = init_population(g, cfg, rng);
    StepScratch scratch;

    FractionSeries series;
    series.rows.reserve(cfg.steps + 1);
    series.rows.push_back({0, population_fractions(pop)});
    for (std::size_t t = 1; t <= cfg.steps; ++t) {
        advance(g, pop.states, cfg.params, rng, scratch);
        pop.step = t;
        series.rows.push_back({t, population_fractions(pop)});
    }
    return series;
}

EnsembleResult run_ensemble(const Graph& g, const RunConfig& cfg, std::size_t runs, std::uint64_t base_seed,
                            std::size_t jobs) {
    if (runs == 0) throw ValidationError("run_ensemble: runs must be at least 1");
    validate(g, cfg);

    std::vector<FractionSeries> all(runs);
    parallel_for(runs, jobs, [&](std::size_t i) {
        RunConfig run_cfg = cfg;
        run_cfg.rng_seed = derive_seed(base_seed, i);
        all[i] = run_mc(g, run_cfg);
    });

    // Reduce in run order so the floating-point result is independent of scheduling.
    const std::size_t rows = cfg.steps + 1;
    EnsembleResult result;
    result.mean.rows.resize(rows);
    result.sd.assign(rows, Fractions{});
    const auto count = static_cast<double>(runs);
    for (std::size_t r = 0; r < rows; ++r) {
        Fractions sum;
        for (const auto& s : all) {
            sum.us += s.rows[r].rho.us;
            sum.as += s.rows[r].rho.as;
            sum.ui += s.rows[r].rho.ui;
            sum.ai += s.rows[r].rho.ai;
        }
        const Fractions mean{sum.us / count, sum.as / count, sum.ui / count, sum.ai / count};
        result.mean.rows[r] = {r, mean};
        if (runs < 2) continue;
        Fractions sq;
        for (const auto& s : all) {
            const Fractions& x = s.rows[r].rho;
            sq.us += (x.us - mean.us) * (x.us - mean.us);
            sq.as += (x.as - mean.as) * (x.as - mean.as);
            sq.ui += (x.ui - mean.ui) * (x.ui - mean.ui);
            sq.ai += (x.ai - mean.ai) * (x.ai - mean.ai);
        }
        const double dof = count - 1.0;
        result.sd[r] = {std::sqrt(sq.us / dof), std::sqrt(sq.as / dof), std::sqrt(sq.ui / dof),
                        std::sqrt(sq.ai / dof)};
    }
    return result;
}

double ensemble_tail_infected(const Graph& g, const RunConfig& cfg, std::size_t runs, std::uint64_t base_seed,
                              std::size_t window, std::size_t jobs) {
    if (runs == 0) throw ValidationError("ensemble_tail_infected: runs must be at least 1");
    validate(g, cfg);

    struct Infected {
        double ui = 0.0;
        double ai = 0.0;
    };
    const std::size_t rows = cfg.steps + 1;
    std::vector<std::vector<Infected>> all(runs);
    parallel_for(runs, jobs, [&](std::size_t i) {
        std::vector<Infected>& series = all[i];
        series.assign(rows, Infected{});
        Rng rng(derive_seed(base_seed, i));
        AgentPopulation pop = init_population(g, cfg, rng);
        StepScratch scratch;
        for (std::size_t t = 0;; ++t) {
            const Fractions f = population_fractions(pop);
            series[t] = {f.ui, f.ai};
            if (t == cfg.steps || f.infected() == 0.0) break;
            advance(g, pop.states, cfg.params, rng, scratch);
        }
    });

    // Same reduction order as run_ensemble followed by tail_average.
    const auto count = static_cast<double>(runs);
    double ui = 0.0;
    double ai = 0.0;
    std::size_t included = 0;
    for (std::size_t r = 0; r < rows; ++r) {
        const bool in_window = window == 0 ? r == cfg.steps : r + window > cfg.steps;
        if (!in_window) continue;
        double sum_ui = 0.0;
        double sum_ai = 0.0;
        for (const auto& s : all) {
            sum_ui += s[r].ui;
            sum_ai += s[r].ai;
        }
        ui += sum_ui / count;
        ai += sum_ai / count;
        ++included;
    }
    const auto c = static_cast<double>(included);
    return ui / c + ai / c;
}

void write_ensemble_csv(std::ostream& out, const EnsembleResult& ensemble) {
    out << "t,rho_US,rho_AS,rho_UI,rho_AI,sd_US,sd_AS,sd_UI,sd_AI\n";
    for (std::size_t r = 0; r < ensemble.mean.rows.size(); ++r) {
        const auto& row = ensemble.mean.rows[r];
        const auto& sd = ensemble.sd[r];
        out << row.t << ',' << format_double(row.rho.us) << ',' << format_double(row.rho.as) << ','
            << format_double(row.rho.ui) << ',' << format_double(row.rho.ai) << ',' << format_double(sd.us) << ','
            << format_double(sd.as) << ',' << format_double(sd.ui) << ',' << format_double(sd.ai) << '\n';
    }
}

} // namespace wsnsis
