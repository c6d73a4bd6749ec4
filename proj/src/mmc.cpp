#include "wsnsis/mmc.hpp"

#include "wsnsis/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace wsnsis {

MmcState uniform_state(std::size_t n, const ModelParams& params, double infected_share) {
    const double active = stationary_active_fraction(params);
    const double asleep = 1.0 - active;
    const double healthy = 1.0 - infected_share;
    return MmcState(n, NodeProbabilities{healthy * asleep, healthy * active, infected_share * asleep,
                                         infected_share * active});
}

std::vector<double> escape_probability(const Graph& g, std::span<const double> p_ai, double beta) {
    std::vector<double> q(g.node_count(), 1.0);
    for (NodeId i = 0; i < g.node_count(); ++i) {
        double prod = 1.0;
        for (NodeId j : g.neighbors(i)) prod *= 1.0 - beta * p_ai[j];
        q[i] = prod;
    }
    return q;
}

MmcState mmc_step(const Graph& g, const MmcState& state, const ModelParams& params) {
    const auto [beta, gamma, u, v] = params;
    std::vector<double> p_ai(state.size());
    std::transform(state.begin(), state.end(), p_ai.begin(), [](const NodeProbabilities& p) { return p.ai; });
    const std::vector<double> q = escape_probability(g, p_ai, beta);

    MmcState next(state.size());
    for (std::size_t i = 0; i < state.size(); ++i) {
        const NodeProbabilities& p = state[i];
        // Mass that is susceptible / infected after infection and recovery,
        // before the sleep schedule moves it.
        const double awake_healthy = p.ai * gamma + p.as * q[i];
        const double awake_sick = p.ai * (1.0 - gamma) + p.as * (1.0 - q[i]);
        next[i].us = p.us * (1.0 - v) + awake_healthy * u;
        next[i].as = p.us * v + awake_healthy * (1.0 - u);
        next[i].ui = p.ui * (1.0 - v) + awake_sick * u;
        next[i].ai = p.ui * v + awake_sick * (1.0 - u);
    }
    return next;
}

Fractions state_fractions(const MmcState& state) {
    Fractions f;
    for (const auto& p : state) {
        f.us += p.us;
        f.as += p.as;
        f.ui += p.ui;
        f.ai += p.ai;
    }
    const auto n = static_cast<double>(state.size());
    return {f.us / n, f.as / n, f.ui / n, f.ai / n};
}

double max_abs_change(const MmcState& a, const MmcState& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d = std::max({d, std::abs(a[i].us - b[i].us), std::abs(a[i].as - b[i].as),
                      std::abs(a[i].ui - b[i].ui), std::abs(a[i].ai - b[i].ai)});
    }
    return d;
}

FractionSeries run_mmc(const Graph& g, const ModelParams& params, MmcState init, std::size_t max_steps,
                       double settle_tol, MmcState* final_state) {
    params.validate();
    if (init.size() != g.node_count()) throw ValidationError("run_mmc: initial state size does not match graph");

    FractionSeries series;
    series.rows.push_back({0, state_fractions(init)});
    MmcState state = std::move(init);
    for (std::size_t t = 1; t <= max_steps; ++t) {
        MmcState next = mmc_step(g, state, params);
        const double change = max_abs_change(next, state);
        state = std::move(next);
        series.rows.push_back({t, state_fractions(state)});
        if (change < settle_tol) {
            series.settled = true;
            break;
        }
    }
    if (final_state) *final_state = std::move(state);
    return series;
}

MmcState solve_equilibrium(const Graph& g, const ModelParams& params, double tol, std::size_t max_iter) {
    params.validate();
    if (params.v == 0.0) throw DegenerateSchedulingError("v = 0: every node ends up asleep, no active equilibrium");
    if (!(tol > 0.0)) throw ValidationError("solve_equilibrium: tol must be positive");

    const auto [beta, gamma, u, v] = params;
    const double active = v / (u + v);
    const std::size_t n = g.node_count();

    std::vector<double> p_ai(n, active);
    std::vector<double> next(n);
    std::vector<double> q;
    auto infected_share = [gamma](double q_i) {
        const double pressure = 1.0 - q_i;
        return pressure + gamma > 0.0 ? pressure / (pressure + gamma) : 0.0;
    };

    bool converged = false;
    double change = 0.0;
    for (std::size_t it = 0; it < max_iter; ++it) {
        q = escape_probability(g, p_ai, beta);
        change = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            next[i] = active * infected_share(q[i]);
            change = std::max(change, std::abs(next[i] - p_ai[i]));
        }
        p_ai.swap(next);
        if (change < tol) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        std::ostringstream msg;
        msg << "equilibrium iteration did not settle below " << tol << " within " << max_iter
            << " iterations (last change " << change << ")";
        throw ConvergenceError(msg.str(), std::move(p_ai), change);
    }

    MmcState state(n);
    for (std::size_t i = 0; i < n; ++i) {
        state[i].ai = p_ai[i];
        state[i].as = active - p_ai[i];
        state[i].ui = u / v * state[i].ai;
        state[i].us = u / v * state[i].as;
    }
    return state;
}

double epidemic_threshold(double lambda_max, double gamma, double u, double v) {
    if (!(v > 0.0)) throw DegenerateSchedulingError("v = 0: epidemic threshold undefined");
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw ValidationError("gamma outside [0, 1]");
    if (!(u >= 0.0 && u <= 1.0) || v > 1.0) throw ValidationError("u or v outside [0, 1]");
    if (!(lambda_max >= 0.0)) throw ValidationError("lambda_max must be non-negative");
    if (lambda_max == 0.0) return kNoEpidemicPossible;
    return (1.0 + u / v) * gamma / lambda_max;
}

} // namespace wsnsis
