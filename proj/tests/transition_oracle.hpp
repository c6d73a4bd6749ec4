#pragma once

// Brute-force one-step transition law of the agent process, built by
// enumerating every individual coin flip (one per infectious neighbor, one
// recovery coin, one sleep/wake coin per node). Independent of the library's
// step implementation; only the graph type is shared.

#include "wsnsis/graph.hpp"
#include "wsnsis/montecarlo.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

namespace wsnsis::testing {

using JointState = std::vector<NodeState>;

/// Distribution over a single node's next state given its own state and the
/// number of AI neighbors at time t.
inline std::map<NodeState, double> node_law(NodeState s, std::size_t ai_neighbors, const ModelParams& p) {
    // Phase 1 outcome distribution: enumerate the 2^k transmission coins.
    std::map<NodeState, double> after_phase1;
    if (s == NodeState::AS) {
        const std::uint64_t combos = std::uint64_t{1} << ai_neighbors;
        for (std::uint64_t mask = 0; mask < combos; ++mask) {
            double prob = 1.0;
            bool hit = false;
            for (std::size_t b = 0; b < ai_neighbors; ++b) {
                const bool transmits = (mask >> b) & 1U;
                prob *= transmits ? p.beta : 1.0 - p.beta;
                hit = hit || transmits;
            }
            after_phase1[hit ? NodeState::AI : NodeState::AS] += prob;
        }
    } else if (s == NodeState::AI) {
        after_phase1[NodeState::AS] += p.gamma;
        after_phase1[NodeState::AI] += 1.0 - p.gamma;
    } else {
        after_phase1[s] = 1.0;
    }

    std::map<NodeState, double> out;
    for (auto [mid, prob] : after_phase1) {
        switch (mid) {
        case NodeState::AS:
            out[NodeState::US] += prob * p.u;
            out[NodeState::AS] += prob * (1.0 - p.u);
            break;
        case NodeState::AI:
            out[NodeState::UI] += prob * p.u;
            out[NodeState::AI] += prob * (1.0 - p.u);
            break;
        case NodeState::US:
            out[NodeState::AS] += prob * p.v;
            out[NodeState::US] += prob * (1.0 - p.v);
            break;
        case NodeState::UI:
            out[NodeState::AI] += prob * p.v;
            out[NodeState::UI] += prob * (1.0 - p.v);
            break;
        }
    }
    return out;
}

/// Full joint next-state distribution; nodes' coins are independent given
/// the time-t configuration.
inline std::map<JointState, double> joint_law(const Graph& g, const JointState& now, const ModelParams& p) {
    std::map<JointState, double> law{{JointState{}, 1.0}};
    for (NodeId i = 0; i < g.node_count(); ++i) {
        std::size_t k = 0;
        for (NodeId j : g.neighbors(i)) k += now[j] == NodeState::AI;
        const auto single = node_law(now[i], k, p);
        std::map<JointState, double> next;
        for (const auto& [prefix, prob] : law) {
            for (auto [s, q] : single) {
                if (q == 0.0) continue;
                JointState extended = prefix;
                extended.push_back(s);
                next[extended] += prob * q;
            }
        }
        law = std::move(next);
    }
    return law;
}

/// All 4^n joint states.
inline std::vector<JointState> all_joint_states(std::size_t n) {
    std::vector<JointState> out;
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= 4;
    for (std::size_t code = 0; code < total; ++code) {
        JointState s(n);
        std::size_t c = code;
        for (std::size_t i = 0; i < n; ++i, c /= 4) s[i] = static_cast<NodeState>(c % 4);
        out.push_back(s);
    }
    return out;
}

struct CellCheck {
    std::size_t cells = 0;
    std::size_t violations = 0;
    double worst_z = 0.0;
};

/// Samples mc_step `samples` times from `now` and compares every cell of the
/// next-state distribution with the enumerated law using a 3-sigma binomial
/// band. Cells with probability 0 or 1 must match exactly.
inline CellCheck compare_one_step(const Graph& g, const JointState& now, const ModelParams& p, std::size_t samples,
                                  Rng& rng) {
    const auto law = joint_law(g, now, p);
    std::map<JointState, std::size_t> counts;
    AgentPopulation pop{now, 0};
    for (std::size_t s = 0; s < samples; ++s) ++counts[mc_step(g, pop, p, rng).states];

    CellCheck result;
    const auto n = static_cast<double>(samples);
    for (const auto& cell : all_joint_states(g.node_count())) {
        auto it = law.find(cell);
        const double prob = it == law.end() ? 0.0 : it->second;
        auto ct = counts.find(cell);
        const double freq = ct == counts.end() ? 0.0 : static_cast<double>(ct->second) / n;
        ++result.cells;
        const double sigma = std::sqrt(prob * (1.0 - prob) / n);
        const double diff = std::abs(freq - prob);
        if (sigma == 0.0) {
            if (diff > 1e-12) ++result.violations;
            continue;
        }
        const double z = diff / sigma;
        result.worst_z = std::max(result.worst_z, z);
        if (z > 3.0) ++result.violations;
    }
    return result;
}

} // namespace wsnsis::testing
