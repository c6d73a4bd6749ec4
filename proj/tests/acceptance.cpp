// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "wsnsis/error.hpp"
#include "wsnsis/experiments.hpp"
#include "wsnsis/graph.hpp"
#include "wsnsis/mmc.hpp"
#include "wsnsis/montecarlo.hpp"

#include "cli_harness.hpp"
#include "test_support.hpp"
#include "transition_oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace wsnsis;
using namespace wsnsis::testing;

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("[%s] criterion %d: %s -- %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, title.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
}

std::string fmt(double x, int digits = 4) {
    std::ostringstream ss;
    ss.precision(digits);
    ss << x;
    return ss.str();
}

std::size_t worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

bool close_ulps(double a, double b, double ulps = 4.0) {
    return std::abs(a - b) <= ulps * kEps * std::max(std::abs(a), std::abs(b));
}

// Reference setup shared by the figure criteria.
const Graph& reference_graph() {
    static const Graph g = generate_price(1000, 2, 1);
    return g;
}

double reference_lambda() {
    static const double lambda = largest_real_eigenvalue(reference_graph(), 1e-10).lambda_max;
    return lambda;
}

ExperimentConfig reference_config(std::size_t steps) {
    ExperimentConfig cfg;
    cfg.steps = steps;
    cfg.seed_count = 10;
    cfg.runs = 50;
    cfg.base_seed = 1;
    cfg.jobs = worker_count();
    return cfg;
}

// Grid spacing at the detected point (gap to its lower neighbor).
double spacing_at(const std::vector<double>& grid, double beta) {
    auto it = std::lower_bound(grid.begin(), grid.end(), beta - 1e-12);
    if (it == grid.end()) return grid.size() > 1 ? grid.back() - grid[grid.size() - 2] : 0.0;
    if (it == grid.begin()) return grid.size() > 1 ? grid[1] - grid[0] : 0.0;
    return *it - *(it - 1);
}

Outcome fig2_plateau() {
    const ModelParams params{0.5, 0.3, 0.3, 0.7};
    const auto cfg = reference_config(200);
    const auto result = temporal_experiment(reference_graph(), params, cfg);
    const Fractions mmc = tail_average(result.mmc, cfg.tail_window());
    const Fractions mc = tail_average(result.mc.mean, cfg.tail_window());
    const double gaps[4] = {std::abs(mmc.us - mc.us), std::abs(mmc.as - mc.as), std::abs(mmc.ui - mc.ui),
                            std::abs(mmc.ai - mc.ai)};
    const double worst = *std::max_element(std::begin(gaps), std::end(gaps));
    auto split_ok = [](const Fractions& f) {
        return std::abs(f.asleep() - 0.3) <= 0.01 && std::abs(f.active() - 0.7) <= 0.01;
    };
    std::ostringstream d;
    d << "MMC (" << fmt(mmc.us) << ", " << fmt(mmc.as) << ", " << fmt(mmc.ui) << ", " << fmt(mmc.ai) << ") MC ("
      << fmt(mc.us) << ", " << fmt(mc.as) << ", " << fmt(mc.ui) << ", " << fmt(mc.ai) << "), max gap " << fmt(worst)
      << " (tol 0.05); asleep MMC " << fmt(mmc.asleep()) << " MC " << fmt(mc.asleep()) << ", active MMC "
      << fmt(mmc.active()) << " MC " << fmt(mc.active()) << " (0.3/0.7 +- 0.01)";
    return {worst <= 0.05 && split_ok(mmc) && split_ok(mc), d.str()};
}

Outcome fig3_sweep() {
    const double gamma = 0.5, u = 0.3, v = 0.7;
    const double lambda = reference_lambda();
    const double theory = epidemic_threshold(lambda, gamma, u, v);
    const auto grid = threshold_grid(theory);
    const auto cfg = reference_config(1000);
    const auto points = sweep_beta(reference_graph(), gamma, u, v, grid, cfg);
    const auto mc = points_from(points, Engine::Mc);
    const auto mmc = points_from(points, Engine::Mmc);
    const auto sim = detect_threshold(mc, cfg.detection_eps, lambda);
    const auto mmc_est = detect_threshold(mmc, cfg.detection_eps, lambda);

    double below_worst = 0.0;
    std::size_t below_count = 0;
    for (const auto* set : {&mc, &mmc}) {
        for (const auto& p : *set) {
            if (p.params.beta >= theory) continue;
            ++below_count;
            const Fractions& f = p.rho_inf;
            below_worst = std::max({below_worst, std::abs(f.us - 0.3), std::abs(f.as - 0.7), f.ui, f.ai});
        }
    }

    const bool in_band = lambda >= 8.0 && lambda <= 8.8;
    const bool agree = sim.observed() && std::abs(*sim.beta_c_sim - theory) <= 0.02;
    const bool reference_ok = !in_band || (sim.observed() && std::abs(*sim.beta_c_sim - 0.085) <= 0.015);
    std::ostringstream d;
    d << "lambda_max " << fmt(lambda, 6) << ", beta_c theory " << fmt(theory) << ", MC "
      << (sim.observed() ? fmt(*sim.beta_c_sim) : std::string("not observed")) << " (tol 0.02), MMC "
      << (mmc_est.observed() ? fmt(*mmc_est.beta_c_sim) : std::string("not observed"))
      << "; reference 0.085 " << (in_band ? "binding" : "informational (lambda outside [8.0, 8.8])")
      << "; below-threshold max deviation " << fmt(below_worst) << " over " << below_count << " points (tol 0.01)";
    return {agree && reference_ok && below_worst <= 0.01, d.str()};
}

Outcome fig4_gamma() {
    const std::vector<double> gammas = linspace_step(0.1, 0.9, 0.1);
    const std::vector<std::pair<double, double>> schedules{{0.3, 0.7}, {0.5, 0.5}, {0.7, 0.3}};
    const double lambda = reference_lambda();

    bool linear = true;
    for (auto [u, v] : schedules) {
        const double slope = epidemic_threshold(lambda, 1.0, u, v);
        if (epidemic_threshold(lambda, 0.0, u, v) != 0.0) linear = false;
        for (double g : gammas) linear = linear && close_ulps(epidemic_threshold(lambda, g, u, v) / g, slope);
    }

    const auto cfg = reference_config(1000);
    const auto rows = sweep_gamma(reference_graph(), gammas, schedules, cfg);
    std::size_t tracked = 0;
    double worst = 0.0;
    std::ostringstream misses;
    for (const auto& r : rows) {
        const auto grid = threshold_grid(r.beta_c_theory);
        bool ok = false;
        if (r.beta_c_sim) {
            const double err = std::abs(*r.beta_c_sim - r.beta_c_theory);
            worst = std::max(worst, err);
            ok = err <= spacing_at(grid, *r.beta_c_sim) + 0.01;
        }
        if (ok) {
            ++tracked;
        } else if (misses.tellp() < 400) {
            misses << " (" << r.u << "," << r.v << ",g=" << r.gamma << "): " << fmt(r.beta_c_theory) << " vs "
                   << (r.beta_c_sim ? fmt(*r.beta_c_sim) : std::string("none")) << ";";
        }
    }
    std::ostringstream d;
    d << "theory linear through origin: " << (linear ? "yes" : "no") << "; simulated within spacing+0.01 at "
      << tracked << "/" << rows.size() << " points, max |sim-theory| " << fmt(worst);
    if (tracked < rows.size()) d << "; misses:" << misses.str();
    return {linear && tracked == rows.size(), d.str()};
}

Outcome fig5_ratio() {
    const std::vector<double> grid = linspace_step(0.2, 0.7, 0.1);
    const double gamma = 0.5;
    const double lambda = reference_lambda();
    ExperimentConfig cfg = reference_config(1000);
    cfg.simulate = false;
    const auto rows = sweep_ratio(reference_graph(), gamma, grid, grid, cfg);

    std::size_t pairs = 0;
    bool ratio_only = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = i + 1; j < rows.size(); ++j) {
            // Equal ratios as rationals: u_i v_j == u_j v_i on the 0.1 lattice.
            const long a = std::lround(rows[i].u * 10) * std::lround(rows[j].v * 10);
            const long b = std::lround(rows[j].u * 10) * std::lround(rows[i].v * 10);
            if (a != b) continue;
            ++pairs;
            ratio_only = ratio_only && close_ulps(rows[i].beta_c_theory, rows[j].beta_c_theory);
        }
    }

    // Least-squares line beta_c = slope * (u/v) + intercept.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& r : rows) {
        sx += r.ratio();
        sy += r.beta_c_theory;
        sxx += r.ratio() * r.ratio();
        sxy += r.ratio() * r.beta_c_theory;
    }
    const double n = static_cast<double>(rows.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;
    double max_resid = 0.0;
    for (const auto& r : rows) max_resid = std::max(max_resid, std::abs(r.beta_c_theory - slope * r.ratio() - intercept));
    const double target = gamma / lambda;
    // Fit on ~36 O(1) values: allow a few hundred ulps of accumulated rounding.
    const double tol = 256 * kEps;
    const bool affine = std::abs(slope - target) <= tol * target && std::abs(intercept - target) <= tol * target &&
                        max_resid <= tol * target;
    std::ostringstream d;
    d.precision(17);
    d << pairs << " equal-ratio pairs " << (ratio_only ? "agree" : "DISAGREE") << "; slope " << slope << ", intercept "
      << intercept << ", gamma/lambda " << target << ", max residual " << max_resid;
    return {ratio_only && pairs > 0 && affine, d.str()};
}

Outcome micro_oracle() {
    const Graph g = path_graph(2);
    const std::vector<double> levels{0.0, 0.5, 1.0};
    const std::size_t samples = 100000;
    Rng rng(20240501);
    std::size_t cases = 0, skipped = 0, cells = 0, nontrivial = 0, exact_bad = 0, band_bad = 0;
    double worst_z = 0.0;
    for (double gamma : levels) {
        for (double beta : levels) {
            for (double u : levels) {
                for (double v : levels) {
                    const ModelParams p{beta, gamma, u, v};
                    if (u == 0.0 && v == 0.0) {
                        ++skipped; // frozen schedule is rejected as invalid input
                        continue;
                    }
                    ++cases;
                    for (const auto& now : all_joint_states(2)) {
                        const auto law = joint_law(g, now, p);
                        std::map<JointState, std::size_t> counts;
                        AgentPopulation pop{now, 0};
                        for (std::size_t s = 0; s < samples; ++s) ++counts[mc_step(g, pop, p, rng).states];
                        for (const auto& cell : all_joint_states(2)) {
                            ++cells;
                            auto it = law.find(cell);
                            const double prob = it == law.end() ? 0.0 : it->second;
                            auto ct = counts.find(cell);
                            const double freq =
                                ct == counts.end() ? 0.0 : static_cast<double>(ct->second) / static_cast<double>(samples);
                            if (prob == 0.0 || prob == 1.0) {
                                if (freq != prob) ++exact_bad;
                                continue;
                            }
                            ++nontrivial;
                            const double z = std::abs(freq - prob) / std::sqrt(prob * (1 - prob) / samples);
                            worst_z = std::max(worst_z, z);
                            if (z > 3.0) ++band_bad;
                        }
                    }
                }
            }
        }
    }
    const double chance = 0.0026998;
    std::ostringstream d;
    d << cases << " parameter cases (" << skipped << " with u=v=0 rejected), " << cells << " cells; exact cells wrong: "
      << exact_bad << "; nontrivial cells outside 3 sigma: " << band_bad << "/" << nontrivial
      << " (chance expectation " << fmt(chance * static_cast<double>(nontrivial), 3) << "), worst z " << fmt(worst_z, 3);
    return {exact_bad == 0 && band_bad == 0, d.str()};
}

Outcome mmc_invariants() {
    struct Named {
        std::string name;
        Graph g;
    };
    const std::vector<Named> graphs{{"K3", complete_graph(3)},
                                    {"star 1+5", star_graph(5)},
                                    {"ring 10", ring_graph(10)},
                                    {"Price 200", generate_price(200, 2, 3)}};
    Rng rng(77);
    double worst_cons = 0.0, worst_active = 0.0, eq_ratio = 0.0;
    bool decay = true;
    const double eq_tol = 1e-12;
    for (const auto& [name, g] : graphs) {
        for (int trial = 0; trial < 200; ++trial) {
            const ModelParams p{uniform01(rng), uniform01(rng), uniform01(rng), 0.05 + 0.95 * uniform01(rng)};
            MmcState s(g.node_count());
            for (auto& node : s) {
                double w[4];
                double total = 0.0;
                for (double& x : w) total += (x = uniform01(rng) + 1e-3);
                node = {w[0] / total, w[1] / total, w[2] / total, w[3] / total};
            }
            const MmcState next = mmc_step(g, s, p);
            for (std::size_t i = 0; i < s.size(); ++i) {
                worst_cons = std::max(worst_cons, std::abs(next[i].sum() - 1.0));
                const double active_before = s[i].as + s[i].ai;
                const double expected = (1 - p.u) * active_before + p.v * (1 - active_before);
                worst_active = std::max(worst_active, std::abs(next[i].as + next[i].ai - expected));
            }
            ModelParams quiet = p;
            quiet.beta = 0.0;
            MmcState cur = s;
            double infected = state_fractions(cur).infected();
            for (int t = 0; t < 30; ++t) {
                cur = mmc_step(g, cur, quiet);
                const double now = state_fractions(cur).infected();
                if (now > infected + 1e-15) decay = false;
                infected = now;
            }
        }
        for (double beta : {0.02, 0.3, 0.9}) {
            const ModelParams p{beta, 0.3, 0.3, 0.7};
            const MmcState eq = solve_equilibrium(g, p, eq_tol);
            eq_ratio = std::max(eq_ratio, max_abs_change(eq, mmc_step(g, eq, p)) / eq_tol);
        }
    }
    std::ostringstream d;
    d << "conservation " << fmt(worst_cons, 3) << " (1e-12), active mass " << fmt(worst_active, 3)
      << " (1e-12), beta=0 decay " << (decay ? "monotone" : "VIOLATED") << ", equilibrium residual/tol "
      << fmt(eq_ratio, 3) << " (< 10)";
    return {worst_cons <= 1e-12 && worst_active <= 1e-12 && decay && eq_ratio < 10.0, d.str()};
}

Outcome spectral() {
    const double tol = 1e-10;
    double worst = 0.0;
    for (std::size_t n = 2; n <= 12; ++n)
        worst = std::max(worst, std::abs(largest_real_eigenvalue(complete_graph(n), tol).lambda_max - (n - 1.0)));
    for (std::size_t k = 1; k <= 12; ++k)
        worst = std::max(worst,
                         std::abs(largest_real_eigenvalue(star_graph(k), tol).lambda_max - std::sqrt(double(k))));
    for (std::size_t n = 3; n <= 20; ++n)
        worst = std::max(worst, std::abs(largest_real_eigenvalue(ring_graph(n), tol).lambda_max - 2.0));

    const Graph g = generate_price(200, 2, 11);
    const double full = largest_real_eigenvalue(g, tol).lambda_max;
    Rng rng(5150);
    std::size_t held = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const double keep_share = 0.2 + 0.7 * uniform01(rng);
        std::vector<NodeId> keep;
        for (NodeId i = 0; i < g.node_count(); ++i)
            if (bernoulli(rng, keep_share)) keep.push_back(i);
        if (keep.empty()) keep.push_back(0);
        if (largest_real_eigenvalue(induced_subgraph(g, keep), tol).lambda_max <= full + 2 * tol) ++held;
    }
    std::ostringstream d;
    d << "closed forms max error " << fmt(worst, 3) << " (1e-8); interlacing " << held << "/100";
    return {worst <= 1e-8 && held == 100, d.str()};
}

Outcome cli_determinism() {
    ScratchDir dir("acceptance");
    const auto config = dir.path() / "small.conf";
    write_file(config,
               "[graph]\nn = 300\n[run]\nsteps = 80\nruns = 6\n"
               "[sweep]\ngamma_grid = 0.3, 0.6\nschedules = 0.3:0.7, 0.7:0.3\nu_grid = 0.2, 0.4\nv_grid = 0.4, 0.8\n");
    const char* commands[] = {"generate-graph", "run-mmc",     "run-mc",      "temporal",
                              "sweep-beta",     "sweep-gamma", "sweep-ratio", "threshold"};
    std::size_t identical = 0;
    std::ostringstream bad;
    for (const char* cmd : commands) {
        const auto out = dir.path() / cmd;
        const std::string args = std::string(cmd) + " --config " + config.string() + " --jobs 2 --out " + out.string();
        if (run_cli(args) != 0) {
            bad << ' ' << cmd << "(exit)";
            continue;
        }
        const auto first = snapshot(out);
        if (run_cli(args) != 0) {
            bad << ' ' << cmd << "(exit)";
            continue;
        }
        if (!first.empty() && snapshot(out) == first) {
            ++identical;
        } else {
            bad << ' ' << cmd;
        }
    }
    std::ostringstream d;
    d << identical << "/" << std::size(commands) << " commands byte-identical on rerun";
    if (!bad.str().empty()) d << "; differing:" << bad.str();
    return {identical == std::size(commands), d.str()};
}

} // namespace

int main() {
    std::printf("reference graph: Price n=1000 m=2 seed 1, lambda_max %.6f, workers %zu\n", reference_lambda(),
                worker_count());
    report(1, "MMC vs Monte Carlo plateau (reference setup)", fig2_plateau);
    report(2, "beta sweep threshold and disease-free split", fig3_sweep);
    report(3, "threshold linear in gamma; simulation tracks theory", fig4_gamma);
    report(4, "threshold depends on u/v only, affine with slope = intercept = gamma/lambda", fig5_ratio);
    report(5, "one-step transition law on a 2-node path", micro_oracle);
    report(6, "MMC invariants on K3, star, ring, Price 200", mmc_invariants);
    report(7, "spectral closed forms and interlacing", spectral);
    report(8, "CLI reruns byte-identical", cli_determinism);
    std::printf("%d of 8 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
