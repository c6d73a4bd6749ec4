#include "wsnsis/experiments.hpp"

#include "wsnsis/error.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace wsnsis {

namespace {

double spectral_radius(const Graph& g) {
    return largest_real_eigenvalue(g, 1e-10).lambda_max;
}

double round12(double x) {
    return std::round(x * 1e12) / 1e12;
}

std::string optional_field(const std::optional<double>& x) {
    return x ? format_double(*x) : std::string("nan");
}

RunConfig run_config(const ModelParams& params, const ExperimentConfig& cfg) {
    RunConfig rc;
    rc.params = params;
    rc.steps = cfg.steps;
    rc.seed_count = cfg.seed_count;
    rc.init_active = cfg.init_active;
    return rc;
}

// Scans the threshold grid upward and stops at the first beta whose
// simulated infected fraction exceeds detection_eps; this is the same answer
// detect_threshold gives on a full sweep.
ThresholdRow threshold_row(const Graph& g, double lambda_max, double gamma, double u, double v,
                           const ExperimentConfig& cfg) {
    ThresholdRow row{gamma, u, v, epidemic_threshold(lambda_max, gamma, u, v), std::nullopt};
    if (!cfg.simulate || !std::isfinite(row.beta_c_theory)) return row;
    for (double beta : threshold_grid(row.beta_c_theory)) {
        const RunConfig rc = run_config(ModelParams{beta, gamma, u, v}, cfg);
        const double infected = ensemble_tail_infected(g, rc, cfg.runs, cfg.base_seed, cfg.tail_window(), cfg.jobs);
        if (infected > cfg.detection_eps) {
            row.beta_c_sim = beta;
            break;
        }
    }
    return row;
}

} // namespace

std::vector<double> linspace_step(double first, double last, double step) {
    if (!(step > 0.0)) throw ValidationError("grid step must be positive");
    std::vector<double> out;
    for (std::size_t k = 0;; ++k) {
        const double x = round12(first + static_cast<double>(k) * step);
        if (x > last + step * 1e-6) break;
        out.push_back(x);
    }
    return out;
}

TemporalResult temporal_experiment(const Graph& g, const ModelParams& params, const ExperimentConfig& cfg) {
    params.validate();
    const std::size_t n = g.node_count();
    if (cfg.seed_count > n) throw ValidationError("seed_count exceeds node count");

    MmcState init;
    if (cfg.init_active == InitActivity::Stationary) {
        init = uniform_state(n, params, static_cast<double>(cfg.seed_count) / static_cast<double>(n));
    } else {
        const double infected = static_cast<double>(cfg.seed_count) / static_cast<double>(n);
        init.assign(n, NodeProbabilities{0.0, 1.0 - infected, 0.0, infected});
    }

    TemporalResult result;
    result.mmc = run_mmc(g, params, std::move(init), cfg.steps, 0.0);
    result.mc = run_ensemble(g, run_config(params, cfg), cfg.runs, cfg.base_seed, cfg.jobs);
    return result;
}

std::vector<SweepPoint> sweep_beta(const Graph& g, double gamma, double u, double v,
                                   const std::vector<double>& beta_grid, const ExperimentConfig& cfg) {
    if (beta_grid.empty()) throw ValidationError("beta grid is empty");
    std::vector<double> grid = beta_grid;
    std::sort(grid.begin(), grid.end());

    std::vector<SweepPoint> points;
    points.reserve(grid.size() * 2);
    for (double beta : grid) {
        const ModelParams params{beta, gamma, u, v};
        params.validate();
        const MmcState eq = solve_equilibrium(g, params, cfg.equilibrium_tol, cfg.equilibrium_max_iter);
        points.push_back({params, state_fractions(eq), Engine::Mmc});
        if (cfg.simulate) {
            const EnsembleResult ensemble = run_ensemble(g, run_config(params, cfg), cfg.runs, cfg.base_seed, cfg.jobs);
            points.push_back({params, tail_average(ensemble.mean, cfg.tail_window()), Engine::Mc});
        }
    }
    return points;
}

std::vector<SweepPoint> points_from(const std::vector<SweepPoint>& points, Engine source) {
    std::vector<SweepPoint> out;
    std::copy_if(points.begin(), points.end(), std::back_inserter(out),
                 [source](const SweepPoint& p) { return p.source == source; });
    return out;
}

ThresholdEstimate detect_threshold(const std::vector<SweepPoint>& points, double detection_eps, double lambda_max) {
    if (points.empty()) throw ValidationError("detect_threshold: no sweep points");
    if (!(detection_eps > 0.0)) throw ValidationError("detect_threshold: detection_eps must be positive");
    const ModelParams& p0 = points.front().params;

    ThresholdEstimate est;
    est.detection_eps = detection_eps;
    est.beta_c_theory = epidemic_threshold(lambda_max, p0.gamma, p0.u, p0.v);
    for (const auto& point : points) {
        if (point.rho_inf.infected() > detection_eps) {
            est.beta_c_sim = point.params.beta;
            break;
        }
    }
    return est;
}

std::vector<double> threshold_grid(double beta_c_theory) {
    const double fine = 0.005;
    const double coarse = 0.02;
    const double window = 0.05;
    std::vector<double> grid;
    for (double b : linspace_step(coarse, 1.0, coarse)) {
        if (b < beta_c_theory - window || (b > beta_c_theory + window && b <= beta_c_theory + 0.15)) {
            grid.push_back(b);
        }
    }
    // Fine points are aligned to multiples of the fine step.
    const double lo = std::max(fine, std::ceil((beta_c_theory - window) / fine) * fine);
    for (double b : linspace_step(lo, std::min(1.0, beta_c_theory + window), fine)) grid.push_back(b);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end(), [](double a, double b) { return std::abs(a - b) < 1e-9; }),
               grid.end());
    std::erase_if(grid, [](double b) { return b <= 0.0 || b > 1.0; });
    return grid;
}

std::vector<ThresholdRow> sweep_gamma(const Graph& g, const std::vector<double>& gamma_grid,
                                      const std::vector<std::pair<double, double>>& schedules,
                                      const ExperimentConfig& cfg) {
    if (gamma_grid.empty() || schedules.empty()) throw ValidationError("sweep_gamma: empty grid");
    const double lambda_max = spectral_radius(g);
    std::vector<ThresholdRow> rows;
    for (auto [u, v] : schedules) {
        for (double gamma : gamma_grid) rows.push_back(threshold_row(g, lambda_max, gamma, u, v, cfg));
    }
    return rows;
}

std::vector<ThresholdRow> sweep_ratio(const Graph& g, double gamma, const std::vector<double>& u_grid,
                                      const std::vector<double>& v_grid, const ExperimentConfig& cfg) {
    if (u_grid.empty() || v_grid.empty()) throw ValidationError("sweep_ratio: empty grid");
    for (double v : v_grid) {
        if (!(v > 0.0)) throw DegenerateSchedulingError("sweep_ratio: every v must be positive");
    }
    const double lambda_max = spectral_radius(g);
    std::vector<std::pair<double, double>> pairs;
    for (double u : u_grid) {
        for (double v : v_grid) pairs.emplace_back(u, v);
    }
    std::stable_sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
        const double ra = a.first / a.second;
        const double rb = b.first / b.second;
        return ra != rb ? ra < rb : a.first < b.first;
    });
    std::vector<ThresholdRow> rows;
    for (auto [u, v] : pairs) rows.push_back(threshold_row(g, lambda_max, gamma, u, v, cfg));
    return rows;
}

void write_temporal_csv(std::ostream& out, const TemporalResult& result) {
    out << "t,mmc_US,mmc_AS,mmc_UI,mmc_AI,mc_US,mc_AS,mc_UI,mc_AI,sd_US,sd_AS,sd_UI,sd_AI\n";
    const std::size_t rows = std::min(result.mmc.rows.size(), result.mc.mean.rows.size());
    for (std::size_t r = 0; r < rows; ++r) {
        const Fractions& a = result.mmc.rows[r].rho;
        const Fractions& b = result.mc.mean.rows[r].rho;
        const Fractions& sd = result.mc.sd[r];
        out << result.mmc.rows[r].t;
        for (double x : {a.us, a.as, a.ui, a.ai, b.us, b.as, b.ui, b.ai, sd.us, sd.as, sd.ui, sd.ai}) {
            out << ',' << format_double(x);
        }
        out << '\n';
    }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points) {
    out << "beta,gamma,u,v,source,rho_US,rho_AS,rho_UI,rho_AI\n";
    for (const auto& p : points) {
        out << format_double(p.params.beta) << ',' << format_double(p.params.gamma) << ','
            << format_double(p.params.u) << ',' << format_double(p.params.v) << ','
            << (p.source == Engine::Mmc ? "mmc" : "mc");
        for (double x : {p.rho_inf.us, p.rho_inf.as, p.rho_inf.ui, p.rho_inf.ai}) out << ',' << format_double(x);
        out << '\n';
    }
}

void write_gamma_csv(std::ostream& out, const std::vector<ThresholdRow>& rows) {
    out << "gamma,u,v,beta_c_theory,beta_c_sim\n";
    for (const auto& r : rows) {
        out << format_double(r.gamma) << ',' << format_double(r.u) << ',' << format_double(r.v) << ','
            << format_double(r.beta_c_theory) << ',' << optional_field(r.beta_c_sim) << '\n';
    }
}

void write_ratio_csv(std::ostream& out, const std::vector<ThresholdRow>& rows) {
    out << "ratio,u,v,gamma,beta_c_theory,beta_c_sim\n";
    for (const auto& r : rows) {
        out << format_double(r.ratio()) << ',' << format_double(r.u) << ',' << format_double(r.v) << ','
            << format_double(r.gamma) << ',' << format_double(r.beta_c_theory) << ','
            << optional_field(r.beta_c_sim) << '\n';
    }
}

} // namespace wsnsis
