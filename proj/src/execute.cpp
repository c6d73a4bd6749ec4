#include "wsnsis/execute.hpp"

#include "wsnsis/error.hpp"
#include "wsnsis/experiments.hpp"
#include "wsnsis/graph.hpp"
#include "wsnsis/mmc.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

namespace wsnsis {

namespace {

namespace fs = std::filesystem;

using Meta = std::vector<std::pair<std::string, std::string>>;

struct Context {
    const ExperimentSpec& spec;
    Graph graph;
    SpectralResult spectrum;
    std::ostream& out;
};

ExperimentConfig experiment_config(const ExperimentSpec& spec) {
    ExperimentConfig cfg;
    cfg.steps = spec.steps;
    cfg.seed_count = spec.seeds;
    cfg.runs = spec.runs;
    cfg.base_seed = spec.sim_seed;
    cfg.init_active = spec.init_active;
    cfg.jobs = spec.jobs;
    cfg.detection_eps = spec.detection_eps;
    cfg.simulate = spec.simulate;
    return cfg;
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw std::runtime_error("cannot write " + path.string());
    body(file);
    file.flush();
    if (!file) throw std::runtime_error("failed writing " + path.string());
}

void write_meta(const Context& ctx, const fs::path& artifact, const Meta& extra) {
    const auto& spec = ctx.spec;
    write_file(fs::path(artifact.string() + ".meta"), [&](std::ostream& os) {
        os << "artifact = " << artifact.filename().string() << '\n';
        os << "software_version = " << kVersion << '\n';
        os << "graph_source = " << (spec.graph_file.empty() ? "price" : "file") << '\n';
        os << "graph_nodes = " << ctx.graph.node_count() << '\n';
        os << "graph_edges = " << ctx.graph.edge_count() << '\n';
        os << "graph_components = " << component_count(ctx.graph) << '\n';
        os << "lambda_max = " << format_double(ctx.spectrum.lambda_max) << '\n';
        // Every config field, flattened to section.key.
        std::istringstream config(to_config_text(spec));
        std::string line;
        std::string section;
        while (std::getline(config, line)) {
            if (line.empty()) continue;
            if (line.front() == '[') {
                section = line.substr(1, line.size() - 2);
                continue;
            }
            os << section << '.' << line << '\n';
        }
        for (const auto& [key, value] : extra) os << key << " = " << value << '\n';
    });
}

MmcState matched_initial_state(const ExperimentSpec& spec, std::size_t n) {
    const double infected = static_cast<double>(spec.seeds) / static_cast<double>(n);
    if (spec.init_active == InitActivity::AllActive) {
        return MmcState(n, NodeProbabilities{0.0, 1.0 - infected, 0.0, infected});
    }
    return uniform_state(n, spec.params, infected);
}

std::string threshold_text(const std::optional<double>& x) {
    return x ? format_double(*x) : std::string("not observed in grid");
}

void run_command(Context& ctx) {
    const auto& spec = ctx.spec;
    const fs::path dir(spec.out_dir);
    const ExperimentConfig cfg = experiment_config(spec);
    const double lambda = ctx.spectrum.lambda_max;
    const Meta die_out_note{{"die_out_handling", "ensemble mean over all runs, not conditioned on survival"}};

    switch (spec.command) {
    case Command::GenerateGraph: {
        const auto path = dir / "graph.edges";
        write_file(path, [&](std::ostream& os) { write_edge_list(os, ctx.graph); });
        const DegreeStats stats = degree_stats(ctx.graph);
        write_meta(ctx, path, {{"mean_degree", format_double(stats.mean)}, {"max_degree", std::to_string(stats.max)}});
        ctx.out << "nodes " << ctx.graph.node_count() << ", edges " << ctx.graph.edge_count() << ", mean degree "
                << stats.mean << ", max degree " << stats.max << ", components " << stats.components
                << ", lambda_max " << lambda << '\n';
        return;
    }
    case Command::RunMmc: {
        MmcState init = matched_initial_state(spec, ctx.graph.node_count());
        const FractionSeries series = run_mmc(ctx.graph, spec.params, std::move(init), spec.max_steps, spec.settle_tol);
        const auto path = dir / "mmc_series.csv";
        write_file(path, [&](std::ostream& os) { write_series_csv(os, series); });
        write_meta(ctx, path, {{"settled", series.settled ? "true" : "false"},
                               {"recorded_steps", std::to_string(series.rows.back().t)}});
        const Fractions& f = series.final();
        ctx.out << "t=" << series.rows.back().t << (series.settled ? " (settled)" : " (not settled)") << " US "
                << f.us << " AS " << f.as << " UI " << f.ui << " AI " << f.ai << '\n';
        return;
    }
    case Command::RunMc: {
        RunConfig rc;
        rc.params = spec.params;
        rc.steps = spec.steps;
        rc.seed_count = spec.seeds;
        rc.init_active = spec.init_active;
        const EnsembleResult ensemble = run_ensemble(ctx.graph, rc, spec.runs, spec.sim_seed, spec.jobs);
        const auto path = dir / "mc_ensemble.csv";
        write_file(path, [&](std::ostream& os) { write_ensemble_csv(os, ensemble); });
        write_meta(ctx, path, die_out_note);
        const Fractions f = tail_average(ensemble.mean, cfg.tail_window());
        ctx.out << "tail mean US " << f.us << " AS " << f.as << " UI " << f.ui << " AI " << f.ai << '\n';
        return;
    }
    case Command::Temporal: {
        const TemporalResult result = temporal_experiment(ctx.graph, spec.params, cfg);
        const auto path = dir / "fig2_temporal.csv";
        write_file(path, [&](std::ostream& os) { write_temporal_csv(os, result); });
        write_meta(ctx, path, die_out_note);
        ctx.out << "wrote " << path.string() << " (" << result.mmc.rows.size() << " rows)\n";
        return;
    }
    case Command::SweepBeta: {
        const double theory = epidemic_threshold(lambda, spec.params.gamma, spec.params.u, spec.params.v);
        const std::vector<double> grid = spec.beta_grid.empty() ? threshold_grid(theory) : spec.beta_grid;
        const auto points = sweep_beta(ctx.graph, spec.params.gamma, spec.params.u, spec.params.v, grid, cfg);
        const auto path = dir / "fig3_sweep.csv";
        write_file(path, [&](std::ostream& os) { write_sweep_csv(os, points); });
        Meta extra = die_out_note;
        extra.emplace_back("beta_c_theory", format_double(theory));
        extra.emplace_back("detection_eps", format_double(spec.detection_eps));
        const auto mmc = detect_threshold(points_from(points, Engine::Mmc), spec.detection_eps, lambda);
        extra.emplace_back("beta_c_mmc", threshold_text(mmc.beta_c_sim));
        if (spec.simulate) {
            const auto mc = detect_threshold(points_from(points, Engine::Mc), spec.detection_eps, lambda);
            extra.emplace_back("beta_c_sim", threshold_text(mc.beta_c_sim));
            ctx.out << "beta_c_sim " << threshold_text(mc.beta_c_sim) << '\n';
        }
        write_meta(ctx, path, extra);
        ctx.out << "beta_c_theory " << theory << ", beta_c_mmc " << threshold_text(mmc.beta_c_sim) << '\n';
        return;
    }
    case Command::SweepGamma: {
        const auto rows = sweep_gamma(ctx.graph, spec.gamma_grid, spec.schedules, cfg);
        const auto path = dir / "fig4_gamma.csv";
        write_file(path, [&](std::ostream& os) { write_gamma_csv(os, rows); });
        write_meta(ctx, path, die_out_note);
        ctx.out << "wrote " << path.string() << " (" << rows.size() << " rows)\n";
        return;
    }
    case Command::SweepRatio: {
        const auto rows = sweep_ratio(ctx.graph, spec.params.gamma, spec.u_grid, spec.v_grid, cfg);
        const auto path = dir / "fig5_ratio.csv";
        write_file(path, [&](std::ostream& os) { write_ratio_csv(os, rows); });
        write_meta(ctx, path, die_out_note);
        ctx.out << "wrote " << path.string() << " (" << rows.size() << " rows)\n";
        return;
    }
    case Command::Threshold: {
        const double theory = epidemic_threshold(lambda, spec.params.gamma, spec.params.u, spec.params.v);
        const DegreeStats stats = degree_stats(ctx.graph);
        const auto path = dir / "threshold.txt";
        write_file(path, [&](std::ostream& os) {
            os << "lambda_max = " << format_double(lambda) << '\n';
            os << "spectral_residual = " << format_double(ctx.spectrum.residual) << '\n';
            os << "mean_degree = " << format_double(stats.mean) << '\n';
            os << "max_degree = " << stats.max << '\n';
            os << "components = " << stats.components << '\n';
            os << "gamma = " << format_double(spec.params.gamma) << '\n';
            os << "u = " << format_double(spec.params.u) << '\n';
            os << "v = " << format_double(spec.params.v) << '\n';
            os << "beta_c_theory = " << (std::isfinite(theory) ? format_double(theory) : "no epidemic possible")
               << '\n';
        });
        write_meta(ctx, path, {});
        ctx.out << "lambda_max " << lambda << '\n' << "beta_c_theory " << theory << '\n';
        return;
    }
    }
}

} // namespace

int execute(const ExperimentSpec& spec, std::ostream& out, std::ostream& err) {
    try {
        std::error_code ec;
        fs::create_directories(spec.out_dir, ec);
        if (ec || !fs::is_directory(spec.out_dir)) {
            err << "error: cannot create output directory '" << spec.out_dir << "'\n";
            return kExitRuntime;
        }
        Graph graph = spec.graph_file.empty() ? generate_price(spec.n, spec.m, spec.graph_seed)
                                              : read_edge_list(fs::path(spec.graph_file));
        if (spec.seeds > graph.node_count()) {
            throw ValidationError("seeds (" + std::to_string(spec.seeds) + ") exceeds graph node count (" +
                                  std::to_string(graph.node_count()) + ")");
        }
        SpectralResult spectrum = largest_real_eigenvalue(graph, 1e-10);
        Context ctx{spec, std::move(graph), std::move(spectrum), out};
        run_command(ctx);
        return kExitOk;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

} // namespace wsnsis
