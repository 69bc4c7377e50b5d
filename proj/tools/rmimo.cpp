// rmimo: run configured sweeps, render charts, and materialize presets.
#include <CLI11.hpp>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "rmimo/config.hpp"
#include "rmimo/csv.hpp"
#include "rmimo/montecarlo.hpp"
#include "rmimo/presets.hpp"
#include "rmimo/svg.hpp"

namespace fs = std::filesystem;

namespace {

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<long> trials;
    std::string out_dir = ".";
    int workers = 1;
};

// Runs one config series and writes its CSV; returns the CSV path.
fs::path run_series(rmimo::ExperimentConfig cfg, const Overrides& ov) {
    if (ov.seed) cfg.seed = *ov.seed;
    if (ov.trials) cfg.trials = *ov.trials;
    const rmimo::SweepSpec spec = rmimo::to_sweep_spec(cfg);
    std::vector<rmimo::SweepRow> rows;
    if (cfg.drops > 0) {
        rmimo::CellGeometry geometry;
        rows = rmimo::average_over_drops(cfg.drops, spec, geometry, cfg.seed,
                                         ov.workers);
    } else {
        rows = rmimo::run_sweep(spec, cfg.seed, ov.workers);
    }
    // dB axes: the engine ran on linear values; report the dB grid.
    std::vector<double> display;
    if (cfg.axis == "energy" || cfg.axis == "power" || cfg.axis == "kappa")
        display = cfg.grid;
    const fs::path csv_path = fs::path(ov.out_dir) / cfg.csv;
    rmimo::write_file(csv_path.string(),
                      rmimo::render_csv(rows, rmimo::serialize_config(cfg),
                                        cfg.seed, display));
    return csv_path;
}

// Shared by `plot` and preset charts: series from mc_mean, dashed
// reference line per CSV whose limit_rate column is constant.
std::string chart_from_csvs(const std::vector<fs::path>& paths,
                            const rmimo::PlotStyle& style) {
    std::vector<rmimo::PlotSeries> series;
    std::vector<rmimo::ReferenceLine> limits;
    std::vector<double> axis0;
    for (const auto& path : paths) {
        const rmimo::CsvTable table = rmimo::parse_csv(rmimo::read_file(path.string()));
        const auto axis = table.column_values("axis_value");
        if (series.empty()) axis0 = axis;
        else if (axis != axis0)
            throw rmimo::ValidationError("axis mismatch between '" +
                                         paths.front().string() + "' and '" +
                                         path.string() + "'");
        std::string name = path.stem().string();
        series.push_back({name, axis, table.column_values("mc_mean")});
        const auto limit = table.column_values("limit_rate");
        const bool constant =
            std::all_of(limit.begin(), limit.end(),
                        [&](double v) { return v == limit.front(); });
        if (constant && !limit.empty() && limit.front() > 0.0)
            limits.push_back({name + " limit", limit.front()});
    }
    return rmimo::render_chart(series, limits, style);
}

int run_simulate(const std::string& config_path, const Overrides& ov) {
    const rmimo::ExperimentConfig cfg =
        rmimo::parse_config(rmimo::read_file(config_path));
    const fs::path csv_path = run_series(cfg, ov);
    std::cout << "wrote " << csv_path.string() << "\n";
    if (!cfg.svg.empty()) {
        rmimo::PlotStyle style;
        style.x_label = cfg.axis;
        const fs::path svg_path = fs::path(ov.out_dir) / cfg.svg;
        rmimo::write_file(svg_path.string(), chart_from_csvs({csv_path}, style));
        std::cout << "wrote " << svg_path.string() << "\n";
    }
    return 0;
}

int run_plot(const std::vector<std::string>& inputs, const std::string& out) {
    std::vector<fs::path> paths(inputs.begin(), inputs.end());
    rmimo::PlotStyle style;
    style.x_label = "axis_value";
    rmimo::write_file(out, chart_from_csvs(paths, style));
    std::cout << "wrote " << out << "\n";
    return 0;
}

int run_preset(const std::string& name, const Overrides& ov) {
    const rmimo::Preset& preset = rmimo::find_preset(name);
    std::vector<fs::path> csvs;
    for (const auto& cfg : preset.series) {
        csvs.push_back(run_series(cfg, ov));
        std::cout << "wrote " << csvs.back().string() << "\n";
    }
    rmimo::PlotStyle style;
    style.title = preset.title;
    style.x_label = preset.x_label;
    const fs::path svg_path = fs::path(ov.out_dir) / preset.svg;
    rmimo::write_file(svg_path.string(), chart_from_csvs(csvs, style));
    std::cout << "wrote " << svg_path.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rician massive-MIMO rate sweeps"};
    app.require_subcommand(1);

    Overrides ov;
    std::string config_path, preset_name, plot_out = "fig.svg";
    std::vector<std::string> plot_in;

    auto* sim = app.add_subcommand("simulate", "run a sweep from a config file");
    sim->add_option("--config", config_path, "config file")->required();
    sim->add_option("--seed", ov.seed, "master seed override");
    sim->add_option("--trials", ov.trials, "trials-per-point override");
    sim->add_option("--out", ov.out_dir, "output directory");
    sim->add_option("--workers", ov.workers, "worker threads");

    auto* plot = app.add_subcommand("plot", "chart one or more result CSVs");
    plot->add_option("--in", plot_in, "input CSVs")->required()->expected(-1);
    plot->add_option("--out", plot_out, "output SVG");

    auto* pre = app.add_subcommand("preset", "run a named figure preset");
    pre->add_option("name", preset_name, "preset name (fig1..fig11)")->required();
    pre->add_option("--seed", ov.seed, "master seed override");
    pre->add_option("--trials", ov.trials, "trials-per-point override");
    pre->add_option("--out", ov.out_dir, "output directory");
    pre->add_option("--workers", ov.workers, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (!ov.out_dir.empty()) fs::create_directories(ov.out_dir);
        if (*sim) return run_simulate(config_path, ov);
        if (*plot) return run_plot(plot_in, plot_out);
        return run_preset(preset_name, ov);
    } catch (const rmimo::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const rmimo::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 2;
    }
}
