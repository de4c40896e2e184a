// gspec: sample random kernel matrices and graphon graphs, compute their top
// eigenvalues and compare the fluctuations with the asymptotic limit laws.
//
// Exit codes: 0 success, 2 usage/parse/config error, 3 kernel assumption
// failure, 4 comparison outside its threshold, 5 runtime failure.
// stdout carries JSON only; diagnostics go to stderr.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gspec/asymptotics.hpp"
#include "gspec/error.hpp"
#include "gspec/kernel.hpp"
#include "gspec/kernel_io.hpp"
#include "gspec/matrix_io.hpp"
#include "gspec/montecarlo.hpp"
#include "gspec/report_io.hpp"
#include "gspec/sampling.hpp"
#include "gspec/spectra.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum Exit : int { kOk = 0, kUsage = 2, kAssumption = 3, kCompareFail = 4, kRuntime = 5 };

struct KernelChoice {
    std::string paper;
    std::string file;
};

struct ResolvedKernel {
    gspec::SpectralKernel kernel;
    std::string label;
    bool graphon;
};

ResolvedKernel resolve_kernel(const KernelChoice& choice) {
    if (choice.paper.empty() == choice.file.empty()) {
        throw gspec::ConfigError("give exactly one of --paper or --kernel");
    }
    if (!choice.paper.empty()) {
        return {gspec::make_paper_kernel(gspec::parse_paper_kernel(choice.paper)), choice.paper, true};
    }
    auto def = gspec::load_kernel_file(choice.file);
    return {std::move(def.kernel), choice.file, def.graphon};
}

void add_kernel_options(CLI::App* cmd, KernelChoice& choice) {
    cmd->add_option("--paper", choice.paper, "Built-in kernel")->check(CLI::IsMember({"W1", "W2"}));
    cmd->add_option("--kernel", choice.file, "Kernel definition JSON file");
}

void emit(const json& doc) { std::cout << doc.dump(2) << '\n'; }

fs::path ensure_dir(const std::string& dir) {
    fs::path out = dir.empty() ? fs::path(".") : fs::path(dir);
    std::error_code ec;
    fs::create_directories(out, ec);
    if (!fs::is_directory(out)) {
        throw gspec::ConfigError("output directory " + out.string() + " is not writable");
    }
    return out;
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw gspec::Error("cannot write " + path.string());
    }
    return out;
}

int cmd_kernel_info(const KernelChoice& choice, bool clamp) {
    const auto resolved = resolve_kernel(choice);
    const auto& kernel = resolved.kernel;
    const gspec::GraphonView view(kernel, clamp ? gspec::RangeMode::clamp : gspec::RangeMode::strict);
    const auto report = gspec::validate_assumptions(kernel);

    json doc{{"kernel", gspec::kernel_to_json(kernel, resolved.graphon)},
             {"lambda1", kernel.lambda1()},
             {"eigenvalues", kernel.eigenvalues()},
             {"spectral_gap", kernel.spectral_gap()},
             {"degenerate", gspec::is_degenerate(kernel)},
             {"constant_degree", gspec::has_constant_degree(kernel)},
             {"validation", gspec::validation_to_json(report)}};
    json bounds = json::array();
    for (const auto& b : gspec::eigenfunction_bounds(kernel)) {
        bounds.push_back({{"eigenvalue", b.eigenvalue}, {"sup_abs", b.sup_abs}, {"bound", b.bound}, {"ok", b.ok}});
    }
    doc["eigenfunction_bounds"] = bounds;
    json warnings = json::array();
    if (resolved.graphon) {
        doc["graphon"] = {{"grid_min", view.grid_min()}, {"grid_max", view.grid_max()},
                          {"in_range", view.grid_in_range()}};
        if (!view.grid_in_range()) {
            warnings.push_back("graphon-range: values span [" + std::to_string(view.grid_min()) + ", " +
                               std::to_string(view.grid_max()) + "], outside [0,1]");
        }
    }
    if (!report.unit_bounded) {
        warnings.push_back("kernel exceeds |K| <= 1 on the validation grid");
    }
    doc["warnings"] = warnings;
    for (const auto& w : warnings) {
        std::cerr << "warning: " << w.get<std::string>() << '\n';
    }
    if (report.passed()) {
        doc["kernel_limit_law"] = {
            {"zeroed", gspec::law_to_json(gspec::kernel_limit_law(kernel, gspec::DiagonalMode::zeroed))},
            {"included", gspec::law_to_json(gspec::kernel_limit_law(kernel, gspec::DiagonalMode::included))}};
        if (resolved.graphon && (clamp || view.grid_in_range())) {
            doc["graph_limit_law"] = gspec::law_to_json(gspec::graph_limit_law(view));
        }
    }
    emit(doc);
    if (!report.passed()) {
        std::cerr << "kernel fails the limit-theorem assumptions\n";
        return kAssumption;
    }
    return kOk;
}

int cmd_spectrum(const KernelChoice& choice, const std::string& matrix_file, std::size_t grid, std::size_t k,
                 bool exact) {
    if (!matrix_file.empty()) {
        const auto matrix = gspec::load_matrix(matrix_file);
        const auto pairs = gspec::top_k_eigen(matrix, k);
        auto doc = gspec::eigenpairs_to_json(
            pairs, matrix.n() <= gspec::SolverOptions{}.dense_crossover ? "dense" : "lanczos");
        doc["dimension"] = matrix.n();
        emit(doc);
        return kOk;
    }
    const auto resolved = resolve_kernel(choice);
    emit(gspec::spectrum_to_json(exact ? gspec::exact_spectrum(resolved.kernel)
                                       : gspec::nystrom_spectrum(resolved.kernel, grid, k)));
    return kOk;
}

gspec::ExperimentConfig config_from_flags(const KernelChoice& choice, const std::string& mode, std::size_t n,
                                          std::uint64_t seed, bool clamp) {
    auto resolved = resolve_kernel(choice);
    gspec::ExperimentConfig config{std::move(resolved.kernel), resolved.label};
    config.mode = gspec::parse_sampling_mode(mode);
    config.n = n;
    config.master_seed = seed;
    config.clamp = clamp;
    return config;
}

int cmd_sample(const gspec::ExperimentConfig& config, const std::string& out_file) {
    if (config.n < 2) {
        throw gspec::ConfigError("--n must be at least 2");
    }
    if (out_file.empty()) {
        throw gspec::ConfigError("sample needs --out FILE (.csv for text, anything else for GSPM1 binary)");
    }
    const auto matrix = gspec::replication_matrix(config, config.master_seed);
    const fs::path path(out_file);
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    gspec::save_matrix(matrix, path);
    emit({{"file", path.string()},
          {"n", matrix.n()},
          {"mode", gspec::to_string(config.mode)},
          {"seed", config.master_seed},
          {"format", path.extension() == ".csv" ? "csv" : "GSPM1"},
          {"clipped_fraction", matrix.clipped_fraction()}});
    return kOk;
}

int cmd_limit(const gspec::ExperimentConfig& config, std::size_t count, const std::string& out_dir) {
    if (count == 0) {
        throw gspec::ConfigError("--limit-samples must be positive");
    }
    const auto law = gspec::limit_law_for_mode(config.kernel, config.mode, config.range_mode());
    const auto samples = gspec::sample_limit_law(law.law, count, config.master_seed);
    const fs::path dir = ensure_dir(out_dir);
    {
        auto out = open_out(dir / "limit_samples.csv");
        char buf[40];
        out << "sample\n";
        for (double v : samples) {
            std::snprintf(buf, sizeof buf, "%.17g\n", v);
            out << buf;
        }
    }
    json law_doc = gspec::law_to_json(law);
    law_doc["kernel"] = config.kernel_label;
    law_doc["mode"] = gspec::to_string(config.mode);
    law_doc["count"] = count;
    law_doc["seed"] = config.master_seed;
    open_out(dir / "limit_law.json") << law_doc.dump(2) << '\n';
    const auto moments = gspec::sample_moments(samples);
    law_doc["samples_file"] = (dir / "limit_samples.csv").string();
    law_doc["sample_moments"] = {{"mean", moments.mean}, {"variance", moments.variance}};
    emit(law_doc);
    return kOk;
}

int cmd_experiment(const gspec::ExperimentConfig& config, unsigned workers, const std::string& out_dir) {
    const fs::path dir = ensure_dir(out_dir);
    gspec::ExperimentRun run = [&] {
        try {
            return gspec::run_experiment(config, workers);
        } catch (const gspec::ReplicationError&) {
            throw;
        } catch (const gspec::GraphonRangeError&) {
            throw;
        } catch (const gspec::InvalidKernelError&) {
            throw;
        } catch (const gspec::Error& e) {
            // Anything raised before the first replication is a config problem.
            throw gspec::ConfigError(e.what());
        }
    }();
    const auto report = gspec::compare(run, run.law.law, gspec::limit_seed(config.master_seed));

    {
        auto out = open_out(dir / "run.csv");
        gspec::write_run_csv(run, out);
    }
    json cmp = gspec::comparison_to_json(report);
    cmp["config"] = gspec::config_to_json(config);
    cmp["law"]["description"] = gspec::law_to_json(run.law);
    open_out(dir / "comparison.json") << cmp.dump(2) << '\n';
    {
        auto out = open_out(dir / "histogram_empirical.csv");
        gspec::write_histogram_csv(report.histogram, false, out);
    }
    {
        auto out = open_out(dir / "histogram_limit.csv");
        gspec::write_histogram_csv(report.histogram, true, out);
    }
    {
        auto out = open_out(dir / "histogram.svg");
        gspec::write_histogram_svg(report.histogram,
                                   config.kernel_label + ", " + std::string(gspec::to_string(config.mode)) +
                                       ", n=" + std::to_string(config.n),
                                   out);
    }
    emit({{"ks_distance", report.ks_distance},
          {"ks_threshold", report.ks_threshold},
          {"empirical", {{"mean", report.empirical.mean}, {"variance", report.empirical.variance}}},
          {"law", {{"mean", report.law_mean}, {"variance", report.law_variance}}},
          {"wall_seconds", run.wall_seconds},
          {"out", dir.string()},
          {"passed", report.passed()}});
    std::cerr << "KS " << report.ks_distance << " (threshold " << report.ks_threshold << "), empirical mean "
              << report.empirical.mean << " var " << report.empirical.variance << ", law mean " << report.law_mean
              << " var " << report.law_variance << '\n';
    return report.passed() ? kOk : kCompareFail;
}

int cmd_validate(const KernelChoice& choice, std::size_t n, std::size_t seeds, std::uint64_t seed) {
    const auto resolved = resolve_kernel(choice);
    const auto report = gspec::validate_assumptions(resolved.kernel);
    bool ok = report.passed();
    json bounds = json::array();
    for (const auto& b : gspec::eigenfunction_bounds(resolved.kernel)) {
        bounds.push_back({{"eigenvalue", b.eigenvalue}, {"sup_abs", b.sup_abs}, {"bound", b.bound}, {"ok", b.ok}});
        ok = ok && b.ok;
    }
    const double limit = std::log(static_cast<double>(n)) / std::sqrt(static_cast<double>(n));
    json order = json::array();
    for (std::size_t s = 0; s < seeds; ++s) {
        const double dev = gspec::max_order_statistic_deviation(gspec::sample_uniform(n, seed + s));
        order.push_back({{"seed", seed + s}, {"max_deviation", dev}, {"ok", dev <= limit}});
        ok = ok && dev <= limit;
    }
    emit({{"validation", gspec::validation_to_json(report)},
          {"eigenfunction_bounds", bounds},
          {"order_statistics", {{"n", n}, {"limit", limit}, {"runs", order}}},
          {"passed", ok}});
    return ok ? kOk : kAssumption;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Extreme-eigenvalue statistics of random kernel matrices and graphon graphs"};
    app.require_subcommand(1);

    KernelChoice choice;
    std::string mode = "kernel-zeroed";
    std::string out;
    std::string config_file;
    std::string matrix_file;
    std::size_t n = 100;
    std::size_t reps = 0;
    std::size_t limit_samples = gspec::kDefaultLimitSamples;
    std::size_t grid = 2000;
    std::size_t k = 1;
    std::size_t seeds = 20;
    std::size_t validate_n = 10000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    bool clamp = false;
    bool exact = false;

    auto* info = app.add_subcommand("kernel-info", "Validate a kernel and describe its limit laws");
    add_kernel_options(info, choice);
    info->add_flag("--clamp", clamp, "Treat the graphon in clamp mode");

    auto* spectrum = app.add_subcommand("spectrum", "Nystrom or exact kernel spectrum, or top-k of a matrix file");
    add_kernel_options(spectrum, choice);
    spectrum->add_option("--matrix", matrix_file, "Matrix file (.csv or GSPM1)");
    spectrum->add_option("--grid", grid, "Nystrom grid size");
    spectrum->add_option("--k", k, "Number of eigenvalues");
    spectrum->add_flag("--exact", exact, "Report the stored spectrum");

    auto* sample = app.add_subcommand("sample", "Sample one kernel, probability or adjacency matrix");
    add_kernel_options(sample, choice);
    sample->add_option("--n", n, "Matrix size");
    sample->add_option("--seed", seed, "Seed");
    sample->add_option("--mode", mode, "kernel-zeroed | kernel-diag | graph");
    sample->add_flag("--clamp", clamp, "Clip graphon values into [0,1]");
    sample->add_option("--out", out, "Output file");

    auto* limit = app.add_subcommand("limit", "Draw samples from a limit law");
    add_kernel_options(limit, choice);
    limit->add_option("--mode", mode, "kernel-zeroed | kernel-diag | graph");
    limit->add_option("--limit-samples,--count", limit_samples, "Number of draws");
    limit->add_option("--seed", seed, "Seed");
    limit->add_flag("--clamp", clamp, "Clip graphon values into [0,1]");
    limit->add_option("--out", out, "Output directory");

    auto* experiment = app.add_subcommand("experiment", "Monte Carlo run compared with the limit law");
    experiment->add_option("config,--config", config_file, "Experiment config JSON");
    add_kernel_options(experiment, choice);
    auto* n_opt = experiment->add_option("--n", n, "Matrix size");
    auto* reps_opt = experiment->add_option("--reps", reps, "Replications");
    auto* seed_opt = experiment->add_option("--seed", seed, "Master seed");
    auto* limit_opt = experiment->add_option("--limit-samples", limit_samples, "Limit-law draws");
    auto* mode_opt = experiment->add_option("--mode", mode, "kernel-zeroed | kernel-diag | graph");
    auto* clamp_opt = experiment->add_flag("--clamp", clamp, "Clip graphon values into [0,1]");
    experiment->add_option("--out", out, "Output directory");
    experiment->add_option("--workers", workers, "Worker threads");

    auto* validate = app.add_subcommand("validate", "Kernel checks plus order-statistic concentration");
    add_kernel_options(validate, choice);
    validate->add_option("--n", validate_n, "Sample size for order statistics");
    validate->add_option("--seeds", seeds, "Number of seeds");
    validate->add_option("--seed", seed, "First seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (info->parsed()) {
            return cmd_kernel_info(choice, clamp);
        }
        if (spectrum->parsed()) {
            return cmd_spectrum(choice, matrix_file, grid, k, exact);
        }
        if (sample->parsed()) {
            return cmd_sample(config_from_flags(choice, mode, n, seed, clamp), out);
        }
        if (limit->parsed()) {
            return cmd_limit(config_from_flags(choice, mode, n < 2 ? 2 : n, seed, clamp), limit_samples, out);
        }
        if (experiment->parsed()) {
            std::optional<gspec::ExperimentConfig> config;
            if (!config_file.empty()) {
                config.emplace(gspec::load_experiment_config(config_file));
                if (*n_opt) config->n = n;
                if (*seed_opt) config->master_seed = seed;
                if (*mode_opt) config->mode = gspec::parse_sampling_mode(mode);
                if (*clamp_opt) config->clamp = clamp;
            } else {
                config.emplace(config_from_flags(choice, mode, n, seed, clamp));
                if (!*reps_opt) reps = 500;
            }
            if (*reps_opt || config_file.empty()) config->replications = reps;
            if (*limit_opt) config->limit_samples = limit_samples;
            config->validate();
            return cmd_experiment(*config, workers, out);
        }
        if (validate->parsed()) {
            return cmd_validate(choice, validate_n, seeds, seed);
        }
    } catch (const gspec::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const gspec::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const gspec::InvalidKernelError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kAssumption;
    } catch (const gspec::GraphonRangeError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kAssumption;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntime;
    }
    return kUsage;
}
