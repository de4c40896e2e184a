#include "gspec/report_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>

#include "gspec/error.hpp"
#include "gspec/kernel_io.hpp"

namespace gspec {

using nlohmann::json;

namespace {

json chisq_to_json(const WeightedChiSquaredLaw& law) {
    return json{{"weights", law.weights}, {"shift", law.shift}, {"centered", law.centered}};
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

template <typename T>
T require_field(const json& doc, const char* key, T fallback) {
    if (!doc.contains(key)) {
        return fallback;
    }
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field '") + key + "' has the wrong type: " + e.what());
    }
}

std::size_t require_count(const json& doc, const char* key, std::size_t fallback) {
    if (!doc.contains(key)) {
        return fallback;
    }
    const json& v = doc.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw ConfigError(std::string("config field '") + key + "' must be a non-negative integer");
    }
    return v.get<std::size_t>();
}

}  // namespace

json law_to_json(const LawWithStatistic& law) {
    json out{{"variant", law_variant_name(law.law)}, {"statistic", to_string(law.statistic.centering)}};
    std::visit(
        [&](const auto& l) {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, GaussianLaw>) {
                out["gaussian"] = json{{"mean", l.mean}, {"variance", l.variance}};
            } else if constexpr (std::is_same_v<T, WeightedChiSquaredLaw>) {
                out["weighted_chisq"] = chisq_to_json(l);
            } else {
                out["weighted_chisq"] = chisq_to_json(l.chisq);
                out["gaussian"] = json{{"mean", l.alpha}, {"variance", l.sigma2}};
            }
        },
        law.law);
    const auto [mean, variance] = law_moments(law.law);
    out["moments"] = json{{"mean", mean}, {"variance", variance}};
    return out;
}

json validation_to_json(const ValidationReport& r) {
    json out{{"sup_abs", r.sup_abs},
             {"sup_bound", r.sup_bound},
             {"sup_ok", r.sup_ok},
             {"lipschitz_estimate", r.lipschitz_estimate},
             {"lipschitz_bound", r.lipschitz_bound},
             {"lipschitz_ok", r.lipschitz_ok},
             {"spectral_gap", r.spectral_gap},
             {"gap_ok", r.gap_ok},
             {"orthonormality_defect", r.orthonormality_defect},
             {"orthonormal_ok", r.orthonormal_ok},
             {"grid_min", r.grid_min},
             {"grid_max", r.grid_max},
             {"unit_bounded", r.unit_bounded},
             {"passed", r.passed()}};
    out["range_ok"] = r.range_ok ? json(*r.range_ok) : json(nullptr);
    return out;
}

json eigenpairs_to_json(const std::vector<EigenPair>& pairs, std::string_view method) {
    json values = json::array();
    json residuals = json::array();
    for (const auto& p : pairs) {
        values.push_back(p.value);
        residuals.push_back(p.residual);
    }
    return json{{"eigenvalues", values}, {"residuals", residuals}, {"method", method}, {"n", pairs.size()}};
}

json spectrum_to_json(const SpectrumEstimate& estimate) {
    return json{{"eigenvalues", estimate.eigenvalues},
                {"residuals", json::array()},
                {"method", to_string(estimate.method)},
                {"n", estimate.eigenvalues.size()},
                {"grid_size", estimate.grid_size}};
}

json comparison_to_json(const ComparisonReport& r) {
    return json{{"ks_distance", r.ks_distance},
                {"ks_threshold", r.ks_threshold},
                {"ks_pass", r.ks_pass},
                {"empirical", {{"mean", r.empirical.mean}, {"variance", r.empirical.variance}}},
                {"limit_sample", {{"mean", r.limit_sample.mean}, {"variance", r.limit_sample.variance}}},
                {"law", {{"mean", r.law_mean}, {"variance", r.law_variance}}},
                {"limit_samples", r.limit_samples},
                {"histogram",
                 {{"edges", r.histogram.edges}, {"empirical", r.histogram.empirical}, {"limit", r.histogram.limit}}},
                {"passed", r.passed()}};
}

json config_to_json(const ExperimentConfig& c) {
    return json{{"kernel", c.kernel_label},
                {"mode", to_string(c.mode)},
                {"n", c.n},
                {"replications", c.replications},
                {"master_seed", c.master_seed},
                {"limit_samples", c.limit_samples},
                {"bins", c.bins},
                {"clamp", c.clamp},
                {"ks_threshold", c.ks_threshold}};
}

ExperimentConfig experiment_config_from_json(const json& doc, const std::filesystem::path& base_dir) {
    if (!doc.is_object()) {
        throw ConfigError("experiment config must be a JSON object");
    }
    const bool has_name = doc.contains("kernel");
    const bool has_file = doc.contains("kernel_file");
    if (has_name == has_file) {
        throw ConfigError("experiment config needs exactly one of 'kernel' or 'kernel_file'");
    }
    std::optional<SpectralKernel> kernel;
    std::string label;
    if (has_name) {
        label = require_field<std::string>(doc, "kernel", "");
        kernel.emplace(make_paper_kernel(parse_paper_kernel(label)));
    } else {
        std::filesystem::path file = require_field<std::string>(doc, "kernel_file", "");
        if (file.is_relative()) {
            file = base_dir / file;
        }
        kernel.emplace(load_kernel_file(file).kernel);
        label = file.string();
    }
    ExperimentConfig config{*kernel, label};
    config.mode = parse_sampling_mode(require_field<std::string>(doc, "mode", "kernel-zeroed"));
    config.n = require_count(doc, "n", config.n);
    config.replications = require_count(doc, "replications", config.replications);
    config.master_seed = require_field<std::uint64_t>(doc, "master_seed", config.master_seed);
    config.limit_samples = require_count(doc, "limit_samples", config.limit_samples);
    config.bins = require_count(doc, "bins", config.bins);
    config.clamp = require_field<bool>(doc, "clamp", config.clamp);
    config.ks_threshold = require_field<double>(doc, "ks_threshold", config.ks_threshold);
    config.validate();
    return config;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open config " + path.string());
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError("malformed config " + path.string() + ": " + e.what());
    }
    return experiment_config_from_json(doc, path.parent_path());
}

void write_run_csv(const ExperimentRun& run, std::ostream& out) {
    out << "rep,seed,lambda1_raw,statistic\n";
    char buf[96];
    for (std::size_t r = 0; r < run.statistics.size(); ++r) {
        std::snprintf(buf, sizeof buf, "%zu,%llu,%.17g,%.17g\n", r,
                      static_cast<unsigned long long>(run.seeds[r]), run.lambda1_raw[r], run.statistics[r]);
        out << buf;
    }
}

void write_histogram_csv(const Histogram& hist, bool limit_source, std::ostream& out) {
    out << "bin_center,count\n";
    const auto centers = hist.centers();
    const auto& counts = limit_source ? hist.limit : hist.empirical;
    char buf[64];
    for (std::size_t k = 0; k < centers.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.10g,%zu\n", centers[k], counts[k]);
        out << buf;
    }
}

void write_histogram_svg(const Histogram& hist, std::string_view title, std::ostream& out) {
    constexpr double width = 640, height = 400, left = 60, right = 20, top = 40, bottom = 50;
    const std::size_t bins = hist.centers().size();
    const double lo = hist.edges.front();
    const double hi = hist.edges.back();
    const double bin_width = (hi - lo) / static_cast<double>(bins);

    auto densities = [&](const std::vector<std::size_t>& counts) {
        std::size_t total = 0;
        for (auto c : counts) total += c;
        std::vector<double> d(counts.size(), 0.0);
        for (std::size_t k = 0; k < counts.size(); ++k) {
            d[k] = total ? static_cast<double>(counts[k]) / (static_cast<double>(total) * bin_width) : 0.0;
        }
        return d;
    };
    const auto emp = densities(hist.empirical);
    const auto lim = densities(hist.limit);
    double peak = 0.0;
    for (double v : emp) peak = std::max(peak, v);
    for (double v : lim) peak = std::max(peak, v);
    if (peak <= 0.0) peak = 1.0;

    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;
    auto px = [&](double x) { return left + (x - lo) / (hi - lo) * plot_w; };
    auto py = [&](double d) { return top + plot_h - d / peak * plot_h; };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"15\">"
        << title << "</text>\n";
    auto bars = [&](const std::vector<double>& d, const char* colour) {
        for (std::size_t k = 0; k < bins; ++k) {
            const double x0 = px(hist.edges[k]);
            const double x1 = px(hist.edges[k + 1]);
            const double y = py(d[k]);
            out << "<rect x=\"" << x0 << "\" y=\"" << y << "\" width=\"" << std::max(0.0, x1 - x0) << "\" height=\""
                << (top + plot_h - y) << "\" fill=\"" << colour << "\" fill-opacity=\"0.45\" stroke=\"" << colour
                << "\" stroke-width=\"0.5\"/>\n";
        }
    };
    bars(lim, "#d62728");
    bars(emp, "#1f77b4");
    // Axes and tick labels.
    out << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w << "\" y2=\""
        << top + plot_h << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + plot_h
        << "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double x = lo + (hi - lo) * t / 4.0;
        out << "<text x=\"" << px(x) << "\" y=\"" << top + plot_h + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(x) << "</text>\n";
        const double d = peak * t / 4.0;
        out << "<text x=\"" << left - 6 << "\" y=\"" << py(d) + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(d) << "</text>\n";
    }
    out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 10
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">statistic</text>\n";
    out << "<rect x=\"" << left + plot_w - 150 << "\" y=\"" << top + 6
        << "\" width=\"12\" height=\"12\" fill=\"#1f77b4\" fill-opacity=\"0.6\"/>\n";
    out << "<text x=\"" << left + plot_w - 132 << "\" y=\"" << top + 16
        << "\" font-family=\"sans-serif\" font-size=\"12\">empirical</text>\n";
    out << "<rect x=\"" << left + plot_w - 150 << "\" y=\"" << top + 24
        << "\" width=\"12\" height=\"12\" fill=\"#d62728\" fill-opacity=\"0.6\"/>\n";
    out << "<text x=\"" << left + plot_w - 132 << "\" y=\"" << top + 34
        << "\" font-family=\"sans-serif\" font-size=\"12\">limit law</text>\n";
    out << "</svg>\n";
}

}  // namespace gspec
