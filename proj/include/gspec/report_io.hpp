#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include <json.hpp>

#include "gspec/asymptotics.hpp"
#include "gspec/kernel.hpp"
#include "gspec/montecarlo.hpp"
#include "gspec/spectra.hpp"

namespace gspec {

nlohmann::json law_to_json(const LawWithStatistic& law);
nlohmann::json validation_to_json(const ValidationReport& report);
nlohmann::json eigenpairs_to_json(const std::vector<EigenPair>& pairs, std::string_view method);
nlohmann::json spectrum_to_json(const SpectrumEstimate& estimate);
nlohmann::json comparison_to_json(const ComparisonReport& report);
nlohmann::json config_to_json(const ExperimentConfig& config);

// Experiment config document:
//   {"kernel": "W1" | "kernel_file": path, "mode", "n", "replications",
//    "master_seed", "limit_samples", "bins", "clamp", "ks_threshold"}
// Relative kernel_file paths resolve against `base_dir`. Throws ConfigError
// or ParseError.
ExperimentConfig experiment_config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

// rep,seed,lambda1_raw,statistic
void write_run_csv(const ExperimentRun& run, std::ostream& out);
// bin_center,count for one source.
void write_histogram_csv(const Histogram& hist, bool limit_source, std::ostream& out);
// Two overlaid density-normalized histograms.
void write_histogram_svg(const Histogram& hist, std::string_view title, std::ostream& out);

}  // namespace gspec
