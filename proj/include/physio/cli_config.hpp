#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "physio/eval.hpp"

namespace physio {

// Plain key=value run configuration ('#' starts a comment). Unknown keys are
// rejected; every value is validated against the module preconditions when the
// file is loaded. Command-line flags override file values, and the effective
// configuration is echoed into the output directory.
struct RunConfig {
    std::string data_dir;
    std::string output_dir = "out";
    std::optional<double> fs_override;

    std::vector<int> windows = {3, 5, 7, 10};
    std::vector<ComparisonTask> tasks{kAllTasks.begin(), kAllTasks.end()};
    std::vector<ModelKind> models{kAllModels.begin(), kAllModels.end()};
    std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    std::uint64_t master_seed = 42;

    double baseline_guard_s = 60.0;
    double notch_q = 30.0;
    bool ppg_extra_hp = false;
    bool assume_preprocessed = false;

    int workers = 0;  // 0 = all cores
    int n_boot = 10000;

    // grid overrides; empty means library defaults
    std::vector<double> svm_c;
    std::vector<std::string> svm_kernels;  // "linear", "rbf"
    std::vector<double> svm_gamma;
    std::vector<int> gbt_rounds;
    std::vector<double> gbt_eta;
    std::vector<int> gbt_depth;
    std::vector<double> gbt_lambda;

    // synth generator
    int synth_n = 17;
    std::uint64_t synth_seed = 7;
    double synth_fs = 250.0;
    double synth_duration_s = 420.0;
    double synth_onset_s = 300.0;
    double synth_separability = 1.0;

    void validate() const;  // throws ConfigError
    ParamGrids grids() const;
    SweepConfig sweep_config() const;
};

RunConfig parse_run_config(const std::string& text);
// Tries each "key=value" assignment (used for flag overrides).
void apply_config_entry(RunConfig& config, const std::string& key, const std::string& value);
// Canonical echo, parseable by parse_run_config.
std::string render_run_config(const RunConfig& config);

}  // namespace physio
