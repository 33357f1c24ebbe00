#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "physio/core.hpp"
#include "physio/epoch.hpp"
#include "physio/matrix.hpp"
#include "physio/models.hpp"

namespace physio {

// ---------------------------------------------------------------------------
// Tasks, sources, model kinds
// ---------------------------------------------------------------------------

enum class ComparisonTask : int {
    StartleVsSurprise = 0,
    StartleVsBaseline = 1,
    SurpriseVsBaseline = 2,
    ThreeClass = 3,
};

inline constexpr std::array<ComparisonTask, 4> kAllTasks = {
    ComparisonTask::StartleVsSurprise, ComparisonTask::StartleVsBaseline,
    ComparisonTask::SurpriseVsBaseline, ComparisonTask::ThreeClass};

const char* task_name(ComparisonTask task);  // "startle-vs-surprise", ...
ComparisonTask task_from_name(const std::string& name);
std::vector<ClassLabel> task_classes(ComparisonTask task);
double chance_level(ComparisonTask task);  // 0.5 for pairs, 1/3 for three-class

enum class SignalSource : int {
    Ecg = 0,
    Eda = 1,
    Ppg = 2,
    Resp = 3,
    EarlyFusion = 4,
    LateFusion = 5,
};

inline constexpr std::array<SignalSource, 6> kAllSources = {
    SignalSource::Ecg,  SignalSource::Eda,         SignalSource::Ppg,
    SignalSource::Resp, SignalSource::EarlyFusion, SignalSource::LateFusion};

const char* source_name(SignalSource source);  // "ecg", ..., "early_fusion", "late_fusion"
SignalSource source_from_name(const std::string& name);

enum class ModelKind : int { Svm = 0, Gnb = 1, Gbt = 2 };

inline constexpr std::array<ModelKind, 3> kAllModels = {ModelKind::Svm, ModelKind::Gnb,
                                                        ModelKind::Gbt};

const char* model_kind_name(ModelKind kind);  // "svm", "gnb", "gbt"
ModelKind model_kind_from_name(const std::string& name);

// ---------------------------------------------------------------------------
// Hyperparameters and grids
// ---------------------------------------------------------------------------

struct ModelParams {
    ModelKind kind = ModelKind::Gnb;
    // svm
    double svm_c = 1.0;
    KernelSpec kernel;
    // gbt
    GbtParams gbt;

    std::string describe() const;  // e.g. "svm c=10 rbf gamma=0.1"

    bool operator==(const ModelParams&) const = default;
};

// Ordered grids; earlier entries win ties during grid search.
struct ParamGrids {
    std::vector<ModelParams> svm;
    std::vector<ModelParams> gnb;  // single entry, no hyperparameters
    std::vector<ModelParams> gbt;

    static ParamGrids defaults();
    const std::vector<ModelParams>& for_kind(ModelKind kind) const;
};

// ---------------------------------------------------------------------------
// Feature datasets
// ---------------------------------------------------------------------------

// One epoch's features in every form a cell might need.
struct SampleFeatures {
    std::array<FeatureVector, kNumChannels> per_channel;
    FeatureVector fused;  // 20 values, fixed channel order
    ClassLabel label = ClassLabel::Baseline;
    std::string participant_id;
};

using FeatureDataset = std::vector<SampleFeatures>;

FeatureDataset featurize_dataset(const std::vector<LabeledEpoch>& epochs);

// Subsamples each class down to the smallest class count, keeping the lowest
// participant ids; this is how the oversampled Baseline is brought back to
// parity.
FeatureDataset balance_classes(const FeatureDataset& dataset);

FeatureDataset filter_task(const FeatureDataset& dataset, ComparisonTask task);

// Matrix + labels for one source (LateFusion uses one matrix per modality).
Matrix feature_matrix(const FeatureDataset& dataset, SignalSource source);
Matrix feature_matrix(const FeatureDataset& dataset, ChannelKind modality);
std::vector<ClassLabel> dataset_labels(const FeatureDataset& dataset);

// ---------------------------------------------------------------------------
// Splitting
// ---------------------------------------------------------------------------

struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

// Stratified 80:20 split: per class, round(n * (1 - ratio)) test samples
// (at least 1). Disjoint, exhaustive, deterministic per seed. Every class
// needs >= 5 samples.
SplitIndices split_train_test(const std::vector<ClassLabel>& y, double ratio,
                              std::uint64_t seed);

// Stratified k folds over the given labels; returns (fit, validation) index
// pairs. Validation sets partition the input; per-class fold sizes differ by
// at most one.
std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> kfold(
    const std::vector<ClassLabel>& y, int k, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Pipelines and grid search
// ---------------------------------------------------------------------------

// Test instrumentation: observes every standardizer/model fit and every
// train/test split the harness makes. Install only with workers = 1.
struct EvalHooks {
    std::function<void(const Matrix& X)> on_fit;
    std::function<void(const struct CellKey& key, std::uint64_t config_seed,
                       const SplitIndices& split)>
        on_split;
};

// Standardizer (SVM, GNB only; trees are scale-invariant) + classifier.
class Pipeline {
public:
    explicit Pipeline(ModelParams params) : params_(std::move(params)) {}

    void fit(const Matrix& X, const std::vector<ClassLabel>& y,
             const EvalHooks* hooks = nullptr, std::uint64_t svm_seed = 0x5eed);
    Prediction predict(std::span<const double> x) const;
    const ModelParams& params() const { return params_; }

private:
    ModelParams params_;
    std::optional<Standardizer> scaler_;
    std::variant<std::monostate, GnbModel, SvmModel, GbtModel> model_;
};

// Mean validation accuracy over stratified k-fold CV for every grid entry;
// returns the best entry (ties to the earlier one).
ModelParams grid_search(ModelKind kind, const std::vector<ModelParams>& grid, const Matrix& X,
                        const std::vector<ClassLabel>& y, int k, std::uint64_t seed,
                        const EvalHooks* hooks = nullptr);

// Percentile bootstrap CI for the mean of `values` (0/1 correctness).
std::pair<double, double> bootstrap_ci(const std::vector<double>& values, int n_boot = 10000,
                                       double alpha = 0.05, std::uint64_t seed = 0x0b00);

// ---------------------------------------------------------------------------
// The experiment sweep
// ---------------------------------------------------------------------------

struct CellKey {
    ComparisonTask task;
    int window_s;
    SignalSource source;
    ModelKind model;

    bool operator==(const CellKey&) const = default;
};

struct CellResult {
    CellKey key;
    double mean_accuracy = 0.0;  // mean of per-seed test accuracies
    double ci_low = 0.0;         // bootstrap over pooled per-sample correctness
    double ci_high = 0.0;
    std::vector<std::vector<int>> confusion;  // pooled; rows true, cols predicted
    std::vector<double> per_seed_accuracy;
    std::string chosen_params;  // most frequent choice across seeds
    int seed_count = 0;
};

struct SweepConfig {
    std::vector<int> windows = {3, 5, 7, 10};
    std::vector<ComparisonTask> tasks{kAllTasks.begin(), kAllTasks.end()};
    std::vector<ModelKind> models{kAllModels.begin(), kAllModels.end()};
    std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    double train_ratio = 0.8;
    int cv_folds = 5;
    int n_boot = 10000;
    double ci_alpha = 0.05;
    std::uint64_t master_seed = 42;
    ParamGrids grids = ParamGrids::defaults();
    int workers = 0;  // 0 = hardware concurrency
};

struct ExperimentReport {
    SweepConfig config;
    std::map<std::string, std::string> metadata;  // declared conventions, dataset notes
    std::vector<CellResult> cells;  // task-major, then window, source, model
};

// Seed derivation helpers; public so tests can reproduce the harness's
// internal streams exactly.
std::uint64_t eval_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0,
                        std::uint64_t c = 0, std::uint64_t d = 0);
// The split for (task, window) at one config seed is shared by every
// source/model so cells stay comparable.
std::uint64_t split_seed_for(std::uint64_t config_seed, ComparisonTask task, int window_s);

// Runs the full grid over the given per-window balanced datasets. All-or-
// nothing: any cell failure aborts the sweep with the underlying error.
ExperimentReport run_experiment(const std::map<int, FeatureDataset>& datasets,
                                const SweepConfig& config, const EvalHooks* hooks = nullptr);

// Glue from pre-processed recordings to balanced per-window feature datasets.
std::map<int, FeatureDataset> build_window_datasets(const std::vector<RawRecording>& recordings,
                                                    const std::vector<int>& windows,
                                                    double baseline_guard_s);

// Report serialization. The CSV has one row per cell:
//   task,window_s,source,model,mean_acc,ci_low,ci_high,seed_count
std::string report_to_csv(const ExperimentReport& report);
std::string report_to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const std::string& text);

}  // namespace physio
