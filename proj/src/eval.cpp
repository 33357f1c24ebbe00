#include "physio/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "physio/features.hpp"
#include "physio/fusion.hpp"
#include "physio/ingest.hpp"
#include "physio/rng.hpp"

namespace physio {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Names
// ---------------------------------------------------------------------------

const char* task_name(ComparisonTask task) {
    switch (task) {
        case ComparisonTask::StartleVsSurprise: return "startle-vs-surprise";
        case ComparisonTask::StartleVsBaseline: return "startle-vs-baseline";
        case ComparisonTask::SurpriseVsBaseline: return "surprise-vs-baseline";
        case ComparisonTask::ThreeClass: return "three-class";
    }
    return "?";
}

ComparisonTask task_from_name(const std::string& name) {
    for (ComparisonTask t : kAllTasks) {
        if (name == task_name(t)) return t;
    }
    throw Error(ErrorCode::ConfigError, "unknown task '" + name + "'");
}

std::vector<ClassLabel> task_classes(ComparisonTask task) {
    switch (task) {
        case ComparisonTask::StartleVsSurprise:
            return {ClassLabel::Startle, ClassLabel::Surprise};
        case ComparisonTask::StartleVsBaseline:
            return {ClassLabel::Startle, ClassLabel::Baseline};
        case ComparisonTask::SurpriseVsBaseline:
            return {ClassLabel::Surprise, ClassLabel::Baseline};
        case ComparisonTask::ThreeClass:
            return {ClassLabel::Startle, ClassLabel::Surprise, ClassLabel::Baseline};
    }
    return {};
}

double chance_level(ComparisonTask task) {
    return task == ComparisonTask::ThreeClass ? 1.0 / 3.0 : 0.5;
}

const char* source_name(SignalSource source) {
    switch (source) {
        case SignalSource::Ecg: return "ecg";
        case SignalSource::Eda: return "eda";
        case SignalSource::Ppg: return "ppg";
        case SignalSource::Resp: return "resp";
        case SignalSource::EarlyFusion: return "early_fusion";
        case SignalSource::LateFusion: return "late_fusion";
    }
    return "?";
}

SignalSource source_from_name(const std::string& name) {
    for (SignalSource s : kAllSources) {
        if (name == source_name(s)) return s;
    }
    throw Error(ErrorCode::ConfigError, "unknown source '" + name + "'");
}

const char* model_kind_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::Svm: return "svm";
        case ModelKind::Gnb: return "gnb";
        case ModelKind::Gbt: return "gbt";
    }
    return "?";
}

ModelKind model_kind_from_name(const std::string& name) {
    for (ModelKind m : kAllModels) {
        if (name == model_kind_name(m)) return m;
    }
    throw Error(ErrorCode::ConfigError, "unknown model '" + name + "'");
}

// ---------------------------------------------------------------------------
// Hyperparameter grids
// ---------------------------------------------------------------------------

std::string ModelParams::describe() const {
    std::ostringstream out;
    out << model_kind_name(kind);
    if (kind == ModelKind::Svm) {
        out << " c=" << format_double(svm_c);
        if (kernel.type == KernelSpec::Type::Linear) {
            out << " linear";
        } else {
            out << " rbf gamma=" << format_double(kernel.gamma);
        }
    } else if (kind == ModelKind::Gbt) {
        out << " rounds=" << gbt.n_rounds << " eta=" << format_double(gbt.learning_rate)
            << " depth=" << gbt.max_depth << " lambda=" << format_double(gbt.lambda);
    }
    return out.str();
}

ParamGrids ParamGrids::defaults() {
    ParamGrids grids;
    // SVM: linear entries first so ties prefer the simpler kernel.
    for (KernelSpec kernel :
         {KernelSpec{KernelSpec::Type::Linear, 0.0}, KernelSpec{KernelSpec::Type::Rbf, 0.01},
          KernelSpec{KernelSpec::Type::Rbf, 0.1}, KernelSpec{KernelSpec::Type::Rbf, 1.0}}) {
        for (double c : {0.1, 1.0, 10.0, 100.0}) {
            ModelParams p;
            p.kind = ModelKind::Svm;
            p.svm_c = c;
            p.kernel = kernel;
            grids.svm.push_back(p);
        }
    }
    {
        ModelParams p;
        p.kind = ModelKind::Gnb;
        grids.gnb.push_back(p);
    }
    for (int rounds : {25, 50, 100}) {
        for (double eta : {0.1, 0.3}) {
            for (int depth : {2, 3}) {
                ModelParams p;
                p.kind = ModelKind::Gbt;
                p.gbt.n_rounds = rounds;
                p.gbt.learning_rate = eta;
                p.gbt.max_depth = depth;
                p.gbt.lambda = 1.0;
                grids.gbt.push_back(p);
            }
        }
    }
    return grids;
}

const std::vector<ModelParams>& ParamGrids::for_kind(ModelKind kind) const {
    switch (kind) {
        case ModelKind::Svm: return svm;
        case ModelKind::Gnb: return gnb;
        case ModelKind::Gbt: return gbt;
    }
    return gnb;
}

// ---------------------------------------------------------------------------
// Feature datasets
// ---------------------------------------------------------------------------

FeatureDataset featurize_dataset(const std::vector<LabeledEpoch>& epochs) {
    FeatureDataset out;
    out.reserve(epochs.size());
    for (const auto& item : epochs) {
        SampleFeatures sample;
        std::vector<FeatureVector> parts;
        for (ChannelKind kind : kAllChannels) {
            sample.per_channel[static_cast<int>(kind)] = extract_features(item.epoch, {kind});
            parts.push_back(sample.per_channel[static_cast<int>(kind)]);
        }
        sample.fused = early_fuse(parts);
        sample.label = item.label;
        sample.participant_id = item.participant_id;
        out.push_back(std::move(sample));
    }
    return out;
}

FeatureDataset balance_classes(const FeatureDataset& dataset) {
    std::map<ClassLabel, std::vector<std::string>> ids_by_class;
    for (const auto& s : dataset) ids_by_class[s.label].push_back(s.participant_id);
    std::size_t min_count = dataset.size();
    for (auto& [label, ids] : ids_by_class) {
        (void)label;
        std::sort(ids.begin(), ids.end());
        min_count = std::min(min_count, ids.size());
    }
    FeatureDataset out;
    for (const auto& s : dataset) {
        const auto& ids = ids_by_class[s.label];
        const auto pos = std::lower_bound(ids.begin(), ids.end(), s.participant_id);
        if (pos != ids.end() && *pos == s.participant_id &&
            static_cast<std::size_t>(pos - ids.begin()) < min_count) {
            out.push_back(s);
        }
    }
    return out;
}

FeatureDataset filter_task(const FeatureDataset& dataset, ComparisonTask task) {
    const auto classes = task_classes(task);
    FeatureDataset out;
    for (const auto& s : dataset) {
        if (std::find(classes.begin(), classes.end(), s.label) != classes.end()) {
            out.push_back(s);
        }
    }
    return out;
}

Matrix feature_matrix(const FeatureDataset& dataset, ChannelKind modality) {
    Matrix m;
    for (const auto& s : dataset) m.push_row(s.per_channel[static_cast<int>(modality)].values);
    return m;
}

Matrix feature_matrix(const FeatureDataset& dataset, SignalSource source) {
    if (source == SignalSource::LateFusion) {
        throw Error(ErrorCode::PipelineError, "late fusion has no single feature matrix");
    }
    if (source == SignalSource::EarlyFusion) {
        Matrix m;
        for (const auto& s : dataset) m.push_row(s.fused.values);
        return m;
    }
    return feature_matrix(dataset, static_cast<ChannelKind>(static_cast<int>(source)));
}

std::vector<ClassLabel> dataset_labels(const FeatureDataset& dataset) {
    std::vector<ClassLabel> y;
    y.reserve(dataset.size());
    for (const auto& s : dataset) y.push_back(s.label);
    return y;
}

// ---------------------------------------------------------------------------
// Splits
// ---------------------------------------------------------------------------

namespace {

std::map<ClassLabel, std::vector<std::size_t>> indices_by_class(
    const std::vector<ClassLabel>& y) {
    std::map<ClassLabel, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < y.size(); ++i) by_class[y[i]].push_back(i);
    return by_class;
}

std::size_t round_half_up(double v) {
    return static_cast<std::size_t>(std::floor(v + 0.5));
}

}  // namespace

SplitIndices split_train_test(const std::vector<ClassLabel>& y, double ratio,
                              std::uint64_t seed) {
    auto by_class = indices_by_class(y);
    for (const auto& [label, idx] : by_class) {
        if (idx.size() < 5) {
            throw Error(ErrorCode::ClassTooSmall,
                        std::string("class ") + label_name(label) + " has " +
                            std::to_string(idx.size()) + " samples, needs >= 5");
        }
    }
    Rng rng(mix_seed(seed, 0x5117ULL));
    SplitIndices split;
    for (auto& [label, idx] : by_class) {
        (void)label;
        std::size_t n_test = std::max<std::size_t>(1, round_half_up(idx.size() * (1.0 - ratio)));
        rng.shuffle(idx);
        for (std::size_t i = 0; i < idx.size(); ++i) {
            (i < n_test ? split.test : split.train).push_back(idx[i]);
        }
    }
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.test.begin(), split.test.end());
    return split;
}

std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> kfold(
    const std::vector<ClassLabel>& y, int k, std::uint64_t seed) {
    if (k < 2) {
        throw Error(ErrorCode::ConfigError, "k must be >= 2");
    }
    auto by_class = indices_by_class(y);
    for (const auto& [label, idx] : by_class) {
        if (idx.size() < static_cast<std::size_t>(k)) {
            throw Error(ErrorCode::ClassSmallerThanK,
                        std::string("class ") + label_name(label) + " has " +
                            std::to_string(idx.size()) + " samples, needs >= k = " +
                            std::to_string(k));
        }
    }
    Rng rng(mix_seed(seed, 0xf01dULL));
    std::vector<std::vector<std::size_t>> val(static_cast<std::size_t>(k));
    for (auto& [label, idx] : by_class) {
        (void)label;
        rng.shuffle(idx);
        // first (n % k) folds take one extra sample of this class
        const std::size_t base = idx.size() / k;
        const std::size_t extra = idx.size() % k;
        std::size_t cursor = 0;
        for (std::size_t f = 0; f < static_cast<std::size_t>(k); ++f) {
            const std::size_t take = base + (f < extra ? 1 : 0);
            for (std::size_t i = 0; i < take; ++i) val[f].push_back(idx[cursor++]);
        }
    }
    std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> folds;
    for (auto& v : val) {
        std::sort(v.begin(), v.end());
        std::vector<std::size_t> fit;
        std::vector<bool> in_val(y.size(), false);
        for (std::size_t i : v) in_val[i] = true;
        for (std::size_t i = 0; i < y.size(); ++i) {
            if (!in_val[i]) fit.push_back(i);
        }
        folds.emplace_back(std::move(fit), std::move(v));
    }
    return folds;
}

// ---------------------------------------------------------------------------
// Pipeline, grid search, bootstrap
// ---------------------------------------------------------------------------

void Pipeline::fit(const Matrix& X, const std::vector<ClassLabel>& y, const EvalHooks* hooks,
                   std::uint64_t svm_seed) {
    if (hooks && hooks->on_fit) hooks->on_fit(X);
    if (params_.kind == ModelKind::Gbt) {
        scaler_.reset();
        model_ = train_gbt(X, y, params_.gbt);
        return;
    }
    scaler_ = fit_standardizer(X);
    const Matrix Xs = apply_standardizer(*scaler_, X);
    if (params_.kind == ModelKind::Gnb) {
        model_ = train_gnb(Xs, y);
    } else {
        SvmTrainOptions opts;
        opts.seed = svm_seed;
        model_ = train_svm_multiclass(Xs, y, params_.svm_c, params_.kernel, opts);
    }
}

Prediction Pipeline::predict(std::span<const double> x) const {
    std::vector<double> scaled;
    if (scaler_) {
        scaled = apply_standardizer(*scaler_, x);
        x = scaled;
    }
    if (std::holds_alternative<GnbModel>(model_)) {
        return predict_gnb(std::get<GnbModel>(model_), x);
    }
    if (std::holds_alternative<SvmModel>(model_)) {
        return predict_svm(std::get<SvmModel>(model_), x);
    }
    if (std::holds_alternative<GbtModel>(model_)) {
        return predict_gbt(std::get<GbtModel>(model_), x);
    }
    throw Error(ErrorCode::PipelineError, "predict called before fit");
}

ModelParams grid_search(ModelKind kind, const std::vector<ModelParams>& grid, const Matrix& X,
                        const std::vector<ClassLabel>& y, int k, std::uint64_t seed,
                        const EvalHooks* hooks) {
    if (grid.empty()) {
        throw Error(ErrorCode::EmptyGrid, "grid search needs at least one entry");
    }
    const auto folds = kfold(y, k, seed);
    double best_score = -1.0;
    std::size_t best_idx = 0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        if (grid[g].kind != kind) {
            throw Error(ErrorCode::ConfigError, "grid entry kind mismatch");
        }
        double score_sum = 0.0;
        for (std::size_t f = 0; f < folds.size(); ++f) {
            const auto& [fit_idx, val_idx] = folds[f];
            Pipeline pipe(grid[g]);
            pipe.fit(X.select_rows(fit_idx), select_items(y, fit_idx), hooks,
                     eval_seed(seed, g, f, 0x57));
            std::size_t correct = 0;
            for (std::size_t i : val_idx) {
                if (pipe.predict(X.row(i)).label == y[i]) ++correct;
            }
            score_sum += static_cast<double>(correct) / static_cast<double>(val_idx.size());
        }
        const double score = score_sum / static_cast<double>(folds.size());
        if (score > best_score) {  // strict: ties keep the earlier entry
            best_score = score;
            best_idx = g;
        }
    }
    return grid[best_idx];
}

std::pair<double, double> bootstrap_ci(const std::vector<double>& values, int n_boot,
                                       double alpha, std::uint64_t seed) {
    if (values.empty()) {
        throw Error(ErrorCode::EmptyVector, "bootstrap needs a non-empty vector");
    }
    const std::size_t n = values.size();
    Rng rng(mix_seed(seed, 0xb007ULL));
    std::vector<double> means(static_cast<std::size_t>(n_boot));
    for (auto& m : means) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum += values[rng.below(n)];
        m = sum / static_cast<double>(n);
    }
    std::sort(means.begin(), means.end());
    // nearest-rank percentiles
    auto rank = [&](double p) {
        const auto idx = static_cast<std::size_t>(
            std::max(0.0, std::ceil(p * static_cast<double>(n_boot)) - 1.0));
        return means[std::min(idx, means.size() - 1)];
    };
    return {rank(alpha / 2.0), rank(1.0 - alpha / 2.0)};
}

// ---------------------------------------------------------------------------
// The sweep
// ---------------------------------------------------------------------------

std::uint64_t eval_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b, std::uint64_t c,
                        std::uint64_t d) {
    return mix_seed(base, a + 1, b + 1, c + 1, d + 1);
}

namespace {

std::uint64_t cell_tag(const CellKey& key) {
    return (static_cast<std::uint64_t>(key.task) << 24) ^
           (static_cast<std::uint64_t>(key.window_s) << 16) ^
           (static_cast<std::uint64_t>(key.source) << 8) ^
           static_cast<std::uint64_t>(key.model);
}

std::string modal_string(const std::vector<std::string>& values) {
    std::string best;
    std::size_t best_count = 0;
    for (const auto& v : values) {
        const auto count = static_cast<std::size_t>(std::count(values.begin(), values.end(), v));
        if (count > best_count) {
            best_count = count;
            best = v;
        }
    }
    return best;
}

struct CellAccumulator {
    std::vector<double> per_seed_accuracy;
    std::vector<double> pooled_correct;
    std::vector<std::vector<int>> confusion;
    std::vector<std::string> chosen;
};

}  // namespace

std::uint64_t split_seed_for(std::uint64_t config_seed, ComparisonTask task, int window_s) {
    return eval_seed(config_seed, static_cast<std::uint64_t>(task),
                     static_cast<std::uint64_t>(window_s), 0x5b17);
}

namespace {

CellResult compute_cell(const CellKey& key, const FeatureDataset& window_dataset,
                        const SweepConfig& config, const EvalHooks* hooks) {
    const auto classes = task_classes(key.task);
    const FeatureDataset taskset = filter_task(window_dataset, key.task);
    const std::vector<ClassLabel> y = dataset_labels(taskset);
    const auto class_index = [&](ClassLabel label) {
        return static_cast<std::size_t>(std::find(classes.begin(), classes.end(), label) -
                                        classes.begin());
    };

    CellAccumulator acc;
    acc.confusion.assign(classes.size(), std::vector<int>(classes.size(), 0));

    for (std::size_t rep = 0; rep < config.seeds.size(); ++rep) {
        const std::uint64_t config_seed = config.seeds[rep];
        const SplitIndices split =
            split_train_test(y, config.train_ratio, split_seed_for(config_seed, key.task,
                                                                   key.window_s));
        if (hooks && hooks->on_split) hooks->on_split(key, config_seed, split);

        const std::vector<ClassLabel> y_train = select_items(y, split.train);
        const std::uint64_t tag = cell_tag(key);
        const std::uint64_t kfold_seed =
            eval_seed(config_seed, static_cast<std::uint64_t>(key.task),
                      static_cast<std::uint64_t>(key.window_s), 0xcf1d);

        std::size_t correct = 0;
        if (key.source != SignalSource::LateFusion) {
            const Matrix X = feature_matrix(taskset, key.source);
            const Matrix X_train = X.select_rows(split.train);
            const ModelParams best =
                grid_search(key.model, config.grids.for_kind(key.model), X_train, y_train,
                            config.cv_folds, kfold_seed, hooks);
            Pipeline pipe(best);
            pipe.fit(X_train, y_train, hooks, eval_seed(config.master_seed, tag, rep, 0xf17));
            acc.chosen.push_back(best.describe());
            for (std::size_t t : split.test) {
                const Prediction pred = pipe.predict(X.row(t));
                acc.pooled_correct.push_back(pred.label == y[t] ? 1.0 : 0.0);
                if (pred.label == y[t]) ++correct;
                ++acc.confusion[class_index(y[t])][class_index(pred.label)];
            }
        } else {
            // One classifier per modality, each with its own grid search.
            std::array<Pipeline, kNumChannels> pipes = {
                Pipeline{ModelParams{}}, Pipeline{ModelParams{}}, Pipeline{ModelParams{}},
                Pipeline{ModelParams{}}};
            std::array<Matrix, kNumChannels> X_all;
            std::string desc;
            for (ChannelKind kind : kAllChannels) {
                const int ci = static_cast<int>(kind);
                X_all[ci] = feature_matrix(taskset, kind);
                const Matrix X_train = X_all[ci].select_rows(split.train);
                const ModelParams best =
                    grid_search(key.model, config.grids.for_kind(key.model), X_train, y_train,
                                config.cv_folds, eval_seed(kfold_seed, ci), hooks);
                pipes[ci] = Pipeline(best);
                pipes[ci].fit(X_train, y_train, hooks,
                              eval_seed(config.master_seed, tag, rep, 0xf17 + ci));
                if (!desc.empty()) desc += "; ";
                desc += std::string(channel_name(kind)) + "=" + best.describe();
            }
            acc.chosen.push_back(desc);
            for (std::size_t t : split.test) {
                std::vector<Prediction> votes;
                votes.reserve(kNumChannels);
                for (int ci = 0; ci < kNumChannels; ++ci) {
                    votes.push_back(pipes[ci].predict(X_all[ci].row(t)));
                }
                const ClassLabel fused = late_fuse(votes, classes);
                acc.pooled_correct.push_back(fused == y[t] ? 1.0 : 0.0);
                if (fused == y[t]) ++correct;
                ++acc.confusion[class_index(y[t])][class_index(fused)];
            }
        }
        acc.per_seed_accuracy.push_back(static_cast<double>(correct) /
                                        static_cast<double>(split.test.size()));
    }

    CellResult result;
    result.key = key;
    result.per_seed_accuracy = acc.per_seed_accuracy;
    result.seed_count = static_cast<int>(config.seeds.size());
    // Pooled correct/total; identical to the mean of per-seed accuracies since
    // stratified test counts match across seeds, and exactly equal to
    // trace(confusion) / sum(confusion).
    double correct_total = 0.0;
    for (double v : acc.pooled_correct) correct_total += v;
    result.mean_accuracy = correct_total / static_cast<double>(acc.pooled_correct.size());
    const auto ci = bootstrap_ci(acc.pooled_correct, config.n_boot, config.ci_alpha,
                                 eval_seed(config.master_seed, cell_tag(key), 0xb0075));
    result.ci_low = ci.first;
    result.ci_high = ci.second;
    result.confusion = acc.confusion;
    result.chosen_params = modal_string(acc.chosen);
    return result;
}

}  // namespace

ExperimentReport run_experiment(const std::map<int, FeatureDataset>& datasets,
                                const SweepConfig& config, const EvalHooks* hooks) {
    if (config.seeds.empty()) {
        throw Error(ErrorCode::ConfigError, "at least one split seed is required");
    }
    std::vector<CellKey> keys;
    for (ComparisonTask task : config.tasks) {
        for (int window : config.windows) {
            if (!datasets.count(window)) {
                throw Error(ErrorCode::PipelineError,
                            "no dataset for window " + std::to_string(window) + " s");
            }
            for (SignalSource source : kAllSources) {
                for (ModelKind model : config.models) {
                    keys.push_back(CellKey{task, window, source, model});
                }
            }
        }
    }

    std::vector<CellResult> results(keys.size());
    unsigned workers = config.workers > 0 ? static_cast<unsigned>(config.workers)
                                          : std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    if (hooks) workers = 1;  // observers are not synchronized
    workers = std::min<unsigned>(workers, static_cast<unsigned>(keys.size()));
    if (workers == 0) workers = 1;

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&]() {
        while (!failed.load()) {
            const std::size_t i = next.fetch_add(1);
            if (i >= keys.size()) break;
            try {
                results[i] = compute_cell(keys[i], datasets.at(keys[i].window_s), config, hooks);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                failed.store(true);
                break;
            }
        }
    };

    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    ExperimentReport report;
    report.config = config;
    report.metadata["mean_accuracy"] =
        "mean of per-seed test accuracies over the configured split seeds";
    report.metadata["confidence_interval"] =
        "95% percentile bootstrap over per-test-sample correctness pooled across seeds";
    report.metadata["split"] = "stratified, n_test = round(0.2 n) per class, min 1";
    report.cells = std::move(results);
    return report;
}

std::map<int, FeatureDataset> build_window_datasets(const std::vector<RawRecording>& recordings,
                                                    const std::vector<int>& windows,
                                                    double baseline_guard_s) {
    std::map<int, FeatureDataset> datasets;
    for (int window : windows) {
        EpochingConfig cfg;
        cfg.window_s = window;
        cfg.baseline_guard_s = baseline_guard_s;
        datasets[window] = balance_classes(featurize_dataset(build_dataset(recordings, cfg)));
    }
    return datasets;
}

// ---------------------------------------------------------------------------
// Report serialization
// ---------------------------------------------------------------------------

std::string report_to_csv(const ExperimentReport& report) {
    std::string out = "task,window_s,source,model,mean_acc,ci_low,ci_high,seed_count\n";
    for (const auto& cell : report.cells) {
        out += task_name(cell.key.task);
        out += ',';
        out += std::to_string(cell.key.window_s);
        out += ',';
        out += source_name(cell.key.source);
        out += ',';
        out += model_kind_name(cell.key.model);
        out += ',';
        out += format_double(cell.mean_accuracy);
        out += ',';
        out += format_double(cell.ci_low);
        out += ',';
        out += format_double(cell.ci_high);
        out += ',';
        out += std::to_string(cell.seed_count);
        out += '\n';
    }
    return out;
}

namespace {

json params_to_json(const ModelParams& p) {
    json j;
    j["kind"] = model_kind_name(p.kind);
    j["svm_c"] = p.svm_c;
    j["kernel_type"] = p.kernel.type == KernelSpec::Type::Linear ? "linear" : "rbf";
    j["kernel_gamma"] = p.kernel.gamma;
    j["gbt_rounds"] = p.gbt.n_rounds;
    j["gbt_eta"] = p.gbt.learning_rate;
    j["gbt_depth"] = p.gbt.max_depth;
    j["gbt_lambda"] = p.gbt.lambda;
    j["gbt_min_child_weight"] = p.gbt.min_child_weight;
    return j;
}

ModelParams params_from_json(const json& j) {
    ModelParams p;
    p.kind = model_kind_from_name(j.at("kind").get<std::string>());
    p.svm_c = j.at("svm_c").get<double>();
    p.kernel.type = j.at("kernel_type").get<std::string>() == "linear"
                        ? KernelSpec::Type::Linear
                        : KernelSpec::Type::Rbf;
    p.kernel.gamma = j.at("kernel_gamma").get<double>();
    p.gbt.n_rounds = j.at("gbt_rounds").get<int>();
    p.gbt.learning_rate = j.at("gbt_eta").get<double>();
    p.gbt.max_depth = j.at("gbt_depth").get<int>();
    p.gbt.lambda = j.at("gbt_lambda").get<double>();
    p.gbt.min_child_weight = j.at("gbt_min_child_weight").get<double>();
    return p;
}

}  // namespace

std::string report_to_json(const ExperimentReport& report) {
    json j;
    j["format"] = "physioclass-report";
    j["version"] = 1;

    json cfg;
    cfg["windows"] = report.config.windows;
    json tasks = json::array();
    for (ComparisonTask t : report.config.tasks) tasks.push_back(task_name(t));
    cfg["tasks"] = tasks;
    json models = json::array();
    for (ModelKind m : report.config.models) models.push_back(model_kind_name(m));
    cfg["models"] = models;
    cfg["seeds"] = report.config.seeds;
    cfg["train_ratio"] = report.config.train_ratio;
    cfg["cv_folds"] = report.config.cv_folds;
    cfg["n_boot"] = report.config.n_boot;
    cfg["ci_alpha"] = report.config.ci_alpha;
    cfg["master_seed"] = report.config.master_seed;
    json grids;
    for (ModelKind kind : kAllModels) {
        json entries = json::array();
        for (const auto& p : report.config.grids.for_kind(kind)) {
            entries.push_back(params_to_json(p));
        }
        grids[model_kind_name(kind)] = entries;
    }
    cfg["grids"] = grids;
    j["config"] = cfg;

    j["metadata"] = report.metadata;

    json cells = json::array();
    for (const auto& cell : report.cells) {
        json c;
        c["task"] = task_name(cell.key.task);
        c["window_s"] = cell.key.window_s;
        c["source"] = source_name(cell.key.source);
        c["model"] = model_kind_name(cell.key.model);
        c["mean_accuracy"] = cell.mean_accuracy;
        c["ci_low"] = cell.ci_low;
        c["ci_high"] = cell.ci_high;
        json class_names = json::array();
        for (ClassLabel label : task_classes(cell.key.task)) class_names.push_back(label_name(label));
        c["classes"] = class_names;
        c["confusion"] = cell.confusion;
        c["per_seed_accuracy"] = cell.per_seed_accuracy;
        c["chosen_params"] = cell.chosen_params;
        c["seed_count"] = cell.seed_count;
        cells.push_back(c);
    }
    j["cells"] = cells;
    return j.dump(2) + "\n";
}

ExperimentReport report_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::IoError, std::string("report is not valid JSON: ") + e.what());
    }
    try {
        if (j.at("format").get<std::string>() != "physioclass-report") {
            throw Error(ErrorCode::IoError, "not a report file");
        }
        ExperimentReport report;
        const auto& cfg = j.at("config");
        report.config.windows = cfg.at("windows").get<std::vector<int>>();
        report.config.tasks.clear();
        for (const auto& t : cfg.at("tasks")) {
            report.config.tasks.push_back(task_from_name(t.get<std::string>()));
        }
        report.config.models.clear();
        for (const auto& m : cfg.at("models")) {
            report.config.models.push_back(model_kind_from_name(m.get<std::string>()));
        }
        report.config.seeds = cfg.at("seeds").get<std::vector<std::uint64_t>>();
        report.config.train_ratio = cfg.at("train_ratio").get<double>();
        report.config.cv_folds = cfg.at("cv_folds").get<int>();
        report.config.n_boot = cfg.at("n_boot").get<int>();
        report.config.ci_alpha = cfg.at("ci_alpha").get<double>();
        report.config.master_seed = cfg.at("master_seed").get<std::uint64_t>();
        report.config.grids.svm.clear();
        report.config.grids.gnb.clear();
        report.config.grids.gbt.clear();
        for (ModelKind kind : kAllModels) {
            for (const auto& p : cfg.at("grids").at(model_kind_name(kind))) {
                auto& grid = kind == ModelKind::Svm   ? report.config.grids.svm
                             : kind == ModelKind::Gnb ? report.config.grids.gnb
                                                      : report.config.grids.gbt;
                grid.push_back(params_from_json(p));
            }
        }
        report.metadata = j.at("metadata").get<std::map<std::string, std::string>>();
        for (const auto& c : j.at("cells")) {
            CellResult cell;
            cell.key.task = task_from_name(c.at("task").get<std::string>());
            cell.key.window_s = c.at("window_s").get<int>();
            cell.key.source = source_from_name(c.at("source").get<std::string>());
            cell.key.model = model_kind_from_name(c.at("model").get<std::string>());
            cell.mean_accuracy = c.at("mean_accuracy").get<double>();
            cell.ci_low = c.at("ci_low").get<double>();
            cell.ci_high = c.at("ci_high").get<double>();
            cell.confusion = c.at("confusion").get<std::vector<std::vector<int>>>();
            cell.per_seed_accuracy = c.at("per_seed_accuracy").get<std::vector<double>>();
            cell.chosen_params = c.at("chosen_params").get<std::string>();
            cell.seed_count = c.at("seed_count").get<int>();
            report.cells.push_back(std::move(cell));
        }
        return report;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::IoError, std::string("malformed report: ") + e.what());
    }
}

}  // namespace physio
