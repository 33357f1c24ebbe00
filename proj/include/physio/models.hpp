#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <variant>
#include <vector>

#include "physio/core.hpp"
#include "physio/matrix.hpp"

namespace physio {

// A classifier's answer: the label plus normalized scores over the model's
// class set (same order as `classes` on the model, i.e. ClassLabel order).
struct Prediction {
    ClassLabel label;
    std::vector<double> scores;
};

// ---------------------------------------------------------------------------
// Standardizer
// ---------------------------------------------------------------------------

// Per-feature zero-mean unit-variance scaling. Fit on the training split only
// and reused verbatim for validation/test rows. Stds below the floor map the
// column to zeros.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> std_dev;  // floored at kStdFloor

    static constexpr double kStdFloor = 1e-8;

    bool operator==(const Standardizer&) const = default;
};

Standardizer fit_standardizer(const Matrix& X);
Matrix apply_standardizer(const Standardizer& s, const Matrix& X);
std::vector<double> apply_standardizer(const Standardizer& s, std::span<const double> row);

// ---------------------------------------------------------------------------
// Gaussian Naive Bayes
// ---------------------------------------------------------------------------

struct GnbModel {
    std::vector<ClassLabel> classes;         // present classes, ClassLabel order
    std::vector<double> log_prior;           // per class
    std::vector<std::vector<double>> mean;   // [class][feature]
    std::vector<std::vector<double>> var;    // [class][feature], floored

    bool operator==(const GnbModel&) const = default;
};

GnbModel train_gnb(const Matrix& X, const std::vector<ClassLabel>& y);
Prediction predict_gnb(const GnbModel& model, std::span<const double> x);

// ---------------------------------------------------------------------------
// Support vector machine, trained by SMO
// ---------------------------------------------------------------------------

struct KernelSpec {
    enum class Type { Linear, Rbf };
    Type type = Type::Linear;
    double gamma = 0.1;  // rbf only

    bool operator==(const KernelSpec&) const = default;
};

double kernel_eval(const KernelSpec& k, std::span<const double> a, std::span<const double> b);

struct SvmTrainOptions {
    double tol = 1e-3;
    int max_passes = 100;       // full sweeps over the training set
    std::uint64_t seed = 0x5eed;  // random second-index choice
};

// Binary soft-margin SVM; labels are -1/+1. Stores the support set only.
struct SvmBinaryModel {
    Matrix support_vectors;
    std::vector<double> coef;   // alpha_i * y_i per support vector
    std::vector<double> alpha;  // alpha_i per support vector
    std::vector<int> sv_y;
    double bias = 0.0;
    KernelSpec kernel;
    double c = 1.0;

    bool operator==(const SvmBinaryModel&) const = default;
};

SvmBinaryModel train_svm(const Matrix& X, const std::vector<int>& y, double c, KernelSpec kernel,
                         const SvmTrainOptions& opts = {});

// f(x) = sum_i alpha_i y_i K(x_i, x) + b
double svm_decision(const SvmBinaryModel& model, std::span<const double> x);

// label from sign(f), +1 on f == 0
int svm_predict(const SvmBinaryModel& model, std::span<const double> x);

// Dual objective W(alpha) for a full alpha vector over (X, y); the test
// oracles compare against this.
double svm_dual_objective(const Matrix& X, const std::vector<int>& y,
                          const std::vector<double>& alpha, const KernelSpec& kernel);

// One-vs-one multiclass wrapper: one binary model per unordered class pair
// (lower label mapped to +1). Prediction by pairwise vote; ties broken by
// summed pairwise margins, then ClassLabel order.
struct SvmModel {
    std::vector<ClassLabel> classes;          // ClassLabel order
    std::vector<SvmBinaryModel> pairwise;     // pairs (i, j), i < j, in lexicographic order
    double c = 1.0;
    KernelSpec kernel;

    bool operator==(const SvmModel&) const = default;
};

// `expected_classes` empty means "the classes present in y"; when given, every
// listed class must actually occur or the pair missing one side fails with
// SingleClass.
SvmModel train_svm_multiclass(const Matrix& X, const std::vector<ClassLabel>& y, double c,
                              KernelSpec kernel, const SvmTrainOptions& opts = {},
                              const std::vector<ClassLabel>& expected_classes = {});
Prediction predict_svm(const SvmModel& model, std::span<const double> x);

// ---------------------------------------------------------------------------
// Gradient-boosted trees (second-order boosting, exact greedy splits)
// ---------------------------------------------------------------------------

struct GbtParams {
    int n_rounds = 50;
    double learning_rate = 0.3;
    int max_depth = 3;
    double lambda = 1.0;            // L2 regularization on leaf weights
    double min_child_weight = 1.0;  // minimum hessian sum per child

    bool operator==(const GbtParams&) const = default;
};

struct GbtNode {
    int feature = -1;        // -1 for leaves
    double threshold = 0.0;  // go left when x[feature] < threshold
    int left = -1;
    int right = -1;
    double weight = 0.0;  // leaf value (already scaled by the learning rate)

    bool operator==(const GbtNode&) const = default;
};

struct GbtTree {
    std::vector<GbtNode> nodes;  // nodes[0] is the root

    double predict(std::span<const double> x) const;

    bool operator==(const GbtTree&) const = default;
};

// Sigmoid link for 2 classes (one head), softmax for 3 (one head per class).
struct GbtModel {
    std::vector<ClassLabel> classes;
    GbtParams params;
    std::vector<std::vector<GbtTree>> rounds;  // [round][head]
    std::vector<double> train_logloss;         // entry r = loss after r rounds

    bool operator==(const GbtModel&) const = default;
};

GbtModel train_gbt(const Matrix& X, const std::vector<ClassLabel>& y, const GbtParams& params);
Prediction predict_gbt(const GbtModel& model, std::span<const double> x);

// ---------------------------------------------------------------------------
// Model persistence: versioned JSON artifact, exact round-trip
// ---------------------------------------------------------------------------

using ModelArtifact = std::variant<GnbModel, SvmModel, GbtModel>;

std::string model_to_text(const ModelArtifact& model);
ModelArtifact model_from_text(const std::string& text);
void save_model(const std::filesystem::path& path, const ModelArtifact& model);
ModelArtifact load_model(const std::filesystem::path& path);

}  // namespace physio
