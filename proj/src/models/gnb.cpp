#include <algorithm>
#include <cmath>

#include "physio/models.hpp"

namespace physio {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

}  // namespace

GnbModel train_gnb(const Matrix& X, const std::vector<ClassLabel>& y) {
    if (X.rows() == 0 || X.rows() != y.size()) {
        throw Error(ErrorCode::EmptyMatrix, "feature matrix and labels must align");
    }

    GnbModel model;
    for (ClassLabel label : kAllLabels) {
        if (std::find(y.begin(), y.end(), label) != y.end()) model.classes.push_back(label);
    }
    if (model.classes.empty()) {
        throw Error(ErrorCode::ClassAbsent, "no classes present");
    }

    const std::size_t n_classes = model.classes.size();
    const std::size_t n_feat = X.cols();
    model.log_prior.assign(n_classes, 0.0);
    model.mean.assign(n_classes, std::vector<double>(n_feat, 0.0));
    model.var.assign(n_classes, std::vector<double>(n_feat, 0.0));

    std::vector<std::size_t> counts(n_classes, 0);
    auto class_index = [&](ClassLabel label) {
        return static_cast<std::size_t>(
            std::find(model.classes.begin(), model.classes.end(), label) -
            model.classes.begin());
    };

    for (std::size_t r = 0; r < X.rows(); ++r) {
        const std::size_t k = class_index(y[r]);
        ++counts[k];
        for (std::size_t f = 0; f < n_feat; ++f) model.mean[k][f] += X.at(r, f);
    }
    for (std::size_t k = 0; k < n_classes; ++k) {
        if (counts[k] == 0) {
            throw Error(ErrorCode::ClassAbsent, "class without samples");
        }
        for (double& m : model.mean[k]) m /= static_cast<double>(counts[k]);
        model.log_prior[k] = std::log(static_cast<double>(counts[k]) /
                                      static_cast<double>(X.rows()));
    }
    for (std::size_t r = 0; r < X.rows(); ++r) {
        const std::size_t k = class_index(y[r]);
        for (std::size_t f = 0; f < n_feat; ++f) {
            const double d = X.at(r, f) - model.mean[k][f];
            model.var[k][f] += d * d;
        }
    }
    for (std::size_t k = 0; k < n_classes; ++k) {
        for (double& v : model.var[k]) v /= static_cast<double>(counts[k]);
    }

    // Variance floor relative to the largest overall feature variance, so a
    // zero-variance class feature still yields finite likelihoods.
    double max_var = 0.0;
    std::vector<double> overall_mean(n_feat, 0.0);
    for (std::size_t r = 0; r < X.rows(); ++r) {
        for (std::size_t f = 0; f < n_feat; ++f) overall_mean[f] += X.at(r, f);
    }
    for (double& m : overall_mean) m /= static_cast<double>(X.rows());
    for (std::size_t f = 0; f < n_feat; ++f) {
        double v = 0.0;
        for (std::size_t r = 0; r < X.rows(); ++r) {
            const double d = X.at(r, f) - overall_mean[f];
            v += d * d;
        }
        max_var = std::max(max_var, v / static_cast<double>(X.rows()));
    }
    const double floor = std::max(1e-9 * max_var, 1e-300);
    for (auto& per_class : model.var) {
        for (double& v : per_class) v = std::max(v, floor);
    }
    return model;
}

Prediction predict_gnb(const GnbModel& model, std::span<const double> x) {
    const std::size_t n_classes = model.classes.size();
    std::vector<double> log_post(n_classes);
    for (std::size_t k = 0; k < n_classes; ++k) {
        double lp = model.log_prior[k];
        for (std::size_t f = 0; f < x.size(); ++f) {
            const double d = x[f] - model.mean[k][f];
            lp += -0.5 * (kLog2Pi + std::log(model.var[k][f]) + d * d / model.var[k][f]);
        }
        log_post[k] = lp;
    }
    // normalize via log-sum-exp
    const double mx = *std::max_element(log_post.begin(), log_post.end());
    double z = 0.0;
    for (double lp : log_post) z += std::exp(lp - mx);
    Prediction pred;
    pred.scores.resize(n_classes);
    for (std::size_t k = 0; k < n_classes; ++k) pred.scores[k] = std::exp(log_post[k] - mx) / z;
    // argmax with ClassLabel-order tie-break (first strict maximum wins)
    std::size_t best = 0;
    for (std::size_t k = 1; k < n_classes; ++k) {
        if (pred.scores[k] > pred.scores[best]) best = k;
    }
    pred.label = model.classes[best];
    return pred;
}

}  // namespace physio
