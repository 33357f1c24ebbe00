#include <algorithm>
#include <cmath>
#include <numeric>

#include "physio/models.hpp"

namespace physio {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

struct SplitChoice {
    double gain = 0.0;
    int feature = -1;
    double threshold = 0.0;
};

double leaf_score(double g, double h, double lambda) { return -g / (h + lambda); }

// Gain of the best split of `rows`, exact greedy over every feature and every
// midpoint between distinct consecutive values. Ties go to the lowest feature
// index, then the lowest threshold (guaranteed by scan order + strict >).
SplitChoice best_split(const Matrix& X, const std::vector<double>& grad,
                       const std::vector<double>& hess, const std::vector<std::size_t>& rows,
                       const GbtParams& params) {
    SplitChoice best;
    double g_total = 0.0, h_total = 0.0;
    for (std::size_t r : rows) {
        g_total += grad[r];
        h_total += hess[r];
    }
    const double parent_score = g_total * g_total / (h_total + params.lambda);

    std::vector<std::size_t> order(rows);
    for (std::size_t f = 0; f < X.cols(); ++f) {
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return X.at(a, f) < X.at(b, f);
        });
        double g_left = 0.0, h_left = 0.0;
        for (std::size_t k = 0; k + 1 < order.size(); ++k) {
            g_left += grad[order[k]];
            h_left += hess[order[k]];
            const double x_here = X.at(order[k], f);
            const double x_next = X.at(order[k + 1], f);
            if (x_next <= x_here) continue;  // no boundary between equal values
            const double h_right = h_total - h_left;
            if (h_left < params.min_child_weight || h_right < params.min_child_weight) continue;
            const double g_right = g_total - g_left;
            const double gain = 0.5 * (g_left * g_left / (h_left + params.lambda) +
                                       g_right * g_right / (h_right + params.lambda) -
                                       parent_score);
            if (gain > best.gain) {
                best.gain = gain;
                best.feature = static_cast<int>(f);
                best.threshold = 0.5 * (x_here + x_next);
            }
        }
    }
    return best;
}

int build_node(GbtTree& tree, const Matrix& X, const std::vector<double>& grad,
               const std::vector<double>& hess, const std::vector<std::size_t>& rows, int depth,
               const GbtParams& params) {
    const int node_idx = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();

    SplitChoice split;
    if (depth < params.max_depth) split = best_split(X, grad, hess, rows, params);

    if (split.feature < 0 || !(split.gain > 0.0)) {
        double g = 0.0, h = 0.0;
        for (std::size_t r : rows) {
            g += grad[r];
            h += hess[r];
        }
        tree.nodes[node_idx].weight = params.learning_rate * leaf_score(g, h, params.lambda);
        return node_idx;
    }

    std::vector<std::size_t> left_rows, right_rows;
    for (std::size_t r : rows) {
        (X.at(r, static_cast<std::size_t>(split.feature)) < split.threshold ? left_rows
                                                                            : right_rows)
            .push_back(r);
    }
    const int left = build_node(tree, X, grad, hess, left_rows, depth + 1, params);
    const int right = build_node(tree, X, grad, hess, right_rows, depth + 1, params);
    tree.nodes[node_idx].feature = split.feature;
    tree.nodes[node_idx].threshold = split.threshold;
    tree.nodes[node_idx].left = left;
    tree.nodes[node_idx].right = right;
    return node_idx;
}

GbtTree build_tree(const Matrix& X, const std::vector<double>& grad,
                   const std::vector<double>& hess, const GbtParams& params) {
    GbtTree tree;
    std::vector<std::size_t> rows(X.rows());
    std::iota(rows.begin(), rows.end(), 0);
    build_node(tree, X, grad, hess, rows, 0, params);
    return tree;
}

double clamped_log(double p) { return std::log(std::max(p, 1e-15)); }

}  // namespace

double GbtTree::predict(std::span<const double> x) const {
    int idx = 0;
    while (nodes[idx].feature >= 0) {
        idx = x[static_cast<std::size_t>(nodes[idx].feature)] < nodes[idx].threshold
                  ? nodes[idx].left
                  : nodes[idx].right;
    }
    return nodes[idx].weight;
}

GbtModel train_gbt(const Matrix& X, const std::vector<ClassLabel>& y, const GbtParams& params) {
    if (X.rows() == 0 || X.rows() != y.size()) {
        throw Error(ErrorCode::EmptyMatrix, "feature matrix and labels must align");
    }
    if (params.n_rounds < 1 || params.max_depth < 1 || !(params.learning_rate > 0.0) ||
        params.learning_rate > 1.0) {
        throw Error(ErrorCode::ConfigError, "invalid boosting parameters");
    }

    GbtModel model;
    model.params = params;
    for (ClassLabel label : kAllLabels) {
        if (std::find(y.begin(), y.end(), label) != y.end()) model.classes.push_back(label);
    }
    if (model.classes.size() < 2) {
        throw Error(ErrorCode::DegenerateLabels, "boosting needs at least 2 distinct labels");
    }

    const std::size_t n = X.rows();
    const bool binary = model.classes.size() == 2;
    const std::size_t heads = binary ? 1 : model.classes.size();

    std::vector<std::size_t> class_idx(n);
    for (std::size_t i = 0; i < n; ++i) {
        class_idx[i] = static_cast<std::size_t>(
            std::find(model.classes.begin(), model.classes.end(), y[i]) - model.classes.begin());
    }

    // logits per head, starting at zero
    std::vector<std::vector<double>> logit(heads, std::vector<double>(n, 0.0));
    std::vector<std::vector<double>> prob(heads, std::vector<double>(n, 0.0));

    auto update_probs_and_loss = [&]() {
        double loss = 0.0;
        if (binary) {
            for (std::size_t i = 0; i < n; ++i) {
                const double p = sigmoid(logit[0][i]);
                prob[0][i] = p;
                loss -= class_idx[i] == 1 ? clamped_log(p) : clamped_log(1.0 - p);
            }
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                double mx = logit[0][i];
                for (std::size_t h = 1; h < heads; ++h) mx = std::max(mx, logit[h][i]);
                double z = 0.0;
                for (std::size_t h = 0; h < heads; ++h) z += std::exp(logit[h][i] - mx);
                for (std::size_t h = 0; h < heads; ++h) {
                    prob[h][i] = std::exp(logit[h][i] - mx) / z;
                }
                loss -= clamped_log(prob[class_idx[i]][i]);
            }
        }
        return loss / static_cast<double>(n);
    };

    model.train_logloss.push_back(update_probs_and_loss());

    std::vector<double> grad(n), hess(n);
    for (int round = 0; round < params.n_rounds; ++round) {
        std::vector<GbtTree> round_trees;
        for (std::size_t h = 0; h < heads; ++h) {
            for (std::size_t i = 0; i < n; ++i) {
                const double p = prob[h][i];
                const double target = binary ? (class_idx[i] == 1 ? 1.0 : 0.0)
                                             : (class_idx[i] == h ? 1.0 : 0.0);
                grad[i] = p - target;
                hess[i] = std::max(p * (1.0 - p), 1e-16);
            }
            GbtTree tree = build_tree(X, grad, hess, params);
            for (std::size_t i = 0; i < n; ++i) logit[h][i] += tree.predict(X.row(i));
            round_trees.push_back(std::move(tree));
        }
        model.rounds.push_back(std::move(round_trees));
        model.train_logloss.push_back(update_probs_and_loss());
    }
    return model;
}

Prediction predict_gbt(const GbtModel& model, std::span<const double> x) {
    const bool binary = model.classes.size() == 2;
    const std::size_t heads = binary ? 1 : model.classes.size();
    std::vector<double> logit(heads, 0.0);
    for (const auto& round : model.rounds) {
        for (std::size_t h = 0; h < heads; ++h) logit[h] += round[h].predict(x);
    }

    Prediction pred;
    if (binary) {
        const double p = sigmoid(logit[0]);
        pred.scores = {1.0 - p, p};
    } else {
        const double mx = *std::max_element(logit.begin(), logit.end());
        double z = 0.0;
        pred.scores.resize(heads);
        for (std::size_t h = 0; h < heads; ++h) {
            pred.scores[h] = std::exp(logit[h] - mx);
            z += pred.scores[h];
        }
        for (double& s : pred.scores) s /= z;
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k < pred.scores.size(); ++k) {
        if (pred.scores[k] > pred.scores[best]) best = k;
    }
    pred.label = model.classes[best];
    return pred;
}

}  // namespace physio
