#include <algorithm>
#include <cmath>

#include "physio/models.hpp"
#include "physio/rng.hpp"

namespace physio {

double kernel_eval(const KernelSpec& k, std::span<const double> a, std::span<const double> b) {
    if (k.type == KernelSpec::Type::Linear) {
        double dot = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
        return dot;
    }
    double dist2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        dist2 += d * d;
    }
    return std::exp(-k.gamma * dist2);
}

namespace {

void check_svm_inputs(const Matrix& X, std::size_t n_labels, double c, const KernelSpec& kernel) {
    if (X.rows() == 0 || X.rows() != n_labels) {
        throw Error(ErrorCode::EmptyMatrix, "feature matrix and labels must align");
    }
    if (!(c > 0.0)) {
        throw Error(ErrorCode::NonPositiveC, "box constraint C must be > 0");
    }
    if (kernel.type == KernelSpec::Type::Rbf && !(kernel.gamma > 0.0)) {
        throw Error(ErrorCode::NonPositiveC, "rbf gamma must be > 0");
    }
}

}  // namespace

SvmBinaryModel train_svm(const Matrix& X, const std::vector<int>& y, double c, KernelSpec kernel,
                         const SvmTrainOptions& opts) {
    check_svm_inputs(X, y.size(), c, kernel);
    const std::size_t n = X.rows();
    bool has_pos = false, has_neg = false;
    for (int label : y) {
        if (label == +1) has_pos = true;
        if (label == -1) has_neg = true;
    }
    if (!has_pos || !has_neg) {
        throw Error(ErrorCode::SingleClass, "both -1 and +1 labels are required");
    }

    // Kernel matrix fits easily at this scale (tens of samples).
    Matrix K(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double v = kernel_eval(kernel, X.row(i), X.row(j));
            K.at(i, j) = v;
            K.at(j, i) = v;
        }
    }

    std::vector<double> alpha(n, 0.0);
    std::vector<double> f(n, 0.0);  // decision value cache, f_i = sum_j a_j y_j K_ij + b
    double b = 0.0;
    Rng rng(opts.seed);

    // Analytic two-variable step on the pair (i, j).
    auto take_step = [&](std::size_t i, std::size_t j) {
        if (i == j) return false;
        const double e_i = f[i] - y[i];
        const double e_j = f[j] - y[j];
        const double alpha_i_old = alpha[i];
        const double alpha_j_old = alpha[j];
        double lo, hi;
        if (y[i] != y[j]) {
            lo = std::max(0.0, alpha_j_old - alpha_i_old);
            hi = std::min(c, c + alpha_j_old - alpha_i_old);
        } else {
            lo = std::max(0.0, alpha_i_old + alpha_j_old - c);
            hi = std::min(c, alpha_i_old + alpha_j_old);
        }
        if (lo >= hi) return false;

        const double eta = 2.0 * K.at(i, j) - K.at(i, i) - K.at(j, j);
        if (eta >= 0.0) return false;  // non-negative curvature along the pair

        double alpha_j = alpha_j_old - y[j] * (e_i - e_j) / eta;
        alpha_j = std::clamp(alpha_j, lo, hi);
        if (std::abs(alpha_j - alpha_j_old) < 1e-10 * (alpha_j + alpha_j_old + 1e-10)) {
            return false;
        }
        const double alpha_i = alpha_i_old + y[i] * y[j] * (alpha_j_old - alpha_j);

        const double b1 = b - e_i - y[i] * (alpha_i - alpha_i_old) * K.at(i, i) -
                          y[j] * (alpha_j - alpha_j_old) * K.at(i, j);
        const double b2 = b - e_j - y[i] * (alpha_i - alpha_i_old) * K.at(i, j) -
                          y[j] * (alpha_j - alpha_j_old) * K.at(j, j);
        double b_new;
        if (alpha_i > 0.0 && alpha_i < c) {
            b_new = b1;
        } else if (alpha_j > 0.0 && alpha_j < c) {
            b_new = b2;
        } else {
            b_new = 0.5 * (b1 + b2);
        }

        const double di = y[i] * (alpha_i - alpha_i_old);
        const double dj = y[j] * (alpha_j - alpha_j_old);
        for (std::size_t k = 0; k < n; ++k) {
            f[k] += di * K.at(i, k) + dj * K.at(j, k) + (b_new - b);
        }
        alpha[i] = alpha_i;
        alpha[j] = alpha_j;
        b = b_new;
        return true;
    };

    // SMO sweeps: for every KKT violator, try one random partner first, then
    // fall back to scanning all partners from a random start. A sweep that
    // finds no violation means every point satisfies the KKT conditions
    // within tol.
    const double tol = opts.tol;
    for (int sweep = 0; sweep < opts.max_passes; ++sweep) {
        int violations = 0;
        int num_changed = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r_i = (f[i] - y[i]) * y[i];  // = y_i f_i - 1
            if (!((r_i < -tol && alpha[i] < c) || (r_i > tol && alpha[i] > 0.0))) continue;
            ++violations;

            std::size_t j = static_cast<std::size_t>(rng.below(n - 1));
            if (j >= i) ++j;
            if (take_step(i, j)) {
                ++num_changed;
                continue;
            }
            const std::size_t start = static_cast<std::size_t>(rng.below(n));
            for (std::size_t off = 0; off < n; ++off) {
                if (take_step(i, (start + off) % n)) {
                    ++num_changed;
                    break;
                }
            }
        }
        if (violations == 0 || num_changed == 0) break;
    }

    // Final bias from the KKT conditions themselves: free support vectors pin
    // b exactly; otherwise every bound alpha brackets it and the midpoint of
    // the feasible interval is used. The running b from the update rule is
    // only a heuristic when the last step ended on bounds.
    {
        std::vector<double> f0(n);  // decision values without bias
        for (std::size_t i = 0; i < n; ++i) f0[i] = f[i] - b;
        double free_sum = 0.0;
        std::size_t free_count = 0;
        double lo = -1e300, hi = 1e300;
        const double bound_eps = 1e-9 * c;
        for (std::size_t i = 0; i < n; ++i) {
            // KKT wants y_i (f0_i + b) = 1 for free alphas, >= 1 at alpha = 0,
            // <= 1 at alpha = C; each case constrains b via y_i - f0_i.
            const double target = y[i] - f0[i];
            if (alpha[i] > bound_eps && alpha[i] < c - bound_eps) {
                free_sum += target;
                ++free_count;
            } else if ((alpha[i] <= bound_eps && y[i] == +1) ||
                       (alpha[i] >= c - bound_eps && y[i] == -1)) {
                lo = std::max(lo, target);
            } else {
                hi = std::min(hi, target);
            }
        }
        if (free_count > 0) {
            b = free_sum / static_cast<double>(free_count);
        } else if (lo <= hi) {
            b = 0.5 * (lo + hi);
        }  // infeasible interval: alphas not optimal, keep the running b
    }

    SvmBinaryModel model;
    model.kernel = kernel;
    model.c = c;
    model.bias = b;
    for (std::size_t i = 0; i < n; ++i) {
        if (alpha[i] > 0.0) {
            model.support_vectors.push_row(X.row(i));
            model.alpha.push_back(alpha[i]);
            model.sv_y.push_back(y[i]);
            model.coef.push_back(alpha[i] * y[i]);
        }
    }
    return model;
}

double svm_decision(const SvmBinaryModel& model, std::span<const double> x) {
    double f = model.bias;
    for (std::size_t i = 0; i < model.coef.size(); ++i) {
        f += model.coef[i] * kernel_eval(model.kernel, model.support_vectors.row(i), x);
    }
    return f;
}

int svm_predict(const SvmBinaryModel& model, std::span<const double> x) {
    return svm_decision(model, x) >= 0.0 ? +1 : -1;
}

double svm_dual_objective(const Matrix& X, const std::vector<int>& y,
                          const std::vector<double>& alpha, const KernelSpec& kernel) {
    const std::size_t n = alpha.size();
    double obj = 0.0;
    for (std::size_t i = 0; i < n; ++i) obj += alpha[i];
    for (std::size_t i = 0; i < n; ++i) {
        if (alpha[i] == 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (alpha[j] == 0.0) continue;
            obj -= 0.5 * alpha[i] * alpha[j] * y[i] * y[j] *
                   kernel_eval(kernel, X.row(i), X.row(j));
        }
    }
    return obj;
}

SvmModel train_svm_multiclass(const Matrix& X, const std::vector<ClassLabel>& y, double c,
                              KernelSpec kernel, const SvmTrainOptions& opts,
                              const std::vector<ClassLabel>& expected_classes) {
    check_svm_inputs(X, y.size(), c, kernel);

    SvmModel model;
    model.c = c;
    model.kernel = kernel;
    if (expected_classes.empty()) {
        for (ClassLabel label : kAllLabels) {
            if (std::find(y.begin(), y.end(), label) != y.end()) model.classes.push_back(label);
        }
    } else {
        model.classes = expected_classes;
        std::sort(model.classes.begin(), model.classes.end());
    }
    if (model.classes.size() < 2) {
        throw Error(ErrorCode::SingleClass, "multiclass SVM needs at least 2 classes");
    }

    // One binary model per pair (a, b), a < b in ClassLabel order; a maps to +1.
    for (std::size_t a = 0; a < model.classes.size(); ++a) {
        for (std::size_t bidx = a + 1; bidx < model.classes.size(); ++bidx) {
            Matrix sub;
            std::vector<int> sub_y;
            for (std::size_t r = 0; r < X.rows(); ++r) {
                if (y[r] == model.classes[a]) {
                    sub.push_row(X.row(r));
                    sub_y.push_back(+1);
                } else if (y[r] == model.classes[bidx]) {
                    sub.push_row(X.row(r));
                    sub_y.push_back(-1);
                }
            }
            model.pairwise.push_back(train_svm(sub, sub_y, c, kernel, opts));
        }
    }
    return model;
}

Prediction predict_svm(const SvmModel& model, std::span<const double> x) {
    const std::size_t k = model.classes.size();
    std::vector<int> votes(k, 0);
    std::vector<double> margin_sum(k, 0.0);

    std::size_t pair_idx = 0;
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a + 1; b < k; ++b, ++pair_idx) {
            const double f = svm_decision(model.pairwise[pair_idx], x);
            if (f >= 0.0) {
                ++votes[a];
            } else {
                ++votes[b];
            }
            margin_sum[a] += f;
            margin_sum[b] -= f;
        }
    }

    const int top = *std::max_element(votes.begin(), votes.end());
    std::size_t best = k;
    for (std::size_t i = 0; i < k; ++i) {
        if (votes[i] != top) continue;
        if (best == k || margin_sum[i] > margin_sum[best]) best = i;
        // equal margins keep the earlier (lower) ClassLabel
    }

    // Softmax over summed margins gives a normalized, monotone score vector;
    // it is a vote tie-break aid, not a calibrated probability.
    Prediction pred;
    pred.label = model.classes[best];
    pred.scores.resize(k);
    const double mx = *std::max_element(margin_sum.begin(), margin_sum.end());
    double z = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        pred.scores[i] = std::exp(margin_sum[i] - mx);
        z += pred.scores[i];
    }
    for (double& s : pred.scores) s /= z;
    return pred;
}

}  // namespace physio
