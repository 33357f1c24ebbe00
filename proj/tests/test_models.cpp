#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "physio/models.hpp"
#include "physio/rng.hpp"

using namespace physio;

namespace {

Matrix matrix_of(const std::vector<std::vector<double>>& rows) {
    Matrix m;
    for (const auto& r : rows) m.push_row(r);
    return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// Standardizer
// ---------------------------------------------------------------------------

TEST_CASE("two-point column standardizes to -1, +1") {
    const Matrix X = matrix_of({{1.0}, {3.0}});
    const auto s = fit_standardizer(X);
    const Matrix Xs = apply_standardizer(s, X);
    CHECK(Xs.at(0, 0) == doctest::Approx(-1.0));
    CHECK(Xs.at(1, 0) == doctest::Approx(1.0));
}

TEST_CASE("constant column engages the floor and maps to zeros") {
    const Matrix X = matrix_of({{7.0, 1.0}, {7.0, 2.0}, {7.0, 3.0}});
    const auto s = fit_standardizer(X);
    const Matrix Xs = apply_standardizer(s, X);
    for (std::size_t r = 0; r < 3; ++r) CHECK(Xs.at(r, 0) == 0.0);
}

TEST_CASE("unseen rows use the training statistics") {
    const Matrix X = matrix_of({{0.0}, {2.0}, {4.0}});
    const auto s = fit_standardizer(X);
    // mean 2, population std sqrt(8/3)
    const double sigma = std::sqrt(8.0 / 3.0);
    const auto row = apply_standardizer(s, std::vector<double>{5.0});
    CHECK(row[0] == doctest::Approx((5.0 - 2.0) / sigma));
}

TEST_CASE("transformed training columns have mean 0 and std 1") {
    Rng rng(77);
    Matrix X;
    for (int r = 0; r < 40; ++r) {
        X.push_row(std::vector<double>{rng.gauss() * 3.0 + 5.0, rng.uniform(-100.0, 100.0)});
    }
    const Matrix Xs = apply_standardizer(fit_standardizer(X), X);
    for (std::size_t c = 0; c < 2; ++c) {
        double mean = 0.0;
        for (std::size_t r = 0; r < Xs.rows(); ++r) mean += Xs.at(r, c);
        mean /= Xs.rows();
        double var = 0.0;
        for (std::size_t r = 0; r < Xs.rows(); ++r) {
            var += (Xs.at(r, c) - mean) * (Xs.at(r, c) - mean);
        }
        var /= Xs.rows();
        CHECK(std::abs(mean) < 1e-9);
        CHECK(std::abs(std::sqrt(var) - 1.0) < 1e-9);
    }
    CHECK_THROWS_AS(fit_standardizer(matrix_of({{1.0}})), Error);
}

// ---------------------------------------------------------------------------
// Gaussian Naive Bayes
// ---------------------------------------------------------------------------

TEST_CASE("well-separated 1-D classes give near-certain posteriors") {
    const Matrix X = matrix_of({{-0.1}, {0.0}, {0.1}, {4.9}, {5.0}, {5.1}});
    const std::vector<ClassLabel> y = {ClassLabel::Startle, ClassLabel::Startle,
                                       ClassLabel::Startle, ClassLabel::Surprise,
                                       ClassLabel::Surprise, ClassLabel::Surprise};
    const auto model = train_gnb(X, y);
    const auto pred = predict_gnb(model, std::vector<double>{0.05});
    CHECK(pred.label == ClassLabel::Startle);
    CHECK(pred.scores[0] > 0.999);
}

TEST_CASE("mirror-symmetric classes tie and break to the lower label") {
    const Matrix X = matrix_of({{0.0}, {1.0}, {4.0}, {5.0}});
    const std::vector<ClassLabel> y = {ClassLabel::Startle, ClassLabel::Startle,
                                       ClassLabel::Surprise, ClassLabel::Surprise};
    const auto model = train_gnb(X, y);
    const auto pred = predict_gnb(model, std::vector<double>{2.5});
    CHECK(pred.scores[0] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(pred.scores[1] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(pred.label == ClassLabel::Startle);
}

TEST_CASE("zero-variance feature engages the variance floor") {
    const Matrix X = matrix_of({{1.0, 0.0}, {1.0, 1.0}, {2.0, 0.0}, {2.0, 1.0}});
    const std::vector<ClassLabel> y = {ClassLabel::Startle, ClassLabel::Startle,
                                       ClassLabel::Baseline, ClassLabel::Baseline};
    const auto model = train_gnb(X, y);
    const auto pred = predict_gnb(model, std::vector<double>{1.0, 0.5});
    CHECK(std::isfinite(pred.scores[0]));
    CHECK(std::isfinite(pred.scores[1]));
    CHECK(pred.scores[0] + pred.scores[1] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(pred.label == ClassLabel::Startle);
}

TEST_CASE("GNB matches the closed-form posterior on 100 random 1-D instances") {
    Rng rng(404);
    for (int instance = 0; instance < 100; ++instance) {
        const std::size_t n0 = 3 + rng.below(8), n1 = 3 + rng.below(8);
        const double mu0 = rng.uniform(-5.0, 5.0), mu1 = rng.uniform(-5.0, 5.0);
        const double s0 = rng.uniform(0.2, 2.0), s1 = rng.uniform(0.2, 2.0);
        Matrix X;
        std::vector<ClassLabel> y;
        for (std::size_t i = 0; i < n0; ++i) {
            X.push_row(std::vector<double>{mu0 + s0 * rng.gauss()});
            y.push_back(ClassLabel::Startle);
        }
        for (std::size_t i = 0; i < n1; ++i) {
            X.push_row(std::vector<double>{mu1 + s1 * rng.gauss()});
            y.push_back(ClassLabel::Surprise);
        }
        const auto model = train_gnb(X, y);

        // oracle: recompute class moments and the floor from the definitions
        auto moments = [&](ClassLabel which) {
            double mean = 0.0;
            std::size_t n = 0;
            for (std::size_t i = 0; i < y.size(); ++i) {
                if (y[i] == which) {
                    mean += X.at(i, 0);
                    ++n;
                }
            }
            mean /= n;
            double var = 0.0;
            for (std::size_t i = 0; i < y.size(); ++i) {
                if (y[i] == which) var += (X.at(i, 0) - mean) * (X.at(i, 0) - mean);
            }
            return std::pair<double, double>{mean, var / n};
        };
        double overall_mean = 0.0;
        for (std::size_t i = 0; i < X.rows(); ++i) overall_mean += X.at(i, 0);
        overall_mean /= X.rows();
        double overall_var = 0.0;
        for (std::size_t i = 0; i < X.rows(); ++i) {
            overall_var += (X.at(i, 0) - overall_mean) * (X.at(i, 0) - overall_mean);
        }
        overall_var /= X.rows();
        const double floor = 1e-9 * overall_var;

        const auto [m0, v0] = moments(ClassLabel::Startle);
        const auto [m1, v1] = moments(ClassLabel::Surprise);
        const double total = static_cast<double>(n0 + n1);
        const oracles::Gauss1D c0{m0, std::max(v0, floor), std::log(n0 / total)};
        const oracles::Gauss1D c1{m1, std::max(v1, floor), std::log(n1 / total)};

        for (int q = 0; q < 5; ++q) {
            const double x = rng.uniform(-8.0, 8.0);
            const double expected_p0 = oracles::gnb_posterior_1d(c0, c1, x);
            const auto pred = predict_gnb(model, std::vector<double>{x});
            REQUIRE(pred.scores[0] == doctest::Approx(expected_p0).epsilon(1e-9));
            const ClassLabel expected_label =
                expected_p0 >= 0.5 ? ClassLabel::Startle : ClassLabel::Surprise;
            REQUIRE(pred.label == expected_label);
        }
    }
}

TEST_CASE("posteriors sum to one and respond monotonically to the prior") {
    Rng rng(505);
    Matrix X;
    std::vector<ClassLabel> y;
    for (int i = 0; i < 30; ++i) {
        X.push_row(std::vector<double>{rng.gauss(), rng.gauss()});
        y.push_back(kAllLabels[i % 3]);
    }
    auto model = train_gnb(X, y);
    const std::vector<double> query{0.3, -0.2};
    const auto before = predict_gnb(model, query);
    CHECK(std::accumulate(before.scores.begin(), before.scores.end(), 0.0) ==
          doctest::Approx(1.0).epsilon(1e-9));
    // raising the Startle prior must not lower its posterior
    for (double bump : {0.1, 0.5, 1.0, 2.0}) {
        auto poked = model;
        poked.log_prior[0] += bump;
        const auto after = predict_gnb(poked, query);
        CHECK(after.scores[0] >= before.scores[0] - 1e-12);
    }
    CHECK_THROWS_AS(train_gnb(Matrix{}, {}), Error);
}

TEST_CASE("GNB predictions are invariant to training-row permutation") {
    Rng rng(606);
    Matrix X;
    std::vector<ClassLabel> y;
    for (int i = 0; i < 24; ++i) {
        X.push_row(std::vector<double>{rng.gauss() + (i % 3), rng.gauss() - (i % 3)});
        y.push_back(kAllLabels[i % 3]);
    }
    std::vector<std::size_t> perm(24);
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);
    const auto original = train_gnb(X, y);
    const auto permuted = train_gnb(X.select_rows(perm), select_items(y, perm));
    for (int q = 0; q < 40; ++q) {
        const std::vector<double> x{rng.uniform(-4.0, 6.0), rng.uniform(-6.0, 4.0)};
        CHECK(predict_gnb(original, x).label == predict_gnb(permuted, x).label);
    }
}

// ---------------------------------------------------------------------------
// SVM / SMO
// ---------------------------------------------------------------------------

TEST_CASE("two symmetric points give the midpoint boundary") {
    const Matrix X = matrix_of({{-1.0}, {1.0}});
    const auto model = train_svm(X, {-1, +1}, 10.0, {});
    CHECK(std::abs(svm_decision(model, std::vector<double>{0.0})) < 1e-3);
    CHECK(svm_decision(model, std::vector<double>{1.0}) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(svm_decision(model, std::vector<double>{-1.0}) == doctest::Approx(-1.0).epsilon(1e-3));
    CHECK(svm_predict(model, std::vector<double>{0.0}) == +1);  // +1 on f == 0
}

TEST_CASE("rbf kernel solves XOR") {
    const Matrix X = matrix_of({{0, 0}, {1, 1}, {0, 1}, {1, 0}});
    const std::vector<int> y = {-1, -1, +1, +1};
    const auto model = train_svm(X, y, 10.0, {KernelSpec::Type::Rbf, 1.0});
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(svm_predict(model, X.row(i)) == y[i]);
    }
}

TEST_CASE("SMO reaches the brute-force dual maximum on random 6-point instances") {
    Rng rng(808);
    const KernelSpec kernel{};
    for (int instance = 0; instance < 20; ++instance) {
        Matrix X;
        std::vector<int> y;
        for (int i = 0; i < 6; ++i) {
            X.push_row(std::vector<double>{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)});
            y.push_back(i < 3 ? -1 : +1);
        }
        const auto model = train_svm(X, y, 1.0, kernel);

        // reconstruct the full alpha vector from the stored support set
        std::vector<double> alpha(6, 0.0);
        for (std::size_t sv = 0; sv < model.alpha.size(); ++sv) {
            for (std::size_t i = 0; i < 6; ++i) {
                if (std::equal(model.support_vectors.row(sv).begin(),
                               model.support_vectors.row(sv).end(), X.row(i).begin()) &&
                    alpha[i] == 0.0) {
                    alpha[i] = model.alpha[sv];
                    break;
                }
            }
        }
        const double smo_obj = svm_dual_objective(X, y, alpha, kernel);
        const double grid_obj = oracles::svm_dual_grid_max(X, y, 1.0, kernel, 11);
        REQUIRE(smo_obj >= grid_obj - 1e-3);

        // KKT residuals within tolerance
        const double violation = oracles::svm_kkt_violation(
            X, y, alpha, 1.0,
            [&](std::span<const double> x) { return svm_decision(model, x); });
        REQUIRE(violation <= 1e-3 + 1e-9);
    }
}

TEST_CASE("dual feasibility: alphas in [0, C] and sum alpha_i y_i = 0") {
    Rng rng(909);
    for (int instance = 0; instance < 10; ++instance) {
        Matrix X;
        std::vector<int> y;
        for (int i = 0; i < 12; ++i) {
            X.push_row(std::vector<double>{rng.gauss(), rng.gauss(), rng.gauss()});
            y.push_back(i % 2 == 0 ? -1 : +1);
        }
        const double c = 5.0;
        const auto model = train_svm(X, y, c, {KernelSpec::Type::Rbf, 0.5});
        double balance = 0.0;
        for (std::size_t i = 0; i < model.alpha.size(); ++i) {
            CHECK(model.alpha[i] >= 0.0);
            CHECK(model.alpha[i] <= c + 1e-12);
            balance += model.alpha[i] * model.sv_y[i];
        }
        CHECK(std::abs(balance) <= 1e-6);
    }
}

TEST_CASE("single class and non-positive C are rejected") {
    const Matrix X = matrix_of({{0.0}, {1.0}});
    try {
        train_svm(X, {+1, +1}, 1.0, {});
        FAIL("expected SingleClass");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SingleClass);
    }
    try {
        train_svm(X, {-1, +1}, 0.0, {});
        FAIL("expected NonPositiveC");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonPositiveC);
    }
    CHECK_THROWS_AS(train_svm(X, {-1, +1}, 1.0, {KernelSpec::Type::Rbf, 0.0}), Error);
}

TEST_CASE("removing a non-support vector barely moves the decision function") {
    // comfortably separated blobs; C large enough that margins are pinned
    Rng rng(111);
    Matrix X;
    std::vector<int> y;
    for (int i = 0; i < 8; ++i) {
        X.push_row(std::vector<double>{-3.0 + 0.3 * rng.gauss(), 0.3 * rng.gauss()});
        y.push_back(-1);
        X.push_row(std::vector<double>{3.0 + 0.3 * rng.gauss(), 0.3 * rng.gauss()});
        y.push_back(+1);
    }
    SvmTrainOptions opts;
    opts.tol = 1e-6;
    const auto full = train_svm(X, y, 10.0, {}, opts);

    // find a training row that is not a support vector
    std::ptrdiff_t non_sv = -1;
    for (std::size_t i = 0; i < y.size() && non_sv < 0; ++i) {
        bool is_sv = false;
        for (std::size_t sv = 0; sv < full.support_vectors.rows(); ++sv) {
            if (std::equal(full.support_vectors.row(sv).begin(),
                           full.support_vectors.row(sv).end(), X.row(i).begin())) {
                is_sv = true;
                break;
            }
        }
        if (!is_sv) non_sv = static_cast<std::ptrdiff_t>(i);
    }
    REQUIRE(non_sv >= 0);

    Matrix X2;
    std::vector<int> y2;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (static_cast<std::ptrdiff_t>(i) == non_sv) continue;
        X2.push_row(X.row(i));
        y2.push_back(y[i]);
    }
    const auto reduced = train_svm(X2, y2, 10.0, {}, opts);

    for (double gx = -4.0; gx <= 4.0; gx += 0.8) {
        for (double gy = -1.5; gy <= 1.5; gy += 0.5) {
            const std::vector<double> p{gx, gy};
            const double f_full = svm_decision(full, p);
            const double f_red = svm_decision(reduced, p);
            CHECK(std::abs(f_full - f_red) < 5e-3);
            if (std::abs(f_full) > 5e-3) {
                CHECK(svm_predict(full, p) == svm_predict(reduced, p));
            }
        }
    }
}

TEST_CASE("three separated blobs vote 100% on their training points") {
    Rng rng(222);
    Matrix X;
    std::vector<ClassLabel> y;
    const double centers[3][2] = {{0.0, 0.0}, {10.0, 0.0}, {0.0, 10.0}};
    for (int k = 0; k < 3; ++k) {
        for (int i = 0; i < 6; ++i) {
            X.push_row(std::vector<double>{centers[k][0] + rng.gauss(),
                                           centers[k][1] + rng.gauss()});
            y.push_back(kAllLabels[k]);
        }
    }
    const auto model = train_svm_multiclass(X, y, 10.0, {});
    REQUIRE(model.pairwise.size() == 3);
    for (std::size_t i = 0; i < y.size(); ++i) {
        CHECK(predict_svm(model, X.row(i)).label == y[i]);
    }
}

TEST_CASE("an all-distinct pairwise vote resolves by summed margins") {
    SvmModel model;
    model.classes = {ClassLabel::Startle, ClassLabel::Surprise, ClassLabel::Baseline};
    // hand-built pairwise models: f(x) = y0 * x0 + bias with single support vector
    auto stub = [](double coef, double bias) {
        SvmBinaryModel m;
        m.support_vectors.push_row(std::vector<double>{1.0});
        m.coef = {coef};
        m.alpha = {std::abs(coef)};
        m.sv_y = {coef >= 0 ? 1 : -1};
        m.bias = bias;
        return m;
    };
    // pair (startle, surprise): f = +0.2 -> startle; pair (startle, baseline):
    // f = -competing margins; pair (surprise, baseline): ...
    model.pairwise = {stub(0.0, 0.2), stub(0.0, -1.0), stub(0.0, 0.4)};
    // votes: startle (pair 0), baseline (pair 1), surprise (pair 2) -> 1,1,1
    // margins: startle 0.2 - 1.0 = -0.8; surprise -0.2 + 0.4 = 0.2; baseline 1.0 - 0.4 = 0.6
    const auto pred = predict_svm(model, std::vector<double>{0.0});
    CHECK(pred.label == ClassLabel::Baseline);
}

TEST_CASE("a missing class in a 3-class contract fails as SingleClass") {
    const Matrix X = matrix_of({{0.0}, {0.1}, {5.0}, {5.1}, {0.05}, {5.05}});
    const std::vector<ClassLabel> y = {ClassLabel::Startle, ClassLabel::Startle,
                                       ClassLabel::Surprise, ClassLabel::Surprise,
                                       ClassLabel::Startle, ClassLabel::Surprise};
    try {
        train_svm_multiclass(X, y, 1.0, {}, {},
                             {ClassLabel::Startle, ClassLabel::Surprise, ClassLabel::Baseline});
        FAIL("expected SingleClass");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SingleClass);
    }
}

TEST_CASE("SVM training is deterministic and robust to row order away from the margin") {
    Rng rng(333);
    Matrix X;
    std::vector<ClassLabel> y;
    for (int i = 0; i < 10; ++i) {
        X.push_row(std::vector<double>{-2.0 + 0.4 * rng.gauss(), 0.4 * rng.gauss()});
        y.push_back(ClassLabel::Startle);
        X.push_row(std::vector<double>{2.0 + 0.4 * rng.gauss(), 0.4 * rng.gauss()});
        y.push_back(ClassLabel::Surprise);
    }
    const auto a = train_svm_multiclass(X, y, 1.0, {});
    const auto b = train_svm_multiclass(X, y, 1.0, {});
    CHECK(a == b);  // same inputs, same seed, bitwise identical

    std::vector<std::size_t> perm(y.size());
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);
    const auto c = train_svm_multiclass(X.select_rows(perm), select_items(y, perm), 1.0, {});
    for (int q = 0; q < 50; ++q) {
        const std::vector<double> p{rng.uniform(-4.0, 4.0), rng.uniform(-2.0, 2.0)};
        if (std::abs(svm_decision(a.pairwise[0], p)) < 0.05) continue;  // tie region
        CHECK(predict_svm(a, p).label == predict_svm(c, p).label);
    }
}

// ---------------------------------------------------------------------------
// Gradient-boosted trees
// ---------------------------------------------------------------------------

TEST_CASE("a depth-1 stump separates threshold data perfectly") {
    Matrix X;
    std::vector<ClassLabel> y;
    for (int i = 0; i < 20; ++i) {
        const double x = (i - 9.5) / 2.0;  // 10 negative, 10 positive
        X.push_row(std::vector<double>{x});
        y.push_back(x < 0.0 ? ClassLabel::Startle : ClassLabel::Surprise);
    }
    GbtParams params;
    params.n_rounds = 10;
    params.learning_rate = 0.5;
    params.max_depth = 1;
    const auto model = train_gbt(X, y, params);
    for (std::size_t i = 0; i < y.size(); ++i) {
        CHECK(predict_gbt(model, X.row(i)).label == y[i]);
    }
    CHECK(model.train_logloss.back() < model.train_logloss.front());
}

TEST_CASE("identical labels are degenerate") {
    const Matrix X = matrix_of({{0.0}, {1.0}, {2.0}});
    try {
        train_gbt(X, {ClassLabel::Startle, ClassLabel::Startle, ClassLabel::Startle}, {});
        FAIL("expected DegenerateLabels");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DegenerateLabels);
    }
}

TEST_CASE("3-class probabilities sum to one") {
    Rng rng(444);
    Matrix X;
    std::vector<ClassLabel> y;
    for (int i = 0; i < 18; ++i) {
        X.push_row(std::vector<double>{rng.gauss() + 2.0 * (i % 3), rng.gauss()});
        y.push_back(kAllLabels[i % 3]);
    }
    const auto model = train_gbt(X, y, {});
    for (int q = 0; q < 20; ++q) {
        const std::vector<double> x{rng.uniform(-2.0, 6.0), rng.uniform(-3.0, 3.0)};
        const auto pred = predict_gbt(model, x);
        REQUIRE(pred.scores.size() == 3);
        CHECK(std::accumulate(pred.scores.begin(), pred.scores.end(), 0.0) ==
              doctest::Approx(1.0).epsilon(1e-9));
    }
}

// Property: training log-loss never increases from one round to the next.
TEST_CASE("training log-loss is non-increasing across rounds") {
    Rng rng(555);
    for (int instance = 0; instance < 20; ++instance) {
        Matrix X;
        std::vector<ClassLabel> y;
        const int n = 12 + static_cast<int>(rng.below(20));
        const int n_classes = 2 + static_cast<int>(rng.below(2));
        for (int i = 0; i < n; ++i) {
            X.push_row(std::vector<double>{rng.gauss(), rng.gauss(), rng.gauss()});
            y.push_back(kAllLabels[i % n_classes]);
        }
        GbtParams params;
        params.n_rounds = 12;
        params.learning_rate = instance % 2 == 0 ? 0.3 : 0.1;
        params.max_depth = 1 + static_cast<int>(rng.below(3));
        const auto model = train_gbt(X, y, params);
        REQUIRE(model.train_logloss.size() == 13u);
        for (std::size_t r = 1; r < model.train_logloss.size(); ++r) {
            REQUIRE(model.train_logloss[r] <= model.train_logloss[r - 1] + 1e-12);
        }
    }
}

// Property: lambda -> infinity drives every leaf weight to zero.
TEST_CASE("huge lambda shrinks leaf weights to zero") {
    Rng rng(666);
    Matrix X;
    std::vector<ClassLabel> y;
    for (int i = 0; i < 16; ++i) {
        X.push_row(std::vector<double>{rng.gauss()});
        y.push_back(i % 2 == 0 ? ClassLabel::Startle : ClassLabel::Baseline);
    }
    GbtParams params;
    params.n_rounds = 5;
    params.lambda = 1e12;
    const auto model = train_gbt(X, y, params);
    for (const auto& round : model.rounds) {
        for (const auto& tree : round) {
            for (const auto& node : tree.nodes) {
                if (node.feature < 0) CHECK(std::abs(node.weight) < 1e-9);
            }
        }
    }
}

TEST_CASE("GBT predictions are invariant to training-row permutation") {
    Rng rng(777);
    Matrix X;
    std::vector<ClassLabel> y;
    for (int i = 0; i < 21; ++i) {
        X.push_row(std::vector<double>{rng.gauss() + (i % 3), rng.gauss(), rng.uniform(0.0, 1.0)});
        y.push_back(kAllLabels[i % 3]);
    }
    GbtParams params;
    params.n_rounds = 20;
    const auto original = train_gbt(X, y, params);
    std::vector<std::size_t> perm(y.size());
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);
    const auto permuted = train_gbt(X.select_rows(perm), select_items(y, perm), params);
    for (int q = 0; q < 40; ++q) {
        const std::vector<double> x{rng.uniform(-3.0, 5.0), rng.gauss(), rng.uniform(0.0, 1.0)};
        CHECK(predict_gbt(original, x).label == predict_gbt(permuted, x).label);
    }
}

TEST_CASE("invalid boosting parameters are rejected") {
    const Matrix X = matrix_of({{0.0}, {1.0}});
    const std::vector<ClassLabel> y = {ClassLabel::Startle, ClassLabel::Surprise};
    GbtParams params;
    params.n_rounds = 0;
    CHECK_THROWS_AS(train_gbt(X, y, params), Error);
    params.n_rounds = 5;
    params.learning_rate = 1.5;
    CHECK_THROWS_AS(train_gbt(X, y, params), Error);
}

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

TEST_CASE("model artifacts round-trip exactly") {
    Rng rng(888);
    Matrix X;
    std::vector<ClassLabel> y;
    for (int i = 0; i < 18; ++i) {
        X.push_row(std::vector<double>{rng.gauss() + 3.0 * (i % 3), rng.gauss()});
        y.push_back(kAllLabels[i % 3]);
    }

    std::vector<ModelArtifact> artifacts;
    artifacts.emplace_back(train_gnb(X, y));
    artifacts.emplace_back(train_svm_multiclass(X, y, 10.0, {KernelSpec::Type::Rbf, 0.3}));
    GbtParams params;
    params.n_rounds = 8;
    artifacts.emplace_back(train_gbt(X, y, params));

    for (const auto& artifact : artifacts) {
        const std::string text = model_to_text(artifact);
        const ModelArtifact back = model_from_text(text);
        CHECK(model_to_text(back) == text);  // byte-identical re-serialization
        CHECK(back == artifact);

        // predictions bit-identical after reload
        for (int q = 0; q < 10; ++q) {
            const std::vector<double> x{rng.uniform(-2.0, 8.0), rng.uniform(-3.0, 3.0)};
            const auto predict = [&x](const ModelArtifact& m) {
                if (std::holds_alternative<GnbModel>(m)) {
                    return predict_gnb(std::get<GnbModel>(m), x);
                }
                if (std::holds_alternative<SvmModel>(m)) {
                    return predict_svm(std::get<SvmModel>(m), x);
                }
                return predict_gbt(std::get<GbtModel>(m), x);
            };
            const auto a = predict(artifact);
            const auto b = predict(back);
            CHECK(a.label == b.label);
            REQUIRE(a.scores.size() == b.scores.size());
            for (std::size_t k = 0; k < a.scores.size(); ++k) CHECK(a.scores[k] == b.scores[k]);
        }
    }

    CHECK_THROWS_AS(model_from_text("not json"), Error);
    CHECK_THROWS_AS(model_from_text("{\"format\":\"other\"}"), Error);
}
