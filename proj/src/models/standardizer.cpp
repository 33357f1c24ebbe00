#include <cmath>

#include "physio/models.hpp"

namespace physio {

Standardizer fit_standardizer(const Matrix& X) {
    if (X.rows() < 2) {
        throw Error(ErrorCode::EmptyMatrix, "standardizer needs at least 2 rows");
    }
    Standardizer s;
    s.mean.assign(X.cols(), 0.0);
    s.std_dev.assign(X.cols(), 0.0);
    for (std::size_t r = 0; r < X.rows(); ++r) {
        for (std::size_t c = 0; c < X.cols(); ++c) s.mean[c] += X.at(r, c);
    }
    for (double& m : s.mean) m /= static_cast<double>(X.rows());
    for (std::size_t r = 0; r < X.rows(); ++r) {
        for (std::size_t c = 0; c < X.cols(); ++c) {
            const double d = X.at(r, c) - s.mean[c];
            s.std_dev[c] += d * d;
        }
    }
    for (double& v : s.std_dev) {
        v = std::sqrt(v / static_cast<double>(X.rows()));
        if (v < Standardizer::kStdFloor) v = Standardizer::kStdFloor;
    }
    return s;
}

std::vector<double> apply_standardizer(const Standardizer& s, std::span<const double> row) {
    std::vector<double> out(row.size());
    for (std::size_t c = 0; c < row.size(); ++c) out[c] = (row[c] - s.mean[c]) / s.std_dev[c];
    return out;
}

Matrix apply_standardizer(const Standardizer& s, const Matrix& X) {
    Matrix out(X.rows(), X.cols());
    for (std::size_t r = 0; r < X.rows(); ++r) {
        for (std::size_t c = 0; c < X.cols(); ++c) {
            out.at(r, c) = (X.at(r, c) - s.mean[c]) / s.std_dev[c];
        }
    }
    return out;
}

}  // namespace physio
