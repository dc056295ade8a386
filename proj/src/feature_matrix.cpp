#include "credal_cert/feature_matrix.hpp"

#include <cmath>
#include <string>

#include "credal_cert/error.hpp"

namespace credal_cert {

FeatureMatrix::FeatureMatrix(Storage data) : data_(std::move(data)) {
    if (data_.rows() < 1 || data_.cols() < 1) {
        throw InputError("feature matrix must have at least one row and one column");
    }
    for (Eigen::Index i = 0; i < data_.rows(); ++i) {
        for (Eigen::Index j = 0; j < data_.cols(); ++j) {
            if (!std::isfinite(data_(i, j))) {
                throw InputError("non-finite feature at row " + std::to_string(i) +
                                 ", column " + std::to_string(j));
            }
        }
    }
}

FeatureMatrix FeatureMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty() || rows.front().empty()) {
        throw InputError("feature matrix must have at least one row and one column");
    }
    const std::size_t d = rows.front().size();
    Storage data(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != d) {
            throw InputError("row " + std::to_string(i) + " has " +
                             std::to_string(rows[i].size()) + " columns, expected " +
                             std::to_string(d));
        }
        for (std::size_t j = 0; j < d; ++j) {
            data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return FeatureMatrix(std::move(data));
}

FeatureMatrix FeatureMatrix::stack(const FeatureMatrix& top, const FeatureMatrix& bottom) {
    if (top.dim() != bottom.dim()) {
        throw InputError("cannot stack matrices of dimension " + std::to_string(top.dim()) +
                         " and " + std::to_string(bottom.dim()));
    }
    Storage data(top.data_.rows() + bottom.data_.rows(), top.data_.cols());
    data << top.data_, bottom.data_;
    return FeatureMatrix(std::move(data));
}

FeatureMatrix FeatureMatrix::select(std::span<const std::size_t> indices) const {
    Storage data(static_cast<Eigen::Index>(indices.size()), data_.cols());
    for (std::size_t r = 0; r < indices.size(); ++r) {
        if (indices[r] >= rows()) throw InputError("row index out of range");
        data.row(static_cast<Eigen::Index>(r)) = data_.row(static_cast<Eigen::Index>(indices[r]));
    }
    return FeatureMatrix(std::move(data));
}

}  // namespace credal_cert
