#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace credal_cert {

// n x d table of pre-embedded samples, one sample per row. Every entry is
// finite and the table is never empty.
class FeatureMatrix {
public:
    using Storage = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

    explicit FeatureMatrix(Storage data);

    static FeatureMatrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const { return static_cast<std::size_t>(data_.rows()); }
    std::size_t dim() const { return static_cast<std::size_t>(data_.cols()); }

    std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * dim(), dim()};
    }

    const Storage& data() const { return data_; }

    // Rows of `top` followed by rows of `bottom`.
    static FeatureMatrix stack(const FeatureMatrix& top, const FeatureMatrix& bottom);

    // Rows selected by index, in the given order.
    FeatureMatrix select(std::span<const std::size_t> indices) const;

    friend bool operator==(const FeatureMatrix& a, const FeatureMatrix& b) {
        return a.data_.rows() == b.data_.rows() && a.data_.cols() == b.data_.cols() &&
               a.data_ == b.data_;
    }

private:
    Storage data_;
};

}  // namespace credal_cert
