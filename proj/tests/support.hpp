#pragma once

#include <random>
#include <vector>

#include "credal_cert/feature_matrix.hpp"

namespace test_support {

inline credal_cert::FeatureMatrix mat(const std::vector<std::vector<double>>& rows) {
    return credal_cert::FeatureMatrix::from_rows(rows);
}

inline credal_cert::FeatureMatrix random_matrix(std::mt19937_64& rng, std::size_t rows,
                                                std::size_t cols, double shift = 0.0) {
    std::normal_distribution<double> normal(shift, 1.0);
    credal_cert::FeatureMatrix::Storage data(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) data(i, j) = normal(rng);
    return credal_cert::FeatureMatrix(data);
}

}  // namespace test_support
