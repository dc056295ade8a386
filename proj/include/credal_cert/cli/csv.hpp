#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "credal_cert/feature_matrix.hpp"

namespace credal_cert::cli {

// Comma-separated numeric table. A first row containing any non-numeric field
// is treated as a header and skipped. Blank lines are allowed only at the end.
// Errors are reported as InputError("<name>:<line>:<column>: <reason>").
struct NumericTable {
    std::vector<std::vector<double>> rows;
    std::vector<std::size_t> line_numbers;  // 1-based source line of each row
    bool had_header = false;
};

NumericTable parse_numeric_csv(std::istream& in, std::string_view name);
NumericTable parse_numeric_csv(std::string_view text, std::string_view name);

FeatureMatrix features_from_table(const NumericTable& table, std::string_view name);

FeatureMatrix read_feature_file(const std::string& path);

// Single-column loss file; must provide exactly expected_rows values.
std::vector<double> read_loss_file(const std::string& path, std::size_t expected_rows);

// Single-column string labels (header auto-detected by the literal "label").
std::vector<std::string> read_label_file(const std::string& path);

std::string read_file_bytes(const std::string& path);

}  // namespace credal_cert::cli
