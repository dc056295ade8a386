#include "credal_cert/cli/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "credal_cert/error.hpp"

namespace credal_cert::cli {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma == std::string_view::npos
                                                     ? std::string_view::npos
                                                     : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

std::optional<double> parse_number(std::string_view field) {
    if (field.empty()) return std::nullopt;
    if (field.front() == '+') field.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size()) return std::nullopt;
    return value;
}

[[noreturn]] void fail(std::string_view name, std::size_t line, std::size_t column,
                       const std::string& reason) {
    std::ostringstream msg;
    msg << name << ':' << line << ':' << column << ": " << reason;
    throw InputError(msg.str());
}

}  // namespace

NumericTable parse_numeric_csv(std::istream& in, std::string_view name) {
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) lines.push_back(std::move(line));
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();

    NumericTable table;
    std::size_t width = 0;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        if (trim(lines[i]).empty()) fail(name, line_no, 1, "empty row");
        const auto fields = split_fields(lines[i]);

        std::vector<double> row;
        row.reserve(fields.size());
        std::optional<std::size_t> bad_column;
        for (std::size_t c = 0; c < fields.size(); ++c) {
            const auto value = parse_number(fields[c]);
            if (!value) {
                bad_column = c + 1;
                break;
            }
            if (!std::isfinite(*value)) fail(name, line_no, c + 1, "non-finite value");
            row.push_back(*value);
        }

        if (bad_column) {
            if (table.rows.empty() && !table.had_header && i == 0) {
                table.had_header = true;
                continue;
            }
            const auto field = fields[*bad_column - 1];
            fail(name, line_no, *bad_column,
                 field.empty() ? std::string("missing value")
                               : "non-numeric value '" + std::string(field) + "'");
        }
        if (width == 0) {
            width = row.size();
        } else if (row.size() != width) {
            fail(name, line_no, std::min(row.size(), width) + 1,
                 "expected " + std::to_string(width) + " columns, found " +
                     std::to_string(row.size()));
        }
        table.rows.push_back(std::move(row));
        table.line_numbers.push_back(line_no);
    }
    return table;
}

NumericTable parse_numeric_csv(std::string_view text, std::string_view name) {
    std::istringstream in{std::string(text)};
    return parse_numeric_csv(in, name);
}

FeatureMatrix features_from_table(const NumericTable& table, std::string_view name) {
    if (table.rows.empty()) throw InputError(std::string(name) + ": no data rows");
    return FeatureMatrix::from_rows(table.rows);
}

std::string read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(path + ": cannot open file");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

FeatureMatrix read_feature_file(const std::string& path) {
    return features_from_table(parse_numeric_csv(read_file_bytes(path), path), path);
}

std::vector<double> read_loss_file(const std::string& path, std::size_t expected_rows) {
    const NumericTable table = parse_numeric_csv(read_file_bytes(path), path);
    std::vector<double> losses;
    losses.reserve(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        if (table.rows[i].size() != 1) {
            fail(path, table.line_numbers[i], 2,
                 "loss file must have a single column, found " +
                     std::to_string(table.rows[i].size()));
        }
        losses.push_back(table.rows[i][0]);
    }
    if (losses.size() != expected_rows) {
        const std::size_t row = std::min(losses.size(), expected_rows) + 1;
        throw InputError(path + ": missing loss for sample row " + std::to_string(row) + " (" +
                         std::to_string(losses.size()) + " losses for " +
                         std::to_string(expected_rows) + " feature rows)");
    }
    return losses;
}

std::vector<std::string> read_label_file(const std::string& path) {
    std::istringstream in(read_file_bytes(path));
    std::vector<std::string> labels;
    std::size_t line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        const auto label = trim(line);
        if (line_no == 1 && label == "label") continue;
        if (label.empty()) {
            // Trailing blank lines are fine; interior ones are missing labels.
            std::string rest;
            std::getline(in, rest, '\0');
            if (!trim(rest).empty()) fail(path, line_no, 1, "missing label");
            break;
        }
        if (label.find(',') != std::string_view::npos) {
            fail(path, line_no, 2, "label file must have a single column");
        }
        labels.emplace_back(label);
    }
    if (labels.empty()) throw InputError(path + ": no labels");
    return labels;
}

}  // namespace credal_cert::cli
