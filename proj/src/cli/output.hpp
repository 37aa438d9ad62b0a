// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

namespace nearfield::cli {

// Text form with 9 significant digits; "inf", "-inf", "nan" for non-finite.
std::string format_number(double value);
// JSON number rounded to 9 significant digits, null when non-finite.
nlohmann::ordered_json json_number(double value);

// Comma-separated table with a one-line header.
std::string to_csv(const std::vector<std::string> &header, const Eigen::MatrixXd &rows);

void write_file(const std::string &path, const std::string &contents);

// Writes `<data_path>.manifest.json` describing how `data_path` was produced.
void write_manifest(const std::string &data_path, const std::vector<std::string> &command, const nlohmann::ordered_json &configs);

// Left-aligned two-column "key  value" listing.
std::string key_value_table(const std::vector<std::pair<std::string, std::string>> &rows);

} // namespace nearfield::cli
