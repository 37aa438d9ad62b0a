// SPDX-License-Identifier: Apache-2.0
#include "output.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#ifndef NEARFIELD_VERSION
#define NEARFIELD_VERSION "unknown"
#endif

namespace nearfield::cli {

std::string format_number(double value)
{
  if (std::isnan(value))
    return "nan";
  if (std::isinf(value))
    return value > 0 ? "inf" : "-inf";
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.9g", value);
  return buffer;
}

nlohmann::ordered_json json_number(double value)
{
  if (!std::isfinite(value))
    return nullptr;
  return std::stod(format_number(value));
}

std::string to_csv(const std::vector<std::string> &header, const Eigen::MatrixXd &rows)
{
  if (static_cast<Eigen::Index>(header.size()) != rows.cols())
    throw std::logic_error("csv header does not match column count");
  std::string out;
  for (std::size_t c = 0; c < header.size(); ++c)
    out += (c ? "," : "") + header[c];
  out += '\n';
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    for (Eigen::Index c = 0; c < rows.cols(); ++c)
      out += (c ? "," : "") + format_number(rows(r, c));
    out += '\n';
  }
  return out;
}

void write_file(const std::string &path, const std::string &contents)
{
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file)
    throw std::runtime_error("cannot open output file: " + path);
  file << contents;
  if (!file)
    throw std::runtime_error("failed writing output file: " + path);
}

void write_manifest(const std::string &data_path, const std::vector<std::string> &command, const nlohmann::ordered_json &configs)
{
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);

  nlohmann::ordered_json manifest;
  manifest["tool"] = "nearfield";
  manifest["version"] = NEARFIELD_VERSION;
  manifest["timestamp"] = stamp;
  manifest["command"] = command;
  manifest["configs"] = configs;
  manifest["outputs"] = nlohmann::ordered_json::array({data_path});
  write_file(data_path + ".manifest.json", manifest.dump(2) + "\n");
}

std::string key_value_table(const std::vector<std::pair<std::string, std::string>> &rows)
{
  std::size_t width = 0;
  for (const auto &[k, v] : rows)
    width = std::max(width, k.size());
  std::ostringstream out;
  for (const auto &[k, v] : rows)
    out << k << std::string(width - k.size() + 2, ' ') << v << '\n';
  return out.str();
}

} // namespace nearfield::cli
