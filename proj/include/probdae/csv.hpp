#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace probdae::csv {

/// One numeric value with 17 significant digits, enough for an exact
/// round trip of any double.
std::string format(double value);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

void write(const std::filesystem::path& path, const Table& table);
Table read(const std::filesystem::path& path);

}  // namespace probdae::csv
