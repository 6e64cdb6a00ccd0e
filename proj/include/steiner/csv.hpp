#pragma once

#include <string>
#include <vector>

namespace steiner {

/// Number formatting shared by every CSV/JSON writer:
/// 17 significant digits, "nan"/"inf" spelled out.
std::string fmt17(double v);

/// Minimal reader for numeric CSV with a single header line. Columns are named by the
/// header; throws DomainError on malformed input.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::vector<double> column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);

}  // namespace steiner
