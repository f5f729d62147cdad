#pragma once

#include <string>
#include <vector>

namespace cavity {

/// Shortest-round-trip-safe text for a double (17 significant digits).
std::string format_double(double v);

/// In-memory CSV document; the header row is written first.
class CsvTable {
public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(const std::vector<std::string>& cells);
  std::string str() const;
  std::size_t rows() const { return rows_.size(); }

private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace cavity
