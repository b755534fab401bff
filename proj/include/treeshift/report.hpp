#pragma once

#include <json.hpp>

#include "treeshift/shift.hpp"

namespace treeshift {

/// Interval as {"lower", "upper", "point"} with stringified endpoints
/// (rationals as "p/q", floats as decimal).
nlohmann::json interval_json(const BoundedSum& b);

const char* verdict_name(TestVerdict v);
const char* cmp_name(Cmp c);

nlohmann::json vertex_check_json(const VertexCheck& c);

/// Minimal CSV quoting: fields with commas or quotes are quoted.
std::string csv_line(const std::vector<std::string>& cells);

/// Fixed-width text table with a header row.
class TextTable {
 public:
  explicit TextTable(std::vector<std::string> header);
  void add_row(std::vector<std::string> row);
  std::string str() const;
  std::string csv() const;

 private:
  std::vector<std::vector<std::string>> rows_;
};

/// Creates parent directories as needed.
void write_file(const std::string& path, const std::string& content);

}  // namespace treeshift
