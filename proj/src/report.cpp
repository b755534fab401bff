#include "treeshift/report.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace treeshift {

nlohmann::json interval_json(const BoundedSum& b) {
  return {{"lower", b.lower().str()},
          {"upper", b.upper().str()},
          {"point", b.is_point()}};
}

const char* verdict_name(TestVerdict v) {
  switch (v) {
    case TestVerdict::satisfied: return "Satisfied";
    case TestVerdict::violated: return "Violated";
    default: return "Inconclusive";
  }
}

const char* cmp_name(Cmp c) {
  switch (c) {
    case Cmp::certified_less: return "certified <";
    case Cmp::certified_equal: return "certified =";
    case Cmp::certified_greater: return "certified >";
    default: return "inconclusive";
  }
}

nlohmann::json vertex_check_json(const VertexCheck& c) {
  return {{"vertex", c.vertex.str()},
          {"value", interval_json(c.value)},
          {"verdict", verdict_name(c.verdict)}};
}

std::string csv_line(const std::vector<std::string>& cells) {
  std::ostringstream os;
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    const std::string& c = cells[i];
    if (c.find_first_of(",\"\n") != std::string::npos) {
      os << '"';
      for (char ch : c) {
        if (ch == '"') os << '"';
        os << ch;
      }
      os << '"';
    } else {
      os << c;
    }
  }
  return os.str();
}

TextTable::TextTable(std::vector<std::string> header) { rows_.push_back(std::move(header)); }

void TextTable::add_row(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

std::string TextTable::str() const {
  std::vector<size_t> width;
  for (const auto& row : rows_) {
    if (width.size() < row.size()) width.resize(row.size(), 0);
    for (size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  std::ostringstream os;
  for (size_t r = 0; r < rows_.size(); ++r) {
    for (size_t i = 0; i < rows_[r].size(); ++i) {
      os << rows_[r][i] << std::string(width[i] - rows_[r][i].size(), ' ');
      if (i + 1 < rows_[r].size()) os << "  ";
    }
    os << '\n';
    if (r == 0) {
      size_t total = 0;
      for (size_t i = 0; i < width.size(); ++i) total += width[i] + (i ? 2 : 0);
      os << std::string(total, '-') << '\n';
    }
  }
  return os.str();
}

std::string TextTable::csv() const {
  std::ostringstream os;
  for (const auto& row : rows_) os << csv_line(row) << '\n';
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << content;
}

}  // namespace treeshift
