#pragma once

// Tabular output: CSV with '#'-prefixed metadata lines or JSON, floats
// rendered with 17 significant digits so that every value round-trips
// bit-exactly through text.  A small FNV-1a hash fingerprints resolved
// configurations in output headers.

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace kerrflux::io {

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    throw std::invalid_argument("io: not a number: '" + s + "'");
  }
  return v;
}

inline bool looks_numeric(const std::string& s) {
  if (s.empty()) return false;
  char* end = nullptr;
  (void)std::strtod(s.c_str(), &end);
  return end != s.c_str() && *end == '\0';
}

constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

// ---------------------------------------------------------------------------

enum class Format { csv, json };

inline Format parse_format(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw std::invalid_argument("io: unknown format '" + s +
                              "' (expected csv or json)");
}

class Table {
 public:
  void add_meta(std::string key, std::string value) {
    meta_.emplace_back(std::move(key), std::move(value));
  }
  void add_meta(std::string key, double value) {
    meta_.emplace_back(std::move(key), format_double(value));
  }

  void add_column(std::string name, const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_double(v));
    check_rows(cells.size());
    names_.push_back(std::move(name));
    cells_.push_back(std::move(cells));
    numeric_.push_back(true);
  }

  void add_column(std::string name, std::vector<std::string> values) {
    check_rows(values.size());
    names_.push_back(std::move(name));
    cells_.push_back(std::move(values));
    numeric_.push_back(false);
  }

  std::size_t n_rows() const { return cells_.empty() ? 0 : cells_[0].size(); }
  std::size_t n_cols() const { return cells_.size(); }
  const std::vector<std::string>& column_names() const { return names_; }
  const std::vector<std::pair<std::string, std::string>>& meta() const {
    return meta_;
  }

  const std::vector<std::string>& cells(const std::string& name) const {
    return cells_[index_of(name)];
  }

  std::vector<double> numeric(const std::string& name) const {
    const auto& col = cells_[index_of(name)];
    std::vector<double> out;
    out.reserve(col.size());
    for (const auto& c : col) out.push_back(parse_double(c));
    return out;
  }

  const std::string* find_meta(const std::string& key) const {
    for (const auto& [k, v] : meta_) {
      if (k == key) return &v;
    }
    return nullptr;
  }

  std::string to_csv() const {
    std::ostringstream os;
    for (const auto& [k, v] : meta_) os << "# " << k << " = " << v << "\n";
    for (std::size_t c = 0; c < names_.size(); ++c) {
      os << (c ? "," : "") << names_[c];
    }
    os << "\n";
    for (std::size_t r = 0; r < n_rows(); ++r) {
      for (std::size_t c = 0; c < cells_.size(); ++c) {
        os << (c ? "," : "") << cells_[c][r];
      }
      os << "\n";
    }
    return os.str();
  }

  nlohmann::json to_json() const {
    nlohmann::json meta = nlohmann::json::object();
    for (const auto& [k, v] : meta_) meta[k] = v;
    nlohmann::json cols = nlohmann::json::object();
    for (std::size_t c = 0; c < cells_.size(); ++c) {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& cell : cells_[c]) {
        if (numeric_[c]) {
          arr.push_back(parse_double(cell));
        } else {
          arr.push_back(cell);
        }
      }
      cols[names_[c]] = std::move(arr);
    }
    return nlohmann::json{{"meta", std::move(meta)},
                          {"columns", std::move(cols)}};
  }

  static Table parse_csv(const std::string& text) {
    Table t;
    std::istringstream is(text);
    std::string line;
    bool have_header = false;
    std::vector<std::vector<std::string>> rows;
    while (std::getline(is, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      if (line[0] == '#') {
        std::string body = line.substr(1);
        const auto eq = body.find('=');
        if (eq != std::string::npos) {
          t.meta_.emplace_back(trim(body.substr(0, eq)),
                               trim(body.substr(eq + 1)));
        } else {
          t.meta_.emplace_back(trim(body), "");
        }
        continue;
      }
      auto fields = split_csv(line);
      if (!have_header) {
        t.names_ = std::move(fields);
        have_header = true;
      } else {
        if (fields.size() != t.names_.size()) {
          throw std::invalid_argument("io: ragged csv row: '" + line + "'");
        }
        rows.push_back(std::move(fields));
      }
    }
    if (!have_header) throw std::invalid_argument("io: csv without header row");
    t.cells_.assign(t.names_.size(), {});
    for (auto& col : t.cells_) col.reserve(rows.size());
    for (auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        t.cells_[c].push_back(std::move(row[c]));
      }
    }
    t.numeric_.resize(t.names_.size());
    for (std::size_t c = 0; c < t.cells_.size(); ++c) {
      bool num = !t.cells_[c].empty();
      for (const auto& cell : t.cells_[c]) num = num && looks_numeric(cell);
      t.numeric_[c] = num;
    }
    return t;
  }

 private:
  void check_rows(std::size_t n) const {
    if (!cells_.empty() && n != n_rows()) {
      throw std::invalid_argument("io: column length mismatch");
    }
  }

  std::size_t index_of(const std::string& name) const {
    for (std::size_t c = 0; c < names_.size(); ++c) {
      if (names_[c] == name) return c;
    }
    throw std::out_of_range("io: no column named '" + name + "'");
  }

  static std::string trim(std::string s) {
    const auto notspace = [](unsigned char c) { return !std::isspace(c); };
    while (!s.empty() && !notspace(s.back())) s.pop_back();
    std::size_t i = 0;
    while (i < s.size() && !notspace(s[i])) ++i;
    return s.substr(i);
  }

  static std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
      if (c == ',') {
        out.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    out.push_back(cur);
    return out;
  }

  std::vector<std::pair<std::string, std::string>> meta_;
  std::vector<std::string> names_;
  std::vector<std::vector<std::string>> cells_;
  std::vector<bool> numeric_;
};

// ---------------------------------------------------------------------------

inline void save_table(const std::filesystem::path& path, const Table& t,
                       Format fmt) {
  std::ofstream os(path);
  if (!os) {
    throw std::runtime_error("io: cannot open '" + path.string() +
                             "' for writing");
  }
  if (fmt == Format::csv) {
    os << t.to_csv();
  } else {
    os << t.to_json().dump(2) << "\n";
  }
  if (!os) {
    throw std::runtime_error("io: write failed for '" + path.string() + "'");
  }
}

inline Table load_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) {
    throw std::runtime_error("io: cannot open '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << is.rdbuf();
  return Table::parse_csv(buf.str());
}

}  // namespace kerrflux::io
