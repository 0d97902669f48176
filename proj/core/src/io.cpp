#include "qdspin/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qdspin/errors.hpp"

namespace qdspin {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void DataTable::add_row(const std::vector<double>& values) {
  std::vector<std::string> row;
  row.reserve(values.size());
  for (double v : values) row.push_back(format_double(v));
  rows.push_back(std::move(row));
}

void DataTable::add_raw_row(std::vector<std::string> cells) {
  rows.push_back(std::move(cells));
}

std::string DataTable::to_csv() const {
  std::ostringstream os;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    os << columns[c] << (c + 1 < columns.size() ? ',' : '\n');
  }
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      os << row[c] << (c + 1 < row.size() ? ',' : '\n');
    }
  }
  return os.str();
}

std::string DataTable::to_json() const {
  std::ostringstream os;
  os << "[\n";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    os << "  {";
    bool first = true;
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      if (rows[r][c].empty()) continue;
      if (!first) os << ", ";
      first = false;
      os << '"' << columns[c] << "\": ";
      const std::string& cell = rows[r][c];
      const bool numeric = !cell.empty() &&
                           cell.find_first_not_of("0123456789+-.eEinfa") ==
                               std::string::npos;
      if (numeric && cell != "inf" && cell != "-inf" && cell != "nan") {
        os << cell;
      } else {
        os << '"' << cell << '"';
      }
    }
    os << (r + 1 < rows.size() ? "},\n" : "}\n");
  }
  os << "]\n";
  return os.str();
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  os << content;
  if (!os) throw IoError("failed writing '" + path.string() + "'");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << is.rdbuf();
  if (is.bad()) throw IoError("failed reading '" + path.string() + "'");
  return buf.str();
}

std::string spectrum_to_csv(const Spectrum& spectrum) {
  DataTable table;
  const std::string x_name =
      spectrum.meta.x_unit.empty() ? "x" : "x_" + spectrum.meta.x_unit;
  const std::string y_name =
      spectrum.meta.y_unit.empty() ? "y" : "y_" + spectrum.meta.y_unit;
  table.columns = {x_name, y_name};
  if (spectrum.has_sigma()) table.columns.push_back("sigma");
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    std::vector<double> row{spectrum.x[i], spectrum.y[i]};
    if (spectrum.has_sigma()) row.push_back(spectrum.sigma[i]);
    table.add_row(row);
  }
  return table.to_csv();
}

Spectrum spectrum_from_csv(const std::string& text) {
  Spectrum s;
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw IoError("spectrum CSV: empty input");
  const auto n_cols = std::size_t(std::count(line.begin(), line.end(), ',')) + 1;
  if (n_cols < 2) throw IoError("spectrum CSV: need at least x and y columns");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<double> values;
    while (std::getline(row, cell, ',')) {
      try {
        values.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw IoError("spectrum CSV: non-numeric cell '" + cell + "'");
      }
    }
    if (values.size() != n_cols) {
      throw IoError("spectrum CSV: ragged row '" + line + "'");
    }
    s.x.push_back(values[0]);
    s.y.push_back(values[1]);
    if (n_cols >= 3) s.sigma.push_back(values[2]);
  }
  s.validate();
  return s;
}

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)hash);
  return buf;
}

}  // namespace qdspin
