#include "emdec/series.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace emdec {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_row(const std::string& line, char delim) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, delim)) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == delim) cells.emplace_back();
  return cells;
}

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Period Period::parse(const std::string& label) {
  const std::string t = trim(label);
  // YYYYQn, also accepting lowercase q
  if (t.size() < 6 || (t[t.size() - 2] != 'Q' && t[t.size() - 2] != 'q'))
    throw DataError("malformed period label '" + t + "' (expected YYYYQn)");
  const std::string ys = t.substr(0, t.size() - 2);
  const char qc = t.back();
  if (ys.size() != 4 || !std::all_of(ys.begin(), ys.end(), [](char c) {
        return std::isdigit(static_cast<unsigned char>(c));
      }))
    throw DataError("malformed period label '" + t + "' (expected YYYYQn)");
  if (qc < '1' || qc > '4')
    throw DataError("malformed period label '" + t + "' (quarter must be 1..4)");
  Period p;
  p.year = std::stoi(ys);
  p.quarter = qc - '0';
  return p;
}

std::string Period::str() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04dQ%d", year, quarter);
  return buf;
}

Period Period::from_index(int idx) {
  Period p;
  p.year = idx / 4;
  p.quarter = idx % 4 + 1;
  if (idx < 0) {  // floor division for negative indices
    p.year = (idx - 3) / 4;
    p.quarter = idx - p.year * 4 + 1;
  }
  return p;
}

bool SeriesTable::has_column(const std::string& name) const {
  return std::any_of(columns.begin(), columns.end(),
                     [&](const TimeSeries& c) { return c.name == name; });
}

const TimeSeries& SeriesTable::column(const std::string& name) const {
  for (const auto& c : columns)
    if (c.name == name) return c;
  throw DataError("no column named '" + name + "'");
}

TimeSeries& SeriesTable::column(const std::string& name) {
  for (auto& c : columns)
    if (c.name == name) return c;
  throw DataError("no column named '" + name + "'");
}

void SeriesTable::add_column(TimeSeries ts) {
  if (has_column(ts.name)) throw DataError("duplicate column name '" + ts.name + "'");
  if (!columns.empty()) {
    if (ts.values.size() != index.size() || ts.start != index.front())
      throw DataError("column '" + ts.name + "' does not align with the table index");
  } else if (index.empty()) {
    index.reserve(ts.values.size());
    for (std::size_t i = 0; i < ts.values.size(); ++i) index.push_back(ts.period_at(i));
  }
  columns.push_back(std::move(ts));
}

void SeriesTable::replace_column(const std::string& name, TimeSeries ts) {
  for (auto& c : columns) {
    if (c.name == name) {
      if (ts.values.size() != index.size() || ts.start != index.front())
        throw DataError("replacement for column '" + name + "' does not align");
      c = std::move(ts);
      return;
    }
  }
  throw DataError("no column named '" + name + "'");
}

SeriesTable parse_series_table(std::istream& in, const TableSchema& schema) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty input: header row is mandatory");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_row(line, schema.delimiter);

  std::size_t period_col = header.size();
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == schema.period_column) period_col = i;
  if (period_col == header.size())
    throw DataError("period column '" + schema.period_column + "' not found in header");

  std::vector<std::size_t> value_cols;
  std::vector<std::string> value_names;
  if (schema.columns.empty()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i == period_col) continue;
      value_cols.push_back(i);
      value_names.push_back(header[i]);
    }
  } else {
    for (const auto& want : schema.columns) {
      std::size_t found = header.size();
      for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == want) found = i;
      if (found == header.size())
        throw DataError("declared column '" + want + "' not found in header");
      value_cols.push_back(found);
      value_names.push_back(want);
    }
  }
  for (std::size_t i = 0; i < value_names.size(); ++i)
    for (std::size_t j = i + 1; j < value_names.size(); ++j)
      if (value_names[i] == value_names[j])
        throw DataError("duplicate column name '" + value_names[i] + "'");

  std::vector<Period> index;
  std::vector<std::vector<double>> data(value_cols.size());
  std::size_t row_no = 1;
  while (std::getline(in, line)) {
    ++row_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split_row(line, schema.delimiter);
    if (cells.size() != header.size())
      throw DataError("ragged row " + std::to_string(row_no) + ": expected " +
                      std::to_string(header.size()) + " cells, got " +
                      std::to_string(cells.size()));
    Period p = Period::parse(cells[period_col]);
    if (!index.empty()) {
      if (p == index.back())
        throw DataError("duplicate period " + p.str() + " at row " + std::to_string(row_no));
      if (p < index.back())
        throw DataError("out-of-order period " + p.str() + " at row " + std::to_string(row_no));
      if (p != index.back().next())
        throw DataError("gap in periods before " + p.str() + " at row " + std::to_string(row_no));
    }
    index.push_back(p);
    for (std::size_t k = 0; k < value_cols.size(); ++k) {
      const std::string& cell = cells[value_cols[k]];
      if (cell.empty())
        throw DataError("missing value in column '" + value_names[k] + "' at row " +
                        std::to_string(row_no));
      char* endp = nullptr;
      const double v = std::strtod(cell.c_str(), &endp);
      if (endp == cell.c_str() || *endp != '\0')
        throw DataError("non-numeric cell '" + cell + "' in column '" + value_names[k] +
                        "' at row " + std::to_string(row_no));
      data[k].push_back(v);
    }
  }
  if (index.empty()) throw DataError("table has a header but no data rows");

  SeriesTable table;
  table.index = index;
  for (std::size_t k = 0; k < value_cols.size(); ++k) {
    TimeSeries ts;
    ts.name = value_names[k];
    ts.start = index.front();
    ts.values = std::move(data[k]);
    table.columns.push_back(std::move(ts));
  }
  return table;
}

SeriesTable parse_series_table_file(const std::string& path, const TableSchema& schema) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "' for reading");
  return parse_series_table(in, schema);
}

void emit_series_table(const SeriesTable& table, std::ostream& out, char delimiter) {
  out << "date";
  for (const auto& c : table.columns) out << delimiter << c.name;
  out << '\n';
  for (std::size_t i = 0; i < table.index.size(); ++i) {
    out << table.index[i].str();
    for (const auto& c : table.columns) out << delimiter << format_value(c.values[i]);
    out << '\n';
  }
}

std::string emit_series_table(const SeriesTable& table, char delimiter) {
  std::ostringstream os;
  emit_series_table(table, os, delimiter);
  return os.str();
}

TimeSeries log_transform(const TimeSeries& s) {
  TimeSeries out = s;
  out.name = s.name + "_log";
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    if (!(s.values[i] > 0.0))
      throw DataError("log transform of '" + s.name + "': non-positive value at index " +
                      std::to_string(i));
    out.values[i] = std::log(s.values[i]);
  }
  return out;
}

TimeSeries to_per_capita(const TimeSeries& s, const TimeSeries& population) {
  if (s.values.size() != population.values.size() || s.start != population.start ||
      s.frequency != population.frequency)
    throw DataError("per-capita conversion of '" + s.name + "': series and population are not aligned");
  TimeSeries out = s;
  out.name = s.name + "_pc";
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    if (!(population.values[i] > 0.0))
      throw DataError("per-capita conversion of '" + s.name + "': non-positive population at index " +
                      std::to_string(i));
    out.values[i] = s.values[i] / population.values[i];
  }
  return out;
}

TimeSeries slice_period(const TimeSeries& s, Period start, Period end) {
  if (end < start)
    throw DataError("slice range " + start.str() + ".." + end.str() + ": end before start");
  if (start < s.start || s.end() < end)
    throw DataError("slice range " + start.str() + ".." + end.str() + " outside series range " +
                    s.start.str() + ".." + s.end().str());
  const int a = start.index() - s.start.index();
  const int b = end.index() - s.start.index();
  TimeSeries out;
  out.name = s.name;
  out.start = start;
  out.frequency = s.frequency;
  out.values.assign(s.values.begin() + a, s.values.begin() + b + 1);
  return out;
}

}  // namespace emdec
