#pragma once

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "emdec/errors.hpp"

namespace emdec {

/// Quarterly period label of the form YYYYQn (n in 1..4).
struct Period {
  int year = 1990;
  int quarter = 1;

  static Period parse(const std::string& label);
  std::string str() const;

  /// Linear index on the quarterly axis; consecutive periods differ by 1.
  int index() const { return year * 4 + (quarter - 1); }
  static Period from_index(int idx);
  Period next() const { return from_index(index() + 1); }
  Period advanced(int steps) const { return from_index(index() + steps); }

  auto operator<=>(const Period&) const = default;
};

/// Ordered, evenly spaced observations with a period label.
/// No gaps: values[i] belongs to start.advanced(i).
struct TimeSeries {
  std::string name;
  Period start;
  std::vector<double> values;
  int frequency = 4;  // observations per year

  std::size_t size() const { return values.size(); }
  Period end() const { return start.advanced(static_cast<int>(values.size()) - 1); }
  Period period_at(std::size_t i) const { return start.advanced(static_cast<int>(i)); }
};

/// Column-oriented table of aligned series. Column order is insertion order
/// so that emit is deterministic.
struct SeriesTable {
  std::vector<Period> index;
  std::vector<TimeSeries> columns;

  bool has_column(const std::string& name) const;
  const TimeSeries& column(const std::string& name) const;
  TimeSeries& column(const std::string& name);
  /// Appends a column; it must match the table index. Duplicate names are an error.
  void add_column(TimeSeries ts);
  /// Replaces the values of an existing column, keeping its position.
  void replace_column(const std::string& name, TimeSeries ts);
};

struct TableSchema {
  char delimiter = ',';             // ',' or '\t'
  std::string period_column = "date";
  std::vector<std::string> columns;  // empty: every non-period column
};

SeriesTable parse_series_table(std::istream& in, const TableSchema& schema);
SeriesTable parse_series_table_file(const std::string& path, const TableSchema& schema);

/// Writes header + rows. Values are printed with 17 significant digits so a
/// parse of the output bit-exactly reproduces the table.
void emit_series_table(const SeriesTable& table, std::ostream& out, char delimiter = ',');
std::string emit_series_table(const SeriesTable& table, char delimiter = ',');

/// Element-wise natural logarithm; name suffixed "_log". All values must be
/// strictly positive; the error names the first offending index.
TimeSeries log_transform(const TimeSeries& s);

/// Element-wise s/population; name suffixed "_pc". Series must share start,
/// length and frequency; population must be strictly positive.
TimeSeries to_per_capita(const TimeSeries& s, const TimeSeries& population);

/// Inclusive sub-series [start, end]; the start label is updated.
TimeSeries slice_period(const TimeSeries& s, Period start, Period end);

}  // namespace emdec
