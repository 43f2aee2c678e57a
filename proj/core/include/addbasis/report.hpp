#pragma once

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace addbasis {

// Shortest decimal text that reads back to the same double ("nan", "inf" and
// "-inf" for the non-finite values). Locale independent.
std::string format_double(double value);

struct Column {
  std::string name;
  std::vector<double> values;
};

// Outcome of one numerical check over a grid. `proxy` states how a limit
// statement was turned into a finite test; `passed` holds iff every grid point
// met it, and `witness` names the worst offender on failure.
struct VerificationReport {
  std::string claim;
  std::string subject;
  std::string proxy;
  double tolerance = 0;
  std::vector<double> grid;
  std::deque<Column> columns;  // references from add_column stay valid
  bool passed = false;
  std::optional<double> witness;
  std::string note;

  std::vector<double>& add_column(const std::string& name);
  // nullptr when absent.
  const std::vector<double>* column(const std::string& name) const;
};

nlohmann::json to_json(const VerificationReport& report);

// Header "x,<column names>", one row per grid point, LF line endings.
void write_csv(std::ostream& out, const VerificationReport& report);

// Writes `header` then rows joined by ',' with format_double.
void write_csv_rows(std::ostream& out, const std::vector<std::string>& header,
                    const std::vector<std::vector<double>>& columns);

}  // namespace addbasis
