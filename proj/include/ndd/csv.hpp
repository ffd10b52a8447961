#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "ndd/types.hpp"

namespace ndd::csv {

// Canonical column names:
//   timestamp,driver_id,trip_id,v_e,a_e,delta_v,delta_d,lane_change,cut_in
// A mapping entry renames a canonical column to whatever the file uses.
using ColumnMapping = std::map<std::string, std::string>;

struct RowError {
  long long line = 0;  // 1-based, header is line 1
  std::string message;
};

struct ParseResult {
  std::vector<SampleRecord> records;  // file order, grouped by (driver, trip)
  std::vector<RowError> row_errors;
  long long rows_total = 0;  // data rows seen, good or bad
};

// Parses a delimited text table (comma default, tab accepted) with a header
// row. Malformed rows are reported in row_errors and skipped; a missing
// required column throws ConfigError.
ParseResult parse_log(std::istream& in, const ColumnMapping& mapping = {});

ParseResult parse_log_file(const std::string& path,
                           const ColumnMapping& mapping = {});

// Writes records in the canonical format. Numeric fields carry nine decimal
// places so a write/read cycle preserves values to 1e-9 absolute.
void write_log(std::ostream& out, const std::vector<SampleRecord>& records);

}  // namespace ndd::csv
