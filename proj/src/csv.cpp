#include "ndd/csv.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace ndd::csv {

namespace {

constexpr std::array<const char*, 9> kCanonicalColumns = {
    "timestamp", "driver_id", "trip_id",     "v_e",   "a_e",
    "delta_v",   "delta_d",   "lane_change", "cut_in"};

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, delim)) out.push_back(field);
  if (!line.empty() && line.back() == delim) out.emplace_back();
  return out;
}

std::string strip(const std::string& s) {
  auto b = s.find_first_not_of(" \r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \r\n");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  // nan/inf cells are data defects, not numbers
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

bool parse_flag(const std::string& s, bool& out) {
  if (s == "0") {
    out = false;
    return true;
  }
  if (s == "1") {
    out = true;
    return true;
  }
  return false;
}

}  // namespace

ParseResult parse_log(std::istream& in, const ColumnMapping& mapping) {
  std::string header_line;
  if (!std::getline(in, header_line)) {
    throw ConfigError("input is empty: expected a header row");
  }
  const char delim =
      header_line.find('\t') != std::string::npos ? '\t' : ',';

  std::vector<std::string> header;
  for (const auto& h : split(header_line, delim)) header.push_back(strip(h));

  // Resolve each canonical column to its index in the file.
  std::array<int, kCanonicalColumns.size()> col{};
  col.fill(-1);
  for (std::size_t c = 0; c < kCanonicalColumns.size(); ++c) {
    std::string wanted = kCanonicalColumns[c];
    if (auto it = mapping.find(wanted); it != mapping.end()) {
      wanted = it->second;
    }
    auto pos = std::find(header.begin(), header.end(), wanted);
    if (pos == header.end()) {
      throw ConfigError("required column '" + wanted + "' not found in header");
    }
    col[c] = static_cast<int>(pos - header.begin());
  }

  ParseResult result;
  std::string line;
  long long line_no = 1;  // header consumed
  while (std::getline(in, line)) {
    ++line_no;
    if (strip(line).empty()) continue;
    ++result.rows_total;

    auto fields = split(line, delim);
    if (fields.size() < header.size()) {
      result.row_errors.push_back(
          {line_no, "expected " + std::to_string(header.size()) +
                        " fields, got " + std::to_string(fields.size())});
      continue;
    }

    SampleRecord rec;
    bool bad = false;
    auto numeric = [&](int c, double& out) {
      const std::string value = strip(fields[col[c]]);
      if (!parse_double(value, out)) {
        result.row_errors.push_back(
            {line_no, std::string("non-numeric value '") + value + "' in column '" +
                          kCanonicalColumns[c] + "'"});
        bad = true;
      }
    };

    numeric(0, rec.timestamp);
    rec.driver_id = strip(fields[col[1]]);
    rec.trip_id = strip(fields[col[2]]);
    numeric(3, rec.v_e);
    numeric(4, rec.a_e);
    numeric(5, rec.delta_v);

    const std::string dd = strip(fields[col[6]]);
    if (dd.empty()) {
      rec.delta_d.reset();  // no preceding vehicle
    } else {
      double v = 0.0;
      if (!parse_double(dd, v)) {
        result.row_errors.push_back(
            {line_no, "non-numeric value '" + dd + "' in column 'delta_d'"});
        bad = true;
      } else if (v < 0.0) {
        result.row_errors.push_back(
            {line_no, "negative distance '" + dd + "' in column 'delta_d'"});
        bad = true;
      } else {
        rec.delta_d = v;
      }
    }

    for (int c : {7, 8}) {
      const std::string value = strip(fields[col[c]]);
      bool flag = false;
      if (!parse_flag(value, flag)) {
        result.row_errors.push_back(
            {line_no, std::string("flag column '") + kCanonicalColumns[c] +
                          "' must be 0 or 1, got '" + value + "'"});
        bad = true;
      } else if (c == 7) {
        rec.lane_change = flag;
      } else {
        rec.cut_in = flag;
      }
    }

    if (!bad) result.records.push_back(std::move(rec));
  }

  // Group interleaved trips while keeping file order inside each group.
  std::stable_sort(result.records.begin(), result.records.end(),
                   [](const SampleRecord& a, const SampleRecord& b) {
                     if (a.driver_id != b.driver_id)
                       return a.driver_id < b.driver_id;
                     return a.trip_id < b.trip_id;
                   });
  return result;
}

ParseResult parse_log_file(const std::string& path,
                           const ColumnMapping& mapping) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open input file: " + path);
  try {
    return parse_log(in, mapping);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void write_log(std::ostream& out, const std::vector<SampleRecord>& records) {
  out << "timestamp,driver_id,trip_id,v_e,a_e,delta_v,delta_d,lane_change,cut_in\n";
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.9f", v);
    out << buf;
  };
  for (const auto& r : records) {
    num(r.timestamp);
    out << ',' << r.driver_id << ',' << r.trip_id << ',';
    num(r.v_e);
    out << ',';
    num(r.a_e);
    out << ',';
    num(r.delta_v);
    out << ',';
    if (r.delta_d) num(*r.delta_d);
    out << ',' << (r.lane_change ? '1' : '0') << ','
        << (r.cut_in ? '1' : '0') << '\n';
  }
}

}  // namespace ndd::csv
