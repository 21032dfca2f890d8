#pragma once

// Contact-plan CSV:
//   index,start_utc,end_utc,volume_packets,cloud_cover,forecast_cloud_cover
// Times are ISO-8601 or empty (synthetic scenarios have no clock).

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "leosched/core.hpp"
#include "leosched/time.hpp"

namespace leosched {

inline constexpr const char* kContactPlanHeader =
    "index,start_utc,end_utc,volume_packets,cloud_cover,forecast_cloud_cover";

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

inline std::string format_fraction(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

inline void write_contact_plan(std::ostream& out, const std::vector<Contact>& contacts) {
  out << kContactPlanHeader << '\n';
  for (const auto& c : contacts) {
    out << c.index << ',' << (c.start ? format_iso8601(*c.start) : "") << ','
        << (c.end ? format_iso8601(*c.end) : "") << ',' << c.volume << ','
        << format_fraction(c.cloud_cover) << ',' << format_fraction(c.forecast_cloud_cover)
        << '\n';
  }
}

inline std::vector<Contact> read_contact_plan(std::istream& in, const std::string& source) {
  std::vector<Contact> out;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  auto fail = [&](const std::string& what) {
    throw std::invalid_argument(source + ":" + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header) {
      if (line != kContactPlanHeader) fail(std::string("expected header '") + kContactPlanHeader + "'");
      header = true;
      continue;
    }
    const auto f = split_csv_line(line);
    if (f.size() != 6) fail("expected 6 fields, got " + std::to_string(f.size()));
    Contact c;
    try {
      c.index = static_cast<std::size_t>(std::stoull(f[0]));
      if (!f[1].empty()) c.start = parse_iso8601(f[1]);
      if (!f[2].empty()) c.end = parse_iso8601(f[2]);
      c.volume = std::stoll(f[3]);
      c.cloud_cover = std::stod(f[4]);
      c.forecast_cloud_cover = std::stod(f[5]);
    } catch (const std::exception& e) {
      fail(std::string("malformed row: ") + e.what());
    }
    if (c.start && c.end && *c.end < *c.start) fail("end before start");
    try {
      validate(c);
    } catch (const std::exception& e) {
      fail(e.what());
    }
    out.push_back(c);
  }
  if (!header) throw std::invalid_argument(source + ": empty contact plan");
  return out;
}

inline std::vector<Contact> load_contact_plan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open contact plan " + path);
  return read_contact_plan(in, path);
}

inline void save_contact_plan(const std::string& path, const std::vector<Contact>& contacts) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write contact plan " + path);
  write_contact_plan(out, contacts);
}

}  // namespace leosched
