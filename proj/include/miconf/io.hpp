#pragma once

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "miconf/distribution.hpp"

namespace miconf {

/// Rounds v to `digits` significant digits (the value a report displays).
inline double round_sig(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return std::strtod(buf, nullptr);
}

/// Shortest text form of v at `digits` significant digits.
inline std::string format_sig(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

namespace detail {

inline bool parse_label(const std::string& field, int& out) {
  const char* begin = field.c_str();
  char* end = nullptr;
  const long v = std::strtol(begin, &end, 10);
  if (end == begin) return false;
  while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
  if (*end != '\0') return false;
  out = static_cast<int>(v);
  return true;
}

}  // namespace detail

/// Reads comma-separated "x,y" rows of 1-based labels into a count table.
/// A first line that does not parse as two integers is treated as a header.
inline CountTable load_samples_csv(std::istream& in, std::size_t mx, std::size_t my) {
  std::vector<std::pair<int, int>> samples;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto comma = line.find(',');
    int x = 0, y = 0;
    const bool ok = comma != std::string::npos &&
                    detail::parse_label(line.substr(0, comma), x) &&
                    detail::parse_label(line.substr(comma + 1), y);
    if (!ok) {
      if (lineno == 1) continue;  // header row
      throw std::invalid_argument("line " + std::to_string(lineno) +
                                  ": expected two comma-separated integer labels");
    }
    samples.emplace_back(x, y);
  }
  if (samples.empty()) throw std::invalid_argument("no samples found in CSV input");
  return empirical_from_samples(samples, mx, my);
}

}  // namespace miconf
