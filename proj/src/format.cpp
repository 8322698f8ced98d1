#include "spikelab/format.hpp"

#include <charconv>
#include <cmath>

namespace spikelab {

std::string format_number(double v) {
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  if (std::isnan(v)) {
    return "nan";
  }
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') {
      out += '"';
    }
    out += c;
  }
  out += '"';
  return out;
}

} // namespace spikelab
