#pragma once

#include <string>

namespace spikelab {

/// Shortest decimal that round-trips the double; "inf", "-inf", "nan" otherwise.
std::string format_number(double v);

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(const std::string& s);

} // namespace spikelab
