#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fsoqkd::csv {

/// 12 significant digits, scientific: printf "%.11e". Infinities print as
/// "inf"/"-inf", NaN as "nan".
std::string real(double value);

/// Quotes a field when it contains a comma, quote, CR or LF (RFC 4180).
std::string field(const std::string& text);

/// Joins already-formatted fields with commas and terminates with LF.
void write_row(std::ostream& os, const std::vector<std::string>& fields);

} // namespace fsoqkd::csv
