#pragma once

#include <string>

namespace coopmac {

/// Decimal rendering with 12 significant digits, used by every artifact.
std::string format_number(double value);

/// Strict parse of a full token as a finite double; throws InvalidInput.
double parse_number(const std::string& token);

}  // namespace coopmac
