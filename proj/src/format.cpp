#include "coopmac/format.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "coopmac/ensemble.hpp"

namespace coopmac {

std::string format_number(double value) {
  if (value == 0.0) value = 0.0;  // fold -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

double parse_number(const std::string& token) {
  if (token.empty()) throw InvalidInput("empty number");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end != token.c_str() + token.size() || errno == ERANGE ||
      !std::isfinite(v)) {
    throw InvalidInput("not a finite number: '" + token + "'");
  }
  return v;
}

}  // namespace coopmac
