#include "tvg/strfmt.hpp"

#include <charconv>
#include <cstdlib>
#include <system_error>

#include "tvg/errors.hpp"

namespace tvg {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  if (s.empty()) throw Error("empty numeric field");
  const char* begin = s.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin || end != begin + s.size())
    throw Error("not a number: '" + s + "'");
  return v;
}

long long parse_int(const std::string& s) {
  if (s.empty()) throw Error("empty integer field");
  long long v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw Error("not an integer: '" + s + "'");
  return v;
}

}  // namespace tvg
