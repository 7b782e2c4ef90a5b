#pragma once

#include <cstdint>
#include <string>

namespace tvg {

/// Shortest decimal string that round-trips the double (std::to_chars).
/// Every file the toolchain writes goes through this, so reruns are byte-identical.
std::string format_double(double v);

/// Parse a decimal double; throws Error on garbage or trailing junk.
double parse_double(const std::string& s);

/// Parse a nonnegative integer; throws Error on garbage.
long long parse_int(const std::string& s);

/// Unbiased draw in [0, n) from a 64-bit generator output stream.
/// std::uniform_int_distribution is implementation-defined, which would break
/// byte-exact seeded outputs across toolchains; this is pinned.
template <typename Rng>
std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

/// Uniform double in [0, 1) with 53 random bits.
template <typename Rng>
double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace tvg
