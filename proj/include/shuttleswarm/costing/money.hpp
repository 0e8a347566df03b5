#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>

#include "shuttleswarm/errors.hpp"

namespace shuttleswarm::costing {

// Currency in integer micro-units (6 fractional digits). Conservation checks
// must hold exactly before any display rounding, which integer arithmetic
// guarantees and binary floating point would not.
struct Money {
  std::int64_t micros = 0;

  static Money from_micros(std::int64_t m) { return Money{m}; }
  static Money from_units(double units) {
    return Money{static_cast<std::int64_t>(std::llround(units * 1e6))};
  }

  double to_units() const { return static_cast<double>(micros) / 1e6; }

  Money& operator+=(Money o) {
    micros += o.micros;
    return *this;
  }
  friend Money operator+(Money a, Money b) { return Money{a.micros + b.micros}; }
  friend Money operator-(Money a, Money b) { return Money{a.micros - b.micros}; }
  friend bool operator==(Money a, Money b) { return a.micros == b.micros; }
  friend bool operator<(Money a, Money b) { return a.micros < b.micros; }
  friend bool operator<=(Money a, Money b) { return a.micros <= b.micros; }
};

// num/den rounded to the nearest integer, ties to even. Exact.
inline std::int64_t round_div_half_even(std::int64_t num, std::int64_t den) {
  if (den <= 0) throw DomainError("round_div_half_even: non-positive denominator");
  if (num < 0) throw DomainError("round_div_half_even: negative numerator");
  const std::int64_t q = num / den;
  const std::int64_t r = num % den;
  if (2 * r > den) return q + 1;
  if (2 * r < den) return q;
  return (q % 2 == 0) ? q : q + 1;
}

// "12.34" with exact half-even rounding micros -> cents.
inline std::string format_money_2dp(Money m) {
  const std::int64_t cents = round_div_half_even(m.micros, 10000);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%lld.%02lld",
                static_cast<long long>(cents / 100),
                static_cast<long long>(cents % 100));
  return buf;
}

// Value rounded half-even to 2 decimals, as a double (for JSON emission).
inline double money_to_2dp(Money m) {
  return static_cast<double>(round_div_half_even(m.micros, 10000)) / 100.0;
}

}  // namespace shuttleswarm::costing
