#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace tropabel {

using Rational = mpq_class;
using Integer = mpz_class;

// Accepts "3", "-1/2", " 4/6 " (normalised). Throws InputError otherwise.
Rational parse_rational(std::string_view text);

// Canonical text: "p/q" with q > 1, or "p".
std::string to_string(const Rational& q);

bool is_integer(const Rational& q);

// Exact conversion; throws std::overflow_error when the value does not fit.
std::int64_t to_int64(const Integer& z);
std::int64_t to_int64_exact(const Rational& q);

std::int64_t lcm64(std::int64_t a, std::int64_t b);

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  Rational q{Integer(static_cast<long>(num)), Integer(static_cast<long>(den))};
  q.canonicalize();
  return q;
}

}  // namespace tropabel
