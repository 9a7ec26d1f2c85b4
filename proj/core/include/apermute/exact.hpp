#pragma once

// Exact integer and rational arithmetic on top of GMP.

#include <cstdint>
#include <string>

#include <gmpxx.h>

namespace apermute {

using BigInt = mpz_class;
using Rational = mpq_class;

BigInt factorial(std::uint64_t n);

/// n (n-1) ... (n-k+1); the empty product for k = 0, and 0 when k > n.
BigInt falling_factorial(std::uint64_t n, std::uint64_t k);

BigInt binomial(std::uint64_t n, std::uint64_t k);

BigInt power(std::uint64_t base, std::uint64_t exponent);

/// num/den in lowest terms. Throws Errc::invalid_argument on a zero denominator.
Rational make_rational(const BigInt& num, const BigInt& den);

std::string to_decimal(const BigInt& value);

/// Nearest-below double; well defined for operands far outside the double range.
double to_double(const Rational& value);

}  // namespace apermute
