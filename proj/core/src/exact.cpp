#include "apermute/exact.hpp"

#include "apermute/error.hpp"

namespace apermute {

BigInt factorial(std::uint64_t n) {
  BigInt out;
  mpz_fac_ui(out.get_mpz_t(), static_cast<unsigned long>(n));
  return out;
}

BigInt falling_factorial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  BigInt out = 1;
  for (std::uint64_t i = 0; i < k; ++i) out *= static_cast<unsigned long>(n - i);
  return out;
}

BigInt binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n),
               static_cast<unsigned long>(k));
  return out;
}

BigInt power(std::uint64_t base, std::uint64_t exponent) {
  BigInt out;
  mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(base),
                static_cast<unsigned long>(exponent));
  return out;
}

Rational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw Error(Errc::invalid_argument, "division by zero");
  Rational out(num, den);
  out.canonicalize();
  return out;
}

std::string to_decimal(const BigInt& value) { return value.get_str(10); }

double to_double(const Rational& value) { return value.get_d(); }

}  // namespace apermute
