#include "apermute/inclusion_exclusion.hpp"

#include <cmath>

#include "apermute/error.hpp"

namespace apermute {
namespace {

void require_shape(std::span<const std::uint64_t> lengths, std::span<const std::uint64_t> k) {
  if (lengths.empty() || lengths.size() != k.size()) {
    throw Error(Errc::invalid_argument, "lengths and counts must be nonempty and of equal size");
  }
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (lengths[i] == 0 || (i > 0 && lengths[i] <= lengths[i - 1])) {
      throw Error(Errc::invalid_argument,
                  "tracked lengths must be positive and strictly increasing");
    }
  }
}

// t(n) * S_k(n) = (n)_p / prod_i (l_i^{k_i} k_i!) * t(n-p), an integer.
BigInt scaled_sk(const CountTable& table, std::uint64_t n, std::span<const std::uint64_t> lengths,
                 std::span<const std::uint64_t> k) {
  std::uint64_t p = 0;
  BigInt denominator = 1;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (k[i] == 0) continue;
    if (!table.set().contains(lengths[i])) return 0;
    p += k[i] * lengths[i];
    if (p > n) return 0;
    denominator *= power(lengths[i], k[i]) * factorial(k[i]);
  }
  BigInt out = falling_factorial(n, p);
  mpz_divexact(out.get_mpz_t(), out.get_mpz_t(), denominator.get_mpz_t());
  return out * table.count(n - p);
}

const BigInt& nonempty_count(const CountTable& table, std::uint64_t n) {
  const BigInt& t_n = table.count(n);
  if (t_n == 0) throw Error(Errc::empty_class, "empty permutation class");
  return t_n;
}

}  // namespace

Rational sk_at_n(const CountTable& table, std::uint64_t n, std::span<const std::uint64_t> lengths,
                 std::span<const std::uint64_t> k) {
  require_shape(lengths, k);
  const BigInt& t_n = nonempty_count(table, n);
  return make_rational(scaled_sk(table, n, lengths, k), t_n);
}

Rational limit_sk(std::span<const std::uint64_t> lengths, std::span<const std::uint64_t> k) {
  require_shape(lengths, k);
  BigInt denominator = 1;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    denominator *= power(lengths[i], k[i]) * factorial(k[i]);
  }
  return make_rational(1, denominator);
}

InclusionExclusionExpansion::InclusionExclusionExpansion(const CountTable& table,
                                                         const IEQuery& query) {
  const auto& lengths = query.lengths;
  const auto& r = query.targets;
  require_shape(lengths, r);
  const std::uint64_t n = query.degree;
  denominator_ = nonempty_count(table, n);

  std::vector<std::uint64_t> top(lengths.size());
  std::uint64_t span = 0;
  bool empty_range = false;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    top[i] = n / lengths[i];
    if (r[i] > top[i]) {
      empty_range = true;
    } else {
      span += top[i] - r[i];
    }
  }
  if (empty_range) {
    level_sums_.assign(1, BigInt(0));
    return;
  }
  level_sums_.assign(span + 1, BigInt(0));

  // Odometer over r <= k <= top.
  std::vector<std::uint64_t> k(r.begin(), r.end());
  while (true) {
    std::uint64_t excess = 0;
    BigInt weight = 1;
    for (std::size_t i = 0; i < k.size(); ++i) {
      excess += k[i] - r[i];
      weight *= binomial(k[i], r[i]);
    }
    BigInt term = scaled_sk(table, n, lengths, k);
    if (term != 0) {
      term *= weight;
      if (excess % 2 == 0) {
        level_sums_[excess] += term;
      } else {
        level_sums_[excess] -= term;
      }
    }
    std::size_t i = 0;
    while (i < k.size() && k[i] == top[i]) {
      k[i] = r[i];
      ++i;
    }
    if (i == k.size()) break;
    ++k[i];
  }
}

Rational InclusionExclusionExpansion::exact() const { return bound(max_excess()).value; }

BonferroniBound InclusionExclusionExpansion::bound(std::uint64_t m) const {
  BigInt partial = 0;
  const std::uint64_t last = std::min<std::uint64_t>(m, max_excess());
  for (std::uint64_t e = 0; e <= last; ++e) partial += level_sums_[e];
  return {make_rational(partial, denominator_),
          m % 2 == 1 ? BoundDirection::lower : BoundDirection::upper};
}

Rational joint_mass_via_ie(const CountTable& table, const IEQuery& query) {
  return InclusionExclusionExpansion(table, query).exact();
}

BonferroniBound bonferroni_bound(const CountTable& table, const IEQuery& query, std::uint64_t m) {
  return InclusionExclusionExpansion(table, query).bound(m);
}

Rational limiting_partial_sum(std::span<const std::uint64_t> lengths,
                              std::span<const std::uint64_t> targets, std::uint64_t m) {
  require_shape(lengths, targets);
  // The summand factorizes over i given the excess split e_1 + ... + e_q, so the
  // diagonal sum is the prefix sum of a convolution of per-length sequences
  //   a_i(e) = (-1)^e C(r_i+e, r_i) / (l_i^{r_i+e} (r_i+e)!).
  std::vector<Rational> acc(m + 1, Rational(0));
  acc[0] = 1;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    std::vector<Rational> seq(m + 1);
    for (std::uint64_t e = 0; e <= m; ++e) {
      const std::uint64_t k = targets[i] + e;
      seq[e] = make_rational(binomial(k, targets[i]), power(lengths[i], k) * factorial(k));
      if (e % 2 == 1) seq[e] = -seq[e];
    }
    std::vector<Rational> next(m + 1, Rational(0));
    for (std::uint64_t a = 0; a <= m; ++a) {
      if (acc[a] == 0) continue;
      for (std::uint64_t b = 0; a + b <= m; ++b) next[a + b] += acc[a] * seq[b];
    }
    acc = std::move(next);
  }
  Rational sum = 0;
  for (const auto& v : acc) sum += v;
  return sum;
}

double poisson_product_mass(std::span<const std::uint64_t> lengths,
                            std::span<const std::uint64_t> targets) {
  require_shape(lengths, targets);
  double log_mass = 0.0;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    const double lambda = 1.0 / static_cast<double>(lengths[i]);
    const double r = static_cast<double>(targets[i]);
    log_mass += -lambda + r * std::log(lambda) - std::lgamma(r + 1.0);
  }
  return std::exp(log_mass);
}

}  // namespace apermute
