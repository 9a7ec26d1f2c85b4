#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "apermute/counting.hpp"
#include "apermute/cycle_types.hpp"
#include "apermute/exact.hpp"

namespace apermute {

/// P(N_{l_1} = r_1, ..., N_{l_q} = r_q) for a uniform A-permutation of [degree].
struct IEQuery {
  std::vector<std::uint64_t> lengths;  // l_1 < ... < l_q
  CountVector targets;                 // r_1, ..., r_q
  std::uint64_t degree = 0;
};

/// S_k(n): the expected number of families of pairwise disjoint cycles made of
/// k_i cycles of length l_i. By conjugation invariance
///
///   S_k(n) = n! / ((n-p)! prod_i l_i^{k_i} k_i!) * t(n-p)/t(n),   p = sum_i k_i l_i,
///
/// and 0 if some l_i with k_i > 0 is not in A, or if p > n.
/// Throws Errc::empty_class when t(n) = 0.
Rational sk_at_n(const CountTable& table, std::uint64_t n, std::span<const std::uint64_t> lengths,
                 std::span<const std::uint64_t> k);

/// Limiting value 1 / prod_i (l_i^{k_i} k_i!).
Rational limit_sk(std::span<const std::uint64_t> lengths, std::span<const std::uint64_t> k);

enum class BoundDirection { lower, upper };

struct BonferroniBound {
  Rational value;
  BoundDirection direction;
};

/// The finite alternating expansion
///
///   P(C = r) = sum_{k >= r} (-1)^{|k-r|} prod_i C(k_i, r_i) S_k(n),
///
/// grouped by total excess e = sum_i (k_i - r_i), with k_i <= floor(n/l_i).
/// Every term is an integer multiple of 1/t(n), so the groups are kept as
/// integers and each truncation is exact.
class InclusionExclusionExpansion {
 public:
  InclusionExclusionExpansion(const CountTable& table, const IEQuery& query);

  /// sum_i (floor(n/l_i) - r_i), or 0 when some r_i exceeds floor(n/l_i).
  std::uint64_t max_excess() const { return level_sums_.size() - 1; }

  /// The full sum: the exact mass P(C = r).
  Rational exact() const;

  /// Terms with excess <= m; a lower bound for odd m and an upper bound for
  /// even m.
  BonferroniBound bound(std::uint64_t m) const;

  /// Level e sum, scaled by t(n).
  const BigInt& scaled_level(std::uint64_t e) const { return level_sums_.at(e); }
  const BigInt& denominator() const { return denominator_; }

 private:
  std::vector<BigInt> level_sums_;
  BigInt denominator_;
};

Rational joint_mass_via_ie(const CountTable& table, const IEQuery& query);

BonferroniBound bonferroni_bound(const CountTable& table, const IEQuery& query, std::uint64_t m);

/// Diagonal partial sum of the limiting series
///
///   sum_{k >= r, |k-r| <= m} (-1)^{|k-r|} prod_i C(k_i, r_i) limit_sk(k),
///
/// which tends to the Poisson product mass as m grows. The series does not
/// converge absolutely in general, so only this truncation order is used.
Rational limiting_partial_sum(std::span<const std::uint64_t> lengths,
                              std::span<const std::uint64_t> targets, std::uint64_t m);

/// prod_i e^{-1/l_i} (1/l_i)^{r_i} / r_i!
double poisson_product_mass(std::span<const std::uint64_t> lengths,
                            std::span<const std::uint64_t> targets);

}  // namespace apermute
