#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "apermute/cycle_sets.hpp"
#include "apermute/exact.hpp"

namespace apermute {

/// Exact counts t(n) = number of permutations of [n] whose cycle lengths all
/// lie in A, for n = 0..n_max.
///
/// Built from the exponential generating function exp(sum_{k in A} z^k / k):
/// differentiating gives n a_n = sum_{k in A, k <= n} a_{n-k} for
/// a_n = t(n)/n!, which in integer form reads
///
///   t(n) = sum_{k in A, k <= n} (n-1)(n-2)...(n-k+1) t(n-k).
///
/// The table is immutable for readers; extend_to() needs exclusive access.
class CountTable {
 public:
  CountTable(CycleLengthSet set, std::uint64_t n_max);

  /// Adopts precomputed values (cache load). t(0) must be 1.
  static CountTable from_values(CycleLengthSet set, std::vector<BigInt> values);

  const CycleLengthSet& set() const { return set_; }
  std::uint64_t n_max() const { return values_.size() - 1; }
  std::span<const BigInt> values() const { return values_; }

  /// t(n); throws Errc::invalid_argument if n > n_max().
  const BigInt& count(std::uint64_t n) const;
  /// t(n) with negative n read as 0.
  BigInt count_or_zero(std::int64_t n) const;

  /// Grows the table to `n_max`, rematerializing an infinite A if needed.
  void extend_to(std::uint64_t n_max);

 private:
  CountTable() = default;
  void append_next();

  CycleLengthSet set_;
  std::vector<BigInt> values_;
};

CountTable build_count_table(const CycleLengthSet& set, std::uint64_t n_max);

/// Independent recheck of the recurrence at degree n (1 <= n <= n_max).
bool satisfies_recurrence(const CountTable& table, std::uint64_t n);

/// u_n / u_{n-1} with u_n = t(qn)/(qn)!.
/// Throws Errc::empty_class ("empty reference class") when t(q(n-1)) = 0.
Rational normalized_ratio(const CountTable& table, std::uint64_t n, std::uint64_t q);

/// t(n-p)/t(n): the probability that a uniform A-permutation of [n] agrees
/// on [p] with a fixed A-permutation of [p].
/// Throws Errc::empty_class ("empty permutation class") when t(n) = 0.
Rational prefix_probability(const CountTable& table, std::uint64_t n, std::uint64_t p);

// Cache file (text):
//   APCOUNT v1
//   <canonical set rule>
//   <n_max>
//   t(0)
//   ...
//   t(n_max)
void write_count_table(const CountTable& table, std::ostream& out);

/// Throws Errc::io on a malformed file or a rule other than `expected`.
CountTable read_count_table(std::istream& in, const SetRule& expected);

/// Directory of cached count tables, one file per canonical set rule.
class CountCache {
 public:
  explicit CountCache(std::filesystem::path directory);

  std::filesystem::path path_for(const SetRule& rule) const;

  /// Loads the cached table for `rule` (extending and rewriting it when it
  /// is shorter than n_max), or builds and stores a fresh one. A file whose
  /// header does not match the rule is ignored and overwritten.
  CountTable load_or_build(const SetRule& rule, std::uint64_t n_max) const;

 private:
  std::filesystem::path directory_;
};

}  // namespace apermute
