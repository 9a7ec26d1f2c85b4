#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "apermute/counting.hpp"
#include "apermute/cycle_sets.hpp"
#include "apermute/exact.hpp"

namespace apermute {

/// Multiset of cycle lengths summing to `degree`.
struct CycleType {
  std::uint64_t degree = 0;
  /// (length, multiplicity) pairs, ascending by length, multiplicities > 0.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> counts;

  std::uint64_t multiplicity(std::uint64_t length) const;

  friend bool operator==(const CycleType&, const CycleType&) = default;
};

/// Lazy enumeration of the cycle types of degree n with all parts in A.
///
/// Parts are viewed as a non-increasing sequence; types come out in
/// increasing lexicographic order of that sequence, e.g. for A = {1,2},
/// n = 4: 1111, 211, 22. Single consumer.
class CycleTypeStream {
 public:
  CycleTypeStream(const CycleLengthSet& set, std::uint64_t n);

  /// Writes the next type into `out`; false once exhausted.
  bool next(CycleType& out);

 private:
  bool feasible(std::size_t j, std::uint64_t remaining) const {
    return feasible_[j * (degree_ + 1) + remaining] != 0;
  }
  void push(std::size_t j);
  void pop();
  void complete(std::uint64_t remaining);
  bool advance();
  void emit(CycleType& out) const;

  std::uint64_t degree_;
  std::vector<std::uint64_t> parts_;         // allowed lengths <= n, ascending
  std::vector<std::uint8_t> feasible_;       // [j][r]: r is a sum of parts_[0..j]
  std::vector<std::size_t> sequence_;        // indices into parts_, non-increasing
  std::vector<std::uint64_t> multiplicity_;  // per index into parts_
  std::uint64_t sum_ = 0;
  bool started_ = false;
  bool done_ = false;
};

std::vector<CycleType> enumerate_cycle_types(const CycleLengthSet& set, std::uint64_t n);

/// n! / prod_l (l^{c_l} c_l!): permutations of [n] with exactly this type.
BigInt cycle_type_count(const CycleType& type);

using CountVector = std::vector<std::uint64_t>;

/// Finitely supported law of the cycle-count vector (N_l)_{l in lengths}.
/// Only points of positive mass are stored.
struct ExactLaw {
  std::vector<std::uint64_t> lengths;
  std::map<CountVector, Rational> mass;

  Rational at(const CountVector& point) const;
  Rational total() const;
};

/// Law of (N_l)_{l in lengths} under the uniform measure on A-permutations of
/// [n], aggregated directly over cycle types.
/// Throws Errc::empty_class ("empty permutation class") when there are none.
ExactLaw exact_joint_law(const CycleLengthSet& set, std::uint64_t n,
                         std::span<const std::uint64_t> lengths);

/// Same law, computed without enumerating cycle types: a permutation with
/// r_l cycles of each tracked length l splits into those cycles and an
/// (A minus tracked)-permutation of the rest, so
///   #{N = r} = (n)_p / prod_l (l^{r_l} r_l!) * t_rest(n - p),  p = sum_l l r_l.
/// `rest` must be the count table of A minus the tracked lengths.
ExactLaw tracked_joint_law(const CountTable& table, const CountTable& rest, std::uint64_t n,
                           std::span<const std::uint64_t> lengths);

/// Convenience overload building the complement table itself.
ExactLaw tracked_joint_law(const CountTable& table, std::uint64_t n,
                           std::span<const std::uint64_t> lengths);

/// E[N_l^m] from the exact marginal law.
Rational exact_moment(const CycleLengthSet& set, std::uint64_t n, std::uint64_t length,
                      std::uint64_t order);

/// E[N_l^m] from the count table alone:
///
///   E[N_l^m] = l^{-m} sum_{j=1}^{m} C(n,j) Surj(m,j) P_j,
///
/// where P_j, the probability that 1..j all lie in l-cycles, is a sum over set
/// partitions pi of [j] (which elements share a cycle):
///
///   P_j = sum_pi [ (t(n-l|pi|)/(n-l|pi|)!) / (t(n)/n!) ] / (n)_j
///         * prod_{V in pi} (l-1)!/(l-|V|)!.
///
/// A block larger than l cannot sit inside one l-cycle; such partitions
/// contribute zero, as do those with n - l|pi| < 0. Returns 0 for l not in A.
Rational moment_via_partitions(const CountTable& table, std::uint64_t n, std::uint64_t length,
                               std::uint64_t order);

/// Number of surjections [m] -> [j].
BigInt surjection_count(std::uint64_t m, std::uint64_t j);

/// Block sizes of every set partition of [j], one entry per partition,
/// generated from restricted-growth strings.
std::vector<std::vector<std::uint64_t>> set_partition_block_sizes(std::uint64_t j);

/// {"lengths": [...], "mass": [{"r": [...], "num": "3", "den": "8"}, ...]}
std::string law_to_json(const ExactLaw& law);

}  // namespace apermute
