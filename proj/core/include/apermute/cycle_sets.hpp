#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace apermute {

/// A rule describing a set A of allowed cycle lengths: a base set minus a
/// finite exclusion list.
///
/// Text syntax (also the canonical form produced by canonical()):
///   "1,2,5"       explicit finite list
///   "all"         every positive integer
///   "min:m"       every k >= m
///   "mult:m"      every positive multiple of m
///   "not:1,3"     every positive integer except the listed ones
///   "<base>;not:<list>"   an infinite base minus a finite list
struct SetRule {
  enum class Base { explicit_list, all, at_least, multiples_of };

  Base base = Base::all;
  std::vector<std::uint64_t> values;    // explicit_list members, sorted unique
  std::uint64_t parameter = 0;          // m for at_least / multiples_of
  std::vector<std::uint64_t> excluded;  // sorted unique; empty for explicit lists

  bool contains(std::uint64_t k) const;
  bool is_finite() const { return base == Base::explicit_list; }
  std::string canonical() const;

  friend bool operator==(const SetRule&, const SetRule&) = default;
};

/// Throws Errc::invalid_argument on malformed text.
SetRule parse_set_rule(std::string_view text);

/// Same rule with `lengths` removed; explicit lists absorb the exclusion.
SetRule exclude(const SetRule& rule, std::span<const std::uint64_t> lengths);

/// The materialized set A ∩ [bound], remembering the rule it came from.
/// Immutable once built.
class CycleLengthSet {
 public:
  const SetRule& rule() const { return rule_; }
  std::span<const std::uint64_t> members() const { return members_; }
  /// Members that are <= n.
  std::span<const std::uint64_t> members_up_to(std::uint64_t n) const;
  std::uint64_t bound() const { return bound_; }
  /// True when members() is all of A (finite A fully listed).
  bool is_complete() const { return complete_; }
  bool empty() const { return members_.empty(); }
  /// Membership per the rule; valid for any k, materialized or not.
  bool contains(std::uint64_t k) const { return rule_.contains(k); }
  /// Whether every member <= n is materialized.
  bool covers(std::uint64_t n) const { return complete_ || n <= bound_; }
  std::string canonical() const { return rule_.canonical(); }

  /// A \ lengths at the same bound. May be empty.
  CycleLengthSet without(std::span<const std::uint64_t> lengths) const;
  CycleLengthSet rematerialized(std::uint64_t bound) const;

 private:
  friend CycleLengthSet materialize(const SetRule& rule, std::uint64_t bound);
  static CycleLengthSet build(SetRule rule, std::uint64_t bound);

  SetRule rule_;
  std::vector<std::uint64_t> members_;
  std::uint64_t bound_ = 0;
  bool complete_ = false;
};

/// Throws Errc::invalid_argument for bound 0 and for an empty result
/// ("empty cycle-length set").
CycleLengthSet materialize(const SetRule& rule, std::uint64_t bound);

/// Materializes far enough to cover degrees up to n; explicit lists are
/// always materialized completely, other rules at least up to their smallest
/// member.
CycleLengthSet materialize_covering(const SetRule& rule, std::uint64_t n);

/// Greatest common divisor of all of A, including members beyond the
/// materialized bound. Throws on an empty set.
std::uint64_t gcd_of(const CycleLengthSet& set);

/// Bitmap of which degrees 0..n_max are sums of members (with repetition).
std::vector<bool> representable_degrees(const CycleLengthSet& set, std::uint64_t n_max);

/// Whether n is a sum of members of A; equivalently whether the class of
/// A-permutations of degree n is nonempty.
bool degree_is_representable(const CycleLengthSet& set, std::uint64_t n);

}  // namespace apermute
