#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "apermute/counting.hpp"
#include "apermute/cycle_sets.hpp"
#include "apermute/cycle_types.hpp"
#include "apermute/exact.hpp"

namespace apermute {

/// A bijection of [n] in one-line form: images()[i] = sigma(i + 1).
class Permutation {
 public:
  /// Throws Errc::invalid_argument unless `images` is a bijection of [n].
  explicit Permutation(std::vector<std::uint64_t> images);

  static Permutation identity(std::uint64_t n);

  std::uint64_t degree() const { return images_.size(); }
  std::span<const std::uint64_t> images() const { return images_; }
  /// sigma(i) for 1 <= i <= n.
  std::uint64_t operator()(std::uint64_t i) const { return images_[i - 1]; }

  /// "3 1 2"
  std::string to_string() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::uint64_t> images_;
};

/// Seedable source of uniform 64-bit words. Bounded draws use rejection,
/// never a bare modulo, so they carry no bias even for bounds far beyond
/// 64 bits.
class RandomSource {
 public:
  virtual ~RandomSource() = default;

  virtual std::uint64_t next_u64() = 0;

  /// Uniform on [0, bound); bound >= 1.
  std::uint64_t uniform_below(std::uint64_t bound);

  /// Uniform on [0, bound); bound >= 1. Draws ceil(bits(bound-1)/64) words
  /// per attempt, masks the top word, and rejects values >= bound.
  BigInt uniform_below(const BigInt& bound);
};

/// Default generator: the 64-bit Mersenne Twister (std::mt19937_64), whose
/// output sequence is fixed by the C++ standard, seeded with a single 64-bit
/// value. Same seed, same stream on every conforming implementation.
class Mt64Source final : public RandomSource {
 public:
  explicit Mt64Source(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  std::uint64_t next_u64() override {
    ++position_;
    return engine_();
  }

  std::uint64_t seed() const { return seed_; }
  /// Number of words drawn so far.
  std::uint64_t position() const { return position_; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
  std::uint64_t position_ = 0;
};

/// Seed for worker `stream` derived from a master seed: one SplitMix64 step
/// applied to master + (stream + 1) * 0x9e3779b97f4a7c15.
std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t stream);

/// Exactly uniform A-permutation of [n].
///
/// Among n' unplaced elements, the cycle through the smallest one has length
/// k in A with weight (n'-1)(n'-2)...(n'-k+1) t(n'-k); these weights sum to
/// t(n'). Draw a uniform integer below t(n'), pick k by cumulative weight,
/// choose the other k-1 cycle members as a uniform ordered selection from the
/// unplaced elements, and continue on the remaining n'-k.
///
/// Throws Errc::empty_class ("empty permutation class") when t(n) = 0.
Permutation sample_apermutation(const CountTable& table, std::uint64_t n, RandomSource& rng);

/// N_l for every l with N_l > 0.
std::map<std::uint64_t, std::uint64_t> cycle_counts(const Permutation& perm);

/// Every A-permutation of [n], by filtering all of S_n. Oracle only:
/// throws Errc::oracle_limit ("oracle size limit") for n > 8.
std::vector<Permutation> enumerate_class(const CycleLengthSet& set, std::uint64_t n);

/// Relative frequencies of (N_l)_{l in lengths} over independent samples.
std::map<CountVector, double> empirical_joint_law(const CountTable& table, std::uint64_t n,
                                                  std::span<const std::uint64_t> lengths,
                                                  std::uint64_t sample_count, RandomSource& rng);

}  // namespace apermute
