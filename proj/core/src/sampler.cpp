#include "apermute/sampler.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "apermute/error.hpp"

namespace apermute {
namespace {

// Order-statistics over {1..n} with deletion.
class PresenceTree {
 public:
  explicit PresenceTree(std::uint64_t n) : tree_(n + 1, 0) {
    for (std::uint64_t i = 1; i <= n; ++i) {
      tree_[i] += 1;
      const std::uint64_t parent = i + (i & (~i + 1));
      if (parent <= n) tree_[parent] += tree_[i];
    }
    top_ = n == 0 ? 0 : std::bit_floor(n);
  }

  void remove(std::uint64_t value) {
    for (std::uint64_t i = value; i < tree_.size(); i += i & (~i + 1)) --tree_[i];
  }

  /// The rank-th smallest present value, rank >= 1.
  std::uint64_t select(std::uint64_t rank) const {
    std::uint64_t pos = 0;
    for (std::uint64_t step = top_; step > 0; step >>= 1) {
      if (pos + step < tree_.size() && tree_[pos + step] < rank) {
        pos += step;
        rank -= tree_[pos];
      }
    }
    return pos + 1;
  }

 private:
  std::vector<std::uint64_t> tree_;
  std::uint64_t top_ = 0;
};

}  // namespace

Permutation::Permutation(std::vector<std::uint64_t> images) : images_(std::move(images)) {
  std::vector<bool> seen(images_.size() + 1, false);
  for (auto v : images_) {
    if (v == 0 || v > images_.size() || seen[v]) {
      throw Error(Errc::invalid_argument, "not a permutation in one-line form");
    }
    seen[v] = true;
  }
}

Permutation Permutation::identity(std::uint64_t n) {
  std::vector<std::uint64_t> images(n);
  std::iota(images.begin(), images.end(), std::uint64_t{1});
  return Permutation(std::move(images));
}

std::string Permutation::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(images_[i]);
  }
  return out;
}

std::uint64_t RandomSource::uniform_below(std::uint64_t bound) {
  if (bound == 0) throw Error(Errc::invalid_argument, "uniform_below: empty range");
  // Accept x >= 2^64 mod bound: the accepted range is a multiple of bound.
  const std::uint64_t threshold = (~bound + 1) % bound;
  while (true) {
    const std::uint64_t x = next_u64();
    if (x >= threshold) return x % bound;
  }
}

BigInt RandomSource::uniform_below(const BigInt& bound) {
  if (bound <= 0) throw Error(Errc::invalid_argument, "uniform_below: empty range");
  if (bound.fits_ulong_p()) return BigInt(uniform_below(static_cast<std::uint64_t>(bound.get_ui())));
  const BigInt top = bound - 1;
  const std::size_t bits = mpz_sizeinbase(top.get_mpz_t(), 2);
  const std::size_t words = (bits + 63) / 64;
  const std::size_t spare = words * 64 - bits;
  std::vector<std::uint64_t> buffer(words);
  BigInt candidate;
  while (true) {
    // Most significant word first.
    for (auto& w : buffer) w = next_u64();
    buffer[0] >>= spare;
    mpz_import(candidate.get_mpz_t(), words, 1, sizeof(std::uint64_t), 0, 0, buffer.data());
    if (candidate < bound) return candidate;
  }
}

std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + (stream + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Permutation sample_apermutation(const CountTable& table, std::uint64_t n, RandomSource& rng) {
  if (table.count(n) == 0) throw Error(Errc::empty_class, "empty permutation class");
  std::vector<std::uint64_t> images(n, 0);
  PresenceTree unplaced(n);
  std::vector<std::uint64_t> cycle;
  BigInt weight, cumulative, ff;

  for (std::uint64_t remaining = n; remaining > 0;) {
    const BigInt& total = table.count(remaining);
    const BigInt draw = rng.uniform_below(total);

    std::uint64_t chosen = 0;
    cumulative = 0;
    ff = 1;  // (remaining-1)...(remaining-k+1)
    std::uint64_t ff_len = 1;
    for (auto k : table.set().members_up_to(remaining)) {
      for (; ff_len < k; ++ff_len) ff *= static_cast<unsigned long>(remaining - ff_len);
      weight = ff * table.count(remaining - k);
      cumulative += weight;
      if (chosen == 0 && draw < cumulative) chosen = k;
    }
    if (cumulative != total || chosen == 0) {
      throw Error(Errc::identity_violation, "sampler weights do not sum to t(n')");
    }

    cycle.clear();
    const std::uint64_t head = unplaced.select(1);
    unplaced.remove(head);
    cycle.push_back(head);
    for (std::uint64_t i = 1; i < chosen; ++i) {
      const std::uint64_t pick = unplaced.select(1 + rng.uniform_below(remaining - i));
      unplaced.remove(pick);
      cycle.push_back(pick);
    }
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      images[cycle[i] - 1] = cycle[(i + 1) % cycle.size()];
    }
    remaining -= chosen;
  }
  return Permutation(std::move(images));
}

std::map<std::uint64_t, std::uint64_t> cycle_counts(const Permutation& perm) {
  std::map<std::uint64_t, std::uint64_t> counts;
  std::vector<bool> visited(perm.degree() + 1, false);
  for (std::uint64_t start = 1; start <= perm.degree(); ++start) {
    if (visited[start]) continue;
    std::uint64_t length = 0;
    for (std::uint64_t i = start; !visited[i]; i = perm(i)) {
      visited[i] = true;
      ++length;
    }
    ++counts[length];
  }
  return counts;
}

std::vector<Permutation> enumerate_class(const CycleLengthSet& set, std::uint64_t n) {
  if (n > 8) throw Error(Errc::oracle_limit, "oracle size limit");
  std::vector<Permutation> out;
  std::vector<std::uint64_t> images(n);
  std::iota(images.begin(), images.end(), std::uint64_t{1});
  do {
    Permutation perm(images);
    const auto counts = cycle_counts(perm);
    if (std::all_of(counts.begin(), counts.end(),
                    [&](const auto& entry) { return set.contains(entry.first); })) {
      out.push_back(std::move(perm));
    }
  } while (std::next_permutation(images.begin(), images.end()));
  return out;
}

std::map<CountVector, double> empirical_joint_law(const CountTable& table, std::uint64_t n,
                                                  std::span<const std::uint64_t> lengths,
                                                  std::uint64_t sample_count, RandomSource& rng) {
  if (sample_count == 0) throw Error(Errc::invalid_argument, "sample_count must be >= 1");
  std::map<CountVector, std::uint64_t> hits;
  CountVector key(lengths.size());
  for (std::uint64_t s = 0; s < sample_count; ++s) {
    const auto counts = cycle_counts(sample_apermutation(table, n, rng));
    for (std::size_t i = 0; i < lengths.size(); ++i) {
      auto it = counts.find(lengths[i]);
      key[i] = it == counts.end() ? 0 : it->second;
    }
    ++hits[key];
  }
  std::map<CountVector, double> freq;
  for (const auto& [point, h] : hits) {
    freq.emplace(point, static_cast<double>(h) / static_cast<double>(sample_count));
  }
  return freq;
}

}  // namespace apermute
