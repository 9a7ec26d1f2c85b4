#include "apermute/counting.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "apermute/error.hpp"

namespace apermute {
namespace {

constexpr const char* kCacheMagic = "APCOUNT v1";

void require_covered(const CountTable& table, std::uint64_t n) {
  if (n > table.n_max()) {
    throw Error(Errc::invalid_argument, "degree " + std::to_string(n) +
                                            " beyond count table (n_max = " +
                                            std::to_string(table.n_max()) + ")");
  }
}

[[noreturn]] void bad_cache(const std::string& why) {
  throw Error(Errc::io, "count cache: " + why);
}

// FNV-1a, used only to name cache files.
std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

CountTable::CountTable(CycleLengthSet set, std::uint64_t n_max) : set_(std::move(set)) {
  if (!set_.covers(n_max)) {
    throw Error(Errc::invalid_argument,
                "cycle-length set materialized only up to " + std::to_string(set_.bound()));
  }
  values_.reserve(n_max + 1);
  values_.emplace_back(1);
  while (values_.size() <= n_max) append_next();
}

CountTable CountTable::from_values(CycleLengthSet set, std::vector<BigInt> values) {
  if (values.empty() || values.front() != 1) {
    throw Error(Errc::invalid_argument, "count table must start with t(0) = 1");
  }
  if (!set.covers(values.size() - 1)) {
    throw Error(Errc::invalid_argument, "cycle-length set does not cover the table");
  }
  CountTable table;
  table.set_ = std::move(set);
  table.values_ = std::move(values);
  return table;
}

void CountTable::append_next() {
  const std::uint64_t n = values_.size();
  BigInt total = 0;
  BigInt ff = 1;  // (n-1)(n-2)...(n-k+1)
  std::uint64_t ff_len = 1;
  for (auto k : set_.members_up_to(n)) {
    for (; ff_len < k; ++ff_len) ff *= static_cast<unsigned long>(n - ff_len);
    total += ff * values_[n - k];
  }
  values_.push_back(std::move(total));
}

const BigInt& CountTable::count(std::uint64_t n) const {
  require_covered(*this, n);
  return values_[n];
}

BigInt CountTable::count_or_zero(std::int64_t n) const {
  if (n < 0) return 0;
  return count(static_cast<std::uint64_t>(n));
}

void CountTable::extend_to(std::uint64_t n_max) {
  if (n_max <= this->n_max()) return;
  if (!set_.covers(n_max)) set_ = set_.rematerialized(n_max);
  values_.reserve(n_max + 1);
  while (values_.size() <= n_max) append_next();
}

CountTable build_count_table(const CycleLengthSet& set, std::uint64_t n_max) {
  return CountTable(set, n_max);
}

bool satisfies_recurrence(const CountTable& table, std::uint64_t n) {
  if (n == 0) return table.count(0) == 1;
  require_covered(table, n);
  BigInt total = 0;
  for (std::uint64_t k = 1; k <= n; ++k) {
    if (!table.set().contains(k)) continue;
    total += falling_factorial(n - 1, k - 1) * table.count(n - k);
  }
  return total == table.count(n);
}

Rational normalized_ratio(const CountTable& table, std::uint64_t n, std::uint64_t q) {
  if (n == 0 || q == 0) throw Error(Errc::invalid_argument, "normalized_ratio needs n, q >= 1");
  const std::uint64_t hi = q * n;
  const std::uint64_t lo = hi - q;
  require_covered(table, hi);
  if (table.count(lo) == 0) throw Error(Errc::empty_class, "empty reference class");
  // (t(hi)/hi!) / (t(lo)/lo!) = t(hi) / (t(lo) * (hi)_q)
  return make_rational(table.count(hi), table.count(lo) * falling_factorial(hi, q));
}

Rational prefix_probability(const CountTable& table, std::uint64_t n, std::uint64_t p) {
  if (p > n) throw Error(Errc::invalid_argument, "prefix length exceeds degree");
  require_covered(table, n);
  if (table.count(n) == 0) throw Error(Errc::empty_class, "empty permutation class");
  return make_rational(table.count(n - p), table.count(n));
}

void write_count_table(const CountTable& table, std::ostream& out) {
  out << kCacheMagic << '\n' << table.set().canonical() << '\n' << table.n_max() << '\n';
  for (const auto& t : table.values()) out << to_decimal(t) << '\n';
}

CountTable read_count_table(std::istream& in, const SetRule& expected) {
  std::string line;
  if (!std::getline(in, line) || line != kCacheMagic) bad_cache("missing 'APCOUNT v1' header");
  if (!std::getline(in, line)) bad_cache("missing set rule");
  if (line != expected.canonical()) {
    bad_cache("set rule mismatch (file has '" + line + "', wanted '" + expected.canonical() + "')");
  }
  if (!std::getline(in, line)) bad_cache("missing n_max");
  std::uint64_t n_max = 0;
  try {
    std::size_t used = 0;
    n_max = std::stoull(line, &used);
    if (used != line.size()) bad_cache("bad n_max line");
  } catch (const std::logic_error&) {
    bad_cache("bad n_max line");
  }
  std::vector<BigInt> values;
  values.reserve(n_max + 1);
  for (std::uint64_t n = 0; n <= n_max; ++n) {
    if (!std::getline(in, line) || line.empty() ||
        line.find_first_not_of("0123456789") != std::string::npos) {
      bad_cache("bad or missing entry for t(" + std::to_string(n) + ")");
    }
    values.emplace_back(line, 10);
  }
  if (std::getline(in, line) && !line.empty()) bad_cache("trailing data");
  auto set = materialize_covering(expected, n_max);
  try {
    return CountTable::from_values(std::move(set), std::move(values));
  } catch (const Error& e) {
    bad_cache(e.what());
  }
}

CountCache::CountCache(std::filesystem::path directory) : directory_(std::move(directory)) {}

std::filesystem::path CountCache::path_for(const SetRule& rule) const {
  char name[32];
  std::snprintf(name, sizeof name, "%016llx.apcount",
                static_cast<unsigned long long>(fnv1a(rule.canonical())));
  return directory_ / name;
}

CountTable CountCache::load_or_build(const SetRule& rule, std::uint64_t n_max) const {
  const auto path = path_for(rule);
  bool dirty = true;
  auto table = [&]() -> CountTable {
    std::ifstream in(path);
    if (in) {
      try {
        auto cached = read_count_table(in, rule);
        dirty = cached.n_max() < n_max;
        cached.extend_to(n_max);
        return cached;
      } catch (const Error&) {
        // stale or foreign file: rebuild below
      }
    }
    return CountTable(materialize_covering(rule, n_max), n_max);
  }();

  if (dirty) {
    std::error_code ec;
    std::filesystem::create_directories(directory_, ec);
    const auto tmp = path.string() + ".tmp";
    {
      std::ofstream out(tmp, std::ios::trunc);
      if (!out) throw Error(Errc::io, "cannot write count cache at " + tmp);
      write_count_table(table, out);
      if (!out) throw Error(Errc::io, "cannot write count cache at " + tmp);
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw Error(Errc::io, "cannot move count cache into place: " + ec.message());
  }
  return table;
}

}  // namespace apermute
