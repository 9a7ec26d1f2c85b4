#include "apermute/cycle_types.hpp"

#include <algorithm>
#include <functional>

#include "json.hpp"

#include "apermute/error.hpp"

namespace apermute {
namespace {

void require_tracked(std::span<const std::uint64_t> lengths) {
  if (lengths.empty()) throw Error(Errc::invalid_argument, "no tracked cycle lengths");
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (lengths[i] == 0 || (i > 0 && lengths[i] <= lengths[i - 1])) {
      throw Error(Errc::invalid_argument,
                  "tracked lengths must be positive and strictly increasing");
    }
  }
}

}  // namespace

std::uint64_t CycleType::multiplicity(std::uint64_t length) const {
  auto it = std::lower_bound(counts.begin(), counts.end(), length,
                             [](const auto& entry, std::uint64_t l) { return entry.first < l; });
  return (it != counts.end() && it->first == length) ? it->second : 0;
}

CycleTypeStream::CycleTypeStream(const CycleLengthSet& set, std::uint64_t n) : degree_(n) {
  if (!set.covers(n)) {
    throw Error(Errc::invalid_argument,
                "cycle-length set materialized only up to " + std::to_string(set.bound()));
  }
  auto members = set.members_up_to(n);
  parts_.assign(members.begin(), members.end());
  multiplicity_.assign(parts_.size(), 0);
  feasible_.assign(parts_.size() * (n + 1), 0);
  for (std::size_t j = 0; j < parts_.size(); ++j) {
    for (std::uint64_t r = 0; r <= n; ++r) {
      bool ok = r == 0 || (j > 0 && feasible(j - 1, r)) ||
                (r >= parts_[j] && feasible(j, r - parts_[j]));
      feasible_[j * (n + 1) + r] = ok ? 1 : 0;
    }
  }
  if (n > 0 && (parts_.empty() || !feasible(parts_.size() - 1, n))) done_ = true;
}

void CycleTypeStream::push(std::size_t j) {
  sequence_.push_back(j);
  ++multiplicity_[j];
  sum_ += parts_[j];
}

void CycleTypeStream::pop() {
  const std::size_t j = sequence_.back();
  sequence_.pop_back();
  --multiplicity_[j];
  sum_ -= parts_[j];
}

// Greedy smallest-first completion. The smallest usable part never exceeds
// the previous one: a feasible remainder has a representation whose largest
// part is at most the previous part.
void CycleTypeStream::complete(std::uint64_t remaining) {
  while (remaining > 0) {
    std::size_t j = 0;
    while (parts_[j] > remaining || !feasible(j, remaining - parts_[j])) ++j;
    push(j);
    remaining -= parts_[j];
  }
}

bool CycleTypeStream::advance() {
  while (!sequence_.empty()) {
    const std::size_t current = sequence_.back();
    pop();
    const std::uint64_t remaining = degree_ - sum_;
    const std::size_t cap = sequence_.empty() ? parts_.size() - 1 : sequence_.back();
    for (std::size_t j = current + 1; j <= cap; ++j) {
      if (parts_[j] > remaining) break;
      if (feasible(j, remaining - parts_[j])) {
        push(j);
        complete(remaining - parts_[j]);
        return true;
      }
    }
  }
  return false;
}

void CycleTypeStream::emit(CycleType& out) const {
  out.degree = degree_;
  out.counts.clear();
  for (std::size_t j = 0; j < parts_.size(); ++j) {
    if (multiplicity_[j] > 0) out.counts.emplace_back(parts_[j], multiplicity_[j]);
  }
}

bool CycleTypeStream::next(CycleType& out) {
  if (done_) return false;
  if (!started_) {
    started_ = true;
    if (degree_ > 0) complete(degree_);
  } else if (degree_ == 0 || !advance()) {
    done_ = true;
    return false;
  }
  emit(out);
  return true;
}

std::vector<CycleType> enumerate_cycle_types(const CycleLengthSet& set, std::uint64_t n) {
  std::vector<CycleType> out;
  CycleTypeStream stream(set, n);
  CycleType type;
  while (stream.next(type)) out.push_back(type);
  return out;
}

namespace {

// prod_l l^{c_l} c_l!
BigInt centralizer_order(const CycleType& type) {
  BigInt out = 1;
  for (const auto& [length, count] : type.counts) {
    out *= power(length, count);
    out *= factorial(count);
  }
  return out;
}

}  // namespace

BigInt cycle_type_count(const CycleType& type) {
  BigInt out = factorial(type.degree);
  mpz_divexact(out.get_mpz_t(), out.get_mpz_t(), centralizer_order(type).get_mpz_t());
  return out;
}

Rational ExactLaw::at(const CountVector& point) const {
  auto it = mass.find(point);
  return it == mass.end() ? Rational(0) : it->second;
}

Rational ExactLaw::total() const {
  Rational sum = 0;
  for (const auto& [point, p] : mass) sum += p;
  return sum;
}

namespace {

ExactLaw normalize(std::vector<std::uint64_t> lengths, std::map<CountVector, BigInt>& counts,
                   const BigInt& total) {
  ExactLaw law;
  law.lengths = std::move(lengths);
  for (auto& [point, count] : counts) {
    if (count != 0) law.mass.emplace(point, make_rational(count, total));
  }
  return law;
}

}  // namespace

ExactLaw exact_joint_law(const CycleLengthSet& set, std::uint64_t n,
                         std::span<const std::uint64_t> lengths) {
  require_tracked(lengths);
  const BigInt n_factorial = factorial(n);
  std::map<CountVector, BigInt> counts;
  BigInt total = 0;
  CountVector key(lengths.size());
  CycleTypeStream stream(set, n);
  CycleType type;
  BigInt weight;
  while (stream.next(type)) {
    for (std::size_t i = 0; i < lengths.size(); ++i) key[i] = type.multiplicity(lengths[i]);
    mpz_divexact(weight.get_mpz_t(), n_factorial.get_mpz_t(),
                 centralizer_order(type).get_mpz_t());
    counts[key] += weight;
    total += weight;
  }
  if (total == 0) throw Error(Errc::empty_class, "empty permutation class");
  return normalize({lengths.begin(), lengths.end()}, counts, total);
}

ExactLaw tracked_joint_law(const CountTable& table, const CountTable& rest, std::uint64_t n,
                           std::span<const std::uint64_t> lengths) {
  require_tracked(lengths);
  const BigInt& t_n = table.count(n);
  if (t_n == 0) throw Error(Errc::empty_class, "empty permutation class");
  if (rest.n_max() < n) throw Error(Errc::invalid_argument, "complement table too short");

  // (n)_p for p = 0..n
  std::vector<BigInt> falling(n + 1);
  falling[0] = 1;
  for (std::uint64_t p = 1; p <= n; ++p) falling[p] = falling[p - 1] * static_cast<unsigned long>(n - p + 1);

  std::map<CountVector, BigInt> counts;
  BigInt total = 0;
  CountVector point(lengths.size(), 0);

  // Depth-first over r, carrying p and prod_l l^{r_l} r_l!.
  std::function<void(std::size_t, std::uint64_t, const BigInt&)> visit =
      [&](std::size_t i, std::uint64_t used, const BigInt& denominator) {
        if (i == lengths.size()) {
          const BigInt& remainder = rest.count(n - used);
          if (remainder == 0) return;
          BigInt count;
          mpz_divexact(count.get_mpz_t(), falling[used].get_mpz_t(), denominator.get_mpz_t());
          count *= remainder;
          total += count;
          counts.emplace(point, std::move(count));
          return;
        }
        const std::uint64_t l = lengths[i];
        const std::uint64_t max_r = table.set().contains(l) ? (n - used) / l : 0;
        BigInt d = denominator;
        for (std::uint64_t r = 0; r <= max_r; ++r) {
          if (r > 0) d *= static_cast<unsigned long>(l * r);
          point[i] = r;
          visit(i + 1, used + l * r, d);
        }
        point[i] = 0;
      };
  visit(0, 0, BigInt(1));

  if (total != t_n) {
    throw Error(Errc::identity_violation, "tracked law does not sum to t(n)");
  }
  return normalize({lengths.begin(), lengths.end()}, counts, t_n);
}

ExactLaw tracked_joint_law(const CountTable& table, std::uint64_t n,
                           std::span<const std::uint64_t> lengths) {
  CountTable rest(table.set().without(lengths), n);
  return tracked_joint_law(table, rest, n, lengths);
}

Rational exact_moment(const CycleLengthSet& set, std::uint64_t n, std::uint64_t length,
                      std::uint64_t order) {
  const std::uint64_t tracked[] = {length};
  const ExactLaw law = exact_joint_law(set, n, tracked);
  Rational moment = 0;
  for (const auto& [point, p] : law.mass) moment += Rational(power(point[0], order)) * p;
  return moment;
}

BigInt surjection_count(std::uint64_t m, std::uint64_t j) {
  if (j == 0 || j > m) return m == 0 && j == 0 ? 1 : 0;
  BigInt sum = 0;
  for (std::uint64_t i = 0; i <= j; ++i) {
    BigInt term = binomial(j, i) * power(j - i, m);
    if (i % 2 == 0) {
      sum += term;
    } else {
      sum -= term;
    }
  }
  return sum;
}

std::vector<std::vector<std::uint64_t>> set_partition_block_sizes(std::uint64_t j) {
  std::vector<std::vector<std::uint64_t>> out;
  if (j == 0) {
    out.emplace_back();
    return out;
  }
  // Restricted-growth string a: a[0] = 0, a[i] <= 1 + max(a[0..i-1]).
  std::vector<std::uint64_t> a(j, 0), prefix_max(j, 0);
  while (true) {
    std::vector<std::uint64_t> sizes(prefix_max[j - 1] + 1, 0);
    for (auto block : a) ++sizes[block];
    out.push_back(std::move(sizes));

    std::size_t i = j - 1;
    while (i > 0 && a[i] > prefix_max[i - 1]) --i;
    if (i == 0) break;
    ++a[i];
    prefix_max[i] = std::max(prefix_max[i - 1], a[i]);
    for (std::size_t k = i + 1; k < j; ++k) {
      a[k] = 0;
      prefix_max[k] = prefix_max[i];
    }
  }
  return out;
}

Rational moment_via_partitions(const CountTable& table, std::uint64_t n, std::uint64_t length,
                               std::uint64_t order) {
  if (length == 0 || order == 0) {
    throw Error(Errc::invalid_argument, "moment needs a positive length and order");
  }
  const BigInt& t_n = table.count(n);
  if (t_n == 0) throw Error(Errc::empty_class, "empty permutation class");
  if (!table.set().contains(length)) return 0;

  // t(n)/n!
  const Rational base_density = make_rational(t_n, factorial(n));
  Rational sum = 0;
  for (std::uint64_t j = 1; j <= order && j <= n; ++j) {
    Rational p_j = 0;
    for (const auto& blocks : set_partition_block_sizes(j)) {
      if (std::any_of(blocks.begin(), blocks.end(), [&](auto s) { return s > length; })) continue;
      const std::uint64_t covered = length * blocks.size();
      if (covered > n) continue;
      const BigInt& t_rest = table.count(n - covered);
      if (t_rest == 0) continue;
      Rational term = make_rational(t_rest, factorial(n - covered)) / base_density;
      term /= Rational(falling_factorial(n, j));
      for (auto s : blocks) term *= Rational(falling_factorial(length - 1, s - 1));
      p_j += term;
    }
    sum += Rational(binomial(n, j) * surjection_count(order, j)) * p_j;
  }
  return sum / Rational(power(length, order));
}

std::string law_to_json(const ExactLaw& law) {
  nlohmann::ordered_json doc;
  doc["lengths"] = law.lengths;
  auto& mass = doc["mass"] = nlohmann::ordered_json::array();
  for (const auto& [point, p] : law.mass) {
    nlohmann::ordered_json entry;
    entry["r"] = point;
    entry["num"] = to_decimal(p.get_num());
    entry["den"] = to_decimal(p.get_den());
    mass.push_back(std::move(entry));
  }
  return doc.dump();
}

}  // namespace apermute
