#include "apermute/limits.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json.hpp"

#include "apermute/error.hpp"
#include "apermute/inclusion_exclusion.hpp"

namespace apermute {
namespace {

// Working precision for irrational scale factors n^{a/b}.
constexpr mp_bitcnt_t kFloatBits = 512;

mpf_class to_float(const Rational& value) {
  mpf_class out(0, kFloatBits);
  out = value;
  return out;
}

// n^{a/b} to ~kFloatBits bits: floor((n^a * 2^{b*S})^{1/b}) / 2^S.
mpf_class rational_power(std::uint64_t n, std::uint64_t a, std::uint64_t b) {
  constexpr unsigned long kScale = kFloatBits;
  BigInt radicand = power(n, a);
  mpz_mul_2exp(radicand.get_mpz_t(), radicand.get_mpz_t(), b * kScale);
  BigInt root;
  mpz_root(root.get_mpz_t(), radicand.get_mpz_t(), static_cast<unsigned long>(b));
  mpf_class out(0, kFloatBits);
  out = root;
  mpf_div_2exp(out.get_mpf_t(), out.get_mpf_t(), kScale);
  return out;
}

// e^{-1/l} from its Taylor series; 80 terms are far below kFloatBits.
mpf_class exp_of_minus_inverse(std::uint64_t l) {
  Rational sum = 0, term = 1;
  for (std::uint64_t k = 0; k < 80; ++k) {
    sum += term;
    term /= -static_cast<long>(l * (k + 1));
  }
  return to_float(sum);
}

double relative_error(double value, double target) {
  const double gap = std::fabs(value - target);
  return target == 0.0 ? gap : gap / std::fabs(target);
}

std::uint64_t max_member(const CycleLengthSet& set) {
  if (!set.is_complete() || set.empty()) {
    throw Error(Errc::invalid_argument, "this diagnostic needs a finite cycle-length set");
  }
  return set.members().back();
}

std::vector<std::uint64_t> sorted_unique(std::span<const std::uint64_t> list) {
  std::vector<std::uint64_t> out(list.begin(), list.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void require_degree(const CountTable& table, std::uint64_t n) {
  if (n > table.n_max()) {
    throw Error(Errc::invalid_argument, "degree " + std::to_string(n) +
                                            " beyond count table (n_max = " +
                                            std::to_string(table.n_max()) + ")");
  }
}

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.12g", value);
  return buffer;
}

}  // namespace

double tv_distance(const ExactLaw& law, std::span<const std::uint64_t> lengths) {
  if (!std::equal(law.lengths.begin(), law.lengths.end(), lengths.begin(), lengths.end())) {
    throw Error(Errc::invalid_argument, "law tracks different lengths");
  }
  // Poisson masses in extended precision so that tiny distances are not
  // swamped by rounding in the tail term.
  std::vector<mpf_class> base;
  for (auto l : lengths) base.push_back(exp_of_minus_inverse(l));
  mpf_class l1(0, kFloatBits), covered(0, kFloatBits), q(0, kFloatBits), gap(0, kFloatBits);
  for (const auto& [point, p] : law.mass) {
    q = 1;
    for (std::size_t i = 0; i < lengths.size(); ++i) {
      q *= base[i] * to_float(make_rational(1, power(lengths[i], point[i]) * factorial(point[i])));
    }
    gap = to_float(p) - q;
    l1 += abs(gap);
    covered += q;
  }
  mpf_class tail(1, kFloatBits);
  tail -= covered;
  if (tail < 0) tail = 0;
  const double tv = mpf_class((l1 + tail) / 2, kFloatBits).get_d();
  return std::clamp(tv, 0.0, 1.0);
}

ConvergenceReport poisson_convergence_report(const CountTable& table, std::uint64_t q,
                                             std::span<const std::uint64_t> n_list,
                                             std::span<const std::uint64_t> lengths) {
  if (q == 0) throw Error(Errc::invalid_argument, "gcd must be positive");
  std::vector<std::uint64_t> tracked;
  for (auto l : sorted_unique(lengths)) {
    if (l > 0 && table.set().contains(l)) tracked.push_back(l);
  }
  if (tracked.empty()) throw Error(Errc::invalid_argument, "no tracked length lies in the set");
  const auto indices = sorted_unique(n_list);

  ConvergenceReport report;
  report.kind = "poisson";
  report.set_rule = table.set().canonical();
  report.columns = {"tv", "target", "rel_error"};
  report.verdict_rule = "last tv < first tv";
  if (indices.empty()) return report;

  const std::uint64_t top = q * indices.back();
  require_degree(table, top);
  const CountTable rest(table.set().without(tracked), top);
  for (auto index : indices) {
    const std::uint64_t degree = q * index;
    if (table.count(degree) == 0) {
      report.notes.push_back("n=" + std::to_string(degree) + ": empty class, row skipped");
      continue;
    }
    const double tv = tv_distance(tracked_joint_law(table, rest, degree, tracked), tracked);
    report.rows.push_back({degree, {tv, 0.0, tv}});
  }
  report.verdict = report.rows.size() >= 2 &&
                   report.rows.back().values[0] < report.rows.front().values[0];
  return report;
}

ConvergenceReport hypothesis_ratio_report(const CountTable& table, std::uint64_t q,
                                          std::span<const std::uint64_t> n_list) {
  if (q == 0) throw Error(Errc::invalid_argument, "gcd must be positive");
  ConvergenceReport report;
  report.kind = "ratio";
  report.set_rule = table.set().canonical();
  report.columns = {"ratio", "target", "rel_error"};
  report.verdict_rule = "|ratio - 1| at last row <= at first row";
  for (auto index : sorted_unique(n_list)) {
    if (index == 0) continue;
    require_degree(table, q * index);
    if (table.count(q * index) == 0 || table.count(q * (index - 1)) == 0) {
      report.notes.push_back("n=" + std::to_string(q * index) + ": empty class, row skipped");
      continue;
    }
    const double ratio = to_double(normalized_ratio(table, index, q));
    report.rows.push_back({q * index, {ratio, 1.0, relative_error(ratio, 1.0)}});
  }
  report.verdict = !report.rows.empty() &&
                   report.rows.back().values[2] <= report.rows.front().values[2];
  return report;
}

ConvergenceReport finite_scaling_report(const CountTable& table,
                                        std::span<const std::uint64_t> n_list,
                                        std::uint64_t length, std::uint64_t max_order) {
  const std::uint64_t d = max_member(table.set());
  if (!table.set().contains(length)) {
    throw Error(Errc::invalid_argument, "tracked length is not in the set");
  }
  if (max_order == 0) throw Error(Errc::invalid_argument, "max order must be >= 1");

  ConvergenceReport report;
  report.kind = "scaling";
  report.set_rule = table.set().canonical();
  report.columns = {"m", "scaled_moment", "target", "rel_error", "centered_moment"};
  report.verdict_rule = "for every m, last rel_error < first rel_error";

  const mpf_class inverse_length = to_float(make_rational(1, length));
  for (auto n : sorted_unique(n_list)) {
    if (n == 0) continue;
    require_degree(table, n);
    if (table.count(n) == 0) {
      report.notes.push_back("n=" + std::to_string(n) + ": empty class, row skipped");
      continue;
    }
    const mpf_class scale = rational_power(n, length, d);
    std::vector<mpf_class> scaled(max_order + 1, mpf_class(0, kFloatBits));
    scaled[0] = 1;
    mpf_class scale_power(1, kFloatBits);
    for (std::uint64_t m = 1; m <= max_order; ++m) {
      scale_power *= scale;
      scaled[m] = to_float(moment_via_partitions(table, n, length, m)) / scale_power;
    }
    for (std::uint64_t m = 1; m <= max_order; ++m) {
      mpf_class centered(0, kFloatBits);
      for (std::uint64_t i = 0; i <= m; ++i) {
        mpf_class term(0, kFloatBits);
        term = to_float(Rational(binomial(m, i))) * scaled[i];
        mpf_class shift(1, kFloatBits);
        for (std::uint64_t e = 0; e < m - i; ++e) shift *= inverse_length;
        term *= shift;
        if ((m - i) % 2 == 1) {
          centered -= term;
        } else {
          centered += term;
        }
      }
      const double target = std::pow(1.0 / static_cast<double>(length), static_cast<double>(m));
      const double value = scaled[m].get_d();
      report.rows.push_back({n,
                             {static_cast<double>(m), value, target,
                              relative_error(value, target), centered.get_d()}});
    }
  }

  report.verdict = !report.rows.empty();
  for (std::uint64_t m = 1; m <= max_order && report.verdict; ++m) {
    const ReportRow* first = nullptr;
    const ReportRow* last = nullptr;
    for (const auto& row : report.rows) {
      if (row.values[0] != static_cast<double>(m)) continue;
      if (!first) first = &row;
      last = &row;
    }
    report.verdict = first && last != first && last->values[3] < first->values[3];
  }
  return report;
}

ConvergenceReport ratio_asymptotic_check(const CountTable& table,
                                         std::span<const std::uint64_t> n_list) {
  const std::uint64_t d = max_member(table.set());
  const std::uint64_t q = gcd_of(table.set());

  ConvergenceReport report;
  report.kind = "egf-ratio";
  report.set_rule = table.set().canonical();
  report.columns = {"normalized_ratio", "target", "rel_error"};
  report.verdict_rule = "final row within 5% of 1";
  for (auto n : sorted_unique(n_list)) {
    if (n < q) continue;
    require_degree(table, n);
    if (table.count(n) == 0 || table.count(n - q) == 0) {
      report.notes.push_back("n=" + std::to_string(n) + ": zero coefficient, row skipped");
      continue;
    }
    // b_{n-q}/b_n = t(n-q) (n)_q / t(n)
    const Rational ratio = make_rational(table.count(n - q) * falling_factorial(n, q), table.count(n));
    const mpf_class normalized = to_float(ratio) / rational_power(n, q, d);
    const double value = normalized.get_d();
    report.rows.push_back({n, {value, 1.0, relative_error(value, 1.0)}});
  }
  report.verdict = !report.rows.empty() && report.rows.back().values[2] <= 0.05;
  return report;
}

std::vector<std::uint64_t> default_degree_grid(const CycleLengthSet& set) {
  constexpr std::uint64_t kGrid[] = {25, 50, 100, 200, 400};
  const auto reachable = representable_degrees(set.covers(400) ? set : set.rematerialized(400), 400);
  std::vector<std::uint64_t> out;
  for (auto n : kGrid) {
    if (reachable[n]) out.push_back(n);
  }
  return out;
}

std::string render_csv(const ConvergenceReport& report) {
  std::string out = "# " + report.kind + " report for set " + report.set_rule +
                    "; values approximate (12 significant digits)\n";
  out += "n";
  for (const auto& column : report.columns) out += "," + column;
  out += '\n';
  for (const auto& row : report.rows) {
    out += std::to_string(row.n);
    for (double v : row.values) out += "," + format_double(v);
    out += '\n';
  }
  return out;
}

std::string render_json(const ConvergenceReport& report) {
  nlohmann::ordered_json doc;
  doc["kind"] = report.kind;
  doc["set"] = report.set_rule;
  doc["columns"] = report.columns;
  auto& rows = doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    nlohmann::ordered_json entry;
    entry["n"] = row.n;
    entry["values"] = row.values;
    rows.push_back(std::move(entry));
  }
  doc["notes"] = report.notes;
  doc["verdict"] = {{"rule", report.verdict_rule}, {"holds", report.verdict}};
  return doc.dump(2);
}

}  // namespace apermute
