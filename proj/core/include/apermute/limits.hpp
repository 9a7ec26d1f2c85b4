#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "apermute/counting.hpp"
#include "apermute/cycle_types.hpp"

namespace apermute {

struct ReportRow {
  std::uint64_t n = 0;
  std::vector<double> values;  // one per ConvergenceReport::columns entry
};

/// Diagnostic table over a list of degrees. Values are rendered from exact
/// rationals; rel_error columns hold |value - target| / |target|, or the
/// absolute gap when the target is 0.
struct ConvergenceReport {
  std::string kind;
  std::string set_rule;
  std::vector<std::string> columns;
  std::vector<ReportRow> rows;  // ascending n, nonempty classes only
  std::vector<std::string> notes;
  std::string verdict_rule;
  bool verdict = false;
};

/// Total variation distance between `law` and the product of Poiss(1/l)
/// over `lengths`:
///   (1/2) [ sum_{v in supp} |P(v) - Q(v)| + (1 - sum_{v in supp} Q(v)) ].
double tv_distance(const ExactLaw& law, std::span<const std::uint64_t> lengths);

/// TV distance between the exact law of (N_k)_{k in lengths, k in A} at
/// degree q*n and its Poisson limit, for each n in n_list.
/// Verdict: the last TV is below the first.
ConvergenceReport poisson_convergence_report(const CountTable& table, std::uint64_t q,
                                             std::span<const std::uint64_t> n_list,
                                             std::span<const std::uint64_t> lengths);

/// u_n / u_{n-1} with u_n = t(qn)/(qn)!, against the target 1, one row per
/// degree qn.
/// Verdict: |ratio - 1| at the last row is no larger than at the first.
ConvergenceReport hypothesis_ratio_report(const CountTable& table, std::uint64_t q,
                                          std::span<const std::uint64_t> n_list);

/// Finite A with maximum d: for each degree n and m = 1..max_order, the exact
/// E[(N_l / n^{l/d})^m] against (1/l)^m, and the centered moment
/// E[(N_l / n^{l/d} - 1/l)^m] expanded binomially into exact moments (for
/// even m this is the L^m distance to 1/l raised to the m-th power).
/// Columns: m, scaled_moment, target, rel_error, centered_moment.
/// Verdict: for every m the last rel_error is below the first.
ConvergenceReport finite_scaling_report(const CountTable& table,
                                        std::span<const std::uint64_t> n_list,
                                        std::uint64_t length, std::uint64_t max_order);

/// Finite A with maximum d and gcd q: with b_n = t(n)/n!, reports
/// (b_{n-q} / b_n) / n^{q/d}, which tends to 1.
/// Verdict: the final row is within 5% of 1.
ConvergenceReport ratio_asymptotic_check(const CountTable& table,
                                         std::span<const std::uint64_t> n_list);

/// {25, 50, 100, 200, 400} restricted to degrees that admit A-permutations.
std::vector<std::uint64_t> default_degree_grid(const CycleLengthSet& set);

/// "n,<columns>" CSV preceded by a '#' comment line; 12 significant digits.
std::string render_csv(const ConvergenceReport& report);
std::string render_json(const ConvergenceReport& report);

}  // namespace apermute
