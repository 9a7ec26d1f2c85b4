#include "apermute/cycle_sets.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

#include "apermute/error.hpp"

namespace apermute {
namespace {

[[noreturn]] void bad_rule(std::string_view text, std::string_view why) {
  throw Error(Errc::invalid_argument,
              "invalid set rule '" + std::string(text) + "': " + std::string(why));
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::uint64_t parse_positive(std::string_view whole, std::string_view token) {
  token = trim(token);
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
    bad_rule(whole, "expected a positive integer, got '" + std::string(token) + "'");
  }
  if (value == 0) bad_rule(whole, "cycle lengths must be positive");
  return value;
}

std::vector<std::uint64_t> parse_list(std::string_view whole, std::string_view list) {
  std::vector<std::uint64_t> out;
  while (true) {
    auto comma = list.find(',');
    out.push_back(parse_positive(whole, list.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    list.remove_prefix(comma + 1);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string join(const std::vector<std::uint64_t>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

SetRule parse_base(std::string_view whole, std::string_view term) {
  SetRule rule;
  if (term == "all") {
    rule.base = SetRule::Base::all;
  } else if (term.starts_with("min:")) {
    rule.base = SetRule::Base::at_least;
    rule.parameter = parse_positive(whole, term.substr(4));
  } else if (term.starts_with("mult:")) {
    rule.base = SetRule::Base::multiples_of;
    rule.parameter = parse_positive(whole, term.substr(5));
  } else if (term.starts_with("not:")) {
    rule.base = SetRule::Base::all;
    rule.excluded = parse_list(whole, term.substr(4));
  } else {
    rule.base = SetRule::Base::explicit_list;
    rule.values = parse_list(whole, term);
  }
  return rule;
}

}  // namespace

bool SetRule::contains(std::uint64_t k) const {
  if (k == 0) return false;
  if (std::binary_search(excluded.begin(), excluded.end(), k)) return false;
  switch (base) {
    case Base::explicit_list:
      return std::binary_search(values.begin(), values.end(), k);
    case Base::all:
      return true;
    case Base::at_least:
      return k >= parameter;
    case Base::multiples_of:
      return k % parameter == 0;
  }
  return false;
}

std::string SetRule::canonical() const {
  std::string base_text;
  switch (base) {
    case Base::explicit_list:
      return join(values);
    case Base::all:
      return excluded.empty() ? "all" : "not:" + join(excluded);
    case Base::at_least:
      base_text = "min:" + std::to_string(parameter);
      break;
    case Base::multiples_of:
      base_text = "mult:" + std::to_string(parameter);
      break;
  }
  if (!excluded.empty()) base_text += ";not:" + join(excluded);
  return base_text;
}

SetRule parse_set_rule(std::string_view text) {
  std::string_view body = trim(text);
  if (body.empty()) bad_rule(text, "empty rule");
  auto semicolon = body.find(';');
  SetRule rule = parse_base(text, trim(body.substr(0, semicolon)));
  if (semicolon != std::string_view::npos) {
    std::string_view tail = trim(body.substr(semicolon + 1));
    if (!tail.starts_with("not:")) bad_rule(text, "only ';not:<list>' may follow a base rule");
    if (rule.base == SetRule::Base::all && !rule.excluded.empty()) {
      bad_rule(text, "'not:' given twice");
    }
    auto extra = parse_list(text, tail.substr(4));
    rule = exclude(rule, extra);
  }
  return rule;
}

SetRule exclude(const SetRule& rule, std::span<const std::uint64_t> lengths) {
  SetRule out = rule;
  if (out.base == SetRule::Base::explicit_list) {
    std::erase_if(out.values, [&](std::uint64_t v) {
      return std::find(lengths.begin(), lengths.end(), v) != lengths.end();
    });
    return out;
  }
  for (auto l : lengths) {
    if (l != 0 && rule.contains(l)) out.excluded.push_back(l);
  }
  std::sort(out.excluded.begin(), out.excluded.end());
  out.excluded.erase(std::unique(out.excluded.begin(), out.excluded.end()), out.excluded.end());
  return out;
}

CycleLengthSet CycleLengthSet::build(SetRule rule, std::uint64_t bound) {
  CycleLengthSet set;
  set.bound_ = bound;
  if (rule.base == SetRule::Base::explicit_list) {
    for (auto v : rule.values) {
      if (v <= bound) set.members_.push_back(v);
    }
    set.complete_ = rule.values.empty() || rule.values.back() <= bound;
  } else {
    for (std::uint64_t k = 1; k <= bound; ++k) {
      if (rule.contains(k)) set.members_.push_back(k);
    }
  }
  set.rule_ = std::move(rule);
  return set;
}

std::span<const std::uint64_t> CycleLengthSet::members_up_to(std::uint64_t n) const {
  auto end = std::upper_bound(members_.begin(), members_.end(), n);
  return {members_.data(), static_cast<std::size_t>(end - members_.begin())};
}

CycleLengthSet CycleLengthSet::without(std::span<const std::uint64_t> lengths) const {
  return build(exclude(rule_, lengths), bound_);
}

CycleLengthSet CycleLengthSet::rematerialized(std::uint64_t bound) const {
  return build(rule_, bound);
}

CycleLengthSet materialize(const SetRule& rule, std::uint64_t bound) {
  if (bound == 0) throw Error(Errc::invalid_argument, "materialization bound must be >= 1");
  CycleLengthSet set = CycleLengthSet::build(rule, bound);
  if (set.empty()) throw Error(Errc::invalid_argument, "empty cycle-length set");
  return set;
}

CycleLengthSet materialize_covering(const SetRule& rule, std::uint64_t n) {
  std::uint64_t bound = std::max<std::uint64_t>(n, 1);
  if (rule.is_finite() && !rule.values.empty()) bound = std::max(bound, rule.values.back());
  if (!rule.is_finite()) {
    // Reach the smallest member so that small degrees still get a nonempty set.
    std::uint64_t first = 1;
    while (!rule.contains(first)) ++first;
    bound = std::max(bound, first);
  }
  return materialize(rule, bound);
}

std::uint64_t gcd_of(const CycleLengthSet& set) {
  if (set.empty()) throw Error(Errc::invalid_argument, "empty cycle-length set");
  std::uint64_t g = 0;
  for (auto k : set.members()) g = std::gcd(g, k);
  if (set.is_complete()) return g;
  // Past the exclusions an infinite rule holds two consecutive multiples of
  // its step (1, or m for mult:m), which pins the gcd down.
  const SetRule& rule = set.rule();
  const std::uint64_t step = std::max<std::uint64_t>(rule.parameter, 1);
  const std::uint64_t last_excluded = rule.excluded.empty() ? 0 : rule.excluded.back();
  const std::uint64_t horizon = std::max(last_excluded, step) + 2 * step;
  for (std::uint64_t k = set.bound() + 1; k <= horizon; ++k) {
    if (rule.contains(k)) g = std::gcd(g, k);
  }
  return g;
}

std::vector<bool> representable_degrees(const CycleLengthSet& set, std::uint64_t n_max) {
  if (!set.covers(n_max)) {
    throw Error(Errc::invalid_argument,
                "cycle-length set materialized only up to " + std::to_string(set.bound()));
  }
  std::vector<bool> reachable(n_max + 1, false);
  reachable[0] = true;
  auto parts = set.members_up_to(n_max);
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    for (auto k : parts) {
      if (k > n) break;
      if (reachable[n - k]) {
        reachable[n] = true;
        break;
      }
    }
  }
  return reachable;
}

bool degree_is_representable(const CycleLengthSet& set, std::uint64_t n) {
  return representable_degrees(set, n)[n];
}

}  // namespace apermute
