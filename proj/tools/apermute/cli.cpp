#include "apermute/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "apermute/apermute.hpp"

namespace apermute::cli {
namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void bad_input(const std::string& message) {
  throw Error(Errc::invalid_argument, message);
}

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::invalid_argument:
    case Errc::oracle_limit:
      return kBadInput;
    case Errc::empty_class:
      return kEmptyClass;
    case Errc::identity_violation:
      return kIdentityViolation;
    case Errc::io:
      return kFailure;
  }
  return kFailure;
}

std::vector<std::uint64_t> tracked_lengths(std::vector<std::uint64_t> lengths) {
  if (lengths.empty()) bad_input("--lengths must list at least one cycle length");
  if (std::find(lengths.begin(), lengths.end(), 0) != lengths.end()) {
    bad_input("cycle lengths must be positive");
  }
  std::sort(lengths.begin(), lengths.end());
  lengths.erase(std::unique(lengths.begin(), lengths.end()), lengths.end());
  return lengths;
}

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.12g", value);
  return buffer;
}

std::string join(const std::vector<std::uint64_t>& values, char sep) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(values[i]);
  }
  return out;
}

std::string csv_header(const std::vector<std::uint64_t>& lengths) {
  std::string out;
  for (auto l : lengths) out += "N_" + std::to_string(l) + ",";
  return out;
}

class Runner {
 public:
  Runner(const RunConfig& config, std::ostream& err)
      : config_(config), err_(err), rule_(parse_set_rule(config.set_rule)) {}

  std::string execute() {
    if (config_.command == "count") return count();
    if (config_.command == "dist") return dist();
    if (config_.command == "sample") return sample();
    if (config_.command == "moments") return moments();
    if (config_.command == "verify") return verify();
    bad_input("unknown command '" + config_.command + "'");
  }

 private:
  CountTable table(std::uint64_t n_max) const {
    if (config_.use_cache) {
      try {
        return CountCache(config_.cache_dir).load_or_build(rule_, n_max);
      } catch (const Error& e) {
        if (e.code() != Errc::io) throw;
        err_ << "warning: " << e.what() << "; continuing without cache\n";
      }
    }
    return CountTable(materialize_covering(rule_, n_max), n_max);
  }

  void require_n() const {
    if (!config_.has_n) bad_input("--n is required");
  }

  void require_format() const {
    if (config_.format != "json" && config_.format != "csv") {
      bad_input("--format must be json or csv");
    }
  }

  static void require_nonempty(const CountTable& t, std::uint64_t n) {
    if (t.count(n) == 0) throw Error(Errc::empty_class, "empty class");
  }

  std::string count() const {
    require_n();
    const auto t = table(config_.n);
    std::string out;
    if (config_.full_table) {
      for (std::uint64_t n = 0; n <= config_.n; ++n) {
        out += std::to_string(n) + " " + to_decimal(t.count(n)) + "\n";
      }
      return out;
    }
    require_nonempty(t, config_.n);
    return to_decimal(t.count(config_.n)) + "\n";
  }

  ExactLaw law_via_ie(const CountTable& t, const std::vector<std::uint64_t>& lengths) const {
    const std::uint64_t n = config_.n;
    ExactLaw law;
    law.lengths = lengths;
    IEQuery query{lengths, CountVector(lengths.size(), 0), n};
    // Every r with sum_i l_i r_i <= n; masses outside vanish.
    auto visit = [&](auto&& self, std::size_t i, std::uint64_t used) -> void {
      if (i == lengths.size()) {
        Rational mass = joint_mass_via_ie(t, query);
        if (mass != 0) law.mass.emplace(query.targets, std::move(mass));
        return;
      }
      for (std::uint64_t r = 0; used + r * lengths[i] <= n; ++r) {
        query.targets[i] = r;
        self(self, i + 1, used + r * lengths[i]);
      }
      query.targets[i] = 0;
    };
    visit(visit, 0, 0);
    return law;
  }

  std::string dist() const {
    require_n();
    require_format();
    const auto lengths = tracked_lengths(config_.lengths);
    const std::string method = config_.method.empty() ? "direct" : config_.method;
    if (method != "direct" && method != "ie" && method != "both") {
      bad_input("--method must be direct, ie or both");
    }
    const auto t = table(config_.n);
    require_nonempty(t, config_.n);

    ExactLaw law;
    if (method == "ie") {
      law = law_via_ie(t, lengths);
    } else {
      law = exact_joint_law(t.set(), config_.n, lengths);
      if (method == "both" && law_via_ie(t, lengths).mass != law.mass) {
        throw Error(Errc::identity_violation,
                    "inclusion-exclusion law differs from direct aggregation");
      }
    }

    if (config_.format == "json") return law_to_json(law) + "\n";
    std::string out = csv_header(lengths) + "num,den,approx\n";
    for (const auto& [point, p] : law.mass) {
      out += join(point, ',') + "," + to_decimal(p.get_num()) + "," + to_decimal(p.get_den()) +
             "," + format_double(to_double(p)) + "\n";
    }
    return out;
  }

  std::string sample() const {
    require_n();
    require_format();
    if (config_.samples == 0) bad_input("--samples must be >= 1");
    std::vector<std::uint64_t> lengths;
    if (config_.aggregate) lengths = tracked_lengths(config_.lengths);
    const auto t = table(config_.n);
    require_nonempty(t, config_.n);
    Mt64Source rng(config_.seed);

    if (!config_.aggregate) {
      std::string out;
      for (std::uint64_t s = 0; s < config_.samples; ++s) {
        out += sample_apermutation(t, config_.n, rng).to_string() + "\n";
      }
      return out;
    }
    const auto freq = empirical_joint_law(t, config_.n, lengths, config_.samples, rng);
    if (config_.format == "csv") {
      std::string out = csv_header(lengths) + "frequency\n";
      for (const auto& [point, f] : freq) out += join(point, ',') + "," + format_double(f) + "\n";
      return out;
    }
    Json doc;
    doc["lengths"] = lengths;
    doc["samples"] = config_.samples;
    doc["seed"] = config_.seed;
    auto& rows = doc["frequency"] = Json::array();
    for (const auto& [point, f] : freq) rows.push_back({{"r", point}, {"freq", f}});
    return doc.dump() + "\n";
  }

  std::string moments() const {
    require_n();
    require_format();
    if (config_.length == 0) bad_input("--length must be a positive cycle length");
    if (config_.order == 0) bad_input("--order must be >= 1");
    const std::string method = config_.method.empty() ? "partitions" : config_.method;
    if (method != "direct" && method != "partitions" && method != "both") {
      bad_input("--method must be direct, partitions or both");
    }
    const auto t = table(config_.n);
    require_nonempty(t, config_.n);

    std::vector<Rational> values;
    for (std::uint64_t m = 1; m <= config_.order; ++m) {
      Rational value = method == "direct"
                           ? exact_moment(t.set(), config_.n, config_.length, m)
                           : moment_via_partitions(t, config_.n, config_.length, m);
      if (method == "both" && exact_moment(t.set(), config_.n, config_.length, m) != value) {
        throw Error(Errc::identity_violation, "partition formula differs from the direct moment");
      }
      values.push_back(std::move(value));
    }

    if (config_.format == "csv") {
      std::string out = "m,num,den,approx\n";
      for (std::size_t i = 0; i < values.size(); ++i) {
        out += std::to_string(i + 1) + "," + to_decimal(values[i].get_num()) + "," +
               to_decimal(values[i].get_den()) + "," + format_double(to_double(values[i])) + "\n";
      }
      return out;
    }
    Json doc;
    doc["n"] = config_.n;
    doc["length"] = config_.length;
    auto& rows = doc["moments"] = Json::array();
    for (std::size_t i = 0; i < values.size(); ++i) {
      rows.push_back({{"m", i + 1},
                      {"num", to_decimal(values[i].get_num())},
                      {"den", to_decimal(values[i].get_den())}});
    }
    return doc.dump() + "\n";
  }

  std::vector<std::uint64_t> degree_list(std::uint64_t q) const {
    std::vector<std::uint64_t> degrees = config_.n_list;
    if (degrees.empty() && config_.has_n) {
      for (std::uint64_t div : {8, 4, 2, 1}) {
        const std::uint64_t d = config_.n / div / q * q;
        if (d > 0) degrees.push_back(d);
      }
    }
    if (degrees.empty()) {
      degrees = default_degree_grid(materialize_covering(rule_, 400));
    }
    std::sort(degrees.begin(), degrees.end());
    degrees.erase(std::unique(degrees.begin(), degrees.end()), degrees.end());
    if (degrees.empty() || degrees.front() == 0) bad_input("degrees must be positive");
    return degrees;
  }

  std::string verify() const {
    require_format();
    const std::string& kind = config_.report;
    const std::uint64_t q = gcd_of(materialize_covering(rule_, 1));
    if (kind == "scaling" || kind == "egf-ratio") {
      if (!rule_.is_finite()) bad_input("'" + kind + "' needs a finite set");
    }
    if (kind == "scaling" && config_.length == 0) bad_input("--length is required");
    if (kind == "poisson") tracked_lengths(config_.lengths);

    const auto degrees = degree_list(kind == "poisson" || kind == "ratio" ? q : 1);
    const auto t = table(degrees.back());

    ConvergenceReport report;
    if (kind == "poisson" || kind == "ratio") {
      std::vector<std::uint64_t> indices;
      for (auto d : degrees) {
        if (d % q == 0) {
          indices.push_back(d / q);
        } else {
          err_ << "note: degree " << d << " is not a multiple of gcd " << q << "; skipped\n";
        }
      }
      report = kind == "poisson"
                   ? poisson_convergence_report(t, q, indices, tracked_lengths(config_.lengths))
                   : hypothesis_ratio_report(t, q, indices);
    } else if (kind == "scaling") {
      report = finite_scaling_report(t, degrees, config_.length, config_.order);
    } else if (kind == "egf-ratio") {
      report = ratio_asymptotic_check(t, degrees);
    } else {
      bad_input("unknown report '" + kind + "'");
    }
    return config_.format == "csv" ? render_csv(report) : render_json(report) + "\n";
  }

  const RunConfig& config_;
  std::ostream& err_;
  SetRule rule_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact counting, cycle-count laws and uniform sampling for permutations "
               "with restricted cycle lengths",
               "apermute"};
  app.require_subcommand(1, 1);
  RunConfig config;
  bool no_cache = false;

  auto common = [&](CLI::App* sub, bool needs_n) {
    sub->add_option("--set", config.set_rule,
                    "Cycle-length set: 1,2,5 | all | min:m | mult:m | not:1,3 | <base>;not:<list>")
        ->required();
    auto* n = sub->add_option("--n", config.n, "Degree");
    if (needs_n) n->required();
    sub->add_option("--cache-dir", config.cache_dir, "Count-table cache directory");
    sub->add_flag("--no-cache", no_cache, "Do not read or write the count-table cache");
  };

  auto* count = app.add_subcommand("count", "Number of A-permutations of [n]");
  common(count, true);
  count->add_flag("--table", config.full_table, "Print t(0..n), one 'n t(n)' line each");

  auto* dist = app.add_subcommand("dist", "Exact joint law of cycle counts");
  common(dist, true);
  dist->add_option("--lengths", config.lengths, "Tracked cycle lengths")->delimiter(',')->required();
  dist->add_option("--method", config.method, "direct | ie | both");
  dist->add_option("--format", config.format, "json | csv");

  auto* sample = app.add_subcommand("sample", "Uniform samples of A-permutations");
  common(sample, true);
  sample->add_option("--samples", config.samples, "Number of samples");
  sample->add_option("--seed", config.seed, "64-bit seed");
  sample->add_option("--aggregate", config.lengths,
                     "Report cycle-count frequencies for these lengths instead of permutations")
      ->delimiter(',');
  sample->add_option("--format", config.format, "json | csv (aggregate mode)");

  auto* moments = app.add_subcommand("moments", "Exact moments E[N_l^m], m = 1..order");
  common(moments, true);
  moments->add_option("--length", config.length, "Cycle length l")->required();
  moments->add_option("--order", config.order, "Highest moment order");
  moments->add_option("--method", config.method, "direct | partitions | both");
  moments->add_option("--format", config.format, "json | csv");

  auto* verify = app.add_subcommand("verify", "Limit-theorem diagnostics");
  common(verify, false);
  verify->add_option("report", config.report, "poisson | ratio | scaling | egf-ratio")
      ->required()
      ->check(CLI::IsMember({"poisson", "ratio", "scaling", "egf-ratio"}));
  verify->add_option("--lengths", config.lengths, "Tracked lengths (poisson)")->delimiter(',');
  verify->add_option("--length", config.length, "Cycle length l (scaling)");
  verify->add_option("--n-list", config.n_list, "Degrees")->delimiter(',');
  verify->add_option("--max-order", config.order, "Highest moment order (scaling)");
  config.format = "";
  verify->add_option("--format", config.format, "csv | json");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream help_out, help_err;
    const int code = app.exit(e, help_out, help_err);
    out << help_out.str();
    err << help_err.str();
    return code == 0 ? kOk : kBadInput;
  }

  config.command = app.get_subcommands().front()->get_name();
  config.has_n = app.get_subcommands().front()->count("--n") > 0;
  config.use_cache = !no_cache;
  config.aggregate = config.command == "sample" && sample->count("--aggregate") > 0;
  if (config.format.empty()) config.format = config.command == "verify" ? "csv" : "json";
  if (config.command == "verify" && verify->count("--max-order") == 0) config.order = 2;

  try {
    Runner runner(config, err);
    const std::string output = runner.execute();
    out << output;
    return kOk;
  } catch (const Error& e) {
    err << "apermute: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "apermute: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace apermute::cli
