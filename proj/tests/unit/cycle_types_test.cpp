#include <gtest/gtest.h>

#include <algorithm>

#include "apermute/counting.hpp"
#include "apermute/cycle_types.hpp"
#include "apermute/error.hpp"
#include "brute_force.hpp"

namespace apermute {
namespace {

using Counts = std::vector<std::pair<std::uint64_t, std::uint64_t>>;

CycleLengthSet set_for(const char* rule, std::uint64_t n) {
  return materialize_covering(parse_set_rule(rule), n);
}

CountTable table_for(const char* rule, std::uint64_t n_max) {
  return CountTable(set_for(rule, n_max), n_max);
}

const char* const kFamily[] = {"1", "2", "3", "1,2", "2,3", "1,3", "all", "not:1", "2,5"};

TEST(CycleTypeStream, OrderForOneTwo) {
  auto types = enumerate_cycle_types(set_for("1,2", 4), 4);
  ASSERT_EQ(types.size(), 3u);
  EXPECT_EQ(types[0].counts, (Counts{{1, 4}}));
  EXPECT_EQ(types[1].counts, (Counts{{1, 2}, {2, 1}}));
  EXPECT_EQ(types[2].counts, (Counts{{2, 2}}));
}

TEST(CycleTypeStream, ParityLeavesNothing) {
  EXPECT_TRUE(enumerate_cycle_types(set_for("2", 5), 5).empty());
}

TEST(CycleTypeStream, PartitionsOfFourInLexOrder) {
  auto types = enumerate_cycle_types(set_for("all", 4), 4);
  ASSERT_EQ(types.size(), 5u);
  EXPECT_EQ(types[0].counts, (Counts{{1, 4}}));
  EXPECT_EQ(types[1].counts, (Counts{{1, 2}, {2, 1}}));
  EXPECT_EQ(types[2].counts, (Counts{{2, 2}}));
  EXPECT_EQ(types[3].counts, (Counts{{1, 1}, {3, 1}}));
  EXPECT_EQ(types[4].counts, (Counts{{4, 1}}));
}

TEST(CycleTypeStream, PartitionCountsAndValidity) {
  // p(n) for n = 1..20
  const std::uint64_t partitions[] = {1,  2,  3,  5,   7,   11,  15,  22,  30,  42,
                                      56, 77, 101, 135, 176, 231, 297, 385, 490, 627};
  for (std::uint64_t n = 1; n <= 20; ++n) {
    auto types = enumerate_cycle_types(set_for("all", n), n);
    EXPECT_EQ(types.size(), partitions[n - 1]) << n;
  }
  for (const char* rule : kFamily) {
    auto set = set_for(rule, 18);
    for (std::uint64_t n = 1; n <= 18; ++n) {
      auto types = enumerate_cycle_types(set, n);
      for (std::size_t i = 0; i < types.size(); ++i) {
        std::uint64_t total = 0;
        for (auto [l, c] : types[i].counts) {
          EXPECT_TRUE(set.contains(l));
          EXPECT_GT(c, 0u);
          total += l * c;
        }
        EXPECT_EQ(total, n);
        if (i > 0) EXPECT_NE(types[i], types[i - 1]);
      }
    }
  }
}

TEST(CycleTypeCount, Examples) {
  EXPECT_EQ(cycle_type_count({4, {{2, 2}}}), 3);
  EXPECT_EQ(cycle_type_count({7, {{1, 7}}}), 1);
  EXPECT_EQ(cycle_type_count({6, {{3, 2}}}), 40);
  EXPECT_EQ(cycle_type_count({5, {{1, 2}, {3, 1}}}), 20);
}

TEST(ExactJointLaw, Examples) {
  const std::uint64_t one[] = {1};
  const std::uint64_t one_two[] = {1, 2};
  const std::uint64_t two[] = {2};
  EXPECT_EQ(exact_joint_law(set_for("all", 4), 4, one).at({0}), Rational(3, 8));
  EXPECT_EQ(exact_joint_law(set_for("all", 4), 4, one_two).at({0, 0}), Rational(1, 4));
  auto forced = exact_joint_law(set_for("2", 4), 4, two);
  ASSERT_EQ(forced.mass.size(), 1u);
  EXPECT_EQ(forced.at({2}), 1);
}

TEST(ExactJointLaw, EmptyClass) {
  const std::uint64_t two[] = {2};
  try {
    exact_joint_law(set_for("2", 5), 5, two);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::empty_class);
    EXPECT_STREQ(e.what(), "empty permutation class");
  }
}

TEST(ExactJointLaw, MatchesEnumeratedFrequencies) {
  const std::vector<std::vector<std::uint64_t>> tracked = {{1}, {2}, {1, 2}, {1, 3}, {2, 3, 4}};
  for (const char* rule : kFamily) {
    auto parsed = parse_set_rule(rule);
    for (std::uint64_t n = 1; n <= 8; ++n) {
      auto set = set_for(rule, n);
      for (const auto& lengths : tracked) {
        auto counts = testing::brute_joint_counts(n, [&](auto l) { return parsed.contains(l); },
                                                  lengths);
        std::uint64_t total = 0;
        for (const auto& [point, c] : counts) total += c;
        if (total == 0) {
          EXPECT_THROW(exact_joint_law(set, n, lengths), Error);
          continue;
        }
        auto law = exact_joint_law(set, n, lengths);
        ASSERT_EQ(law.mass.size(), counts.size()) << rule << " n=" << n;
        for (const auto& [point, c] : counts) {
          EXPECT_EQ(law.at(point), make_rational(BigInt(c), BigInt(total))) << rule << " n=" << n;
        }
      }
    }
  }
}

TEST(ExactJointLaw, NormalizedAndWithinDegree) {
  const std::vector<std::vector<std::uint64_t>> tracked = {{1, 2}, {1, 2, 3}, {2, 4}};
  for (const char* rule : kFamily) {
    for (std::uint64_t n = 1; n <= 24; ++n) {
      auto set = set_for(rule, n);
      if (!degree_is_representable(set, n)) continue;
      for (const auto& lengths : tracked) {
        auto law = exact_joint_law(set, n, lengths);
        EXPECT_EQ(law.total(), 1) << rule << " n=" << n;
        bool covers_all = true;
        for (auto a : set.members_up_to(n)) {
          covers_all = covers_all && std::find(lengths.begin(), lengths.end(), a) != lengths.end();
        }
        for (const auto& [point, p] : law.mass) {
          EXPECT_GT(p, 0);
          std::uint64_t used = 0;
          for (std::size_t i = 0; i < lengths.size(); ++i) used += lengths[i] * point[i];
          EXPECT_LE(used, n);
          if (covers_all) EXPECT_EQ(used, n);
        }
      }
    }
  }
}

TEST(TrackedJointLaw, AgreesWithCycleTypeAggregation) {
  const std::vector<std::vector<std::uint64_t>> tracked = {{1}, {2}, {1, 2}, {1, 3}, {2, 3, 5}};
  for (const char* rule : kFamily) {
    auto table = table_for(rule, 30);
    for (std::uint64_t n = 1; n <= 30; ++n) {
      if (table.count(n) == 0) continue;
      for (const auto& lengths : tracked) {
        EXPECT_EQ(tracked_joint_law(table, n, lengths).mass,
                  exact_joint_law(table.set(), n, lengths).mass)
            << rule << " n=" << n;
      }
    }
  }
}

TEST(ExactMoment, Examples) {
  EXPECT_EQ(exact_moment(set_for("1,2", 4), 4, 2, 1), Rational(6, 5));
  for (std::uint64_t n = 1; n <= 9; ++n) EXPECT_EQ(exact_moment(set_for("all", n), n, 1, 1), 1);
  EXPECT_EQ(exact_moment(set_for("2", 4), 4, 2, 3), 8);
}

TEST(MomentViaPartitions, Examples) {
  EXPECT_EQ(moment_via_partitions(table_for("1,2", 4), 4, 2, 1), Rational(6, 5));
  EXPECT_EQ(moment_via_partitions(table_for("all", 6), 6, 1, 2), 2);
  // m = 1 collapses to C(n,l) (l-1)! t(n-l) / t(n).
  for (const char* rule : kFamily) {
    auto table = table_for(rule, 20);
    for (std::uint64_t n = 1; n <= 20; ++n) {
      if (table.count(n) == 0) continue;
      for (auto l : table.set().members_up_to(5)) {
        const Rational expected =
            n < l ? Rational(0)
                  : make_rational(binomial(n, l) * factorial(l - 1) * table.count(n - l),
                                  table.count(n));
        EXPECT_EQ(moment_via_partitions(table, n, l, 1), expected) << rule << " n=" << n;
      }
    }
  }
}

TEST(MomentViaPartitions, EqualsDirectMoment) {
  for (const char* rule : {"1,2", "2,3", "1,3", "all", "not:1", "2,5"}) {
    auto table = table_for(rule, 25);
    for (std::uint64_t n = 1; n <= 25; ++n) {
      if (table.count(n) == 0) continue;
      for (auto l : table.set().members_up_to(5)) {
        for (std::uint64_t m = 1; m <= 4; ++m) {
          EXPECT_EQ(moment_via_partitions(table, n, l, m), exact_moment(table.set(), n, l, m))
              << rule << " n=" << n << " l=" << l << " m=" << m;
        }
      }
    }
  }
}

TEST(MomentViaPartitions, LengthOutsideSetHasZeroMoments) {
  EXPECT_EQ(moment_via_partitions(table_for("2,3", 12), 12, 1, 3), 0);
  EXPECT_EQ(exact_moment(set_for("2,3", 12), 12, 1, 3), 0);
}

TEST(SurjectionCount, Examples) {
  EXPECT_EQ(surjection_count(3, 2), 6);
  EXPECT_EQ(surjection_count(4, 1), 1);
  for (std::uint64_t m = 1; m <= 10; ++m) EXPECT_EQ(surjection_count(m, m), factorial(m));
}

TEST(SurjectionCount, MatchesEnumeration) {
  for (std::uint64_t m = 1; m <= 7; ++m) {
    for (std::uint64_t j = 1; j <= m; ++j) {
      std::uint64_t onto = 0, total = 1;
      for (std::uint64_t i = 0; i < m; ++i) total *= j;
      for (std::uint64_t code = 0; code < total; ++code) {
        std::vector<bool> hit(j, false);
        for (std::uint64_t c = code, i = 0; i < m; ++i, c /= j) hit[c % j] = true;
        onto += std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
      }
      EXPECT_EQ(surjection_count(m, j), onto) << m << "," << j;
    }
  }
}

TEST(SetPartitions, BellNumbersAndBlockSizes) {
  const std::size_t bell[] = {1, 1, 2, 5, 15, 52, 203, 877};
  for (std::uint64_t j = 0; j < 8; ++j) {
    auto partitions = set_partition_block_sizes(j);
    EXPECT_EQ(partitions.size(), bell[j]);
    for (const auto& blocks : partitions) {
      std::uint64_t total = 0;
      for (auto s : blocks) {
        EXPECT_GT(s, 0u);
        total += s;
      }
      EXPECT_EQ(total, j);
    }
  }
}

TEST(LawJson, Format) {
  const std::uint64_t one[] = {1};
  EXPECT_EQ(law_to_json(exact_joint_law(set_for("all", 3), 3, one)),
            R"({"lengths":[1],"mass":[{"r":[0],"num":"1","den":"3"},)"
            R"({"r":[1],"num":"1","den":"2"},{"r":[3],"num":"1","den":"6"}]})");
}

}  // namespace
}  // namespace apermute
