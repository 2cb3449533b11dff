// Copyright 2026 The ragear Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ragear/agreement.h"

#include <gtest/gtest.h>

#include "oracles/generators.h"
#include "oracles/naive.h"
#include "ragear/errors.h"
#include "test_util.h"

namespace ragear {
namespace {

using Ids = std::vector<std::string>;
using Vals = std::vector<double>;

TEST(Kendall, WorkedCase) {
  Vals a{1, 2, 3, 4}, b{1, 3, 2, 4};
  EXPECT_NEAR(*kendall_tau(a, b), 2.0 / 3, 1e-12);
  EXPECT_NEAR(*spearman_rho(a, b), 0.8, 1e-12);
}

TEST(Kendall, IdenticalAndReversedLimits) {
  Vals a{0.1, 0.5, 0.3, 0.9, 0.7}, r{0.9, 0.5, 0.7, 0.1, 0.3};
  EXPECT_EQ(*kendall_tau(a, a), 1.0);
  EXPECT_EQ(*spearman_rho(a, a), 1.0);
  EXPECT_EQ(*kendall_tau(a, r), -1.0);
  EXPECT_EQ(*spearman_rho(a, r), -1.0);
}

TEST(Kendall, DegenerateInputs) {
  Vals tied{2, 2, 2}, other{1, 2, 3};
  EXPECT_FALSE(kendall_tau(tied, other).has_value());
  EXPECT_FALSE(spearman_rho(other, tied).has_value());
  Vals one{1};
  EXPECT_THROW(kendall_tau(one, one), InvalidArgument);
  EXPECT_THROW(spearman_rho(other, Vals{1, 2}), InvalidArgument);
}

TEST(Kendall, TiesMatchNaiveReference) {
  gen::Rng rng(6);
  for (int i = 0; i < 500; ++i) {
    int n = gen::uniform(rng, 2, 12);
    Vals a, b;
    for (int j = 0; j < n; ++j) {
      a.push_back(gen::uniform(rng, 0, 5));
      b.push_back(gen::uniform(rng, 0, 5));
    }
    auto t = kendall_tau(a, b), tn = naive::tau_b(a, b);
    auto r = spearman_rho(a, b), rn = naive::rho(a, b);
    ASSERT_EQ(t.has_value(), tn.has_value());
    ASSERT_EQ(r.has_value(), rn.has_value());
    if (t) {
      EXPECT_NEAR(*t, *tn, 1e-12);
    }
    if (r) {
      EXPECT_NEAR(*r, *rn, 1e-12);
    }
  }
}

TEST(Rbo, WorkedDepthTwo) {
  EXPECT_NEAR(rbo_ext(Ids{"a", "b"}, Ids{"a", "c"}, 0.9), 0.55, 1e-12);
}

TEST(Rbo, Limits) {
  Ids s{"a", "b", "c", "d"};
  Ids r(s.rbegin(), s.rend());
  EXPECT_NEAR(rbo_ext(s, s, 0.9), 1.0, 1e-12);
  EXPECT_EQ(rbo_ext(s, Ids{"w", "x", "y", "z"}, 0.9), 0.0);
  EXPECT_NEAR(rbo_ext(s, r, 0.9), naive::rbo_ext(s, r, 0.9), 1e-12);
  EXPECT_EQ(rbo_ext(Ids{}, Ids{}, 0.9), 1.0);
  EXPECT_EQ(rbo_ext(Ids{}, s, 0.9), 0.0);
  EXPECT_NEAR(rbo_ext(Ids{"a"}, s, 0.9), rbo_ext(s, Ids{"a"}, 0.9), 1e-15);
}

TEST(Rbo, PrefixOfLongerListIsOne) {
  EXPECT_NEAR(rbo_ext(Ids{"a", "b"}, Ids{"a", "b", "c", "d"}, 0.9), 1.0, 1e-12);
}

TEST(Rbo, Errors) {
  EXPECT_THROW(rbo_ext(Ids{"a", "a"}, Ids{"a"}, 0.9), InvalidArgument);
  EXPECT_THROW(rbo_ext(Ids{"a"}, Ids{"a"}, 1.0), InvalidArgument);
  EXPECT_THROW(rbo_ext(Ids{"a"}, Ids{"a"}, 0.0), InvalidArgument);
}

TEST(Rbo, MatchesNaiveReference) {
  gen::Rng rng(8);
  for (int i = 0; i < 500; ++i) {
    Ids pool;
    for (int j = 0; j < 15; ++j) pool.push_back(gen::id("c", j));
    std::shuffle(pool.begin(), pool.end(), rng);
    Ids s(pool.begin(), pool.begin() + gen::uniform(rng, 0, 10));
    std::shuffle(pool.begin(), pool.end(), rng);
    Ids t(pool.begin(), pool.begin() + gen::uniform(rng, 0, 10));
    double p = std::uniform_real_distribution<double>(0.05, 0.95)(rng);
    double got = rbo_ext(s, t, p);
    EXPECT_NEAR(got, naive::rbo_ext(s, t, p), 1e-12);
    EXPECT_GE(got, 0.0);
    EXPECT_LE(got, 1.0);
  }
}

TEST(Jaccard, SetArithmetic) {
  EvalConfig cfg;
  std::vector<Judgment> ab{{"q", "A", 4}, {"q", "B", 3}, {"q", "C", 1}};
  std::vector<Judgment> bc{{"q", "B", 5}, {"q", "C", 3}};
  EXPECT_NEAR(jaccard_relevant(ab, bc, cfg), 1.0 / 3, 1e-12);
  EXPECT_EQ(jaccard_relevant(ab, ab, cfg), 1.0);
  EXPECT_EQ(jaccard_relevant({}, {}, cfg), 1.0);
  std::vector<Judgment> low{{"q", "A", 2}};
  EXPECT_EQ(jaccard_relevant(low, low, cfg), 1.0);
}

TEST(SummaryStat, SkipsUndefined) {
  std::vector<std::optional<double>> v{1.0, std::nullopt, 3.0};
  SummaryStat s = SummaryStat::over(v);
  EXPECT_EQ(s.count, 2u);
  EXPECT_EQ(s.mean, 2.0);
  EXPECT_EQ(s.std_dev, 1.0);
  EXPECT_EQ(SummaryStat::over({}).count, 0u);
}

TEST(Agree, IdenticalJudgesAgreePerfectly) {
  Qrels q = Qrels::load(testing_util::golden_dir() / "qrels.txt");
  AgreementReport r = agree(q, q, EvalConfig{});
  EXPECT_EQ(r.rows.size(), 10u);
  for (const SummaryStat* s : {&r.kendall, &r.spearman, &r.rbo, &r.jaccard}) {
    EXPECT_NEAR(s->mean, 1.0, 1e-12);
    EXPECT_NEAR(s->std_dev, 0.0, 1e-12);
  }
  Json j = r.to_json();
  EXPECT_EQ(j["queries"].size(), 10u);
  EXPECT_EQ(j["summary"]["rbo"]["mean"], 1.0);
  EXPECT_NE(r.to_table().find("Jaccard"), std::string::npos);
}

TEST(Agree, UnionOfRatedCourses) {
  Qrels left(std::vector<Judgment>{{"q", "A", 5}, {"q", "B", 3}, {"q", "C", 1}});
  Qrels right(std::vector<Judgment>{{"q", "A", 4}, {"q", "C", 3}, {"q", "D", 2}});
  AgreementReport r = agree(left, right, EvalConfig{});
  ASSERT_EQ(r.rows.size(), 1u);
  const AgreementRow& row = r.rows[0];
  EXPECT_EQ(row.courses, 4u);
  Vals a{5, 3, 1, 0}, b{4, 0, 3, 2};
  EXPECT_NEAR(*row.kendall, *naive::tau_b(a, b), 1e-12);
  EXPECT_NEAR(*row.spearman, *naive::rho(a, b), 1e-12);
  EXPECT_NEAR(row.rbo, naive::rbo_ext({"A", "B", "C", "D"}, {"A", "C", "D", "B"}, 0.9),
              1e-12);
  EXPECT_NEAR(row.jaccard, 1.0 / 3, 1e-12);
}

TEST(Agree, MismatchedQuerySets) {
  Qrels left(std::vector<Judgment>{{"q1", "A", 5}});
  Qrels right(std::vector<Judgment>{{"q2", "A", 5}});
  EXPECT_THROW(agree(left, right, EvalConfig{}), InvalidArgument);
}

}  // namespace
}  // namespace ragear
