// Copyright 2026 The divlink Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "divlink/distribution.hpp"
#include "divlink/errors.hpp"

using namespace divlink;

namespace {

std::vector<double> random_table(std::int32_t q, std::int32_t s,
                                 std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<double> probs(static_cast<std::size_t>(q) * s);
  double sum = 0.0;
  for (double& v : probs) {
    v = 0.05 + rng.next_unit();
    sum += v;
  }
  for (double& v : probs) v /= sum;
  return probs;
}

std::vector<QuasiId> full_alphabet(std::int32_t q) {
  std::vector<QuasiId> all(static_cast<std::size_t>(q));
  std::iota(all.begin(), all.end(), 0);
  return all;
}

}  // namespace

TEST_CASE("SplitMix64 reproduces its reference stream") {
  SplitMix64 rng(1);
  CHECK(rng.next() == 0x910a2dec89025cc1ULL);
  CHECK(rng.next() == 0xbeeb8da1658eec67ULL);
  CHECK(rng.next() == 0xf893a2eefb32555eULL);
  CHECK(rng.next() == 0x71c18690ee42c90bULL);

  SplitMix64 units(42);
  CHECK(units.next_unit() == 0.7415648787718233);
  CHECK(units.next_unit() == 0.1599103928769201);
  for (int i = 0; i < 1000; ++i) {
    const double u = units.next_unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("class mass over the full alphabet equals the sensitive marginal") {
  const JointDistribution dist(4, 3, random_table(4, 3, 11));
  const auto mass = class_mass(dist, full_alphabet(4));
  for (std::int32_t s = 0; s < 3; ++s) {
    CHECK(mass[static_cast<std::size_t>(s)] ==
          dist.s_marginal()[static_cast<std::size_t>(s)]);
  }
}

TEST_CASE("class mass of a singleton is the distribution row") {
  const JointDistribution dist(4, 3, random_table(4, 3, 12));
  const QuasiId q = 2;
  const auto mass = class_mass(dist, {&q, 1});
  for (std::int32_t s = 0; s < 3; ++s) {
    CHECK(mass[static_cast<std::size_t>(s)] == dist.cell(q, s));
  }
}

TEST_CASE("class mass of a pair matches direct addition") {
  const JointDistribution dist(4, 3, random_table(4, 3, 13));
  const std::vector<QuasiId> cls = {1, 3};
  const auto mass = class_mass(dist, cls);
  for (std::int32_t s = 0; s < 3; ++s) {
    CHECK(mass[static_cast<std::size_t>(s)] ==
          doctest::Approx(dist.cell(1, s) + dist.cell(3, s)).epsilon(1e-15));
  }
}

TEST_CASE("ordered marginals of the uniform distribution") {
  const auto summary = summarize(JointDistribution::uniform(10, 50));
  for (std::int32_t ell = 1; ell <= 50; ++ell) {
    CHECK(p_ell(summary, ell) == doctest::Approx(0.02).epsilon(1e-12));
  }
  CHECK(summary.theta == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(summary.product_form);
}

TEST_CASE("geometric marginals match the closed form") {
  const double rho = 0.95;
  const auto dist = JointDistribution::geometric(20, 50, rho);
  const auto summary = summarize(dist);
  const double p1 = (1.0 - rho) / (1.0 - std::pow(rho, 50));
  CHECK(p_ell(summary, 1) == doctest::Approx(p1).epsilon(1e-12));
  // Two significant figures: ~0.054.
  CHECK(p_ell(summary, 1) == doctest::Approx(0.054).epsilon(0.01));
  CHECK(p_ell(summary, 10) ==
        doctest::Approx(p1 * std::pow(rho, 9)).epsilon(1e-12));
}

TEST_CASE("p_ell rejects out-of-range ell") {
  const auto summary = summarize(JointDistribution::uniform(2, 3));
  CHECK_THROWS_AS(p_ell(summary, 0), ValidationError);
  CHECK_THROWS_AS(p_ell(summary, 4), ValidationError);
}

TEST_CASE("ordered marginals are a sorted permutation with p_ell <= 1/ell") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const JointDistribution dist(6, 5, random_table(6, 5, seed));
    const auto summary = summarize(dist);
    auto sorted_marginals = dist.s_marginal();
    std::sort(sorted_marginals.begin(), sorted_marginals.end(),
              std::greater<>());
    CHECK(summary.ordered_marginals == sorted_marginals);
    for (std::int32_t ell = 1; ell <= 5; ++ell) {
      CHECK(p_ell(summary, ell) <= 1.0 / ell + kTieTolerance);
    }
  }
}

TEST_CASE("summary tie-breaking is stable by attribute index") {
  // Two exactly-equal marginals: the smaller attribute index comes first.
  const auto summary =
      summarize(JointDistribution::product({0.5, 0.5}, {0.25, 0.5, 0.25}));
  CHECK(summary.order == std::vector<SensitiveAttr>{1, 0, 2});
}

TEST_CASE("product-form detection") {
  CHECK(summarize(JointDistribution::product({0.25, 0.75}, {0.4, 0.6}))
            .product_form);
  // Perturb one cell beyond the tolerance.
  std::vector<double> probs = {0.1, 0.15, 0.3, 0.45};
  probs[0] += 1e-3;
  probs[1] -= 1e-3;
  CHECK(!summarize(JointDistribution(2, 2, probs)).product_form);
}

TEST_CASE("theta reflects the least likely quasi-identifier") {
  const auto summary =
      summarize(JointDistribution::product({0.1, 0.4, 0.5}, {0.5, 0.5}));
  CHECK(summary.theta == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("distribution validation") {
  // Renormalization within tolerance.
  std::vector<double> near = {0.25, 0.25, 0.25, 0.25 + 5e-10};
  const JointDistribution dist(2, 2, near);
  double sum = 0.0;
  for (double v : dist.probs()) sum += v;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(JointDistribution(2, 2, {0.3, 0.3, 0.3, 0.2}),
                  ValidationError);
  CHECK_THROWS_AS(JointDistribution(2, 2, {-0.1, 0.5, 0.3, 0.3}),
                  ValidationError);
  // A zero sensitive marginal is rejected.
  CHECK_THROWS_AS(JointDistribution(2, 2, {0.5, 0.0, 0.5, 0.0}),
                  ValidationError);
  CHECK_THROWS_AS(JointDistribution(2, 2, {0.5, 0.5}), ValidationError);
}

TEST_CASE("support sets") {
  const JointDistribution dist(6, 4, random_table(6, 4, 21));
  const auto summary = summarize(dist);
  const auto all = full_alphabet(6);

  SUBCASE("the full class supports at least ell attributes at p_ell") {
    for (std::int32_t ell = 1; ell <= 4; ++ell) {
      CHECK(support_set(dist, all, p_ell(summary, ell)).size() >=
            static_cast<std::size_t>(ell));
    }
  }
  SUBCASE("threshold 1 leaves at most one attribute") {
    CHECK(support_set(dist, all, 1.0).size() <= 1);
  }
  SUBCASE("membership matches a direct comparison") {
    const std::vector<QuasiId> cls = {0, 2, 5};
    const auto mass = class_mass(dist, cls);
    const auto support = support_set(dist, cls, 0.1);
    for (std::int32_t s = 0; s < 4; ++s) {
      const bool in_support =
          std::find(support.begin(), support.end(), s) != support.end();
      CHECK(in_support ==
            (mass[static_cast<std::size_t>(s)] >= 0.1 - kTieTolerance));
    }
  }
  SUBCASE("support size is non-increasing in p") {
    std::size_t last = 5;
    for (double p = 0.01; p <= 1.0; p += 0.007) {
      const auto size = support_set(dist, all, p).size();
      CHECK(size <= last);
      last = size;
    }
  }
}

TEST_CASE("sampling") {
  SUBCASE("zero records") {
    CHECK(sample_dataset(JointDistribution::uniform(3, 3), 0, 9).records.empty());
  }
  SUBCASE("a point mass yields identical records") {
    const auto d = sample_dataset(JointDistribution(1, 1, {1.0}), 5, 9);
    REQUIRE(d.records.size() == 5);
    for (const Record& r : d.records) {
      CHECK(r.qid == 0);
      CHECK(r.sens == 0);
    }
  }
  SUBCASE("equal seeds reproduce the dataset bit for bit") {
    const JointDistribution dist(5, 4, random_table(5, 4, 31));
    const auto a = sample_dataset(dist, 1000, 77);
    const auto b = sample_dataset(dist, 1000, 77);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
      CHECK(a.records[i].qid == b.records[i].qid);
      CHECK(a.records[i].sens == b.records[i].sens);
    }
    const auto c = sample_dataset(dist, 1000, 78);
    bool all_equal = true;
    for (std::size_t i = 0; i < a.records.size(); ++i) {
      all_equal &= a.records[i].qid == c.records[i].qid &&
                   a.records[i].sens == c.records[i].sens;
    }
    CHECK(!all_equal);
  }
  SUBCASE("empirical cell frequencies stay within 4 sigma of the table") {
    const JointDistribution dist(10, 5, random_table(10, 5, 41));
    const std::int64_t n = 100000;
    const auto d = sample_dataset(dist, n, 4242);
    std::vector<std::int64_t> tally(50, 0);
    for (const Record& r : d.records) {
      ++tally[static_cast<std::size_t>(r.qid) * 5 + r.sens];
    }
    for (std::size_t i = 0; i < tally.size(); ++i) {
      const double p = dist.probs()[i];
      const double sigma = std::sqrt(p * (1.0 - p) / n);
      const double freq = static_cast<double>(tally[i]) / n;
      CHECK(std::abs(freq - p) <= 4.0 * sigma);
    }
  }
}
