// Copyright 2026 The s2gaps Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
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
#include <fstream>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "s2gaps/moments.hpp"
#include "s2gaps/numerics.hpp"

using namespace s2gaps;

namespace {

const S2Table& table_1e6() {
  static const S2Table t = build_s2_table(1'010'000);
  return t;
}

const S2Table& table_1e7() {
  static const S2Table t = build_s2_table(10'010'000);
  return t;
}

// R(t) for t in [0, x] by walking the sorted member list.
class Walker {
 public:
  explicit Walker(const S2Table& t) : el_(t.elements()) {}
  double operator()(double y) {
    if (y < 1.0) return 1.0 - y;
    while (i_ + 1 < el_.size() && static_cast<double>(el_[i_ + 1]) <= y) ++i_;
    const double lo = static_cast<double>(el_[i_]);
    const double hi = static_cast<double>(el_[i_ + 1]);
    return std::fmin(y - lo, hi - y);
  }

 private:
  std::vector<std::uint64_t> el_;
  std::size_t i_ = 0;
};

}  // namespace

TEST_CASE("gap moment of the first members") {
  const S2Table t = build_s2_table(20);
  CHECK(gap_moment(t, 2.0, 10.0) == 17.0);
  CHECK(gap_moment(t, 1.0, 10.0) == 9.0);
}

TEST_CASE("gamma = 1 telescopes to s_last - s_1") {
  const S2Table& t = table_1e6();
  for (double x : {1000.0, 12345.5, 1e6}) {
    const double last = static_cast<double>(*t.prev_member(static_cast<std::uint64_t>(x)));
    CHECK(gap_moment(t, 1.0, x) == last - 1.0);
    const MomentReport r = moment_report(t, 1.0, x);
    CHECK(r.moment_sum == last - 1.0);
  }
}

TEST_CASE("moment sum is at least the number of gaps") {
  const S2Table& t = table_1e6();
  const double count = static_cast<double>(gaps_upto(t, 100'000).size());
  for (double gamma : {1.2, 1.5, 2.0}) CHECK(gap_moment(t, gamma, 1e5) >= count);
}

TEST_CASE("tent integral of one gap") {
  const S2Table t = build_s2_table(20);
  // gap (2, 4): tent of height 1
  CHECK(r_integral(t, 2.0, 4.0) - r_integral(t, 2.0, 2.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r_integral(t, 2.0, 1.0) == doctest::Approx(r_integral_left_edge(2.0)).epsilon(1e-15));
  CHECK(r_integral(t, 2.0, 0.5) == doctest::Approx(0.375).epsilon(1e-15));
}

TEST_CASE("r_integral at a member is the closed form over its gaps") {
  const S2Table& t = table_1e6();
  const double gamma = 1.5;
  const double x = 1000.0;
  REQUIRE(t.contains(1000));
  double want = 1.0 / gamma;
  for (const GapRecord& g : gaps_upto(t, 1000)) {
    want += std::pow(static_cast<double>(g.gap), gamma) / (std::pow(2.0, gamma - 1.0) * gamma);
  }
  CHECK(r_integral(t, gamma, x) == doctest::Approx(want).epsilon(1e-13));
}

TEST_CASE("r_integral against a midpoint rule") {
  const S2Table& t = table_1e6();
  const double x = 1000.0;
  const std::size_t n = 20'000'000;
  for (double gamma : {1.5, 2.0}) {
    Walker R(t);
    const double h = x / static_cast<double>(n);
    NeumaierSum sum;
    for (std::size_t k = 0; k < n; ++k) sum += std::pow(R((k + 0.5) * h), gamma - 1.0);
    const double numeric = sum.value() * h;
    const double closed = r_integral(t, gamma, x);
    MESSAGE("gamma " << gamma << ": midpoint " << numeric << ", closed form " << closed);
    CHECK(std::fabs(numeric - closed) <= 1e-6 * closed);
  }
}

TEST_CASE("partial last gap") {
  const S2Table& t = table_1e6();
  // 6.5 lies in the gap (5, 8)
  const double base = r_integral(t, 2.0, 5.0);
  // R rises from 0 to 1.5 on [5, 6.5]
  CHECK(r_integral(t, 2.0, 6.5) - base == doctest::Approx(1.125).epsilon(1e-14));
}

TEST_CASE("moment identity at member endpoints") {
  const S2Table& t = table_1e6();
  for (double x : {1e3, 1e5, 1e6}) {
    REQUIRE(t.contains(static_cast<std::uint64_t>(x)));
    for (double gamma : {1.2, 1.5, 1.8, 2.0}) {
      const double lhs = gap_moment(t, gamma, x);
      const double rhs = std::pow(2.0, gamma - 1.0) * gamma *
                         (r_integral(t, gamma, x) - r_integral_left_edge(gamma));
      CHECK(std::fabs(lhs - rhs) <= 1e-12 * lhs);
    }
  }
}

TEST_CASE("moment and measure argument checks") {
  const S2Table t = build_s2_table(100);
  CHECK_THROWS_AS(gap_moment(t, 2.0, 101.0), BoundsError);
  CHECK_THROWS_AS(gap_moment(t, std::nan(""), 50.0), DomainError);
  CHECK(gap_moment(t, 0.0, 50.0) == static_cast<double>(gaps_upto(t, 50).size()));
  CHECK_THROWS_AS(r_integral(t, 0.0, 50.0), DomainError);
  CHECK_THROWS_AS(r_integral(t, 2.0, -1.0), DomainError);
  CHECK_THROWS_AS(exceptional_measure(t, -1.0, 50.0), DomainError);
  CHECK_THROWS_AS(exceptional_measure(t, 1.0, 1000.0), BoundsError);
}

TEST_CASE("exceptional measure examples") {
  const S2Table t = build_s2_table(100);
  const MeasureReport r = exceptional_measure(t, 1.0, 10.0);
  CHECK(r.mu == 1.0);
  CHECK(r.normalized == doctest::Approx(1.0 / (10.0 * std::pow(std::log(10.0), 1.5))));
  CHECK(exceptional_measure(t, 0.0, 10.0).mu == 10.0);
  CHECK(exceptional_measure(t, 0.0, 57.3).mu == 57.3);
  CHECK(exceptional_measure(t, 2.0, 10.0).mu == 0.0);
  CHECK(exceptional_measure(t, 0.5, 10.0).mu >= exceptional_measure(t, 1.0, 10.0).mu);
}

TEST_CASE("measure vanishes past half the largest gap") {
  const S2Table& t = table_1e6();
  std::uint64_t largest = 0;
  for (const GapRecord& g : gaps_upto(t, 1'000'000)) largest = std::max(largest, g.gap);
  const double H = std::fmax(1.0, 0.5 * static_cast<double>(largest)) + 1e-9;
  CHECK(exceptional_measure(t, H, 1e6).mu == 0.0);
}

TEST_CASE("measure is nonincreasing in H") {
  const S2Table& t = table_1e6();
  double prev = 1e6;
  for (double H = 0.0; H < 20.0; H += 0.25) {
    const double mu = exceptional_measure(t, H, 1e6).mu;
    CHECK(mu <= prev);
    CHECK(mu >= 0.0);
    prev = mu;
  }
}

TEST_CASE("measure against Monte Carlo sampling") {
  const S2Table& t = table_1e6();
  std::mt19937_64 gen(2024);
  for (auto [H, x] : {std::pair{1.0, 1e4}, std::pair{2.0, 1e6}}) {
    std::uniform_real_distribution<double> pick(0.0, x);
    const int samples = 1'000'000;
    int hits = 0;
    for (int i = 0; i < samples; ++i) hits += distance_to_s2(t, pick(gen)) >= H;
    const double p = static_cast<double>(hits) / samples;
    const double sigma = x * std::sqrt(p * (1.0 - p) / samples);
    const double mu = exceptional_measure(t, H, x).mu;
    MESSAGE("H=" << H << " x=" << x << ": closed " << mu << ", sampled " << p * x
                 << " +- " << sigma);
    CHECK(std::fabs(mu - p * x) <= 3.0 * sigma);
  }
}

TEST_CASE("moment report normalizations") {
  const S2Table& t = table_1e6();
  for (double gamma : {1.2, 1.5, 2.0}) {
    for (double x : {1e4, 1e6}) {
      const MomentReport r = moment_report(t, gamma, x);
      const double L = std::log(x);
      CHECK(r.moment_sum == gap_moment(t, gamma, x));
      CHECK(r.hooley_ratio == doctest::Approx(r.moment_sum / (x * std::pow(L, (gamma - 1.0) / 2.0))));
      // the two normalizers differ by (ln x)^{gamma - 1} delta(x, gamma)
      CHECK(r.hooley_ratio ==
            doctest::Approx(r.paper_ratio * std::pow(L, gamma - 1.0) * delta_factor(x, gamma)).epsilon(1e-13));
    }
  }
  CHECK(delta_factor(1e6, 1.99) == 1.0);
  CHECK(delta_factor(1e6, 2.0) == std::log(1e6));
}

TEST_CASE("regime flags") {
  const S2Table& t = table_1e6();
  const MomentReport a = moment_report(t, 1.5, 1e4);
  CHECK(a.hooley_regime);
  CHECK(a.paper_regime);
  const MomentReport b = moment_report(t, 2.0, 1e4);
  CHECK_FALSE(b.hooley_regime);
  CHECK(b.paper_regime);
  const MomentReport c = moment_report(t, 0.5, 1e4);
  CHECK(c.hooley_regime);
  CHECK_FALSE(c.paper_regime);
}

TEST_CASE("gamma near 1: both ratios near (s_last - s_1) / x") {
  const S2Table& t = table_1e6();
  const MomentReport r = moment_report(t, 1.0 + 1e-9, 1e6);
  CHECK(r.hooley_ratio == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(r.paper_ratio == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("ratio table shape") {
  const std::vector<double> gammas{1.5, 2.0};
  const std::vector<double> xs{1e4, 1e5, 1e6};
  const auto rows = moment_ratio_table(table_1e6(), gammas, xs);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].gamma == 1.5);
  CHECK(rows[0].x == 1e4);
  CHECK(rows[5].gamma == 2.0);
  CHECK(rows[5].x == 1e6);
}

TEST_CASE("integer records of R") {
  const S2Table& t = table_1e6();
  const auto rec = richards_scan(t, 1e5);
  REQUIRE_FALSE(rec.empty());
  CHECK(rec.front().n == 3);
  CHECK(rec.front().R == 1.0);
  for (std::size_t i = 1; i < rec.size(); ++i) {
    CHECK(rec[i].R > rec[i - 1].R);
    CHECK(rec[i].n > rec[i - 1].n);
  }
  // brute force: R(n) at every integer n in [1, 1e5]
  std::vector<std::uint64_t> want;
  double best = 0.0;
  for (std::uint64_t n = 1; n <= 100'000; ++n) {
    const double r = distance_to_s2(t, static_cast<double>(n));
    if (r > best) {
      best = r;
      want.push_back(n);
    }
  }
  REQUIRE(want.size() == rec.size());
  for (std::size_t i = 0; i < want.size(); ++i) CHECK(rec[i].n == want[i]);
}

TEST_CASE("records of R up to 1e7 follow from the record gaps") {
  // Inside a gap (lo, hi) the integer distance climbs to floor(g / 2) at
  // lo + r, so each record gap can add several consecutive integer records.
  std::ifstream in(oracle::fixture_path("record_gaps_1e7.csv"));
  REQUIRE(in);
  const auto fixture = read_gap_csv(in);
  std::vector<RichardsRecord> want;
  std::uint64_t best = 0;
  for (const GapRecord& g : fixture) {
    for (std::uint64_t r = best + 1; r <= g.gap / 2; ++r) {
      want.push_back({g.s_lo + r, static_cast<double>(r), r / std::log(static_cast<double>(g.s_lo + r))});
    }
    best = std::max(best, g.gap / 2);
  }
  const auto rec = richards_scan(table_1e7(), 1e7);
  REQUIRE(rec.size() == want.size());
  for (std::size_t i = 0; i < rec.size(); ++i) {
    CHECK(rec[i].n == want[i].n);
    CHECK(rec[i].R == want[i].R);
  }
  const auto top = std::max_element(rec.begin(), rec.end(), [](const auto& a, const auto& b) {
    return a.R_over_log < b.R_over_log;
  });
  MESSAGE("max R(n)/ln n for n <= 1e7: " << top->R_over_log << " at n = " << top->n);
  CHECK(rec.back().n == 9'565'569);
  CHECK(rec.back().R == 25.0);
  CHECK(top->n == 1'853'890);
  CHECK(top->R == 24.0);
  CHECK(top->R_over_log == doctest::Approx(24.0 / std::log(1853890.0)).epsilon(1e-15));
}

TEST_CASE("real-valued records sit at record-gap midpoints") {
  const auto rec = real_record_scan(table_1e7(), 1e7);
  REQUIRE(rec.size() == record_gaps(table_1e7(), 10'000'000).size());
  CHECK(rec.front().y == 1.5);
  CHECK(rec.front().R == 0.5);
  CHECK(rec.back().y == 9'565'569.0);
  CHECK(rec.back().R == 25.0);
}

TEST_CASE("two-point boundedness") {
  CHECK(two_point_bounded(1.0, 2.0));
  CHECK_FALSE(two_point_bounded(1.0, 2.0000001));
}
