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

#ifndef S2GAPS_MOMENTS_HPP
#define S2GAPS_MOMENTS_HPP

// Gap moments, the integral of R(t)^{gamma-1}, the exceptional-set measure
// and record scans. All read-only over an S2Table.

#include <cstdint>
#include <span>
#include <vector>

#include "s2gaps/sieve.hpp"

namespace s2gaps {

struct MomentReport {
  double gamma = 2.0;
  double x = 0.0;
  double moment_sum = 0.0;
  double hooley_ratio = 0.0;  // moment_sum / (x (ln x)^{(gamma-1)/2})
  double paper_ratio = 0.0;   // moment_sum / (x (ln x)^{3(gamma-1)/2} delta(x, gamma))
  bool hooley_regime = false;  // 0 < gamma < 5/3
  bool paper_regime = false;   // 1 < gamma <= 2
};

struct MeasureReport {
  double H = 0.0;
  double x = 0.0;
  double mu = 0.0;          // Lebesgue measure of {0 <= y <= x : R(y) >= H}
  double normalized = 0.0;  // mu H / (x (ln x)^{3/2})
};

struct RichardsRecord {
  std::uint64_t n = 0;
  double R = 0.0;
  double R_over_log = 0.0;
};

// 1 for gamma < 2, ln x from gamma = 2 on.
double delta_factor(double x, double gamma);

// sum over consecutive members with s_{n+1} <= x of (s_{n+1} - s_n)^gamma.
double gap_moment(const S2Table& table, double gamma, double x);

// int_0^x R(t)^{gamma-1} dt in closed form, gap by gap. On [0, 1] the
// distance is 1 - t, which contributes 1/gamma when x >= 1.
double r_integral(const S2Table& table, double gamma, double x);
inline double r_integral_left_edge(double gamma) { return 1.0 / gamma; }

MeasureReport exceptional_measure(const S2Table& table, double H, double x);

MomentReport moment_report(const S2Table& table, double gamma, double x);
std::vector<MomentReport> moment_ratio_table(const S2Table& table,
                                             std::span<const double> gammas,
                                             std::span<const double> xs);

// Integers n <= x at which R(n) exceeds every earlier R, starting from n = 3.
std::vector<RichardsRecord> richards_scan(const S2Table& table, double x);

// Same for real y: R peaks at gap midpoints with value gap/2, so the records
// are the midpoints of the record gaps with s_hi <= x.
struct RealRecord {
  double y = 0.0;
  double R = 0.0;
  double R_over_log = 0.0;
};
std::vector<RealRecord> real_record_scan(const S2Table& table, double x);

// Boundedness check used for ratio tables: the value at the largest x is at
// most twice the value at the smallest x.
inline bool two_point_bounded(double at_smallest, double at_largest) {
  return at_largest <= 2.0 * at_smallest;
}

}  // namespace s2gaps

#endif  // S2GAPS_MOMENTS_HPP
