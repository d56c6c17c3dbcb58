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

#ifndef S2GAPS_VERIFY_HPP
#define S2GAPS_VERIFY_HPP

// Parameter grids and batch identity checks shared by the CLI and the
// acceptance suite.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "s2gaps/bessel_sum.hpp"

namespace s2gaps {

inline constexpr std::array<double, 6> kThetaGridM = {0.25, 0.5, 1.0, 2.0, 4.0, 10.0};
inline constexpr int kThetaGridPoints = 64;
inline constexpr std::array<double, 7> kSumGridN = {0.0, 0.5, 1.0, 2.5, 10.0, 100.0, 1000.0};
inline constexpr std::array<double, 4> kSumGridM = {0.5, 1.0, 4.0, 16.0};

inline constexpr double kThetaIdentityTol = 1e-12;
inline constexpr double kSumIdentityTol = 1e-8;
inline constexpr double kWeberIdentityTol = 1e-6;
inline constexpr std::uint64_t kWeberSeed = 0x5eedb0b5ull;

struct WeberPoint {
  double alpha;
  double beta;
  double gamma;
};

// Deterministic sample with alpha in [0.5, 3], beta and gamma in [0, 2].
// Uses its own uniform mapping so the points do not depend on the standard
// library's distribution implementation.
std::vector<WeberPoint> weber_sample(std::size_t count, std::uint64_t seed = kWeberSeed);

// theta_direct (lhs) against theta_dual (rhs) on the M grid times
// x = k/points, k < points.
std::vector<IdentityReport> theta_identity_reports(int points = kThetaGridPoints,
                                                   double tail_tol = 1e-16);
// M * i_quadrature (lhs) against s_direct (rhs) on kSumGridN x kSumGridM.
std::vector<IdentityReport> bessel_identity_reports(
    const R2Table& r2, double tail_tol = kDefaultSumTailTol,
    std::span<const double> Ns = kSumGridN, std::span<const double> Ms = kSumGridM);
// s_dual_i0 (lhs) against s_direct (rhs) on the same grid.
std::vector<IdentityReport> dual_identity_reports(
    const R2Table& r2, double tail_tol = kDefaultSumTailTol,
    std::span<const double> Ns = kSumGridN, std::span<const double> Ms = kSumGridM);
std::vector<IdentityReport> weber_reports(std::size_t count = 10,
                                          std::uint64_t seed = kWeberSeed);

// r2 bound covering every grid point of the two sum checks.
std::uint64_t sum_grid_r2_bound(double tail_tol = kDefaultSumTailTol);

// abs_err <= tol * max(1, |rhs|)
bool within_scaled(const IdentityReport& r, double tol);
// abs_err <= tol * |rhs|
bool within_relative(const IdentityReport& r, double tol);

}  // namespace s2gaps

#endif  // S2GAPS_VERIFY_HPP
