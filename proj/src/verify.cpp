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

#include "s2gaps/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

namespace s2gaps {

namespace {

double unit_interval(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace

std::vector<WeberPoint> weber_sample(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<WeberPoint> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    WeberPoint p{};
    p.alpha = 0.5 + 2.5 * unit_interval(gen);
    p.beta = 2.0 * unit_interval(gen);
    p.gamma = 2.0 * unit_interval(gen);
    out.push_back(p);
  }
  return out;
}

std::vector<IdentityReport> theta_identity_reports(int points, double tail_tol) {
  std::vector<IdentityReport> out;
  for (double M : kThetaGridM) {
    for (int k = 0; k < points; ++k) {
      const double x = static_cast<double>(k) / points;
      const ThetaParams p{M, x, tail_tol};
      out.push_back(IdentityReport::compare(fmt::format("theta(M={},x={})", M, x),
                                            theta_direct(p), theta_dual(p),
                                            {"theta_direct", "theta_dual"}));
    }
  }
  return out;
}

std::vector<IdentityReport> bessel_identity_reports(const R2Table& r2, double tail_tol,
                                                    std::span<const double> Ns,
                                                    std::span<const double> Ms) {
  std::vector<IdentityReport> out;
  for (double N : Ns) {
    for (double M : Ms) {
      const SumParams p = SumParams::make(N, M, tail_tol);
      out.push_back(IdentityReport::compare(fmt::format("bessel_sum(N={},M={})", N, M),
                                            M * i_quadrature(N, M), s_direct(p, r2),
                                            {"M*i_quadrature", "s_direct"}));
    }
  }
  return out;
}

std::vector<IdentityReport> dual_identity_reports(const R2Table& r2, double tail_tol,
                                                  std::span<const double> Ns,
                                                  std::span<const double> Ms) {
  std::vector<IdentityReport> out;
  for (double N : Ns) {
    for (double M : Ms) {
      const SumParams p = SumParams::make(N, M, tail_tol);
      out.push_back(IdentityReport::compare(fmt::format("dual_i0(N={},M={})", N, M),
                                            s_dual_i0(p, r2), s_direct(p, r2),
                                            {"s_dual_i0", "s_direct"}));
    }
  }
  return out;
}

std::vector<IdentityReport> weber_reports(std::size_t count, std::uint64_t seed) {
  std::vector<IdentityReport> out;
  for (const auto& w : weber_sample(count, seed)) {
    out.push_back(weber_check(w.alpha, w.beta, w.gamma));
  }
  return out;
}

std::uint64_t sum_grid_r2_bound(double tail_tol) {
  std::uint64_t bound = 0;
  for (double N : kSumGridN) {
    for (double M : kSumGridM) {
      bound = std::max(bound, required_r2_bound(SumParams::make(N, M, tail_tol)));
    }
  }
  return bound;
}

bool within_scaled(const IdentityReport& r, double tol) {
  return r.abs_err <= tol * std::max(1.0, std::fabs(r.rhs));
}

bool within_relative(const IdentityReport& r, double tol) {
  return r.abs_err <= tol * std::fabs(r.rhs);
}

}  // namespace s2gaps
