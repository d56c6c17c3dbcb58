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

#ifndef S2GAPS_NUMERICS_HPP
#define S2GAPS_NUMERICS_HPP

// Double-precision special functions, theta sums and quadrature.
//
// Everything here is a pure function of its arguments and may be called
// concurrently from any number of threads.

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>

#include "s2gaps/error.hpp"

namespace s2gaps {

// Neumaier's variant of Kahan summation.
class NeumaierSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  NeumaierSum& operator+=(double v) noexcept {
    add(v);
    return *this;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double compensated_sum(std::span<const double> values) noexcept;

struct QuadratureSpec {
  int max_doublings = 20;
  double target_abs_error = 1e-13;
  double target_rel_error = 1e-13;
  // Node (or panel) count of the first estimate. Integrands whose
  // bandwidth is known in advance can start closer to resolution.
  std::size_t initial_nodes = 16;

  void validate() const;
  bool converged(double previous, double current) const noexcept {
    return std::fabs(current - previous) <
           std::fmax(target_abs_error, target_rel_error * std::fabs(current));
  }
};

struct ThetaParams {
  double M = 1.0;
  double x = 0.0;
  double tail_tol = 1e-16;

  void validate() const;
};

// J0 for real x. Power series (extended precision accumulation) up to
// kJ0SeriesLimit, Hankel amplitude/phase expansion beyond.
inline constexpr double kJ0SeriesLimit = 17.0;
double j0(double x);

// J0 from its integral representation (1/2pi) int cos(x cos phi) dphi by
// the periodic trapezoid rule. Shares nothing with j0().
double j0_oracle(double x, const QuadratureSpec& spec = {});

// exp(-x) I0(x) for x >= 0. Never overflows.
inline constexpr double kI0SeriesLimit = 25.0;
double i0_scaled(double x);

// Smallest n0 >= 1 with exp(-pi M n0^2) / (1 - exp(-pi M)) < tol.
int theta_truncation(double M, double tol);

// sum_n exp(-pi M (x+n)^2)
double theta_direct(const ThetaParams& p);
// M^{-1/2} sum_m cos(2 pi m x) exp(-pi m^2 / M)
double theta_dual(const ThetaParams& p);

namespace detail {
[[noreturn]] void throw_no_convergence(const char* what, double previous,
                                       double last);
}

// (1/2pi) int_{-pi}^{pi} f(phi) dphi for smooth 2pi-periodic f.
//
// Trapezoid rule, doubling the node count each round and reusing the old
// nodes. Stops once two consecutive refinements both move the estimate by
// less than the tolerance in `spec`.
template <class F>
double periodic_integral(F&& f, const QuadratureSpec& spec = {}) {
  spec.validate();
  constexpr double pi = std::numbers::pi;
  std::size_t n = spec.initial_nodes;
  NeumaierSum total;
  for (std::size_t k = 0; k < n; ++k) {
    total += f(-pi + 2.0 * pi * static_cast<double>(k) / static_cast<double>(n));
  }
  double estimate = total.value() / static_cast<double>(n);
  double previous = estimate;
  int streak = 0;
  for (int round = 0; round < spec.max_doublings; ++round) {
    const double h = 2.0 * pi / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
      total += f(-pi + (static_cast<double>(k) + 0.5) * h);
    }
    n *= 2;
    previous = estimate;
    estimate = total.value() / static_cast<double>(n);
    streak = spec.converged(previous, estimate) ? streak + 1 : 0;
    if (streak == 2) return estimate;
  }
  detail::throw_no_convergence("periodic_integral: no convergence", previous,
                               estimate);
}

// Gauss-Legendre rule with kGaussNodes nodes on [-1, 1].
inline constexpr std::size_t kGaussNodes = 8;
struct GaussRule {
  std::array<double, kGaussNodes> nodes;
  std::array<double, kGaussNodes> weights;
};
const GaussRule& gauss_legendre_rule();

// Composite Gauss-Legendre over `panels` equal panels of [a, b].
template <class F>
double composite_gauss(F&& f, double a, double b, std::size_t panels) {
  const GaussRule& rule = gauss_legendre_rule();
  const double h = (b - a) / static_cast<double>(panels);
  NeumaierSum total;
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = a + (static_cast<double>(p) + 0.5) * h;
    double panel = 0.0;
    for (std::size_t k = 0; k < kGaussNodes; ++k) {
      panel += rule.weights[k] * f(mid + 0.5 * h * rule.nodes[k]);
    }
    total += 0.5 * h * panel;
  }
  return total.value();
}

// int_a^b f by composite Gauss-Legendre, doubling the panel count from
// spec.initial_nodes until two consecutive refinements agree.
template <class F>
double integrate(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
  spec.validate();
  std::size_t panels = spec.initial_nodes;
  double estimate = composite_gauss(f, a, b, panels);
  double previous = estimate;
  int streak = 0;
  for (int round = 0; round < spec.max_doublings; ++round) {
    panels *= 2;
    previous = estimate;
    estimate = composite_gauss(f, a, b, panels);
    streak = spec.converged(previous, estimate) ? streak + 1 : 0;
    if (streak == 2) return estimate;
  }
  detail::throw_no_convergence("integrate: no convergence", previous, estimate);
}

}  // namespace s2gaps

#endif  // S2GAPS_NUMERICS_HPP
