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

#include "s2gaps/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace s2gaps {

namespace {

constexpr double kPi = std::numbers::pi;

long double j0_series(double x) {
  const long double q = 0.25L * static_cast<long double>(x) * x;
  long double term = 1.0L;
  long double sum = 1.0L;
  for (int k = 1; k < 400; ++k) {
    term *= -q / (static_cast<long double>(k) * k);
    sum += term;
    const long double mag = std::fabs(term);
    if (mag <= 1e-18L * std::fabs(sum) || mag < 1e-24L) break;
  }
  return sum;
}

// Hankel expansion: J0(x) = sqrt(2/(pi x)) (P cos chi - Q sin chi),
// chi = x - pi/4. Terms b_k = prod_{j<=k} (2j-1)^2 / (k! (8x)^k) are summed
// until they drop below double resolution or start to grow.
double j0_hankel(double x) {
  double p = 1.0;
  double q = 0.0;
  double b = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = b * odd * odd / (8.0 * k * x);
    if (next >= b) break;
    b = next;
    // k mod 4: 1 -> Q -= b, 2 -> P -= b, 3 -> Q += b, 0 -> P += b
    switch (k & 3) {
      case 1: q -= b; break;
      case 2: p -= b; break;
      case 3: q += b; break;
      default: p += b; break;
    }
    if (b < 1e-17) break;
  }
  // cos(x - pi/4) = (cos x + sin x)/sqrt2, sin(x - pi/4) = (sin x - cos x)/sqrt2
  const double s = std::sin(x);
  const double c = std::cos(x);
  return std::sqrt(1.0 / (kPi * x)) * (p * (c + s) - q * (s - c));
}

double i0_series_scaled(double x) {
  const double q = 0.25 * x * x;
  double term = 1.0;
  NeumaierSum sum;
  sum += 1.0;
  for (int k = 1; k < 1000; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term < 1e-17 * sum.value()) break;
  }
  return sum.value() * std::exp(-x);
}

double i0_asymptotic_scaled(double x) {
  double c = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = c * odd * odd / (8.0 * k * x);
    if (next >= c) break;
    c = next;
    sum += c;
    if (c < 1e-17 * sum) break;
  }
  return sum / std::sqrt(2.0 * kPi * x);
}

}  // namespace

double compensated_sum(std::span<const double> values) noexcept {
  NeumaierSum s;
  for (double v : values) s += v;
  return s.value();
}

void QuadratureSpec::validate() const {
  if (max_doublings < 1) throw DomainError("QuadratureSpec: max_doublings must be >= 1");
  if (!(target_abs_error > 0.0) || !(target_rel_error > 0.0)) {
    throw DomainError("QuadratureSpec: error targets must be > 0");
  }
  if (initial_nodes < 1) throw DomainError("QuadratureSpec: initial_nodes must be >= 1");
}

void ThetaParams::validate() const {
  if (!(M > 0.0) || !std::isfinite(M)) throw DomainError("ThetaParams: M must be > 0");
  if (!(tail_tol > 0.0)) throw DomainError("ThetaParams: tail_tol must be > 0");
  if (!std::isfinite(x)) throw DomainError("ThetaParams: x must be finite");
}

namespace detail {
void throw_no_convergence(const char* what, double previous, double last) {
  throw ConvergenceError(what, previous, last);
}
}  // namespace detail

double j0(double x) {
  if (!std::isfinite(x)) throw DomainError("j0: argument must be finite");
  x = std::fabs(x);
  if (x <= kJ0SeriesLimit) return static_cast<double>(j0_series(x));
  return j0_hankel(x);
}

double j0_oracle(double x, const QuadratureSpec& spec) {
  if (!std::isfinite(x)) throw DomainError("j0_oracle: argument must be finite");
  return periodic_integral([x](double phi) { return std::cos(x * std::cos(phi)); },
                           spec);
}

double i0_scaled(double x) {
  if (std::isnan(x) || x < 0.0) throw DomainError("i0_scaled: argument must be >= 0");
  if (std::isinf(x)) return 0.0;
  if (x <= kI0SeriesLimit) return i0_series_scaled(x);
  return i0_asymptotic_scaled(x);
}

int theta_truncation(double M, double tol) {
  if (!(M > 0.0)) throw DomainError("theta_truncation: M must be > 0");
  if (!(tol > 0.0)) throw DomainError("theta_truncation: tol must be > 0");
  // log of the majorant exp(-pi M n^2) / (1 - exp(-pi M))
  const double geometric = -std::log1p(-std::exp(-kPi * M));
  const auto log_majorant = [&](double n) { return -kPi * M * n * n + geometric; };
  const double target = std::log(tol);
  int n0 = static_cast<int>(std::sqrt(std::fmax(0.0, (geometric - target) / (kPi * M))));
  n0 = std::max(n0, 1);
  while (n0 > 1 && log_majorant(n0 - 1) < target) --n0;
  while (!(log_majorant(n0) < target)) ++n0;
  return n0;
}

double theta_direct(const ThetaParams& p) {
  p.validate();
  const double y = p.x - std::nearbyint(p.x);
  const int n0 = theta_truncation(p.M, 0.5 * p.tail_tol);
  NeumaierSum sum;
  for (int n = -n0 - 1; n <= n0 + 1; ++n) {
    const double t = y + n;
    if (std::fabs(t) > n0) continue;
    sum += std::exp(-kPi * p.M * t * t);
  }
  return sum.value();
}

double theta_dual(const ThetaParams& p) {
  p.validate();
  const double y = p.x - std::nearbyint(p.x);
  const double root = std::sqrt(p.M);
  const int m0 = theta_truncation(1.0 / p.M, 0.5 * p.tail_tol * root);
  NeumaierSum sum;
  for (int m = m0; m >= 1; --m) {
    sum += 2.0 * std::cos(2.0 * kPi * m * y) * std::exp(-kPi * m * m / p.M);
  }
  sum += 1.0;
  return sum.value() / root;
}

const GaussRule& gauss_legendre_rule() {
  static const GaussRule rule = [] {
    GaussRule r{};
    constexpr int n = static_cast<int>(kGaussNodes);
    for (int i = 0; i < n; ++i) {
      // Newton on P_n starting from the Chebyshev-like guess.
      double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0;
        double p1 = 0.0;
        for (int j = 1; j <= n; ++j) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
        }
        dp = n * (z * p0 - p1) / (z * z - 1.0);
        const double dz = p0 / dp;
        z -= dz;
        if (std::fabs(dz) < 1e-16) break;
      }
      r.nodes[i] = z;
      r.weights[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return r;
  }();
  return rule;
}

}  // namespace s2gaps
