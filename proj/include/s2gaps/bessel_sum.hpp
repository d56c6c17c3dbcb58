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

#ifndef S2GAPS_BESSEL_SUM_HPP
#define S2GAPS_BESSEL_SUM_HPP

// The Bessel sum S(N, M) = sum_{n>=0} r2(n) J0(2 pi sqrt(N n)) exp(-pi n / M),
// evaluated three independent ways, plus the L2 functionals built on it.
//
// Every exp(-big) * I0(big) product is evaluated as a single combined
// exponent times i0_scaled, never as two separate factors.

#include <cstdint>
#include <string>
#include <utility>

#include "s2gaps/numerics.hpp"
#include "s2gaps/sieve.hpp"

namespace s2gaps {

inline constexpr double kDefaultSumTailTol = 1e-13;

// Disk-counting constant: sum_{1<=n<=x} r2(n) <= kR2DiskConstant * x for x > 0.
inline constexpr double kR2DiskConstant = 4.0 * (1.0 + std::numbers::sqrt2) *
                                          (1.0 + std::numbers::sqrt2);

struct SumParams {
  double N = 0.0;
  double M = 1.0;
  double tail_tol = kDefaultSumTailTol;
  std::uint64_t T = 1;  // derived: truncation_index(M, tail_tol)

  static SumParams make(double N, double M, double tail_tol = kDefaultSumTailTol);
};

struct IdentityReport {
  std::string label;
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_err = 0.0;
  double rel_err = 0.0;  // abs_err / max(1, |lhs|, |rhs|)
  std::pair<std::string, std::string> method_labels;

  static IdentityReport compare(std::string label, double lhs, double rhs,
                                std::pair<std::string, std::string> methods);
};

// Upper bound for sum_{n>T} r2(n) exp(-pi n / M), from grouping n into blocks
// of length M and bounding each block by the disk count.
double tail_majorant(double M, double T);
// Smallest T >= 1 with tail_majorant(M, T) < tail_tol.
std::uint64_t truncation_index(double M, double tail_tol);

double s_direct(const SumParams& p, const R2Table& r2);

// I(N, M): circle average of theta_M(sqrt(N) sin phi) theta_M(sqrt(N) cos phi).
double i_quadrature(double N, double M, const QuadratureSpec& spec = {});

// The I0 representation M e^{-pi N M} sum r2(n) I0(2 pi M sqrt(N n)) e^{-pi n M},
// restricted to the Gaussian window returned by dual_window.
double s_dual_i0(const SumParams& p, const R2Table& r2);
// Half-width w in sqrt(n) such that terms with |sqrt(n) - sqrt(N)| > w
// add up to less than tail_tol.
double dual_window(double N, double M, double tail_tol);
// s_dual_i0 summed over every n <= r2.T, without the window.
double s_dual_i0_full(const SumParams& p, const R2Table& r2);

// int_0^inf e^{-alpha x} J0(2 beta sqrt x) J0(2 gamma sqrt x) dx by quadrature,
// against (1/alpha) exp(-(beta-gamma)^2/alpha) i0_scaled(2 beta gamma / alpha).
double weber_integral(double alpha, double beta, double gamma,
                      const QuadratureSpec& spec = {});
double weber_closed_form(double alpha, double beta, double gamma);
IdentityReport weber_check(double alpha, double beta, double gamma,
                           const QuadratureSpec& spec = {});

struct JStarParts {
  double diagonal = 0.0;      // (N/pi) * sum_{n} ...
  double off_diagonal = 0.0;  // (N/pi) * sum_{n != m} ...
  std::uint64_t window = 0;   // n, m <= window

  double total() const { return diagonal + off_diagonal; }
};

// J*(N, M) = int_0^inf (S(x, M) - 1)^2 e^{-pi x / N} dx via its closed-form
// double sum over n, m >= 1.
JStarParts j_star_parts(double N, double M, const R2Table& r2,
                        double tail_tol = kDefaultSumTailTol, unsigned threads = 1);
double j_star(double N, double M, const R2Table& r2,
              double tail_tol = kDefaultSumTailTol, unsigned threads = 1);
// Window n, m <= ceil(100 M ln max(N, 3)) used by j_star_parts (before any
// widening needed to push the outer tail under tail_tol).
std::uint64_t j_star_window(double N, double M);
// r2 bound j_star_parts needs: the window, widened if the outer tail would
// exceed tail_tol.
std::uint64_t j_star_required_bound(double N, double M, double tail_tol = kDefaultSumTailTol);
// r2 bound for j_direct and j_star_integral.
std::uint64_t functional_required_bound(double M);

inline constexpr QuadratureSpec kFunctionalQuadrature{
    .max_doublings = 8, .target_abs_error = 1e-12, .target_rel_error = 1e-10};

// The same J* by quadrature of its defining integral, S evaluated by s_direct.
double j_star_integral(double N, double M, const R2Table& r2,
                       const QuadratureSpec& spec = kFunctionalQuadrature,
                       unsigned threads = 1);

// J(N, M) = int_0^N (S(x, M) - 1)^2 dx, composite Gauss-Legendre in u = sqrt(x)
// with panels narrow enough to resolve the fastest oscillation of the integrand.
double j_direct(double N, double M, const R2Table& r2,
                const QuadratureSpec& spec = kFunctionalQuadrature, unsigned threads = 1);

// M = 2 N ln N / H^2.
double coupled_cutoff(double N, double H);

// r2 table bound needed by s_direct and s_dual_i0 at these parameters.
std::uint64_t required_r2_bound(const SumParams& p);

}  // namespace s2gaps

#endif  // S2GAPS_BESSEL_SUM_HPP
