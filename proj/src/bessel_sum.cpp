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

#include "s2gaps/bessel_sum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <fmt/format.h>

#include "s2gaps/error.hpp"
#include "s2gaps/parallel.hpp"

namespace s2gaps {

namespace {

constexpr double kPi = std::numbers::pi;
const double kBlockRatio = std::exp(-kPi);

// Past this exponent exp(-t) is zero in double precision.
constexpr double kExpCutoff = 745.0;

constexpr std::size_t kReductionChunks = 64;

// Truncation of S inside the functional integrands.
constexpr double kFunctionalTailTol = 1e-15;

void require_positive(double v, const char* what) {
  if (!std::isfinite(v) || !(v > 0.0)) throw DomainError(fmt::format("{} must be > 0", what));
}

void require_table(const R2Table& r2, std::uint64_t needed, const char* who) {
  if (r2.T < needed) {
    throw BoundsError(fmt::format("{}: r2 table bound {} < required {}", who, r2.T, needed));
  }
}

double log_tail_majorant(double M, double T) {
  const double q = kBlockRatio;
  return std::log(kR2DiskConstant) - kPi * T / M +
         std::log(T / (1.0 - q) + M / ((1.0 - q) * (1.0 - q)));
}

// S(u^2, M) - 1 = sum_{1<=n<=T} r2(n) e^{-pi n/M} J0(2 pi sqrt(n) u)
struct BesselTerms {
  std::vector<double> freq;
  std::vector<double> weight;

  BesselTerms(const R2Table& r2, double M, std::uint64_t T) {
    for (std::uint64_t n = 1; n <= T; ++n) {
      if (r2.counts[n] == 0) continue;
      freq.push_back(2.0 * kPi * std::sqrt(static_cast<double>(n)));
      weight.push_back(r2.counts[n] * std::exp(-kPi * static_cast<double>(n) / M));
    }
  }

  double operator()(double u) const {
    NeumaierSum s;
    for (std::size_t i = 0; i < freq.size(); ++i) s += weight[i] * j0(freq[i] * u);
    return s.value();
  }
  double max_freq() const { return freq.empty() ? 0.0 : freq.back(); }
};

// Composite Gauss-Legendre over [a, b] whose panels are reduced in a fixed
// chunk order regardless of the thread count.
template <class F>
double chunked_gauss(const F& f, double a, double b, std::size_t panels, unsigned threads) {
  const std::size_t chunks = std::min(kReductionChunks, panels);
  std::vector<double> partial(chunks, 0.0);
  const double h = (b - a) / static_cast<double>(panels);
  parallel_for(chunks, threads, [&](std::size_t c) {
    const std::size_t first = panels * c / chunks;
    const std::size_t last = panels * (c + 1) / chunks;
    partial[c] = composite_gauss(f, a + h * static_cast<double>(first),
                                 a + h * static_cast<double>(last), last - first);
  });
  return compensated_sum(partial);
}

template <class F>
double gauss_doubling(const F& f, double a, double b, std::size_t panels,
                      const QuadratureSpec& spec, unsigned threads, const char* who) {
  spec.validate();
  panels = std::max(panels, spec.initial_nodes);
  double estimate = chunked_gauss(f, a, b, panels, threads);
  double previous = estimate;
  int streak = 0;
  for (int round = 0; round < spec.max_doublings; ++round) {
    panels *= 2;
    previous = estimate;
    estimate = chunked_gauss(f, a, b, panels, threads);
    streak = spec.converged(previous, estimate) ? streak + 1 : 0;
    if (streak == 2) return estimate;
  }
  throw ConvergenceError(fmt::format("{}: no convergence", who), previous, estimate);
}

// Quarter of the shortest oscillation period of (S - 1)^2 in u.
std::size_t panels_for(double length, const BesselTerms& terms) {
  const double per_unit = 2.0 * terms.max_freq() / (kPi / 2.0);
  return static_cast<std::size_t>(std::ceil(length * std::max(per_unit, 1.0)));
}

}  // namespace

SumParams SumParams::make(double N, double M, double tail_tol) {
  if (!std::isfinite(N) || N < 0.0) throw DomainError("SumParams: N must be >= 0");
  require_positive(M, "SumParams: M");
  require_positive(tail_tol, "SumParams: tail_tol");
  return SumParams{N, M, tail_tol, truncation_index(M, tail_tol)};
}

IdentityReport IdentityReport::compare(std::string label, double lhs, double rhs,
                                       std::pair<std::string, std::string> methods) {
  IdentityReport r;
  r.label = std::move(label);
  r.lhs = lhs;
  r.rhs = rhs;
  r.abs_err = std::fabs(lhs - rhs);
  r.rel_err = r.abs_err / std::max({1.0, std::fabs(lhs), std::fabs(rhs)});
  r.method_labels = std::move(methods);
  return r;
}

double tail_majorant(double M, double T) {
  require_positive(M, "tail_majorant: M");
  return std::exp(log_tail_majorant(M, T));
}

std::uint64_t truncation_index(double M, double tail_tol) {
  require_positive(M, "truncation_index: M");
  require_positive(tail_tol, "truncation_index: tail_tol");
  const double target = std::log(tail_tol);
  const auto ok = [&](std::uint64_t T) {
    return log_tail_majorant(M, static_cast<double>(T)) < target;
  };
  if (ok(1)) return 1;
  std::uint64_t lo = 1;  // fails
  std::uint64_t hi = 2;
  while (!ok(hi)) {
    lo = hi;
    hi *= 2;
  }
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    (ok(mid) ? hi : lo) = mid;
  }
  return hi;
}

double s_direct(const SumParams& p, const R2Table& r2) {
  require_table(r2, p.T, "s_direct");
  const double root = std::sqrt(p.N);
  NeumaierSum sum;
  sum += 1.0;
  for (std::uint64_t n = 1; n <= p.T; ++n) {
    const std::uint32_t r = r2.counts[n];
    if (r == 0) continue;
    const double nd = static_cast<double>(n);
    sum += r * j0(2.0 * kPi * root * std::sqrt(nd)) * std::exp(-kPi * nd / p.M);
  }
  return sum.value();
}

double i_quadrature(double N, double M, const QuadratureSpec& spec) {
  if (!std::isfinite(N) || N < 0.0) throw DomainError("i_quadrature: N must be >= 0");
  require_positive(M, "i_quadrature: M");
  const double root = std::sqrt(N);
  return periodic_integral(
      [&](double phi) {
        return theta_direct({M, root * std::sin(phi)}) * theta_direct({M, root * std::cos(phi)});
      },
      spec);
}

double dual_window(double N, double M, double tail_tol) {
  require_positive(M, "dual_window: M");
  require_positive(tail_tol, "dual_window: tail_tol");
  const double root = std::sqrt(N);
  // Lattice points with sqrt(n) in a unit shell at distance >= w + k from
  // sqrt(N), on either side, number at most 2 (1 + C (sqrt N + w + k + 1)^2).
  const auto outside = [&](double w) {
    double total = 0.0;
    for (int k = 0; k < 100000; ++k) {
      const double r = root + w + k + 1.0;
      const double term = 2.0 * (1.0 + kR2DiskConstant * r * r) *
                          std::exp(-kPi * M * (w + k) * (w + k));
      total += term;
      if (term < 1e-30 * total || term == 0.0) break;
    }
    return M * total;
  };
  double w = 0.0;
  while (!(outside(w) < tail_tol)) w += 0.125;
  return w;
}

std::uint64_t required_r2_bound(const SumParams& p) {
  const double reach = std::sqrt(p.N) + dual_window(p.N, p.M, p.tail_tol);
  return std::max<std::uint64_t>(p.T, static_cast<std::uint64_t>(std::floor(reach * reach)));
}

namespace {

double dual_term(double N, double M, std::uint64_t n, std::uint32_t r) {
  const double nd = static_cast<double>(n);
  const double sn = std::sqrt(nd);
  const double root = std::sqrt(N);
  const double diff = (nd - N) / (sn + root == 0.0 ? 1.0 : sn + root);
  return r * std::exp(-kPi * M * diff * diff) * i0_scaled(2.0 * kPi * M * root * sn);
}

}  // namespace

double s_dual_i0(const SumParams& p, const R2Table& r2) {
  const double w = dual_window(p.N, p.M, p.tail_tol);
  const double root = std::sqrt(p.N);
  const double lo_r = std::max(0.0, root - w);
  const auto lo = static_cast<std::uint64_t>(std::ceil(lo_r * lo_r));
  const auto hi = static_cast<std::uint64_t>(std::floor((root + w) * (root + w)));
  require_table(r2, hi, "s_dual_i0");
  NeumaierSum sum;
  for (std::uint64_t n = lo; n <= hi; ++n) {
    if (r2.counts[n] != 0) sum += dual_term(p.N, p.M, n, r2.counts[n]);
  }
  return p.M * sum.value();
}

double s_dual_i0_full(const SumParams& p, const R2Table& r2) {
  NeumaierSum sum;
  for (std::uint64_t n = 0; n <= r2.T; ++n) {
    if (r2.counts[n] != 0) sum += dual_term(p.N, p.M, n, r2.counts[n]);
  }
  return p.M * sum.value();
}

double weber_integral(double alpha, double beta, double gamma, const QuadratureSpec& spec) {
  require_positive(alpha, "weber: alpha");
  if (!(beta >= 0.0) || !(gamma >= 0.0)) throw DomainError("weber: beta, gamma must be >= 0");
  // x = t^2; the integrand is below 1e-17 past alpha t^2 = 40.
  const double upper = std::sqrt(40.0 / alpha);
  return integrate(
      [&](double t) {
        return 2.0 * t * std::exp(-alpha * t * t) * j0(2.0 * beta * t) * j0(2.0 * gamma * t);
      },
      0.0, upper, spec);
}

double weber_closed_form(double alpha, double beta, double gamma) {
  require_positive(alpha, "weber: alpha");
  const double d = beta - gamma;
  return std::exp(-d * d / alpha) * i0_scaled(2.0 * beta * gamma / alpha) / alpha;
}

IdentityReport weber_check(double alpha, double beta, double gamma,
                           const QuadratureSpec& spec) {
  return IdentityReport::compare(fmt::format("weber(a={},b={},g={})", alpha, beta, gamma),
                                 weber_integral(alpha, beta, gamma, spec),
                                 weber_closed_form(alpha, beta, gamma),
                                 {"gauss-legendre", "closed-form-i0"});
}

std::uint64_t j_star_window(double N, double M) {
  return static_cast<std::uint64_t>(std::ceil(100.0 * M * std::log(std::max(N, 3.0))));
}

std::uint64_t j_star_required_bound(double N, double M, double tail_tol) {
  // Outer tail (n or m beyond the window) is at most
  // 2 (N/pi) (sum_{n>=1} r2 e^{-pi n/M}) (sum_{n>K} r2 e^{-pi n/M}).
  const double head = tail_majorant(M, 0.0);
  const std::uint64_t widened = truncation_index(M, tail_tol * kPi / (2.0 * N * head));
  return std::max(j_star_window(N, M), widened);
}

std::uint64_t functional_required_bound(double M) { return truncation_index(M, kFunctionalTailTol); }

JStarParts j_star_parts(double N, double M, const R2Table& r2, double tail_tol,
                        unsigned threads) {
  require_positive(N, "j_star: N");
  require_positive(M, "j_star: M");
  require_positive(tail_tol, "j_star: tail_tol");
  const std::uint64_t K = j_star_required_bound(N, M, tail_tol);
  require_table(r2, K, "j_star");

  std::vector<double> root;
  std::vector<double> weight;
  std::vector<double> nval;
  for (std::uint64_t n = 1; n <= K; ++n) {
    if (r2.counts[n] == 0) continue;
    const double nd = static_cast<double>(n);
    nval.push_back(nd);
    root.push_back(std::sqrt(nd));
    weight.push_back(r2.counts[n] * std::exp(-kPi * nd / M));
  }
  const std::size_t count = root.size();
  const std::size_t chunks = std::min(kReductionChunks, std::max<std::size_t>(count, 1));
  std::vector<double> diag(chunks, 0.0);
  std::vector<double> off(chunks, 0.0);
  parallel_for(chunks, threads, [&](std::size_t c) {
    NeumaierSum d;
    NeumaierSum o;
    for (std::size_t i = count * c / chunks; i < count * (c + 1) / chunks; ++i) {
      d += weight[i] * weight[i] * i0_scaled(2.0 * kPi * N * nval[i]);
      for (std::size_t j = i + 1; j < count; ++j) {
        const double gap = root[j] - root[i];
        const double decay = kPi * N * gap * gap;
        if (decay > kExpCutoff) break;
        o += 2.0 * weight[i] * weight[j] * std::exp(-decay) *
             i0_scaled(2.0 * kPi * N * root[i] * root[j]);
      }
    }
    diag[c] = d.value();
    off[c] = o.value();
  });
  JStarParts parts;
  parts.diagonal = N / kPi * compensated_sum(diag);
  parts.off_diagonal = N / kPi * compensated_sum(off);
  parts.window = K;
  return parts;
}

double j_star(double N, double M, const R2Table& r2, double tail_tol, unsigned threads) {
  return j_star_parts(N, M, r2, tail_tol, threads).total();
}

double j_star_integral(double N, double M, const R2Table& r2, const QuadratureSpec& spec,
                       unsigned threads) {
  require_positive(N, "j_star_integral: N");
  require_positive(M, "j_star_integral: M");
  const std::uint64_t T = functional_required_bound(M);
  require_table(r2, T, "j_star_integral");
  const BesselTerms terms(r2, M, T);
  // (S - 1)^2 <= head^2; cut where head^2 e^{-pi x/N} drops below 1e-17.
  const double head = tail_majorant(M, 0.0);
  const double x_end = N / kPi * (std::log(std::max(1.0, head * head)) + 40.0);
  const double u_end = std::sqrt(x_end);
  const auto integrand = [&](double u) {
    const double s = terms(u);
    return 2.0 * u * s * s * std::exp(-kPi * u * u / N);
  };
  return gauss_doubling(integrand, 0.0, u_end, panels_for(u_end, terms), spec, threads,
                        "j_star_integral");
}

double j_direct(double N, double M, const R2Table& r2, const QuadratureSpec& spec,
                unsigned threads) {
  if (!std::isfinite(N) || N < 0.0) throw DomainError("j_direct: N must be >= 0");
  require_positive(M, "j_direct: M");
  if (N == 0.0) return 0.0;
  const std::uint64_t T = functional_required_bound(M);
  require_table(r2, T, "j_direct");
  const BesselTerms terms(r2, M, T);
  const double u_end = std::sqrt(N);
  const auto integrand = [&](double u) {
    const double s = terms(u);
    return 2.0 * u * s * s;
  };
  return gauss_doubling(integrand, 0.0, u_end, panels_for(u_end, terms), spec, threads,
                        "j_direct");
}

double coupled_cutoff(double N, double H) {
  require_positive(H, "coupled_cutoff: H");
  return 2.0 * N * std::log(N) / (H * H);
}

}  // namespace s2gaps
