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

#include "s2gaps/moments.hpp"

#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "s2gaps/error.hpp"
#include "s2gaps/numerics.hpp"

namespace s2gaps {

namespace {

void check_range(const S2Table& table, double x, const char* who) {
  if (!std::isfinite(x) || x < 0.0) throw DomainError(fmt::format("{}: x must be >= 0", who));
  if (x > static_cast<double>(table.x_max())) {
    throw BoundsError(fmt::format("{}: x={} exceeds table bound {}", who, x, table.x_max()));
  }
}

void check_gamma(double gamma, const char* who) {
  if (!std::isfinite(gamma) || !(gamma > 0.0)) {
    throw DomainError(fmt::format("{}: gamma must be > 0", who));
  }
}

std::uint64_t floor_u64(double x) { return static_cast<std::uint64_t>(std::floor(x)); }

// Next member strictly above s, or BoundsError.
std::uint64_t member_after(const S2Table& table, std::uint64_t s, const char* who) {
  if (auto next = table.next_member(s + 1)) return *next;
  throw BoundsError(fmt::format("{}: member after {} lies beyond the table", who, s));
}

// int_0^len of the tent min(t, g - t)^{gamma-1}
double tent_integral(double g, double len, double gamma) {
  const double half = 0.5 * g;
  if (len <= half) return std::pow(len, gamma) / gamma;
  return (2.0 * std::pow(half, gamma) - std::pow(g - len, gamma)) / gamma;
}

}  // namespace

double delta_factor(double x, double gamma) { return gamma < 2.0 ? 1.0 : std::log(x); }

double gap_moment(const S2Table& table, double gamma, double x) {
  check_range(table, x, "gap_moment");
  if (!std::isfinite(gamma)) throw DomainError("gap_moment: gamma must be finite");
  // Gap sizes are small integers; count them and sum count * g^gamma.
  std::vector<std::uint64_t> histogram;
  std::uint64_t prev = 0;
  table.for_each_member(floor_u64(x), [&](std::uint64_t s) {
    if (prev != 0) {
      const std::uint64_t g = s - prev;
      if (g >= histogram.size()) histogram.resize(g + 1, 0);
      ++histogram[g];
    }
    prev = s;
  });
  NeumaierSum sum;
  for (std::size_t g = 1; g < histogram.size(); ++g) {
    if (histogram[g] != 0) {
      sum += static_cast<double>(histogram[g]) * std::pow(static_cast<double>(g), gamma);
    }
  }
  return sum.value();
}

double r_integral(const S2Table& table, double gamma, double x) {
  check_range(table, x, "r_integral");
  check_gamma(gamma, "r_integral");
  if (x <= 1.0) return (1.0 - std::pow(1.0 - x, gamma)) / gamma;
  NeumaierSum sum;
  sum += r_integral_left_edge(gamma);
  std::uint64_t prev = 0;
  table.for_each_member(floor_u64(x), [&](std::uint64_t s) {
    if (prev != 0) {
      const double half = 0.5 * static_cast<double>(s - prev);
      sum += 2.0 * std::pow(half, gamma) / gamma;
    }
    prev = s;
  });
  const double last = static_cast<double>(prev);
  if (x > last) {
    const std::uint64_t next = member_after(table, prev, "r_integral");
    sum += tent_integral(static_cast<double>(next) - last, x - last, gamma);
  }
  return sum.value();
}

MeasureReport exceptional_measure(const S2Table& table, double H, double x) {
  check_range(table, x, "exceptional_measure");
  if (!std::isfinite(H) || H < 0.0) throw DomainError("exceptional_measure: H must be >= 0");
  NeumaierSum mu;
  mu += std::fmax(0.0, std::fmin(x, 1.0 - H));
  if (x > 1.0) {
    std::uint64_t prev = 0;
    table.for_each_member(floor_u64(x), [&](std::uint64_t s) {
      if (prev != 0) {
        mu += std::fmax(0.0, static_cast<double>(s - prev) - 2.0 * H);
      }
      prev = s;
    });
    const double lo = static_cast<double>(prev) + H;
    if (x > lo) {
      // The interval [prev + H, next - H] is cut at x.
      double hi;
      if (const auto next = table.next_member(prev + 1)) {
        hi = static_cast<double>(*next) - H;
      } else if (static_cast<double>(table.x_max()) + 1.0 - H >= x) {
        hi = x;
      } else {
        throw BoundsError("exceptional_measure: member after x lies beyond the table");
      }
      mu += std::fmax(0.0, std::fmin(hi, x) - lo);
    }
  }
  MeasureReport r;
  r.H = H;
  r.x = x;
  r.mu = mu.value();
  r.normalized = x > 1.0 ? r.mu * H / (x * std::pow(std::log(x), 1.5)) : 0.0;
  return r;
}

MomentReport moment_report(const S2Table& table, double gamma, double x) {
  check_gamma(gamma, "moment_report");
  MomentReport r;
  r.gamma = gamma;
  r.x = x;
  r.moment_sum = gap_moment(table, gamma, x);
  const double lx = std::log(x);
  r.hooley_ratio = r.moment_sum / (x * std::pow(lx, 0.5 * (gamma - 1.0)));
  r.paper_ratio = r.moment_sum / (x * std::pow(lx, 1.5 * (gamma - 1.0)) * delta_factor(x, gamma));
  r.hooley_regime = gamma > 0.0 && gamma < 5.0 / 3.0;
  r.paper_regime = gamma > 1.0 && gamma <= 2.0;
  return r;
}

std::vector<MomentReport> moment_ratio_table(const S2Table& table,
                                             std::span<const double> gammas,
                                             std::span<const double> xs) {
  std::vector<MomentReport> out;
  out.reserve(gammas.size() * xs.size());
  for (double g : gammas) {
    for (double x : xs) out.push_back(moment_report(table, g, x));
  }
  return out;
}

std::vector<RichardsRecord> richards_scan(const S2Table& table, double x) {
  check_range(table, x, "richards_scan");
  const std::uint64_t limit = floor_u64(x);
  std::vector<RichardsRecord> out;
  std::uint64_t best = 0;
  const auto emit = [&](std::uint64_t lo, std::uint64_t g) {
    // R rises by one per step from lo up to floor(g/2).
    for (std::uint64_t r = best + 1; r <= g / 2 && lo + r <= limit; ++r) {
      const std::uint64_t n = lo + r;
      out.push_back({n, static_cast<double>(r),
                     static_cast<double>(r) / std::log(static_cast<double>(n))});
      best = r;
    }
  };
  std::uint64_t prev = 0;
  table.for_each_member(limit, [&](std::uint64_t s) {
    if (prev != 0) emit(prev, s - prev);
    prev = s;
  });
  if (prev != 0 && prev + best + 1 <= limit) {
    emit(prev, member_after(table, prev, "richards_scan") - prev);
  }
  return out;
}

std::vector<RealRecord> real_record_scan(const S2Table& table, double x) {
  check_range(table, x, "real_record_scan");
  std::vector<RealRecord> out;
  for (const GapRecord& g : record_gaps(table, floor_u64(x))) {
    const double y = 0.5 * static_cast<double>(g.s_lo + g.s_hi);
    const double R = 0.5 * static_cast<double>(g.gap);
    out.push_back({y, R, R / std::log(y)});
  }
  return out;
}

}  // namespace s2gaps
