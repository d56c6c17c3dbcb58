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

#include "s2gaps/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "s2gaps/bessel_sum.hpp"
#include "s2gaps/error.hpp"
#include "s2gaps/moments.hpp"
#include "s2gaps/sieve.hpp"
#include "s2gaps/verify.hpp"

namespace s2gaps::cli {

namespace {

// Room past the largest x a command touches, so the member after x is in the
// table. Gaps below 1e12 are far shorter than this.
constexpr std::uint64_t kTableMargin = 4096;

struct Context {
  RunConfig config;
  std::ostream& out;
  std::ostream& err;

  double sum_tol() const { return config.tolerance.value_or(kDefaultSumTailTol); }

  S2Table table(std::uint64_t needed) const {
    const std::uint64_t x_max = config.x_max.value_or(std::max(kDefaultXMax, needed));
    bool rebuilt = false;
    S2Table t = load_or_build_s2_table(x_max, config.cache_dir, config.threads, &rebuilt);
    if (config.cache_dir.empty()) {
      err << fmt::format("built table x_max={} (cache disabled)\n", x_max);
    } else {
      err << fmt::format("{} table x_max={} ({})\n", rebuilt ? "built" : "loaded", x_max,
                         s2_cache_path(config.cache_dir, x_max).string());
    }
    return t;
  }

  void emit(const Table& t) const { write_table(out, t, config.output_format); }
};

std::uint64_t needed_for(double x) {
  if (!std::isfinite(x) || x < 0.0) throw DomainError("x must be a finite value >= 0");
  return static_cast<std::uint64_t>(std::ceil(x)) + kTableMargin;
}

double largest(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

std::uint64_t r2_bound_for(std::uint64_t bound) {
  if (bound > kMaxR2Bound) {
    throw ResourceError(fmt::format("r2 table bound {} exceeds {}", bound, kMaxR2Bound));
  }
  return bound;
}

// --- subcommands -------------------------------------------------------------

struct SieveArgs {};

void run_sieve(const Context& ctx, const SieveArgs&) {
  const S2Table t = ctx.table(kDefaultXMax);
  ctx.emit(Table{{"x_max", "members"}, {{t.x_max(), t.count()}}});
}

struct GapsArgs {
  std::optional<double> x;
  bool all = false;
};

void run_gaps(const Context& ctx, const GapsArgs& a) {
  const S2Table t = ctx.table(a.x ? needed_for(*a.x) : kDefaultXMax);
  const auto x = static_cast<std::uint64_t>(a.x.value_or(static_cast<double>(t.x_max())));
  const auto list = a.all ? gaps_upto(t, x) : record_gaps(t, x);
  ctx.emit(gap_table(list));
}

struct RScanArgs {
  double x = 1e7;
  std::vector<double> y;
};

void run_r_scan(const Context& ctx, const RScanArgs& a) {
  if (!a.y.empty()) {
    const S2Table t = ctx.table(needed_for(largest(a.y)));
    Table out{{"y", "R", "chain_bound"}, {}};
    for (double y : a.y) {
      const double bound = y >= 0.0 ? 2.0 * std::numbers::sqrt2 * std::pow(y, 0.25) : 0.0;
      out.rows.push_back({y, distance_to_s2(t, y), bound});
    }
    ctx.emit(out);
    return;
  }
  const S2Table t = ctx.table(needed_for(a.x));
  const ChainBoundScan s = scan_chain_bound(t, static_cast<std::uint64_t>(a.x));
  ctx.emit(Table{{"limit", "max_R", "max_R_at", "max_ratio", "max_ratio_at", "violations"},
                 {{s.limit, s.max_R, s.max_R_at, s.max_ratio, s.max_ratio_at, s.violations}}});
}

struct DCheckArgs {
  std::vector<double> N;
  double x = 1e5;
};

void run_d_check(const Context& ctx, const DCheckArgs& a) {
  if (!a.N.empty()) {
    const S2Table t = ctx.table(needed_for(largest(a.N)));
    Table out{{"N", "d", "R", "lower_bound", "holds"}, {}};
    for (double N : a.N) {
      const double d = circle_lattice_distance(t, N);
      const double R = distance_to_s2(t, N);
      const double lb = circle_distance_lower_bound(R, N);
      out.rows.push_back({N, d, R, lb, d >= lb});
    }
    ctx.emit(out);
    return;
  }
  const S2Table t = ctx.table(needed_for(a.x));
  const CircleBoundScan s = scan_circle_bound(t, 3, static_cast<std::uint64_t>(a.x));
  ctx.emit(Table{{"lo", "hi", "checked", "violations", "min_slack", "min_slack_at"},
                 {{s.lo, s.hi, s.checked, s.violations, s.min_slack, s.min_slack_at}}});
}

struct BesselSumArgs {
  std::vector<double> N;
  std::vector<double> M;
};

void run_bessel_sum(const Context& ctx, const BesselSumArgs& a) {
  std::uint64_t bound = 1;
  for (double N : a.N) {
    for (double M : a.M) {
      bound = std::max(bound, required_r2_bound(SumParams::make(N, M, ctx.sum_tol())));
    }
  }
  const R2Table r2 = build_r2_table(r2_bound_for(bound));
  Table out{{"N", "M", "T", "s_direct", "m_times_i", "s_dual_i0"}, {}};
  for (double N : a.N) {
    for (double M : a.M) {
      const SumParams p = SumParams::make(N, M, ctx.sum_tol());
      out.rows.push_back({N, M, p.T, s_direct(p, r2), M * i_quadrature(N, M), s_dual_i0(p, r2)});
    }
  }
  ctx.emit(out);
}

struct VerifyArgs {
  std::string grid = "default";
  double theta_tol = kThetaIdentityTol;
  double sum_tol = kSumIdentityTol;
  double weber_tol = kWeberIdentityTol;
};

// The quick grid keeps the small-N corner of each sweep.
constexpr std::array<double, 4> kQuickSumN = {0.0, 1.0, 2.5, 10.0};
constexpr std::array<double, 2> kQuickSumM = {1.0, 4.0};

int run_verify(const Context& ctx, const VerifyArgs& a) {
  const bool quick = a.grid == "quick";
  const std::span<const double> Ns = quick ? std::span<const double>(kQuickSumN) : kSumGridN;
  const std::span<const double> Ms = quick ? std::span<const double>(kQuickSumM) : kSumGridM;
  const double tail = ctx.sum_tol();

  std::uint64_t bound = 1;
  for (double N : Ns) {
    for (double M : Ms) bound = std::max(bound, required_r2_bound(SumParams::make(N, M, tail)));
  }
  const R2Table r2 = build_r2_table(r2_bound_for(bound));

  std::vector<IdentityReport> rows;
  std::size_t failures = 0;
  const auto take = [&](std::vector<IdentityReport> batch, auto ok) {
    for (auto& r : batch) {
      if (!ok(r)) ++failures;
      rows.push_back(std::move(r));
    }
  };
  take(theta_identity_reports(quick ? 8 : kThetaGridPoints),
       [&](const IdentityReport& r) { return r.abs_err <= a.theta_tol; });
  take(bessel_identity_reports(r2, tail, Ns, Ms),
       [&](const IdentityReport& r) { return within_scaled(r, a.sum_tol); });
  take(dual_identity_reports(r2, tail, Ns, Ms),
       [&](const IdentityReport& r) { return within_scaled(r, a.sum_tol); });
  take(weber_reports(quick ? 3 : 10),
       [&](const IdentityReport& r) { return within_relative(r, a.weber_tol); });
  ctx.emit(identity_table(rows));
  if (failures != 0) {
    ctx.err << fmt::format("{} of {} identity checks out of tolerance\n", failures, rows.size());
    return kExitValidation;
  }
  return kExitOk;
}

struct WeberArgs {
  double alpha = 1.0;
  double beta = 0.5;
  double gamma = 0.5;
};

void run_weber(const Context& ctx, const WeberArgs& a) {
  const IdentityReport r = weber_check(a.alpha, a.beta, a.gamma);
  ctx.emit(identity_table(std::span(&r, 1)));
}

struct JFunctionalArgs {
  std::vector<double> N;
  std::optional<double> M;
  std::optional<double> H;
  bool integral = false;
};

void run_j_functional(const Context& ctx, const JFunctionalArgs& a) {
  if (a.M.has_value() == a.H.has_value()) throw DomainError("give exactly one of --M and --H");
  const auto cutoff = [&](double N) { return a.M ? *a.M : coupled_cutoff(N, *a.H); };
  std::uint64_t bound = 1;
  for (double N : a.N) {
    const double M = cutoff(N);
    bound = std::max({bound, j_star_required_bound(N, M, ctx.sum_tol()),
                      functional_required_bound(M)});
  }
  const R2Table r2 = build_r2_table(r2_bound_for(bound));
  const unsigned th = ctx.config.threads;

  Table out{{"N", "M", "j_direct", "j_star", "diagonal", "off_diagonal", "direct_over_star",
             "normalized"},
            {}};
  if (a.integral) out.columns.push_back("j_star_integral");
  for (double N : a.N) {
    const double M = cutoff(N);
    const double J = j_direct(N, M, r2, kFunctionalQuadrature, th);
    const JStarParts star = j_star_parts(N, M, r2, ctx.sum_tol(), th);
    std::vector<Cell> row{N,
                          M,
                          J,
                          star.total(),
                          star.diagonal,
                          star.off_diagonal,
                          J / star.total(),
                          J / (std::sqrt(N * M) * std::log(N))};
    if (a.integral) row.push_back(j_star_integral(N, M, r2, kFunctionalQuadrature, th));
    out.rows.push_back(std::move(row));
  }
  ctx.emit(out);
}

struct MomentsArgs {
  std::vector<double> gamma{2.0};
  std::vector<double> x{1e5, 1e6, 1e7};
};

void run_moments(const Context& ctx, const MomentsArgs& a) {
  const S2Table t = ctx.table(needed_for(largest(a.x)));
  const auto reports = moment_ratio_table(t, a.gamma, a.x);
  ctx.emit(ctx.config.output_format == Format::json ? moment_table_with_regimes(reports)
                                                    : moment_table(reports));
}

struct MeasureArgs {
  std::vector<double> H{1.0, 2.0, 4.0};
  std::vector<double> x{1e5, 1e6, 1e7};
};

void run_measure(const Context& ctx, const MeasureArgs& a) {
  const S2Table t = ctx.table(needed_for(largest(a.x)));
  std::vector<MeasureReport> reports;
  for (double H : a.H) {
    for (double x : a.x) reports.push_back(exceptional_measure(t, H, x));
  }
  ctx.emit(measure_table(reports));
}

struct RichardsArgs {
  double x = 1e7;
  bool real = false;
};

void run_richards(const Context& ctx, const RichardsArgs& a) {
  const S2Table t = ctx.table(needed_for(a.x));
  if (a.real) {
    ctx.emit(real_record_table(real_record_scan(t, a.x)));
  } else {
    ctx.emit(richards_table(richards_scan(t, a.x)));
  }
}

std::filesystem::path default_cache_dir() {
  if (const char* env = std::getenv(kCacheDirEnv); env != nullptr && *env != '\0') return env;
  return kDefaultCacheDir;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sums of two squares: gaps, moments, Bessel sums and identity checks.", "s2gaps"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig config;
  config.cache_dir = default_cache_dir();
  std::uint64_t x_max = 0;
  std::string format = "csv";
  std::string cache_dir = config.cache_dir.string();
  bool no_cache = false;
  double tolerance = kDefaultSumTailTol;

  app.add_option("--x-max", x_max,
                 fmt::format("sieve bound (default: max({}, what the command needs))",
                             kDefaultXMax))
      ->check(CLI::Range(std::uint64_t{8}, kMaxS2Bound))
      ->default_str("auto");
  app.add_option("--threads", config.threads, "worker threads")
      ->check(CLI::Range(1u, 1024u));
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"csv", "json", "tsv"}));
  app.add_option("--cache-dir", cache_dir,
                 fmt::format("bitset cache directory (env {})", kCacheDirEnv));
  app.add_flag("--no-cache", no_cache, "neither read nor write the bitset cache");
  app.add_option("--tolerance", tolerance, "truncation tolerance of the Bessel and J* sums")
      ->check(CLI::PositiveNumber);

  std::function<int(const Context&)> action;
  const auto bind = [&](CLI::App* sub, auto fn, auto& args) {
    sub->callback([&action, fn, &args] {
      action = [fn, &args](const Context& ctx) {
        if constexpr (std::is_same_v<decltype(fn(ctx, args)), int>) {
          return fn(ctx, args);
        } else {
          fn(ctx, args);
          return kExitOk;
        }
      };
    });
  };

  SieveArgs sieve_args;
  auto* sieve = app.add_subcommand("sieve", "build or refresh the bitset cache; print the member count");
  bind(sieve, run_sieve, sieve_args);

  GapsArgs gaps_args;
  auto* gaps_cmd = app.add_subcommand("gaps", "record gaps (or every gap with --all) up to x");
  gaps_cmd->add_option("--x", gaps_args.x, "upper bound on s_hi (default: x_max)");
  gaps_cmd->add_flag("--all", gaps_args.all, "list every gap, not only records");
  bind(gaps_cmd, run_gaps, gaps_args);

  RScanArgs r_args;
  auto* r_scan = app.add_subcommand("r-scan", "R(n) against 2 sqrt(2) n^(1/4) for n <= x, or R at given points");
  r_scan->add_option("--x", r_args.x, "scan limit")->check(CLI::PositiveNumber);
  r_scan->add_option("--y", r_args.y, "evaluate R(y) at these points instead of scanning")->delimiter(',');
  bind(r_scan, run_r_scan, r_args);

  DCheckArgs d_args;
  auto* d_check = app.add_subcommand("d-check", "d(N) >= 2 R(N) / (5 sqrt N) over 3 <= N <= x, or at given N");
  d_check->add_option("--N", d_args.N, "check these N instead of scanning")->delimiter(',');
  d_check->add_option("--x", d_args.x, "scan limit")->check(CLI::Range(3.0, 1e12));
  bind(d_check, run_d_check, d_args);

  BesselSumArgs b_args;
  auto* bessel = app.add_subcommand("bessel-sum", "S(N, M) by the direct sum, the theta integral and the I0 form");
  bessel->add_option("--N", b_args.N, "N values")->delimiter(',')->required()->check(CLI::NonNegativeNumber);
  bessel->add_option("--M", b_args.M, "M values")->delimiter(',')->required()->check(CLI::PositiveNumber);
  bind(bessel, run_bessel_sum, b_args);

  VerifyArgs v_args;
  auto* verify = app.add_subcommand("verify-identities", "theta, Bessel-sum, I0 and Weber identity checks");
  verify->add_option("--grid", v_args.grid, "parameter grid")
      ->check(CLI::IsMember({"default", "quick"}));
  verify->add_option("--theta-tol", v_args.theta_tol, "max abs error, theta transformation")
      ->check(CLI::PositiveNumber);
  verify->add_option("--sum-tol", v_args.sum_tol, "max abs error / max(1, |S|), Bessel sums")
      ->check(CLI::PositiveNumber);
  verify->add_option("--weber-tol", v_args.weber_tol, "max relative error, Weber integral")
      ->check(CLI::PositiveNumber);
  bind(verify, run_verify, v_args);

  WeberArgs w_args;
  auto* weber = app.add_subcommand("weber", "int e^(-a x) J0(2 b sqrt x) J0(2 g sqrt x) dx against its closed form");
  weber->add_option("--alpha", w_args.alpha)->check(CLI::PositiveNumber);
  weber->add_option("--beta", w_args.beta)->check(CLI::NonNegativeNumber);
  weber->add_option("--gamma", w_args.gamma)->check(CLI::NonNegativeNumber);
  bind(weber, run_weber, w_args);

  JFunctionalArgs j_args;
  auto* jfun = app.add_subcommand("j-functional", "J(N, M) by quadrature against the closed-form J*(N, M)");
  jfun->add_option("--N", j_args.N, "N values")->delimiter(',')->required()->check(CLI::PositiveNumber);
  auto* j_m = jfun->add_option("--M", j_args.M, "cutoff M")->check(CLI::PositiveNumber);
  auto* j_h = jfun->add_option("--H", j_args.H, "couple M = 2 N ln N / H^2")
                  ->check(CLI::PositiveNumber);
  j_m->excludes(j_h);
  jfun->add_flag("--integral", j_args.integral, "also integrate J* numerically");
  bind(jfun, run_j_functional, j_args);

  MomentsArgs m_args;
  auto* moments = app.add_subcommand("moments", "gap moments and both normalized ratios");
  moments->add_option("--gamma", m_args.gamma, "exponents")->delimiter(',')->check(CLI::PositiveNumber);
  moments->add_option("--x", m_args.x, "bounds")->delimiter(',')->check(CLI::Range(3.0, 1e12));
  bind(moments, run_moments, m_args);

  MeasureArgs mu_args;
  auto* measure = app.add_subcommand("measure", "measure of {y <= x : R(y) >= H}");
  measure->add_option("--H", mu_args.H, "thresholds")->delimiter(',')->check(CLI::PositiveNumber);
  measure->add_option("--x", mu_args.x, "bounds")->delimiter(',')->check(CLI::Range(3.0, 1e12));
  bind(measure, run_measure, mu_args);

  RichardsArgs rich_args;
  auto* richards = app.add_subcommand("richards", "integers n <= x where R(n) sets a record");
  richards->add_option("--x", rich_args.x, "scan limit")->check(CLI::Range(3.0, 1e12));
  richards->add_flag("--real", rich_args.real, "records of R over real y (gap midpoints)");
  bind(richards, run_richards, rich_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  if (app.count("--x-max") != 0) config.x_max = x_max;
  config.output_format = parse_format(format);
  config.cache_dir = no_cache ? std::filesystem::path{} : std::filesystem::path{cache_dir};
  if (app.count("--tolerance") != 0) config.tolerance = tolerance;

  try {
    return action(Context{config, out, err});
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const BoundsError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace s2gaps::cli
