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

#include "s2gaps/sieve.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <new>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "s2gaps/error.hpp"
#include "s2gaps/parallel.hpp"

namespace s2gaps {

namespace {

constexpr std::array<char, 8> kCacheMagic = {'S', '2', 'G', 'B', 'I', 'T', '0', '1'};

std::uint64_t ceil_sqrt(std::uint64_t n) noexcept {
  const std::uint64_t r = isqrt(n);
  return r * r < n ? r + 1 : r;
}

void mark_segment(std::vector<std::uint64_t>& words, std::uint64_t lo,
                  std::uint64_t hi) {
  // hi is exclusive
  for (std::uint64_t a = 0; 2 * a * a < hi; ++a) {
    const std::uint64_t aa = a * a;
    std::uint64_t b = std::max(a, lo > aa ? ceil_sqrt(lo - aa) : std::uint64_t{0});
    for (std::uint64_t n = aa + b * b; n < hi; ++b, n = aa + b * b) {
      words[n >> 6] |= std::uint64_t{1} << (n & 63);
    }
  }
}

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> bytes{};
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(bytes.data(), bytes.size());
}

bool get_u64(std::istream& in, std::uint64_t& v) {
  std::array<unsigned char, 8> bytes{};
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) return false;
  v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | bytes[i];
  return true;
}

}  // namespace

std::uint64_t isqrt(std::uint64_t n) noexcept {
  // r stays below 2^32 so r * r cannot wrap.
  auto r = std::min<std::uint64_t>(static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n))),
                                   0xFFFFFFFFull);
  while (r * r > n) --r;
  while (r < 0xFFFFFFFFull && (r + 1) * (r + 1) <= n) ++r;
  return r;
}

S2Table::S2Table(std::uint64_t x_max, std::vector<std::uint64_t> words)
    : x_max_(x_max), words_(std::move(words)) {
  if (words_.size() != x_max_ / 64 + 1) {
    throw DomainError("S2Table: word count does not match x_max");
  }
}

std::optional<std::uint64_t> S2Table::prev_member(std::uint64_t n) const noexcept {
  if (words_.empty()) return std::nullopt;
  n = std::min(n, x_max_);
  std::uint64_t w = n >> 6;
  const unsigned keep = static_cast<unsigned>(n & 63) + 1;
  std::uint64_t bits = words_[w];
  if (keep < 64) bits &= (std::uint64_t{1} << keep) - 1;
  while (true) {
    if (bits) return (w << 6) + 63 - static_cast<std::uint64_t>(std::countl_zero(bits));
    if (w == 0) return std::nullopt;
    bits = words_[--w];
  }
}

std::optional<std::uint64_t> S2Table::next_member(std::uint64_t n) const noexcept {
  if (n > x_max_) return std::nullopt;
  std::uint64_t w = n >> 6;
  std::uint64_t bits = words_[w] & (~std::uint64_t{0} << (n & 63));
  while (true) {
    if (bits) return (w << 6) + static_cast<std::uint64_t>(std::countr_zero(bits));
    if (++w >= words_.size()) return std::nullopt;
    bits = words_[w];
  }
}

std::uint64_t S2Table::count() const noexcept {
  std::uint64_t total = 0;
  for (std::uint64_t w : words_) total += static_cast<std::uint64_t>(std::popcount(w));
  return total;
}

std::vector<std::uint64_t> S2Table::elements() const {
  std::vector<std::uint64_t> out;
  out.reserve(count());
  for_each_member(x_max_, [&](std::uint64_t s) { out.push_back(s); });
  return out;
}

S2Table build_s2_table(std::uint64_t x_max, std::uint64_t segment_size,
                       unsigned threads) {
  if (x_max < 8) throw DomainError("build_s2_table: x_max must be >= 8");
  if (x_max > kMaxS2Bound) {
    throw ResourceError(fmt::format("build_s2_table: x_max {} exceeds the {} bit limit",
                                    x_max, kMaxS2Bound));
  }
  if (segment_size == 0) throw DomainError("build_s2_table: segment_size must be > 0");
  segment_size = (segment_size + 63) / 64 * 64;

  std::vector<std::uint64_t> words;
  try {
    words.assign(x_max / 64 + 1, 0);
  } catch (const std::bad_alloc&) {
    throw ResourceError("build_s2_table: cannot allocate the bitset");
  }
  const std::uint64_t end = x_max + 1;
  const std::uint64_t segments = (end + segment_size - 1) / segment_size;
  // Segment boundaries are multiples of 64, so no two segments share a word.
  parallel_for(segments, threads, [&](std::size_t i) {
    const std::uint64_t lo = i * segment_size;
    const std::uint64_t hi = std::min(end, lo + segment_size);
    mark_segment(words, lo, hi);
  });
  words[0] &= ~std::uint64_t{1};
  return S2Table(x_max, std::move(words));
}

bool is_s2_by_factorization(std::uint64_t n) {
  if (n == 0) throw DomainError("is_s2_by_factorization: n must be >= 1");
  while ((n & 1) == 0) n >>= 1;
  for (std::uint64_t p = 3; p <= n / p; p += 2) {
    if (n % p != 0) continue;
    int exponent = 0;
    while (n % p == 0) {
      n /= p;
      ++exponent;
    }
    if (p % 4 == 3 && exponent % 2 == 1) return false;
  }
  return n % 4 != 3;
}

R2Table build_r2_table(std::uint64_t T) {
  if (T > kMaxR2Bound) {
    throw ResourceError(fmt::format("build_r2_table: T {} exceeds {}", T, kMaxR2Bound));
  }
  R2Table table;
  table.T = T;
  try {
    table.counts.assign(T + 1, 0);
  } catch (const std::bad_alloc&) {
    throw ResourceError("build_r2_table: cannot allocate the table");
  }
  // Quadrant points (a, b >= 0) stand for their sign images.
  for (std::uint64_t a = 0; a * a <= T; ++a) {
    const std::uint32_t wa = a == 0 ? 1 : 2;
    for (std::uint64_t b = 0; a * a + b * b <= T; ++b) {
      table.counts[a * a + b * b] += wa * (b == 0 ? 1 : 2);
    }
  }
  return table;
}

std::uint64_t r2_square_sum(const R2Table& table, std::uint64_t x) {
  if (x > table.T) {
    throw BoundsError(fmt::format("r2_square_sum: x={} exceeds table bound {}", x, table.T));
  }
  std::uint64_t total = 0;
  for (std::uint64_t n = 1; n < x; ++n) {
    const std::uint64_t r = table.counts[n];
    total += r * r;
  }
  return total;
}

double distance_to_s2(const S2Table& table, double y) {
  if (!std::isfinite(y) || y < 0.0) throw DomainError("distance_to_s2: y must be finite and >= 0");
  if (y < 1.0) return 1.0 - y;
  const double xmax = static_cast<double>(table.x_max());
  if (y > xmax) {
    throw BoundsError(fmt::format("distance_to_s2: y={} beyond table bound {}", y, table.x_max()));
  }
  const auto floor_y = static_cast<std::uint64_t>(std::floor(y));
  const double below = y - static_cast<double>(*table.prev_member(floor_y));
  if (below == 0.0) return 0.0;
  if (const auto next = table.next_member(static_cast<std::uint64_t>(std::ceil(y)))) {
    return std::min(below, static_cast<double>(*next) - y);
  }
  if (below <= xmax + 1.0 - y) return below;
  throw BoundsError(fmt::format("distance_to_s2: no member above y={} within the table", y));
}

double circle_lattice_distance(const S2Table& table, double N) {
  if (!std::isfinite(N) || !(N > 0.0)) throw DomainError("circle_lattice_distance: N must be > 0");
  const double xmax = static_cast<double>(table.x_max());
  if (N > xmax) {
    throw BoundsError(fmt::format("circle_lattice_distance: N={} beyond table bound {}", N,
                                  table.x_max()));
  }
  const double root = std::sqrt(N);
  // Lattice radius 0 counts here even though 0 is not in S.
  const auto prev = table.prev_member(static_cast<std::uint64_t>(std::floor(N)));
  const double p = prev ? static_cast<double>(*prev) : 0.0;
  const double below = (N - p) / (root + std::sqrt(p));
  if (below == 0.0) return 0.0;
  if (const auto next = table.next_member(static_cast<std::uint64_t>(std::ceil(N)))) {
    const double q = static_cast<double>(*next);
    return std::min(below, (q - N) / (std::sqrt(q) + root));
  }
  const double reach = (xmax + 1.0 - N) / (std::sqrt(xmax + 1.0) + root);
  if (below <= reach) return below;
  throw BoundsError(
      fmt::format("circle_lattice_distance: no lattice radius above N={} within the table", N));
}

std::vector<GapRecord> gaps_upto(const S2Table& table, std::uint64_t x) {
  std::vector<GapRecord> out;
  std::uint64_t prev = 0;
  table.for_each_member(x, [&](std::uint64_t s) {
    if (prev != 0) out.push_back({prev, s, s - prev});
    prev = s;
  });
  return out;
}

std::vector<GapRecord> gaps(const S2Table& table) { return gaps_upto(table, table.x_max()); }

std::vector<GapRecord> record_gaps(const S2Table& table, std::uint64_t x) {
  std::vector<GapRecord> out;
  std::uint64_t prev = 0;
  std::uint64_t best = 0;
  table.for_each_member(x, [&](std::uint64_t s) {
    if (prev != 0 && s - prev > best) {
      best = s - prev;
      out.push_back({prev, s, best});
    }
    prev = s;
  });
  return out;
}

SquareChain two_square_chain(std::uint64_t n) {
  SquareChain c;
  c.a = isqrt(n);
  const std::uint64_t f = n - c.a * c.a;
  c.b = isqrt(f);
  c.rest = f - c.b * c.b;
  return c;
}

double two_square_chain_bound(std::uint64_t n) {
  return 2.0 * std::sqrt(2.0) * std::pow(static_cast<double>(n), 0.25);
}

ChainBoundScan scan_chain_bound(const S2Table& table, std::uint64_t limit) {
  ChainBoundScan scan;
  scan.limit = limit;
  for (std::uint64_t n = 1; n <= limit; ++n) {
    const double r = distance_to_s2(table, static_cast<double>(n));
    const double ratio = r / two_square_chain_bound(n);
    if (r > scan.max_R) {
      scan.max_R = r;
      scan.max_R_at = n;
    }
    if (ratio > scan.max_ratio) {
      scan.max_ratio = ratio;
      scan.max_ratio_at = n;
    }
    if (ratio > 1.0) ++scan.violations;
  }
  return scan;
}

double circle_distance_lower_bound(double R, double N) { return 2.0 * R / (5.0 * std::sqrt(N)); }

CircleBoundScan scan_circle_bound(const S2Table& table, std::uint64_t lo, std::uint64_t hi) {
  CircleBoundScan scan;
  scan.lo = lo;
  scan.hi = hi;
  scan.min_slack = std::numeric_limits<double>::infinity();
  for (std::uint64_t n = std::max<std::uint64_t>(lo, 1); n <= hi; ++n) {
    const double N = static_cast<double>(n);
    const double slack = circle_lattice_distance(table, N) -
                         circle_distance_lower_bound(distance_to_s2(table, N), N);
    ++scan.checked;
    if (slack < 0.0) ++scan.violations;
    if (slack < scan.min_slack) {
      scan.min_slack = slack;
      scan.min_slack_at = n;
    }
  }
  return scan;
}

void save_s2_table(const S2Table& table, const std::filesystem::path& path) {
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("save_s2_table: cannot open " + tmp.string());
    out.write(kCacheMagic.data(), kCacheMagic.size());
    put_u64(out, table.x_max());
    for (std::uint64_t w : table.words()) put_u64(out, w);
    if (!out) throw std::runtime_error("save_s2_table: write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::optional<S2Table> load_s2_table(const std::filesystem::path& path,
                                     std::uint64_t x_max) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kCacheMagic) return std::nullopt;
  std::uint64_t stored = 0;
  if (!get_u64(in, stored) || stored != x_max) return std::nullopt;
  std::vector<std::uint64_t> words(x_max / 64 + 1);
  for (auto& w : words) {
    if (!get_u64(in, w)) return std::nullopt;
  }
  if (in.peek() != std::char_traits<char>::eof()) return std::nullopt;
  return S2Table(x_max, std::move(words));
}

std::filesystem::path s2_cache_path(const std::filesystem::path& dir, std::uint64_t x_max) {
  return dir / fmt::format("s2_{}.bits", x_max);
}

S2Table load_or_build_s2_table(std::uint64_t x_max, const std::filesystem::path& dir,
                               unsigned threads, bool* rebuilt) {
  if (!dir.empty()) {
    if (auto cached = load_s2_table(s2_cache_path(dir, x_max), x_max)) {
      if (rebuilt) *rebuilt = false;
      return std::move(*cached);
    }
  }
  S2Table table = build_s2_table(x_max, kDefaultSegmentBits, threads);
  if (!dir.empty()) {
    std::filesystem::create_directories(dir);
    save_s2_table(table, s2_cache_path(dir, x_max));
  }
  if (rebuilt) *rebuilt = true;
  return table;
}

void write_gap_csv(std::ostream& out, std::span<const GapRecord> gaps) {
  out << "s_lo,s_hi,gap\n";
  for (const auto& g : gaps) out << g.s_lo << ',' << g.s_hi << ',' << g.gap << '\n';
}

std::vector<GapRecord> read_gap_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "s_lo,s_hi,gap") {
    throw std::runtime_error("read_gap_csv: missing header s_lo,s_hi,gap");
  }
  std::vector<GapRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    GapRecord g;
    char c1 = 0;
    char c2 = 0;
    if (!(row >> g.s_lo >> c1 >> g.s_hi >> c2 >> g.gap) || c1 != ',' || c2 != ',') {
      throw std::runtime_error("read_gap_csv: malformed row: " + line);
    }
    out.push_back(g);
  }
  return out;
}

}  // namespace s2gaps
