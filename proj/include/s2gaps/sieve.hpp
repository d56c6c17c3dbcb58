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

#ifndef S2GAPS_SIEVE_HPP
#define S2GAPS_SIEVE_HPP

// Sums of two squares: membership bitset, r2 counts, gaps, and the two
// distance functions R(y) (to the set) and d(N) (circle to lattice).

#include <bit>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "s2gaps/error.hpp"

namespace s2gaps {

inline constexpr std::uint64_t kDefaultSegmentBits = std::uint64_t{1} << 22;
// 2^36 bits is an 8 GiB bitset.
inline constexpr std::uint64_t kMaxS2Bound = std::uint64_t{1} << 36;
inline constexpr std::uint64_t kMaxR2Bound = std::uint64_t{1} << 31;

// Membership of every n in [0, x_max] in the set of sums of two squares.
// Bit 0 is never set: the set starts at 1.
class S2Table {
 public:
  S2Table() = default;
  S2Table(std::uint64_t x_max, std::vector<std::uint64_t> words);

  std::uint64_t x_max() const noexcept { return x_max_; }
  std::span<const std::uint64_t> words() const noexcept { return words_; }

  bool contains(std::uint64_t n) const noexcept {
    return n <= x_max_ && ((words_[n >> 6] >> (n & 63)) & 1u);
  }
  // Largest member <= n, if any.
  std::optional<std::uint64_t> prev_member(std::uint64_t n) const noexcept;
  // Smallest member >= n within the table, if any.
  std::optional<std::uint64_t> next_member(std::uint64_t n) const noexcept;

  std::uint64_t count() const noexcept;
  // Sorted members s_1 < s_2 < ... <= x_max.
  std::vector<std::uint64_t> elements() const;

  // Calls visit(s) for each member in increasing order, stopping after `limit`.
  template <class Visit>
  void for_each_member(std::uint64_t limit, Visit&& visit) const;

  friend bool operator==(const S2Table&, const S2Table&) = default;

 private:
  std::uint64_t x_max_ = 0;
  std::vector<std::uint64_t> words_;
};

struct R2Table {
  std::uint64_t T = 0;
  std::vector<std::uint32_t> counts;  // counts[n] = r2(n), 0 <= n <= T

  std::uint32_t operator[](std::uint64_t n) const { return counts[n]; }
};

struct GapRecord {
  std::uint64_t s_lo = 0;
  std::uint64_t s_hi = 0;
  std::uint64_t gap = 0;

  friend bool operator==(const GapRecord&, const GapRecord&) = default;
};

// Marks a^2 + b^2 (0 <= a <= b) segment by segment. Segments are
// independent and may run on several threads.
S2Table build_s2_table(std::uint64_t x_max,
                       std::uint64_t segment_size = kDefaultSegmentBits,
                       unsigned threads = 1);

// Two-squares criterion by trial division: every prime p = 3 mod 4 must
// divide n to an even power.
bool is_s2_by_factorization(std::uint64_t n);

R2Table build_r2_table(std::uint64_t T);

// sum_{0<n<x} r2(n)^2
std::uint64_t r2_square_sum(const R2Table& table, std::uint64_t x);

// R(y) = min_{s in S} |y - s|. Throws BoundsError if the nearest member
// cannot be located inside the table.
double distance_to_s2(const S2Table& table, double y);

// d(N) = min over lattice radii m in {0} u S of |sqrt(N) - sqrt(m)|.
double circle_lattice_distance(const S2Table& table, double N);

std::vector<GapRecord> gaps(const S2Table& table);
// Gaps with s_hi <= x.
std::vector<GapRecord> gaps_upto(const S2Table& table, std::uint64_t x);
// Gaps strictly larger than every earlier gap, s_hi <= x.
std::vector<GapRecord> record_gaps(const S2Table& table, std::uint64_t x);

// The f(f(n)) construction with f(t) = t - floor(sqrt t)^2: n = a^2 + b^2 + rest
// with 0 <= rest <= 2 sqrt(2) n^{1/4}.
struct SquareChain {
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  std::uint64_t rest = 0;
};
SquareChain two_square_chain(std::uint64_t n);
double two_square_chain_bound(std::uint64_t n);

std::uint64_t isqrt(std::uint64_t n) noexcept;

// R(n) against the chain bound 2 sqrt(2) n^{1/4} for every integer n in [1, limit].
struct ChainBoundScan {
  std::uint64_t limit = 0;
  double max_R = 0.0;
  std::uint64_t max_R_at = 0;
  double max_ratio = 0.0;  // max R(n) / bound(n)
  std::uint64_t max_ratio_at = 0;
  std::uint64_t violations = 0;
};
ChainBoundScan scan_chain_bound(const S2Table& table, std::uint64_t limit);

// d(N) >= 2 R(N) / (5 sqrt N) for every integer N in [lo, hi].
struct CircleBoundScan {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  std::uint64_t checked = 0;
  std::uint64_t violations = 0;
  double min_slack = 0.0;  // min of d(N) - 2 R(N) / (5 sqrt N)
  std::uint64_t min_slack_at = 0;
};
double circle_distance_lower_bound(double R, double N);
CircleBoundScan scan_circle_bound(const S2Table& table, std::uint64_t lo, std::uint64_t hi);

// Bitset cache: 8-byte magic (format version included), 8-byte little-endian
// x_max, then the little-endian 64-bit words.
void save_s2_table(const S2Table& table, const std::filesystem::path& path);
// Empty when the file is missing, has another format version, or was built
// for another x_max.
std::optional<S2Table> load_s2_table(const std::filesystem::path& path,
                                     std::uint64_t x_max);
std::filesystem::path s2_cache_path(const std::filesystem::path& dir,
                                    std::uint64_t x_max);
// Loads from dir when a matching cache exists, otherwise builds and (when dir
// is non-empty) writes the cache. `rebuilt`, if given, reports which happened.
S2Table load_or_build_s2_table(std::uint64_t x_max,
                               const std::filesystem::path& dir,
                               unsigned threads = 1, bool* rebuilt = nullptr);

// Gap fixture CSV: header "s_lo,s_hi,gap", one row per gap.
void write_gap_csv(std::ostream& out, std::span<const GapRecord> gaps);
std::vector<GapRecord> read_gap_csv(std::istream& in);

template <class Visit>
void S2Table::for_each_member(std::uint64_t limit, Visit&& visit) const {
  limit = limit < x_max_ ? limit : x_max_;
  const std::uint64_t last_word = limit >> 6;
  for (std::uint64_t w = 0; w <= last_word; ++w) {
    std::uint64_t bits = words_[w];
    if (w == last_word) {
      const unsigned keep = static_cast<unsigned>(limit & 63) + 1;
      if (keep < 64) bits &= (std::uint64_t{1} << keep) - 1;
    }
    while (bits) {
      const int b = std::countr_zero(bits);
      visit((w << 6) + static_cast<std::uint64_t>(b));
      bits &= bits - 1;
    }
  }
}

}  // namespace s2gaps

#endif  // S2GAPS_SIEVE_HPP
