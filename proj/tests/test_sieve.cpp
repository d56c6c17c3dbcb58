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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

#include "oracles.hpp"
#include "s2gaps/sieve.hpp"

using namespace s2gaps;
namespace fs = std::filesystem;

namespace {

const S2Table& table_1e5() {
  static const S2Table t = build_s2_table(100'000);
  return t;
}

const S2Table& table_1e7() {
  static const S2Table t = build_s2_table(10'000'000);
  return t;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("s2gaps-test-" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("small members") {
  const S2Table t = build_s2_table(10);
  CHECK(t.elements() == std::vector<std::uint64_t>{1, 2, 4, 5, 8, 9, 10});
  const S2Table eight = build_s2_table(8);
  CHECK_FALSE(eight.contains(3));
  for (std::uint64_t n : {1, 2, 4, 5, 8}) CHECK(eight.contains(n));
  for (std::uint64_t n : {0, 3, 6, 7}) CHECK_FALSE(eight.contains(n));
}

TEST_CASE("build_s2_table argument checks") {
  CHECK_THROWS_AS(build_s2_table(7), DomainError);
  CHECK_THROWS_AS(build_s2_table(100, 0), DomainError);
  CHECK_THROWS_AS(build_s2_table(kMaxS2Bound + 1), ResourceError);
}

TEST_CASE("member set equals the brute-force lattice set") {
  const auto member = oracle::lattice_membership(100'000);
  const S2Table& t = table_1e5();
  std::uint64_t lattice_count = 0;
  for (std::uint64_t n = 0; n <= 100'000; ++n) {
    lattice_count += member[n];
    REQUIRE(t.contains(n) == member[n]);
  }
  CHECK(t.count() == lattice_count);
}

TEST_CASE("segment size and thread count do not change the table") {
  const S2Table ref = build_s2_table(200'000);
  CHECK(build_s2_table(200'000, 1000, 1) == ref);
  CHECK(build_s2_table(200'000, 4096, 3) == ref);
  CHECK(build_s2_table(200'000, 1 << 20, 4) == ref);
}

TEST_CASE("factorization criterion examples") {
  CHECK(is_s2_by_factorization(9));
  CHECK_FALSE(is_s2_by_factorization(21));
  CHECK_FALSE(oracle::lattice_membership(21)[21]);
  CHECK(is_s2_by_factorization(1));
  CHECK_FALSE(is_s2_by_factorization(3));
  CHECK_THROWS_AS(is_s2_by_factorization(0), DomainError);
}

TEST_CASE("12345678 against the lattice table") {
  const S2Table t = build_s2_table(12'345'700);
  CHECK(is_s2_by_factorization(12'345'678) == t.contains(12'345'678));
}

TEST_CASE("dual oracle: exhaustive to 1e5, random sample to 1e7") {
  const S2Table& t = table_1e5();
  for (std::uint64_t n = 1; n <= 100'000; ++n) REQUIRE(t.contains(n) == is_s2_by_factorization(n));
  std::mt19937_64 gen(12345);
  std::uniform_int_distribution<std::uint64_t> pick(1, 10'000'000);
  for (int i = 0; i < 10'000; ++i) {
    const std::uint64_t n = pick(gen);
    REQUIRE(table_1e7().contains(n) == is_s2_by_factorization(n));
  }
}

TEST_CASE("r2 counts") {
  const R2Table r2 = build_r2_table(10'000);
  CHECK(r2[0] == 1);
  CHECK(r2[1] == 4);
  CHECK(r2[2] == 4);
  CHECK(r2[3] == 0);
  CHECK(r2[5] == 8);
  CHECK(r2[25] == 12);
  const S2Table& t = table_1e5();
  std::uint64_t cumulative = 0;
  for (std::uint64_t n = 0; n <= 10'000; ++n) {
    if (n >= 1) REQUIRE(r2[n] % 4 == 0);
    REQUIRE((r2[n] > 0) == (n == 0 || t.contains(n)));
    cumulative += r2[n];
    if (n % 997 == 0 || n == 10'000) REQUIRE(cumulative == oracle::disk_count(n));
  }
}

TEST_CASE("r2 square sums") {
  const R2Table r2 = build_r2_table(1'000'000);
  CHECK(r2_square_sum(r2, 2) == 16);
  CHECK(r2_square_sum(r2, 3) == 32);
  CHECK_THROWS_AS(r2_square_sum(r2, 1'000'001), BoundsError);
  const auto ratio = [&](std::uint64_t x) {
    return static_cast<double>(r2_square_sum(r2, x)) / (x * std::log(static_cast<double>(x)));
  };
  const double at_1e4 = ratio(10'000);
  const double at_1e6 = ratio(1'000'000);
  MESSAGE("sum r2^2 / (x ln x): " << at_1e4 << " at 1e4, " << at_1e6 << " at 1e6");
  CHECK(at_1e6 <= 2.0 * at_1e4);
}

TEST_CASE("R(y) examples") {
  const S2Table& t = table_1e5();
  CHECK(distance_to_s2(t, 5.0) == 0.0);
  CHECK(distance_to_s2(t, 3.0) == 1.0);
  // neighbours 5 and 8
  CHECK(distance_to_s2(t, 6.4) == doctest::Approx(1.4).epsilon(1e-14));
  CHECK(distance_to_s2(t, 6.6) == doctest::Approx(1.4).epsilon(1e-14));
  CHECK(distance_to_s2(t, 6.5) == 1.5);
  CHECK(distance_to_s2(t, 0.25) == 0.75);
  CHECK(distance_to_s2(t, 0.0) == 1.0);
  CHECK_THROWS_AS(distance_to_s2(t, -1.0), DomainError);
  CHECK_THROWS_AS(distance_to_s2(t, 100'001.0), BoundsError);
}

TEST_CASE("R at real points against the nearest element") {
  const S2Table& t = table_1e5();
  const auto el = t.elements();
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> pick(1.0, 99'000.0);
  for (int i = 0; i < 20'000; ++i) {
    const double y = pick(gen);
    const auto hi = std::lower_bound(el.begin(), el.end(), static_cast<std::uint64_t>(std::ceil(y)));
    const double want = std::fmin(y - static_cast<double>(*(hi - 1)), static_cast<double>(*hi) - y);
    REQUIRE(distance_to_s2(t, y) == want);
  }
}

TEST_CASE("R vanishes exactly on members") {
  const S2Table& t = table_1e5();
  for (std::uint64_t n = 1; n < 50'000; ++n) {
    REQUIRE((distance_to_s2(t, static_cast<double>(n)) == 0.0) == t.contains(n));
  }
}

TEST_CASE("R near the top of the table") {
  const S2Table t = build_s2_table(100);
  CHECK(distance_to_s2(t, 100.0) == 0.0);
  // 99 lies between 98 and 100
  CHECK(distance_to_s2(t, 99.0) == 1.0);
}

TEST_CASE("d(N) examples") {
  const S2Table& t = table_1e5();
  CHECK(circle_lattice_distance(t, 4.0) == 0.0);
  CHECK(circle_lattice_distance(t, 3.0) == doctest::Approx(2.0 - std::sqrt(3.0)).epsilon(1e-15));
  CHECK(circle_lattice_distance(t, 0.25) == 0.5);
  CHECK_THROWS_AS(circle_lattice_distance(t, 0.0), DomainError);
}

TEST_CASE("d(N) against a scan of every lattice radius up to 2N") {
  const S2Table& t = table_1e5();
  for (double N : {3.0, 6.0, 7.0, 11.0, 21.0, 77.0, 190.0, 991.0, 1500.0, 5174.0, 0.7, 12.3}) {
    CHECK(circle_lattice_distance(t, N) == doctest::Approx(oracle::circle_distance_brute(N)).epsilon(1e-13));
  }
}

TEST_CASE("distance lower bound on [3, 1e5]") {
  const CircleBoundScan s = scan_circle_bound(table_1e5(), 3, 99'000);
  CHECK(s.checked == 99'000 - 3 + 1);
  CHECK(s.violations == 0);
  CHECK(s.min_slack >= 0.0);
}

TEST_CASE("gaps of the first members") {
  const S2Table t = build_s2_table(10);
  const std::vector<GapRecord> want{{1, 2, 1}, {2, 4, 2}, {4, 5, 1},
                                    {5, 8, 3}, {8, 9, 1}, {9, 10, 1}};
  CHECK(gaps(t) == want);
}

TEST_CASE("first gap of size at least 3") {
  const auto all = gaps(table_1e5());
  const auto it = std::find_if(all.begin(), all.end(), [](const GapRecord& g) { return g.gap >= 3; });
  REQUIRE(it != all.end());
  CHECK(*it == GapRecord{5, 8, 3});
}

TEST_CASE("gaps reproduce the element list") {
  const S2Table& t = table_1e5();
  const auto el = t.elements();
  const auto all = gaps(t);
  REQUIRE(all.size() + 1 == el.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    REQUIRE(all[i].s_lo == el[i]);
    REQUIRE(all[i].s_hi == el[i + 1]);
    REQUIRE(all[i].gap == el[i + 1] - el[i]);
    REQUIRE(all[i].gap >= 1);
  }
  const auto upto = gaps_upto(t, 1000);
  CHECK(upto.back().s_hi <= 1000);
  CHECK(upto.size() == static_cast<std::size_t>(std::count_if(
                           all.begin(), all.end(), [](const GapRecord& g) { return g.s_hi <= 1000; })));
}

TEST_CASE("record gaps up to 1e7 match the frozen fixture") {
  std::ifstream in(oracle::fixture_path("record_gaps_1e7.csv"));
  REQUIRE(in);
  const auto want = read_gap_csv(in);
  CHECK(record_gaps(table_1e7(), 10'000'000) == want);
  CHECK(want.back() == GapRecord{9'565'544, 9'565'594, 50});
}

TEST_CASE("gap CSV round trip") {
  const auto recs = record_gaps(table_1e5(), 100'000);
  std::stringstream buf;
  write_gap_csv(buf, recs);
  CHECK(buf.str().rfind("s_lo,s_hi,gap\n", 0) == 0);
  CHECK(read_gap_csv(buf) == recs);
  std::istringstream bad("a,b,c\n1,2,1\n");
  CHECK_THROWS(read_gap_csv(bad));
}

TEST_CASE("two-square chain") {
  for (std::uint64_t n = 1; n <= 200'000; ++n) {
    const SquareChain c = two_square_chain(n);
    REQUIRE(c.a * c.a + c.b * c.b + c.rest == n);
    REQUIRE(static_cast<double>(c.rest) <= two_square_chain_bound(n));
  }
  CHECK(isqrt(0) == 0);
  CHECK(isqrt(15) == 3);
  CHECK(isqrt(16) == 4);
  CHECK(isqrt(std::uint64_t{1} << 62) == std::uint64_t{1} << 31);
  CHECK(isqrt(~std::uint64_t{0}) == 0xFFFFFFFFull);
}

TEST_CASE("chain bound holds up to 1e5") {
  const ChainBoundScan s = scan_chain_bound(table_1e5(), 99'000);
  CHECK(s.violations == 0);
  CHECK(s.max_ratio < 1.0);
}

TEST_CASE("next and previous member") {
  const S2Table& t = table_1e5();
  CHECK(t.prev_member(7) == 5u);
  CHECK(t.next_member(6) == 8u);
  CHECK(t.next_member(8) == 8u);
  CHECK_FALSE(t.prev_member(0).has_value());
  CHECK_FALSE(t.next_member(100'001).has_value());
}

TEST_CASE("bitset cache round trip and invalidation") {
  TempDir dir;
  const S2Table t = build_s2_table(50'000);
  const fs::path path = s2_cache_path(dir.path, 50'000);
  save_s2_table(t, path);
  const auto back = load_s2_table(path, 50'000);
  REQUIRE(back.has_value());
  CHECK(*back == t);
  CHECK(gaps(*back) == gaps(t));

  // another x_max in the header
  CHECK_FALSE(load_s2_table(path, 50'001).has_value());
  // missing file
  CHECK_FALSE(load_s2_table(dir.path / "nope.bits", 50'000).has_value());
  // damaged magic
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(0);
    f.put('X');
  }
  CHECK_FALSE(load_s2_table(path, 50'000).has_value());
  // truncated payload
  save_s2_table(t, path);
  fs::resize_file(path, fs::file_size(path) - 8);
  CHECK_FALSE(load_s2_table(path, 50'000).has_value());
}

TEST_CASE("load_or_build writes then reuses the cache") {
  TempDir dir;
  bool rebuilt = false;
  const S2Table first = load_or_build_s2_table(20'000, dir.path, 1, &rebuilt);
  CHECK(rebuilt);
  CHECK(fs::exists(s2_cache_path(dir.path, 20'000)));
  const S2Table second = load_or_build_s2_table(20'000, dir.path, 1, &rebuilt);
  CHECK_FALSE(rebuilt);
  CHECK(first == second);
  const S2Table other = load_or_build_s2_table(20'001, dir.path, 1, &rebuilt);
  CHECK(rebuilt);
  CHECK(other.x_max() == 20'001);
  const S2Table nocache = load_or_build_s2_table(20'000, fs::path{}, 1, &rebuilt);
  CHECK(rebuilt);
  CHECK(nocache == first);
}
