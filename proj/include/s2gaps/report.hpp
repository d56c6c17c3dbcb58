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

#ifndef S2GAPS_REPORT_HPP
#define S2GAPS_REPORT_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "s2gaps/bessel_sum.hpp"
#include "s2gaps/moments.hpp"
#include "s2gaps/sieve.hpp"

namespace s2gaps {

using Cell = std::variant<std::uint64_t, std::int64_t, double, bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

enum class Format { csv, json, tsv };

Format parse_format(std::string_view name);
std::string_view format_name(Format f);

// Shortest representation that reads back to the same double.
std::string format_double(double v);

// csv: header line plus one line per row.
// json: array of objects keyed by column name.
// tsv: one two-column block per value column ("# name" line, then
//      first-column<TAB>value rows), blocks separated by a blank line.
void write_table(std::ostream& out, const Table& table, Format format);

Table identity_table(std::span<const IdentityReport> reports);
Table moment_table(std::span<const MomentReport> reports);
// JSON output of moment tables also carries the regime flags.
Table moment_table_with_regimes(std::span<const MomentReport> reports);
Table measure_table(std::span<const MeasureReport> reports);
Table gap_table(std::span<const GapRecord> gaps);
Table richards_table(std::span<const RichardsRecord> records);
Table real_record_table(std::span<const RealRecord> records);

}  // namespace s2gaps

#endif  // S2GAPS_REPORT_HPP
