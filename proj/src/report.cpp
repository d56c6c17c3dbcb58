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

#include "s2gaps/report.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>
#include <json.hpp>

namespace s2gaps {

namespace {

std::string cell_text(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, double>) {
          return format_double(v);
        } else if constexpr (std::is_same_v<V, bool>) {
          return v ? "1" : "0";
        } else if constexpr (std::is_same_v<V, std::string>) {
          return v;
        } else {
          return std::to_string(v);
        }
      },
      c);
}

nlohmann::ordered_json cell_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> nlohmann::ordered_json {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, double>) {
          if (!std::isfinite(v)) return nullptr;
        }
        return v;
      },
      c);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char ch : s) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + '"';
}

}  // namespace

Format parse_format(std::string_view name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  if (name == "tsv") return Format::tsv;
  throw std::invalid_argument(fmt::format("unknown format '{}'", name));
}

std::string_view format_name(Format f) {
  switch (f) {
    case Format::csv: return "csv";
    case Format::json: return "json";
    case Format::tsv: return "tsv";
  }
  return "csv";
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{}", v);
}

void write_table(std::ostream& out, const Table& table, Format format) {
  switch (format) {
    case Format::csv: {
      for (std::size_t i = 0; i < table.columns.size(); ++i) {
        out << (i ? "," : "") << table.columns[i];
      }
      out << '\n';
      for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
          out << (i ? "," : "") << csv_field(cell_text(row[i]));
        }
        out << '\n';
      }
      break;
    }
    case Format::json: {
      auto arr = nlohmann::ordered_json::array();
      for (const auto& row : table.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i) obj[table.columns[i]] = cell_json(row[i]);
        arr.push_back(std::move(obj));
      }
      out << arr.dump(2) << '\n';
      break;
    }
    case Format::tsv: {
      for (std::size_t c = 1; c < table.columns.size(); ++c) {
        if (c > 1) out << '\n';
        out << "# " << table.columns[0] << '\t' << table.columns[c] << '\n';
        for (const auto& row : table.rows) {
          out << cell_text(row[0]) << '\t' << cell_text(row[c]) << '\n';
        }
      }
      break;
    }
  }
}

Table identity_table(std::span<const IdentityReport> reports) {
  Table t{{"label", "lhs", "rhs", "abs_err", "rel_err"}, {}};
  for (const auto& r : reports) t.rows.push_back({r.label, r.lhs, r.rhs, r.abs_err, r.rel_err});
  return t;
}

Table moment_table(std::span<const MomentReport> reports) {
  Table t{{"gamma", "x", "moment_sum", "hooley_ratio", "paper_ratio"}, {}};
  for (const auto& r : reports) {
    t.rows.push_back({r.gamma, r.x, r.moment_sum, r.hooley_ratio, r.paper_ratio});
  }
  return t;
}

Table moment_table_with_regimes(std::span<const MomentReport> reports) {
  Table t = moment_table(reports);
  t.columns.push_back("hooley_regime");
  t.columns.push_back("paper_regime");
  for (std::size_t i = 0; i < reports.size(); ++i) {
    t.rows[i].push_back(reports[i].hooley_regime);
    t.rows[i].push_back(reports[i].paper_regime);
  }
  return t;
}

Table measure_table(std::span<const MeasureReport> reports) {
  Table t{{"H", "x", "mu", "normalized"}, {}};
  for (const auto& r : reports) t.rows.push_back({r.H, r.x, r.mu, r.normalized});
  return t;
}

Table gap_table(std::span<const GapRecord> gaps) {
  Table t{{"s_lo", "s_hi", "gap"}, {}};
  for (const auto& g : gaps) t.rows.push_back({g.s_lo, g.s_hi, g.gap});
  return t;
}

Table richards_table(std::span<const RichardsRecord> records) {
  Table t{{"n", "R", "R_over_ln_n"}, {}};
  for (const auto& r : records) t.rows.push_back({r.n, r.R, r.R_over_log});
  return t;
}

Table real_record_table(std::span<const RealRecord> records) {
  Table t{{"y", "R", "R_over_ln_y"}, {}};
  for (const auto& r : records) t.rows.push_back({r.y, r.R, r.R_over_log});
  return t;
}

}  // namespace s2gaps
