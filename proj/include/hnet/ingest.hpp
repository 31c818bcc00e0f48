#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "hnet/bitvector.hpp"
#include "hnet/error.hpp"

namespace hnet {

enum class FeatureKind { Discrete, Numeric, Excluded };

inline std::string_view to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::Discrete: return "discrete";
    case FeatureKind::Numeric: return "numeric";
    case FeatureKind::Excluded: return "excluded";
  }
  return "excluded";
}

inline std::optional<FeatureKind> parse_feature_kind(std::string_view text) {
  if (text == "discrete") return FeatureKind::Discrete;
  if (text == "numeric") return FeatureKind::Numeric;
  if (text == "excluded") return FeatureKind::Excluded;
  return std::nullopt;
}

struct IngestConfig {
  char delimiter = ',';
  std::vector<std::string> na_tokens = {"", "NA", "NaN", "None"};
  // A column whose values are all real numbers is numeric once its distinct
  // values reach this fraction of the present values.
  double unique_fraction = 0.20;
  std::map<std::string, FeatureKind> type_overrides;
};

using Cell = std::optional<std::string>;

struct FeatureColumn {
  std::string name;
  FeatureKind kind = FeatureKind::Discrete;
  std::vector<Cell> cells;
  // Parsed values; populated only for Numeric columns, nullopt where missing.
  std::vector<std::optional<double>> numbers;

  std::size_t present_count() const {
    return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](const Cell& c) { return c.has_value(); }));
  }

  friend bool operator==(const FeatureColumn&, const FeatureColumn&) = default;
};

struct FeatureTable {
  std::vector<FeatureColumn> columns;
  std::size_t n_rows = 0;

  const FeatureColumn* find(std::string_view name) const {
    for (const auto& c : columns) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }

  friend bool operator==(const FeatureTable&, const FeatureTable&) = default;
};

/// One boolean column of the encoded matrix. Order-1 columns come straight
/// from one category of one feature; higher orders are the AND of members
/// drawn from distinct features.
struct CategoryColumn {
  std::vector<std::string> parent_features;
  std::vector<std::string> labels;
  BitVector bits;
  // Rows where every parent feature is observed. bits is a subset of observed.
  BitVector observed;
  std::size_t positives = 0;

  std::size_t order() const noexcept { return parent_features.size(); }

  bool shares_feature_with(const CategoryColumn& other) const {
    for (const auto& f : parent_features) {
      if (std::find(other.parent_features.begin(), other.parent_features.end(), f) != other.parent_features.end()) {
        return true;
      }
    }
    return false;
  }

  // `feature=label`, members of a combination joined with `&`.
  std::string id() const {
    std::string out;
    for (std::size_t i = 0; i < parent_features.size(); ++i) {
      if (i) out += '&';
      out += parent_features[i];
      out += '=';
      out += labels[i];
    }
    return out;
  }
};

struct OneHotMatrix {
  std::vector<CategoryColumn> columns;
  std::size_t n_rows = 0;
  // Category columns seen before the y_min filter.
  std::size_t raw_columns = 0;
};

namespace detail {

inline std::optional<double> parse_real(std::string_view text) {
  if (text.empty()) return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) return std::nullopt;
  return value;
}

inline bool is_integral(double v) { return std::trunc(v) == v && std::abs(v) < 1e15; }

inline bool looks_float_formatted(std::string_view text) {
  return text.find_first_of(".eE") != std::string_view::npos;
}

}  // namespace detail

/// Discrete label for a raw cell: float-formatted integers lose their
/// fractional part so "1" and "1.0" name the same category.
inline std::string canonical_label(std::string_view raw) {
  if (detail::looks_float_formatted(raw)) {
    if (auto v = detail::parse_real(raw); v && detail::is_integral(*v)) {
      return std::to_string(static_cast<long long>(*v));
    }
  }
  return std::string(raw);
}

/// RFC-4180 reader: quoted fields, doubled quotes, CRLF or LF line ends.
/// A single trailing line terminator does not start a new record.
inline FeatureTable parse_csv(std::string_view bytes, const IngestConfig& config = {}) {
  if (bytes.size() >= 3 && static_cast<unsigned char>(bytes[0]) == 0xEF &&
      static_cast<unsigned char>(bytes[1]) == 0xBB && static_cast<unsigned char>(bytes[2]) == 0xBF) {
    bytes.remove_prefix(3);
  }
  if (bytes.empty()) throw Error(ErrorCode::EmptyInput, "input contains no bytes");

  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  std::size_t line = 1;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record.clear();
  };

  for (std::size_t i = 0; i < bytes.size(); ++i) {
    const char c = bytes[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < bytes.size() && bytes[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    if (c == '"') {
      if (!field.empty() || field_was_quoted) {
        throw Error(ErrorCode::MalformedCsv, "unexpected quote inside unquoted field on line " + std::to_string(line));
      }
      in_quotes = true;
      field_was_quoted = true;
    } else if (c == config.delimiter) {
      end_field();
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < bytes.size() && bytes[i + 1] == '\n') ++i;
      end_record();
      ++line;
    } else {
      if (field_was_quoted) {
        throw Error(ErrorCode::MalformedCsv, "text after closing quote on line " + std::to_string(line));
      }
      field += c;
    }
  }
  if (in_quotes) throw Error(ErrorCode::MalformedCsv, "unterminated quoted field");
  const char last = bytes.back();
  if (!(last == '\n' || last == '\r') || !field.empty() || !record.empty()) end_record();

  if (records.empty()) throw Error(ErrorCode::MalformedCsv, "no header row");
  const auto& header = records.front();
  {
    std::set<std::string> seen;
    for (const auto& name : header) {
      if (!seen.insert(name).second) throw Error(ErrorCode::MalformedCsv, "duplicate column name '" + name + "'");
    }
  }

  FeatureTable table;
  table.n_rows = records.size() - 1;
  table.columns.resize(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    table.columns[c].name = header[c];
    table.columns[c].cells.reserve(table.n_rows);
  }
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() != header.size()) {
      throw Error(ErrorCode::MalformedCsv, "record " + std::to_string(r) + " has " + std::to_string(rec.size()) +
                                               " fields, header has " + std::to_string(header.size()));
    }
    for (std::size_t c = 0; c < rec.size(); ++c) {
      const bool missing =
          std::find(config.na_tokens.begin(), config.na_tokens.end(), rec[c]) != config.na_tokens.end();
      table.columns[c].cells.push_back(missing ? Cell{} : Cell{rec[c]});
    }
  }
  return table;
}

/// Decides Discrete / Numeric / Excluded per column. Numeric when every
/// present value is a finite real and either some value is non-integral or
/// the distinct count reaches unique_fraction of the present count. Columns
/// with no present value are Excluded. Overrides win.
inline FeatureTable assign_types(FeatureTable table, const IngestConfig& config = {}) {
  for (const auto& [name, kind] : config.type_overrides) {
    if (!table.find(name)) throw Error(ErrorCode::UnknownOverrideColumn, "no column named '" + name + "'");
  }

  for (auto& col : table.columns) {
    std::vector<std::optional<double>> parsed(col.cells.size());
    std::size_t present = 0;
    bool all_real = true;
    bool any_fractional = false;
    std::set<double> distinct;
    for (std::size_t r = 0; r < col.cells.size(); ++r) {
      if (!col.cells[r]) continue;
      ++present;
      auto v = detail::parse_real(*col.cells[r]);
      if (!v) {
        all_real = false;
        continue;
      }
      parsed[r] = v;
      distinct.insert(*v);
      if (!detail::is_integral(*v)) any_fractional = true;
    }

    FeatureKind kind = FeatureKind::Discrete;
    if (present == 0) {
      kind = FeatureKind::Excluded;
    } else if (all_real && (any_fractional || static_cast<double>(distinct.size()) >=
                                                   config.unique_fraction * static_cast<double>(present))) {
      kind = FeatureKind::Numeric;
    }
    if (auto it = config.type_overrides.find(col.name); it != config.type_overrides.end()) kind = it->second;

    col.kind = kind;
    col.numbers.clear();
    if (kind == FeatureKind::Numeric) {
      if (!all_real) {
        throw Error(ErrorCode::InvalidConfig, "column '" + col.name + "' forced numeric but holds non-numeric values");
      }
      col.numbers = std::move(parsed);
    } else if (kind == FeatureKind::Discrete) {
      for (auto& cell : col.cells) {
        if (cell) *cell = canonical_label(*cell);
      }
    }
  }
  return table;
}

/// Dummy-codes every Discrete column. Labels within a feature are sorted
/// lexicographically; categories with fewer than y_min positives are dropped.
inline OneHotMatrix one_hot_encode(const FeatureTable& table, std::size_t y_min = 10) {
  if (y_min < 1) throw Error(ErrorCode::InvalidConfig, "y_min must be at least 1");
  OneHotMatrix out;
  out.n_rows = table.n_rows;
  for (const auto& col : table.columns) {
    if (col.kind != FeatureKind::Discrete) continue;
    BitVector observed(table.n_rows);
    std::map<std::string, BitVector> by_label;
    for (std::size_t r = 0; r < col.cells.size(); ++r) {
      if (!col.cells[r]) continue;
      observed.set(r);
      auto [it, inserted] = by_label.try_emplace(*col.cells[r], table.n_rows);
      it->second.set(r);
    }
    out.raw_columns += by_label.size();
    for (auto& [label, bits] : by_label) {
      const std::size_t positives = bits.count();
      if (positives < y_min) continue;
      CategoryColumn cc;
      cc.parent_features = {col.name};
      cc.labels = {label};
      cc.bits = std::move(bits);
      cc.observed = observed;
      cc.positives = positives;
      out.columns.push_back(std::move(cc));
    }
  }
  if (out.columns.empty()) {
    throw Error(ErrorCode::NoUsableColumns,
                "no category reaches y_min=" + std::to_string(y_min) + " positive samples");
  }
  return out;
}

}  // namespace hnet
