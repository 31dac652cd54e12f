// Copyright 2026 The RandMargins Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RANDMARGINS_IO_HPP_
#define RANDMARGINS_IO_HPP_

// CSV formats:
//   dataset       header `x1,...,xd,label`, one example per row, label 0/1
//   distribution  header `x1,...,xd,label,prob`, prob decimal or `a/b`
// Traces are written as JSON lines, one iteration per line, with a fixed
// field order.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "randmargins/core_model.hpp"
#include "randmargins/errors.hpp"
#include "randmargins/learner.hpp"

namespace randmargins {

namespace detail {

inline std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(Trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

inline std::int64_t ParseInt(const std::string& s, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw IoError("line " + std::to_string(line_no) + ": bad integer '" + s + "'");
  }
}

// Decimal or rational `a/b`.
inline double ParseProbability(const std::string& s, std::size_t line_no) {
  try {
    const auto slash = s.find('/');
    std::size_t used = 0;
    if (slash == std::string::npos) {
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    }
    const std::string num = Trim(s.substr(0, slash));
    const std::string den = Trim(s.substr(slash + 1));
    const double a = std::stod(num, &used);
    if (used != num.size()) throw std::invalid_argument(s);
    const double b = std::stod(den, &used);
    if (used != den.size() || b == 0.0) throw std::invalid_argument(s);
    return a / b;
  } catch (const std::exception&) {
    throw IoError("line " + std::to_string(line_no) + ": bad probability '" +
                  s + "'");
  }
}

struct CsvRows {
  std::size_t d = 0;
  std::vector<LabeledExample> examples;
  std::vector<double> probs;
};

inline CsvRows ReadRows(std::istream& in, bool with_prob) {
  CsvRows rows;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const auto cells = SplitCsv(line);
    if (!header_seen) {
      const std::size_t extra = with_prob ? 2 : 1;
      if (cells.size() <= extra || cells[cells.size() - extra] != "label" ||
          (with_prob && cells.back() != "prob")) {
        throw IoError("line 1: expected header x1,...,xd,label" +
                      std::string(with_prob ? ",prob" : ""));
      }
      rows.d = cells.size() - extra;
      for (std::size_t i = 0; i < rows.d; ++i) {
        if (cells[i] != "x" + std::to_string(i + 1)) {
          throw IoError("line 1: column " + std::to_string(i + 1) +
                        " must be named x" + std::to_string(i + 1));
        }
      }
      header_seen = true;
      continue;
    }
    const std::size_t expected = rows.d + (with_prob ? 2 : 1);
    if (cells.size() != expected) {
      throw IoError("line " + std::to_string(line_no) + ": expected " +
                    std::to_string(expected) + " columns");
    }
    LabeledExample e;
    for (std::size_t i = 0; i < rows.d; ++i) {
      e.coords.push_back(ParseInt(cells[i], line_no));
    }
    const std::int64_t label = ParseInt(cells[rows.d], line_no);
    if (label != 0 && label != 1) {
      throw IoError("line " + std::to_string(line_no) + ": label must be 0/1");
    }
    e.label = label == 1;
    rows.examples.push_back(std::move(e));
    if (with_prob) rows.probs.push_back(ParseProbability(cells[rows.d + 1], line_no));
  }
  if (!header_seen) throw IoError("empty CSV");
  return rows;
}

inline std::int64_t InferXMax(const CsvRows& rows,
                              std::optional<std::int64_t> x_max) {
  if (x_max) return *x_max;
  std::int64_t m = 0;
  for (const auto& e : rows.examples) {
    for (std::int64_t c : e.coords) m = std::max(m, c);
  }
  return m;
}

inline std::ifstream OpenForRead(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return in;
}

}  // namespace detail

inline void WriteCsvHeader(std::ostream& out, std::size_t d, bool with_prob) {
  for (std::size_t i = 0; i < d; ++i) out << 'x' << (i + 1) << ',';
  out << "label" << (with_prob ? ",prob" : "") << '\n';
}

// `x_max` defaults to the largest coordinate present.
inline Dataset ReadDatasetCsv(std::istream& in,
                              std::optional<std::int64_t> x_max = std::nullopt) {
  const auto rows = detail::ReadRows(in, false);
  return Dataset(GridDomain{detail::InferXMax(rows, x_max), rows.d},
                 rows.examples);
}

inline Dataset ReadDatasetCsv(const std::string& path,
                              std::optional<std::int64_t> x_max = std::nullopt) {
  auto in = detail::OpenForRead(path);
  return ReadDatasetCsv(in, x_max);
}

inline void WriteDatasetCsv(std::ostream& out, const Dataset& s) {
  WriteCsvHeader(out, s.dim(), false);
  for (ExampleId id : s.ids()) {
    for (std::int64_t c : s.Coords(id)) out << c << ',';
    out << (s.Label(id) ? 1 : 0) << '\n';
  }
}

inline void WriteDatasetCsv(const std::string& path, const Dataset& s) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  WriteDatasetCsv(out, s);
}

inline ExplicitDistribution ReadDistributionCsv(
    std::istream& in, std::optional<std::int64_t> x_max = std::nullopt) {
  const auto rows = detail::ReadRows(in, true);
  std::vector<std::pair<LabeledExample, double>> support;
  for (std::size_t i = 0; i < rows.examples.size(); ++i) {
    support.emplace_back(rows.examples[i], rows.probs[i]);
  }
  return ExplicitDistribution(GridDomain{detail::InferXMax(rows, x_max), rows.d},
                              std::move(support));
}

inline ExplicitDistribution ReadDistributionCsv(
    const std::string& path, std::optional<std::int64_t> x_max = std::nullopt) {
  auto in = detail::OpenForRead(path);
  return ReadDistributionCsv(in, x_max);
}

inline nlohmann::ordered_json IterationToJson(const IterationTrace& it) {
  nlohmann::ordered_json j;
  j["axis"] = it.axis;
  j["noise"] = it.noise;
  j["raw_size"] = it.raw_size;
  j["clamped_size"] = it.clamped_size;
  j["clamp"] = ClampEventName(it.clamp);
  j["survivors_before"] = it.survivors_before;
  j["block"] = it.block;
  j["inner"] = it.inner;
  j["inner_min"] = it.inner_min;
  j["inner_max"] = it.inner_max;
  j["p"] = it.interior_point;
  j["interior_success"] = it.interior_success;
  j["removed_count"] = it.removed_count();
  j["boundary_removed"] = it.boundary_removed;
  j["survivors_after"] = it.survivors_after;
  return j;
}

inline void WriteTraceJsonl(std::ostream& out, const RunTrace& trace) {
  for (const auto& it : trace.iterations) out << IterationToJson(it).dump() << '\n';
}

inline nlohmann::ordered_json TraceSummaryJson(const RunTrace& trace) {
  nlohmann::ordered_json j;
  j["seed"] = trace.seed;
  j["input_hash"] = trace.input_hash;
  j["block_size"] = trace.block_size;
  j["mean_block"] = trace.mean_block;
  j["corner"] = trace.corner;
  j["total_removed"] = trace.total_removed();
  j["max_clamped_size"] = trace.max_clamped_size();
  j["clamp_events"] = trace.clamp_events();
  j["solver_failures"] = trace.solver_failures();
  return j;
}

}  // namespace randmargins

#endif  // RANDMARGINS_IO_HPP_
