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

#ifndef RANDMARGINS_CORE_MODEL_HPP_
#define RANDMARGINS_CORE_MODEL_HPP_

// Grid domains, labeled datasets, origin-placed rectangle hypotheses and the
// order statistics the learners are built from.
//
// A Dataset is an immutable view over shared example storage. Every example
// keeps the index at which it was inserted (its ExampleId) for the lifetime
// of the storage, so subsets, traces and neighboring datasets can all refer
// to the same example by the same id.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "randmargins/errors.hpp"

namespace randmargins {

using ExampleId = std::uint32_t;

struct GridDomain {
  std::int64_t x_max = 0;  // each coordinate ranges over {0, ..., x_max}
  std::size_t d = 1;

  void Validate() const {
    if (x_max < 0) throw InvalidArgumentError("GridDomain: x_max must be >= 0");
    if (d < 1) throw InvalidArgumentError("GridDomain: d must be >= 1");
  }
  bool Contains(std::span<const std::int64_t> coords) const {
    if (coords.size() != d) return false;
    return std::all_of(coords.begin(), coords.end(),
                       [&](std::int64_t c) { return c >= 0 && c <= x_max; });
  }
  friend bool operator==(const GridDomain&, const GridDomain&) = default;
};

struct LabeledExample {
  std::vector<std::int64_t> coords;
  bool label = false;

  friend bool operator==(const LabeledExample&,
                         const LabeledExample&) = default;
};

class Dataset {
 public:
  Dataset() : Dataset(GridDomain{}, std::span<const LabeledExample>{}) {}

  Dataset(GridDomain domain, std::span<const LabeledExample> examples) {
    domain.Validate();
    auto storage = std::make_shared<Storage>();
    storage->domain = domain;
    storage->coords.reserve(examples.size() * domain.d);
    storage->labels.reserve(examples.size());
    for (const LabeledExample& e : examples) {
      if (!domain.Contains(e.coords)) {
        throw InvalidArgumentError("Dataset: example outside grid domain");
      }
      storage->coords.insert(storage->coords.end(), e.coords.begin(),
                             e.coords.end());
      storage->labels.push_back(e.label ? 1 : 0);
    }
    storage_ = std::move(storage);
    ids_.resize(examples.size());
    std::iota(ids_.begin(), ids_.end(), ExampleId{0});
  }

  Dataset(GridDomain domain, const std::vector<LabeledExample>& examples)
      : Dataset(domain, std::span<const LabeledExample>(examples)) {}

  // Flat constructor: `coords` holds n*d values row-major.
  static Dataset FromColumns(GridDomain domain, std::vector<std::int64_t> coords,
                             std::vector<std::uint8_t> labels) {
    domain.Validate();
    if (coords.size() != labels.size() * domain.d) {
      throw InvalidArgumentError("Dataset: coordinate count mismatch");
    }
    for (std::int64_t c : coords) {
      if (c < 0 || c > domain.x_max) {
        throw InvalidArgumentError("Dataset: example outside grid domain");
      }
    }
    Dataset out;
    auto storage = std::make_shared<Storage>();
    storage->domain = domain;
    storage->coords = std::move(coords);
    storage->labels = std::move(labels);
    for (auto& l : storage->labels) l = l ? 1 : 0;
    out.ids_.resize(storage->labels.size());
    std::iota(out.ids_.begin(), out.ids_.end(), ExampleId{0});
    out.storage_ = std::move(storage);
    return out;
  }

  const GridDomain& domain() const { return storage_->domain; }
  std::size_t dim() const { return storage_->domain.d; }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }

  // Member ids in insertion order.
  std::span<const ExampleId> ids() const { return ids_; }

  // Id the next appended example would receive.
  ExampleId next_id() const {
    return static_cast<ExampleId>(storage_->labels.size());
  }

  std::int64_t Coord(ExampleId id, std::size_t axis) const {
    return storage_->coords[static_cast<std::size_t>(id) * dim() + axis];
  }
  // All values on `axis`, indexed by id (covers every id of the storage,
  // members or not). Faster than Coord for whole-axis scans.
  std::span<const std::int64_t> Column(std::size_t axis) const {
    const Storage& st = *storage_;
    const std::size_t n = st.labels.size();
    const std::size_t d = st.domain.d;
    std::call_once(st.columns_once, [&] {
      st.columns.resize(n * d);
      for (std::size_t id = 0; id < n; ++id) {
        for (std::size_t a = 0; a < d; ++a) {
          st.columns[a * n + id] = st.coords[id * d + a];
        }
      }
    });
    return {st.columns.data() + axis * n, n};
  }
  std::span<const std::int64_t> Coords(ExampleId id) const {
    return {storage_->coords.data() + static_cast<std::size_t>(id) * dim(),
            dim()};
  }
  bool Label(ExampleId id) const { return storage_->labels[id] != 0; }

  LabeledExample Example(ExampleId id) const {
    auto c = Coords(id);
    return {std::vector<std::int64_t>(c.begin(), c.end()), Label(id)};
  }
  std::vector<LabeledExample> Examples() const {
    std::vector<LabeledExample> out;
    out.reserve(size());
    for (ExampleId id : ids_) out.push_back(Example(id));
    return out;
  }

  bool Contains(ExampleId id) const {
    return std::binary_search(ids_.begin(), ids_.end(), id);
  }

  // View restricted to `ids`, which must be members. Order is normalized to
  // insertion order.
  Dataset Subset(std::vector<ExampleId> ids) const {
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
      throw InvalidArgumentError("Dataset::Subset: duplicate id");
    }
    for (ExampleId id : ids) {
      if (!Contains(id)) {
        throw InvalidArgumentError("Dataset::Subset: id is not a member");
      }
    }
    return Dataset(storage_, std::move(ids));
  }

  Dataset Without(std::span<const ExampleId> removed) const {
    std::vector<ExampleId> sorted(removed.begin(), removed.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<ExampleId> keep;
    keep.reserve(ids_.size());
    std::set_difference(ids_.begin(), ids_.end(), sorted.begin(), sorted.end(),
                        std::back_inserter(keep));
    return Dataset(storage_, std::move(keep));
  }

  Dataset Positives() const {
    std::vector<ExampleId> keep;
    for (ExampleId id : ids_) {
      if (Label(id)) keep.push_back(id);
    }
    return Dataset(storage_, std::move(keep));
  }

  // Neighboring dataset S ∪ {extra}. Existing ids are kept; the new example
  // gets next_id().
  Dataset WithAppended(const LabeledExample& extra) const {
    if (!domain().Contains(extra.coords)) {
      throw InvalidArgumentError("Dataset: appended example outside domain");
    }
    auto storage = std::make_shared<Storage>(*storage_);
    storage->coords.insert(storage->coords.end(), extra.coords.begin(),
                           extra.coords.end());
    storage->labels.push_back(extra.label ? 1 : 0);
    std::vector<ExampleId> ids = ids_;
    ids.push_back(next_id());
    return Dataset(std::move(storage), std::move(ids));
  }

  // Stable 64-bit digest of the member examples in insertion order: FNV-1a
  // applied to whole 64-bit words.
  std::uint64_t ContentHash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t v) {
      h ^= v;
      h *= 0x100000001b3ULL;
    };
    mix(dim());
    mix(static_cast<std::uint64_t>(domain().x_max));
    for (ExampleId id : ids_) {
      for (std::int64_t c : Coords(id)) mix(static_cast<std::uint64_t>(c));
      mix(Label(id) ? 1 : 0);
    }
    return h;
  }

 private:
  struct Storage {
    GridDomain domain;
    std::vector<std::int64_t> coords;  // row-major
    std::vector<std::uint8_t> labels;
    // Column-major copy, built on first use.
    mutable std::once_flag columns_once;
    mutable std::vector<std::int64_t> columns;

    Storage() = default;
    Storage(const Storage& other)
        : domain(other.domain), coords(other.coords), labels(other.labels) {}
  };

  Dataset(std::shared_ptr<const Storage> storage, std::vector<ExampleId> ids)
      : storage_(std::move(storage)), ids_(std::move(ids)) {}

  std::shared_ptr<const Storage> storage_;
  std::vector<ExampleId> ids_;
};

// Hypothesis h_p: labels x positive iff x[i] <= p[i] on every axis. The
// `empty` flag encodes the all-zero hypothesis that labels everything 0.
struct OriginRectangle {
  std::vector<std::int64_t> corner;
  bool empty = false;

  static OriginRectangle AllZero(std::size_t d) {
    return {std::vector<std::int64_t>(d, 0), true};
  }
  std::size_t dim() const { return corner.size(); }
  friend bool operator==(const OriginRectangle&,
                         const OriginRectangle&) = default;
};

inline bool Predict(const OriginRectangle& h, std::span<const std::int64_t> x) {
  if (x.size() != h.corner.size()) {
    throw InvalidArgumentError("Predict: dimension mismatch");
  }
  if (h.empty) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > h.corner[i]) return false;
  }
  return true;
}

inline std::size_t MisclassifiedCount(const OriginRectangle& h,
                                      const Dataset& s) {
  std::size_t wrong = 0;
  for (ExampleId id : s.ids()) {
    if (Predict(h, s.Coords(id)) != s.Label(id)) ++wrong;
  }
  return wrong;
}

inline double EmpiricalError(const OriginRectangle& h, const Dataset& s) {
  if (s.empty()) throw InvalidArgumentError("EmpiricalError: empty dataset");
  return static_cast<double>(MisclassifiedCount(h, s)) /
         static_cast<double>(s.size());
}

class ExplicitDistribution {
 public:
  static constexpr double kMassTolerance = 1e-12;

  ExplicitDistribution(GridDomain domain,
                       std::vector<std::pair<LabeledExample, double>> support)
      : domain_(domain), support_(std::move(support)) {
    domain_.Validate();
    double total = 0.0;
    for (const auto& [example, mass] : support_) {
      if (!domain_.Contains(example.coords)) {
        throw InvalidArgumentError("ExplicitDistribution: point outside domain");
      }
      if (!(mass >= 0.0)) {
        throw InvalidArgumentError("ExplicitDistribution: negative mass");
      }
      total += mass;
    }
    if (std::abs(total - 1.0) > kMassTolerance) {
      throw InvalidArgumentError("ExplicitDistribution: masses do not sum to 1");
    }
  }

  const GridDomain& domain() const { return domain_; }
  const std::vector<std::pair<LabeledExample, double>>& support() const {
    return support_;
  }

 private:
  GridDomain domain_;
  std::vector<std::pair<LabeledExample, double>> support_;
};

inline double GeneralizationError(const OriginRectangle& h,
                                  const ExplicitDistribution& dist) {
  double err = 0.0;
  for (const auto& [example, mass] : dist.support()) {
    if (Predict(h, example.coords) != example.label) err += mass;
  }
  return err;
}

namespace detail {

// Total order used by every order statistic: by coordinate, and among equal
// coordinates the smaller insertion index ranks higher. Top-k therefore
// prefers earlier examples on ties, bottom-k prefers later ones, and
// top_k(S, k) and bottom_{|S|-k}(S) partition S.
struct AxisRankGreater {
  const Dataset* data;
  std::size_t axis;
  bool operator()(ExampleId a, ExampleId b) const {
    const std::int64_t ca = data->Coord(a, axis);
    const std::int64_t cb = data->Coord(b, axis);
    return ca > cb || (ca == cb && a < b);
  }
};

// Reorders `ids` so its first k entries are the k highest ranked along axis.
inline void PartitionTopK(std::vector<ExampleId>& ids, const Dataset& data,
                          std::size_t axis, std::size_t k) {
  if (k == 0 || k >= ids.size()) return;
  std::nth_element(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(k),
                   ids.end(), AxisRankGreater{&data, axis});
}

inline void PartitionBottomK(std::vector<ExampleId>& ids, const Dataset& data,
                             std::size_t axis, std::size_t k) {
  if (k == 0 || k >= ids.size()) return;
  AxisRankGreater greater{&data, axis};
  std::nth_element(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(k),
                   ids.end(),
                   [&](ExampleId a, ExampleId b) { return greater(b, a); });
}

inline void CheckAxis(const Dataset& s, std::size_t axis, std::size_t k) {
  if (axis >= s.dim()) throw InvalidArgumentError("axis out of range");
  if (k > s.size()) throw InvalidArgumentError("k exceeds dataset size");
}

}  // namespace detail

// The k examples ranked highest along `axis` (0-based), as a view in
// insertion order.
inline Dataset TopKAlongAxis(const Dataset& s, std::size_t axis,
                             std::size_t k) {
  detail::CheckAxis(s, axis, k);
  std::vector<ExampleId> ids(s.ids().begin(), s.ids().end());
  detail::PartitionTopK(ids, s, axis, k);
  ids.resize(k);
  return s.Subset(std::move(ids));
}

inline Dataset BottomKAlongAxis(const Dataset& s, std::size_t axis,
                                std::size_t k) {
  detail::CheckAxis(s, axis, k);
  std::vector<ExampleId> ids(s.ids().begin(), s.ids().end());
  detail::PartitionBottomK(ids, s, axis, k);
  ids.resize(k);
  return s.Subset(std::move(ids));
}

}  // namespace randmargins

#endif  // RANDMARGINS_CORE_MODEL_HPP_
