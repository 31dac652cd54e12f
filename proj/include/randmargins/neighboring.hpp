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

#ifndef RANDMARGINS_NEIGHBORING_HPP_
#define RANDMARGINS_NEIGHBORING_HPP_

#include <utility>

#include "randmargins/core_model.hpp"

namespace randmargins {

// Add/remove neighbors: S and S' = S ∪ {extra}. Examples of S keep their ids
// in S'; the extra example gets S.next_id().
class NeighboringPair {
 public:
  NeighboringPair(Dataset base, LabeledExample extra)
      : base_(std::move(base)),
        extra_(std::move(extra)),
        extra_id_(base_.next_id()),
        extended_(base_.WithAppended(extra_)) {}

  const Dataset& base() const { return base_; }
  const Dataset& extended() const { return extended_; }
  const LabeledExample& extra() const { return extra_; }
  ExampleId extra_id() const { return extra_id_; }

 private:
  Dataset base_;
  LabeledExample extra_;
  ExampleId extra_id_;
  Dataset extended_;
};

}  // namespace randmargins

#endif  // RANDMARGINS_NEIGHBORING_HPP_
