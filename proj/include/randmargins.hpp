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

#ifndef RANDMARGINS_RANDMARGINS_HPP_
#define RANDMARGINS_RANDMARGINS_HPP_

#include "randmargins/audit.hpp"
#include "randmargins/core_model.hpp"
#include "randmargins/errors.hpp"
#include "randmargins/experiments.hpp"
#include "randmargins/game.hpp"
#include "randmargins/io.hpp"
#include "randmargins/ipp.hpp"
#include "randmargins/learner.hpp"
#include "randmargins/neighboring.hpp"
#include "randmargins/noise.hpp"
#include "randmargins/random.hpp"
#include "randmargins/stats.hpp"
#include "randmargins/variants.hpp"

#endif  // RANDMARGINS_RANDMARGINS_HPP_
