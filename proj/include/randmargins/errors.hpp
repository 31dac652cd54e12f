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

#ifndef RANDMARGINS_ERRORS_HPP_
#define RANDMARGINS_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace randmargins {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

// Raised by the learners when the remaining data cannot fill a block.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

// Raised by interior-point solvers called below their sample complexity.
class TooFewPointsError : public Error {
 public:
  using Error::Error;
};

class DomainTooLargeError : public Error {
 public:
  using Error::Error;
};

class InvalidStrategyError : public Error {
 public:
  using Error::Error;
};

class UnpairedTracesError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace randmargins

#endif  // RANDMARGINS_ERRORS_HPP_
