// Copyright 2026 zxopt contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace zxopt {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : Error {
  using Error::Error;
};

struct TooLargeError : Error {
  using Error::Error;
};

struct ShapeMismatchError : Error {
  using Error::Error;
};

struct InvalidMatchError : Error {
  using Error::Error;
};

struct NotApplicableError : Error {
  using Error::Error;
};

// Raised by a single extraction attempt; signals the caller to escalate.
struct ExtractionStuckError : Error {
  using Error::Error;
};

// Raised when every extraction level has failed.
struct ExtractionFailedError : Error {
  using Error::Error;
};

struct NonFiniteError : Error {
  using Error::Error;
};

struct BadRatiosError : Error {
  using Error::Error;
};

struct BlockMismatchError : Error {
  using Error::Error;
};

}  // namespace zxopt
