// Copyright 2026 The headpose Authors
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

#include <optional>
#include <stdexcept>
#include <string>

namespace headpose {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite numbers, non-orthonormal matrices, mismatched sizes.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// An angle or parameter outside its declared interval.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Operation not defined for the given convention or conversion pair.
class Unsupported : public Error {
 public:
  using Error::Error;
};

/// Collinear keypoints, collapsed bounding boxes and similar.
class DegenerateGeometry : public Error {
 public:
  using Error::Error;
};

/// Malformed file content. Carries the 0-based record (or line) index when known.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::optional<std::size_t> record = std::nullopt)
      : Error(record ? what + " (record " + std::to_string(*record) + ")" : what),
        record_(record) {}
  std::optional<std::size_t> record() const { return record_; }

 private:
  std::optional<std::size_t> record_;
};

/// Well-formed record that violates a domain invariant.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& what, std::optional<std::size_t> record = std::nullopt)
      : Error(record ? what + " (record " + std::to_string(*record) + ")" : what),
        record_(record) {}
  std::optional<std::size_t> record() const { return record_; }

 private:
  std::optional<std::size_t> record_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace headpose
