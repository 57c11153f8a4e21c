// Copyright 2026 The ofalqon Authors
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

namespace ofq {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed textual input (graph6 records, JSON documents, method ids).
class ParseError : public Error {
  public:
    ParseError(const std::string &what, std::size_t offset)
        : Error(what + " (at byte offset " + std::to_string(offset) + ")"),
          offset_(offset) {}
    explicit ParseError(const std::string &what) : Error(what), offset_(0) {}

    [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

  private:
    std::size_t offset_;
};

/// A request exceeds an exhaustive-search or enumeration budget.
class SizeError : public Error {
  public:
    using Error::Error;
};

/// Arguments violate a documented precondition.
class InvalidArgument : public Error {
  public:
    using Error::Error;
};

/// Dimensions of parameters, vectors or operators disagree.
class DimensionError : public Error {
  public:
    using Error::Error;
};

/// A numerical invariant (norm, Hermiticity) was violated.
class ConsistencyError : public Error {
  public:
    using Error::Error;
};

/// An objective returned a non-finite value or the optimizer failed.
class OptimizerError : public Error {
  public:
    using Error::Error;
};

/// Statistical test cannot be computed on the given sample.
class DegenerateSampleError : public Error {
  public:
    using Error::Error;
};

/// A warm start asked for more layers than the source trace provides.
class InsufficientTraceError : public Error {
  public:
    using Error::Error;
};

/// Compared methods do not cover the same set of instances.
class PairingError : public Error {
  public:
    using Error::Error;
};

} // namespace ofq
