// Copyright 2026 The lieopt Authors
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

#ifndef LIEOPT_ERRORS_HPP
#define LIEOPT_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lieopt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Operands disagree on qubit count, vector length or matrix shape.
class DimensionError : public Error {
   public:
    using Error::Error;
};

/// The closure grew beyond the configured maximum dimension.
class ClosureOverflow : public Error {
   public:
    ClosureOverflow(std::size_t max_dim, std::size_t reached)
        : Error("closure exceeded max_dim=" + std::to_string(max_dim) + " (reached " + std::to_string(reached) +
                " elements)"),
          max_dim(max_dim),
          reached(reached) {}
    std::size_t max_dim;
    std::size_t reached;
};

/// A commutator i[a_j, h_k] produced a string that is not in the basis.
class ClosureViolation : public Error {
   public:
    ClosureViolation(std::size_t element, std::size_t generator, std::string product)
        : Error("closure violation: i[a_" + std::to_string(element) + ", h_" + std::to_string(generator) +
                "] produces unindexed string " + product),
          element(element),
          generator(generator),
          product(std::move(product)) {}
    std::size_t element;
    std::size_t generator;
    std::string product;
};

/// An operator could not be expanded in the basis.
class MembershipError : public Error {
   public:
    using Error::Error;
};

/// The exponential-times-vector integrator failed to converge.
class IntegratorError : public Error {
   public:
    IntegratorError(const std::string &what, std::size_t bin) : Error(what + " (bin " + std::to_string(bin) + ")"), bin(bin) {}
    std::size_t bin;
};

/// Invalid user input: configs, model parameters, file contents.
class ConfigError : public Error {
   public:
    using Error::Error;
};

/// A file failed its content-hash check or carries a mismatched config hash.
class IntegrityError : public Error {
   public:
    using Error::Error;
};

}  // namespace lieopt

#endif
