// Copyright 2026 The qwalk Authors
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

#ifndef QWALK_ERROR_HPP
#define QWALK_ERROR_HPP

#include <stdexcept>
#include <string>

namespace qwalk {

/// Bad argument to a library call (out-of-range site, W outside [0, 1], ...).
class InvalidArgument : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// A walker on an open line tried to hop past one of the two ends.
class BoundaryError : public std::runtime_error {
   public:
    BoundaryError(int site, const std::string &what) : std::runtime_error(what), site_(site) {}
    int site() const { return site_; }

   private:
    int site_;
};

/// A numerical invariant (norm, unitarity, determinant) drifted past its tolerance.
/// The message names the invariant that failed.
class InvariantViolation : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Operation is not defined for the given input (e.g. transfer matrix on a line).
class Unsupported : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

}  // namespace qwalk

#endif  // QWALK_ERROR_HPP
