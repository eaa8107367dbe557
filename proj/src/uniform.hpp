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

#ifndef QWALK_SRC_UNIFORM_HPP
#define QWALK_SRC_UNIFORM_HPP

#include <cstdint>
#include <random>

namespace qwalk::detail {

/// Uniform on [-half_width, half_width) from the top 53 bits of one draw.
inline double uniform_symmetric(std::mt19937_64 &engine, double half_width) {
    double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    return (2.0 * u - 1.0) * half_width;
}

}  // namespace qwalk::detail

#endif  // QWALK_SRC_UNIFORM_HPP
