// Copyright 2026 The Edgelight Authors
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

#ifndef EDGELIGHT_HALF_H_
#define EDGELIGHT_HALF_H_

#include <cstdint>

namespace edgelight {

inline constexpr float kHalfMax = 65504.0f;

// IEEE 754 binary32 -> binary16, round to nearest, ties to even. Overflow
// goes to infinity, NaN stays NaN (quiet).
std::uint16_t FloatToHalfBits(float value);

// Exact widening.
float HalfBitsToFloat(std::uint16_t bits);

inline float RoundToHalf(float value) {
  return HalfBitsToFloat(FloatToHalfBits(value));
}

}  // namespace edgelight

#endif  // EDGELIGHT_HALF_H_
