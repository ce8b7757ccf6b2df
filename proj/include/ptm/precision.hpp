// Copyright 2026 The ptmoments Authors
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

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace ptm {

using BigInt = boost::multiprecision::cpp_int;

/// Software float with `Digits` significant decimal digits. Expression
/// templates are off so generic code can use `auto` freely.
template <unsigned Digits>
using Float = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<Digits>,
    boost::multiprecision::et_off>;

using Float60 = Float<60>;
using Float120 = Float<120>;
using Float240 = Float<240>;
using Float480 = Float<480>;

/// The precision ladder. Requests are rounded up to the next rung; the
/// top rung is the hard ceiling.
inline constexpr unsigned kPrecisionLadder[] = {60, 120, 240, 480};
inline constexpr unsigned kDefaultDigits = 60;
inline constexpr unsigned kMaxDigits = 480;

template <class Real>
constexpr unsigned digits_of() {
  return static_cast<unsigned>(std::numeric_limits<Real>::digits10);
}

inline unsigned ladder_rung(unsigned digits) {
  for (unsigned rung : kPrecisionLadder) {
    if (digits <= rung) return rung;
  }
  throw std::invalid_argument("precision of " + std::to_string(digits) +
                              " digits exceeds the supported maximum of " +
                              std::to_string(kMaxDigits));
}

/// Calls `fn(tag)` where `decltype(tag)::type` is the float type for the
/// smallest ladder rung holding `digits` decimal digits.
template <class T>
struct TypeTag {
  using type = T;
};

template <class Fn>
decltype(auto) with_precision(unsigned digits, Fn&& fn) {
  switch (ladder_rung(digits)) {
    case 60:
      return fn(TypeTag<Float60>{});
    case 120:
      return fn(TypeTag<Float120>{});
    case 240:
      return fn(TypeTag<Float240>{});
    default:
      return fn(TypeTag<Float480>{});
  }
}

/// Decision tolerance used by verdicts computed in `Real`. Double keeps the
/// fixed 1e-10; software floats use half of their decimal digits, so the
/// tolerance tracks what the arithmetic can actually resolve.
template <class Real>
Real default_tolerance() {
  if constexpr (std::is_floating_point_v<Real>) {
    return Real(1e-10);
  } else {
    return pow(Real(10), -static_cast<int>(digits_of<Real>() / 2));
  }
}

/// Tolerance for a nominal precision request, independent of the arithmetic
/// type used to evaluate it.
inline double tolerance_for_digits(unsigned digits) {
  return std::pow(10.0, -static_cast<double>(digits) / 2.0);
}

template <class Real>
Real to_real(const BigInt& value) {
  if constexpr (std::is_floating_point_v<Real>) {
    return static_cast<Real>(value);
  } else {
    return Real(value);
  }
}

template <class Real>
double to_double(const Real& value) {
  if constexpr (std::is_floating_point_v<Real>) {
    return static_cast<double>(value);
  } else {
    return value.template convert_to<double>();
  }
}

}  // namespace ptm
