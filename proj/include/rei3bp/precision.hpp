#pragma once

// Scalar types for the three supported arithmetic contexts and a dispatcher
// that maps a runtime mantissa width onto a template instantiation.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/float128.hpp>
#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/cbrt.hpp>
#include <boost/math/special_functions/expm1.hpp>
#include <boost/math/special_functions/log1p.hpp>

#include <cmath>
#include <limits>
#include <type_traits>

#include "rei3bp/errors.hpp"

namespace rei3bp {

using Float53 = double;
using Float113 = boost::multiprecision::float128;
using Float256 = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<256, boost::multiprecision::digit_base_2>,
    boost::multiprecision::et_off>;

enum class Precision : int { Bits53 = 53, Bits113 = 113, Bits256 = 256 };

/// Validates a mantissa width; only 53, 113 and 256 bits are supported.
inline Precision precision_from_bits(int bits) {
  switch (bits) {
    case 53: return Precision::Bits53;
    case 113: return Precision::Bits113;
    case 256: return Precision::Bits256;
    default:
      throw Error(ErrorCode::UnsupportedPrecision,
                  "unsupported precision: " + std::to_string(bits) + " bits (use 53, 113 or 256)");
  }
}

/// Immutable arithmetic context. Shareable across threads.
class ArithmeticContext {
 public:
  explicit ArithmeticContext(int bits) : precision_(precision_from_bits(bits)) {}
  explicit ArithmeticContext(Precision p) : precision_(p) {}

  Precision precision() const noexcept { return precision_; }
  int bits() const noexcept { return static_cast<int>(precision_); }

  /// Invokes f with a tag of the scalar type for this context.
  template <class F>
  decltype(auto) visit(F&& f) const {
    switch (precision_) {
      case Precision::Bits113: return f(std::type_identity<Float113>{});
      case Precision::Bits256: return f(std::type_identity<Float256>{});
      case Precision::Bits53:
      default: return f(std::type_identity<Float53>{});
    }
  }

 private:
  Precision precision_;
};

template <class T>
inline constexpr int mantissa_bits = std::numeric_limits<T>::digits;

template <class T>
inline T machine_epsilon() {
  return std::numeric_limits<T>::epsilon();
}

template <class T>
inline T pi() {
  return boost::math::constants::pi<T>();
}

template <class T>
inline T two_pi() {
  return boost::math::constants::two_pi<T>();
}

/// Default event-location tolerance for a given scalar type: 1e-12 at double,
/// scaled with the mantissa for wider types.
template <class T>
inline T default_event_tolerance() {
  if constexpr (std::is_same_v<T, double>) {
    return 1e-12;
  } else {
    return T(1e4) * machine_epsilon<T>();
  }
}

template <class T>
inline T cbrt_(const T& x) {
  if constexpr (std::is_same_v<T, double>) return std::cbrt(x);
  else return boost::math::cbrt(x);
}

template <class T>
inline T expm1_(const T& x) {
  if constexpr (std::is_same_v<T, double>) return std::expm1(x);
  else return boost::math::expm1(x);
}

template <class T>
inline T log1p_(const T& x) {
  if constexpr (std::is_same_v<T, double>) return std::log1p(x);
  else return boost::math::log1p(x);
}

template <class T>
inline double to_double(const T& x) {
  return static_cast<double>(x);
}

}  // namespace rei3bp
