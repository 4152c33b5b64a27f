#pragma once

// q-shifted factorials (a;q)_n for every integer n and n = infinity.

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qseries/error.hpp"

namespace qseries {

template <class Real>
using Complex = std::complex<Real>;

// extended is the platform long double; quad is IEEE binary128 (software).
enum class WorkingPrecision { binary64, extended, quad };

namespace detail {

// Unqualified calls so that multiprecision Real types are found by ADL.
template <class T>
auto mabs(const T& x) {
  using std::abs;
  return abs(x);
}

template <class Real>
bool misfinite(const Real& x) {
  using std::isfinite;
  return isfinite(x);
}

template <class Real>
Real mldexp(const Real& x, int e) {
  using std::ldexp;
  return ldexp(x, e);
}

template <class Real>
Real mfrexp(const Real& x, int* e) {
  using std::frexp;
  return frexp(x, e);
}

}  // namespace detail

struct PrecisionConfig {
  WorkingPrecision working_precision = WorkingPrecision::binary64;
  double rel_tol = 1e-12;
  double pole_threshold = 1e-13;

  double machine_epsilon() const {
    switch (working_precision) {
      case WorkingPrecision::binary64: return std::numeric_limits<double>::epsilon();
      case WorkingPrecision::extended:
        return static_cast<double>(std::numeric_limits<long double>::epsilon());
      case WorkingPrecision::quad: return 0x1p-112;
    }
    return std::numeric_limits<double>::epsilon();
  }

  void validate() const {
    if (!(rel_tol > 0.0) || !(pole_threshold > 0.0)) {
      throw InvalidInput("precision: rel_tol and pole_threshold must be positive");
    }
    const double eps = machine_epsilon();
    if (rel_tol < eps || pole_threshold < eps) {
      throw InvalidInput("precision: tolerances below machine epsilon of the working precision");
    }
  }
};

// The base q, restricted to the open unit disc.
template <class Real>
class QBase {
 public:
  explicit QBase(Complex<Real> q) : q_(q) {
    if (!(detail::mabs(q) < Real(1))) {
      throw NonConvergent("q-base must satisfy |q| < 1, got |q| = " +
                          std::to_string(static_cast<double>(detail::mabs(q))));
    }
  }

  Complex<Real> value() const noexcept { return q_; }

 private:
  Complex<Real> q_;
};

template <class Real>
struct ValueWithError {
  Complex<Real> value{1};
  Real abs_err = 0;
  long terms_used = 0;
  // Set when an infinite product hit a (numerically) vanishing factor; the
  // value is then exactly zero.
  bool zero_factor = false;
};

// Integer power by repeated squaring; exponent may be negative.
template <class Real>
Complex<Real> ipow(Complex<Real> base, long long exponent) {
  if (exponent < 0) return Complex<Real>(1) / ipow(base, -exponent);
  Complex<Real> result(1);
  while (exponent > 0) {
    if (exponent & 1) result *= base;
    base *= base;
    exponent >>= 1;
  }
  return result;
}

namespace detail {

// |1 - x| is indistinguishable from zero relative to the size of the terms.
template <class Real>
bool vanishes(Complex<Real> x, double threshold) {
  return detail::mabs(Complex<Real>(1) - x) < Real(threshold) * (Real(1) + detail::mabs(x));
}

template <class Real>
bool is_finite(Complex<Real> x) {
  return detail::misfinite(x.real()) && detail::misfinite(x.imag());
}

// (a;q)_{-n} = 1/prod_{i=1..n}(1 - a q^{-i}), written factor by factor as
// prod (-q^i/a)/(1 - q^i/a).  Used when the closed form under/overflows.
template <class Real>
Complex<Real> negative_index_factorwise(Complex<Real> a, Complex<Real> q, long n) {
  Complex<Real> result(1);
  Complex<Real> qi(1);
  for (long i = 1; i <= n; ++i) {
    qi *= q;
    const Complex<Real> r = qi / a;
    result *= -r / (Complex<Real>(1) - r);
  }
  return result;
}

}  // namespace detail

// (a;q)_n for any integer n.  Negative n uses
//   (a;q)_{-n} = (-q/a)^n q^{n(n-1)/2} / (q/a;q)_n.
// A numerator factor below the pole threshold makes the value exactly 0; a
// vanishing denominator factor (negative n) raises PoleDetected.
template <class Real>
Complex<Real> qpoch_finite(Complex<Real> a, const QBase<Real>& base, long n,
                           const PrecisionConfig& cfg = {}) {
  const Complex<Real> q = base.value();
  if (n >= 0) {
    Complex<Real> result(1);
    Complex<Real> aqj = a;
    for (long j = 0; j < n; ++j) {
      if (detail::vanishes(aqj, cfg.pole_threshold)) return Complex<Real>(0);
      result *= Complex<Real>(1) - aqj;
      aqj *= q;
    }
    return result;
  }
  const long count = -n;
  if (a == Complex<Real>(0)) return Complex<Real>(1);
  const Complex<Real> q_over_a = q / a;
  Complex<Real> denom(1);
  Complex<Real> qj_over_a = q_over_a;
  for (long j = 0; j < count; ++j) {
    if (detail::vanishes(qj_over_a, cfg.pole_threshold)) {
      throw PoleDetected("(a;q)_n: factor 1 - a q^" + std::to_string(-(j + 1)) +
                             " vanishes for n = " + std::to_string(n),
                         n);
    }
    denom *= Complex<Real>(1) - qj_over_a;
    qj_over_a *= q;
  }
  const long long binom = static_cast<long long>(count) * (count - 1) / 2;
  const Complex<Real> closed = ipow(-q_over_a, count) * ipow(q, binom) / denom;
  if (detail::is_finite(closed) && closed != Complex<Real>(0)) return closed;
  return detail::negative_index_factorwise(a, q, count);
}

// 1/(b;q)_n, evaluated without forming the reciprocal of a vanishing product:
// for negative n a vanishing factor gives exactly 0 (the Pochhammer is
// infinite), for positive n it raises PoleDetected.
template <class Real>
Complex<Real> reciprocal_qpoch_finite(Complex<Real> b, const QBase<Real>& base, long n,
                                      const PrecisionConfig& cfg = {}) {
  const Complex<Real> q = base.value();
  if (n >= 0) {
    Complex<Real> denom(1);
    Complex<Real> bqj = b;
    for (long j = 0; j < n; ++j) {
      if (detail::vanishes(bqj, cfg.pole_threshold)) {
        throw PoleDetected("1/(b;q)_n: factor 1 - b q^" + std::to_string(j) + " vanishes",
                           j + 1);
      }
      denom *= Complex<Real>(1) - bqj;
      bqj *= q;
    }
    return Complex<Real>(1) / denom;
  }
  const long count = -n;
  if (b == Complex<Real>(0)) return Complex<Real>(1);
  // 1/(b;q)_{-n} = (q/b;q)_n / ((-q/b)^n q^{n(n-1)/2})
  const Complex<Real> q_over_b = q / b;
  Complex<Real> numer(1);
  Complex<Real> qj_over_b = q_over_b;
  for (long j = 0; j < count; ++j) {
    if (detail::vanishes(qj_over_b, cfg.pole_threshold)) return Complex<Real>(0);
    numer *= Complex<Real>(1) - qj_over_b;
    qj_over_b *= q;
  }
  const long long binom = static_cast<long long>(count) * (count - 1) / 2;
  const Complex<Real> closed = numer / (ipow(-q_over_b, count) * ipow(q, binom));
  if (detail::is_finite(closed) && closed != Complex<Real>(0)) return closed;
  return Complex<Real>(1) / detail::negative_index_factorwise(b, q, count);
}

// (a_1,...,a_k;q)_n.
template <class Real>
Complex<Real> qpoch_multi(std::span<const Complex<Real>> as, const QBase<Real>& base, long n,
                          const PrecisionConfig& cfg = {}) {
  Complex<Real> result(1);
  for (std::size_t i = 0; i < as.size(); ++i) {
    try {
      result *= qpoch_finite(as[i], base, n, cfg);
    } catch (const PoleDetected& pole) {
      throw PoleDetected(std::string(pole.what()) + " (parameter " + std::to_string(i) + ")",
                         pole.index(), i);
    }
  }
  return result;
}

// (a;q)_infinity.  Truncates at the first N >= 4 with |a||q|^N < rel_tol (1-|q|)
// and bounds the discarded tail by sum_{j>=N} |a||q|^j / (1 - |a||q|^j).
template <class Real>
ValueWithError<Real> qpoch_infinite(Complex<Real> a, const QBase<Real>& base,
                                    const PrecisionConfig& cfg = {}) {
  const Complex<Real> q = base.value();
  const Real abs_q = detail::mabs(q);
  const Real abs_a = detail::mabs(a);
  ValueWithError<Real> out;
  if (abs_a == Real(0)) return out;

  const Real eps = std::numeric_limits<Real>::epsilon();
  const Real stop = Real(cfg.rel_tol) * (Real(1) - abs_q);
  Complex<Real> product(1);
  Complex<Real> aqj = a;
  Real tail_magnitude = abs_a;  // |a||q|^j
  long n = 0;
  while (n < 4 || !(tail_magnitude < stop)) {
    if (detail::mabs(Complex<Real>(1) - aqj) < Real(cfg.pole_threshold)) {
      out.value = Complex<Real>(0);
      out.abs_err = 0;
      out.terms_used = n + 1;
      out.zero_factor = true;
      return out;
    }
    product *= Complex<Real>(1) - aqj;
    aqj *= q;
    tail_magnitude *= abs_q;
    ++n;
    if (tail_magnitude == Real(0)) break;
  }
  // |log prod_{j>=N}(1 - a q^j)| <= sum |a q^j|/(1 - |a q^j|), valid once |a||q|^N < 1/2.
  Real tail = 0;
  if (tail_magnitude > Real(0)) {
    tail = tail_magnitude / ((Real(1) - abs_q) * (Real(1) - tail_magnitude));
  }
  out.value = product;
  out.abs_err = detail::mabs(product) * (tail + Real(2 * n) * eps);
  out.terms_used = n;
  return out;
}

// Least j in [0, k_max) with 1 - b q^j within the pole threshold of zero.
template <class Real>
std::optional<long> detect_pole(Complex<Real> b, const QBase<Real>& base, long k_max,
                                const PrecisionConfig& cfg = {}) {
  const Complex<Real> q = base.value();
  Complex<Real> bqj = b;
  for (long j = 0; j < k_max; ++j) {
    if (detail::vanishes(bqj, cfg.pole_threshold)) return j;
    // |b q^j| only shrinks from here, so 1 - b q^j stays away from zero.
    if (cfg.pole_threshold < 1.0 / 3.0 && detail::mabs(bqj) < Real(0.5)) break;
    bqj *= q;
  }
  return std::nullopt;
}

}  // namespace qseries
