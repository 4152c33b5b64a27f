#pragma once

// Term generation and summation for unilateral r+1 phi r, bilateral s psi s and
// semi-finite sums  sum_{k >= -m} G(k, m).
//
// Every series is described by its term ratio: the k-th term is
//   prod_i (a_i;q)_k / prod_j (b_j;q)_k * z^k
// where the denominator list additionally contains q when the (q;q)_k of the
// unilateral normalisation is present.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qseries/error.hpp"
#include "qseries/qcore.hpp"

namespace qseries {

enum class LowerLimitKind { from_zero, from_minus_m, bilateral };

struct LowerLimit {
  LowerLimitKind kind = LowerLimitKind::from_zero;
  int m = 0;

  static LowerLimit from_zero() { return {LowerLimitKind::from_zero, 0}; }
  static LowerLimit from_minus_m(int m) { return {LowerLimitKind::from_minus_m, m}; }
  static LowerLimit bilateral() { return {LowerLimitKind::bilateral, 0}; }
};

template <class Real>
struct TermRatioSeriesSpec {
  std::vector<Complex<Real>> numerator_params;
  std::vector<Complex<Real>> denominator_params;
  Complex<Real> argument{0};
  // When set to s, the very-well-poised pair (qs, -qs; q)_k / (s, -s; q)_k
  // multiplies every term.
  std::optional<Complex<Real>> very_well_poised_sqrt;
  LowerLimit lower_limit;
  bool unilateral_q_factor = true;

  void validate() const {
    if (lower_limit.m < 0) throw InvalidInput("series: m must be nonnegative");
    if (lower_limit.kind == LowerLimitKind::from_zero && !unilateral_q_factor) {
      throw InvalidInput("series: a sum from k = 0 carries the (q;q)_k normalisation");
    }
    if (lower_limit.kind == LowerLimitKind::bilateral && unilateral_q_factor) {
      throw InvalidInput("series: a bilateral sum has no (q;q)_k normalisation");
    }
  }

  // Parameter lists with the very-well-poised pair and (q;q)_k folded in.
  std::vector<Complex<Real>> effective_numerators(Complex<Real> q) const {
    std::vector<Complex<Real>> out = numerator_params;
    if (very_well_poised_sqrt) {
      out.push_back(q * *very_well_poised_sqrt);
      out.push_back(-q * *very_well_poised_sqrt);
    }
    return out;
  }

  std::vector<Complex<Real>> effective_denominators(Complex<Real> q) const {
    std::vector<Complex<Real>> out = denominator_params;
    if (very_well_poised_sqrt) {
      out.push_back(*very_well_poised_sqrt);
      out.push_back(-*very_well_poised_sqrt);
    }
    if (unilateral_q_factor) out.push_back(q);
    return out;
  }

  long first_index() const {
    switch (lower_limit.kind) {
      case LowerLimitKind::from_zero: return 0;
      case LowerLimitKind::from_minus_m: return -static_cast<long>(lower_limit.m);
      case LowerLimitKind::bilateral: return std::numeric_limits<long>::min();
    }
    return 0;
  }
};

struct SummationControl {
  double rel_tol = 1e-12;
  int consecutive_small = 3;
  long max_terms = 100000;

  void validate() const {
    if (!(rel_tol > 0.0)) throw InvalidInput("summation: rel_tol must be positive");
    if (consecutive_small < 1 || max_terms < consecutive_small) {
      throw InvalidInput("summation: need max_terms >= consecutive_small >= 1");
    }
  }
};

struct EvalControl {
  PrecisionConfig precision;
  SummationControl summation;
};

// |smaller| < bound * |larger|, or |smaller| < bound when `larger` is absent.
struct ModulusCheck {
  std::string description;
  std::complex<double> smaller;
  std::optional<std::complex<double>> larger;
  double bound = 1.0;

  double actual_ratio() const {
    const double top = detail::mabs(smaller);
    return larger ? top / detail::mabs(*larger) : top;
  }
  bool holds() const { return actual_ratio() < bound; }
};

struct DomainViolation {
  std::string description;
  double actual_modulus;
};

struct DomainReport {
  bool satisfied = true;
  std::vector<DomainViolation> violations;
};

namespace detail {

// Running product kept as mantissa * 2^exponent so that long products of
// large and small Pochhammer values do not overflow before they cancel.
template <class Real>
class ScaledProduct {
 public:
  void multiply(Complex<Real> x) {
    mantissa_ *= x;
    renormalise();
  }
  void divide(Complex<Real> x) {
    mantissa_ /= x;
    renormalise();
  }
  Complex<Real> value() const {
    return Complex<Real>(detail::mldexp(mantissa_.real(), exponent_),
                         detail::mldexp(mantissa_.imag(), exponent_));
  }

 private:
  void renormalise() {
    const Real scale = std::max(detail::mabs(mantissa_.real()), detail::mabs(mantissa_.imag()));
    if (scale == Real(0) || !detail::misfinite(scale)) return;
    int e = 0;
    detail::mfrexp(scale, &e);
    mantissa_ =
        Complex<Real>(detail::mldexp(mantissa_.real(), -e), detail::mldexp(mantissa_.imag(), -e));
    exponent_ += e;
  }

  Complex<Real> mantissa_{1};
  int exponent_ = 0;
};

template <class Real>
struct SideSum {
  Complex<Real> value{0};
  Real abs_sum = 0;
  Complex<Real> last{0};
  Complex<Real> previous{0};
  long terms = 0;
  bool terminated = false;
};

template <class Real>
Real side_error(const SideSum<Real>& side, Real asymptotic_ratio, std::size_t factors_per_term) {
  const Real eps = std::numeric_limits<Real>::epsilon();
  Real truncation = 0;
  if (!side.terminated && side.last != Complex<Real>(0)) {
    Real ratio = asymptotic_ratio;
    if (side.previous != Complex<Real>(0)) {
      ratio = std::max(ratio, detail::mabs(side.last) / detail::mabs(side.previous));
    }
    ratio = std::min(ratio, Real(0.999));
    truncation = detail::mabs(side.last) * ratio / (Real(1) - ratio);
  }
  const Real rounding =
      eps * Real(side.terms + 1) * Real(factors_per_term + 2) * side.abs_sum;
  return truncation + rounding;
}

// |term| below rel_tol * |sum|, where |sum| is floored at eps * sum|t_k|: a
// sum smaller than that is rounding noise, and a floor of 1 would stop too
// early on sums that are small only because their terms cancel.
template <class Real>
bool stop_rule(Complex<Real> term, const SideSum<Real>& side, const SummationControl& ctrl,
               int& small) {
  const Real floor = std::numeric_limits<Real>::epsilon() * side.abs_sum;
  if (detail::mabs(term) < Real(ctrl.rel_tol) * std::max(floor, detail::mabs(side.value))) {
    ++small;
  } else {
    small = 0;
  }
  return small >= ctrl.consecutive_small;
}

// First index from which |p q^k| < 1/2 for every parameter p (or |q^k / p| < 1/2
// when `inverted`), i.e. where the term ratio has settled near its limit and a
// run of small terms really is a decaying tail.  Before that, terms can dip
// and grow again.
template <class Real>
long asymptotic_start(const std::vector<Complex<Real>>& params, Complex<Real> q, bool inverted,
                      long cap) {
  const double log_q = std::log(static_cast<double>(mabs(q)));
  long start = 0;
  for (const auto& p : params) {
    const double r = static_cast<double>(mabs(p));
    if (r == 0.0) continue;
    const double size = inverted ? 1.0 / r : r;
    if (size < 0.5) continue;
    const double k = std::ceil(std::log(0.5 / size) / log_q);
    start = std::max(start, static_cast<long>(std::min(k, static_cast<double>(cap))));
  }
  return start;
}

// Sums t_k for k = 0, 1, 2, ... with t_0 = 1 and
//   t_{k+1} = t_k * z * prod(1 - a_i q^k) / prod(1 - b_j q^k).
template <class Real>
SideSum<Real> sum_upward(const std::vector<Complex<Real>>& nums,
                         const std::vector<Complex<Real>>& dens, Complex<Real> z,
                         Complex<Real> q, const EvalControl& ctrl) {
  SideSum<Real> side;
  Complex<Real> term(1);
  Complex<Real> qk(1);
  int small = 0;
  long settled = asymptotic_start(nums, q, false, ctrl.summation.max_terms);
  settled = std::max(settled, asymptotic_start(dens, q, false, ctrl.summation.max_terms));
  for (long k = 0;; ++k) {
    side.value += term;
    side.abs_sum += detail::mabs(term);
    side.previous = side.last;
    side.last = term;
    side.terms = k + 1;
    if (!detail::is_finite(side.value)) {
      throw NonConvergent("series: partial sum overflowed after " + std::to_string(k + 1) +
                          " terms");
    }
    if (term == Complex<Real>(0)) {
      side.terminated = true;
      return side;
    }
    if (stop_rule(term, side, ctrl.summation, small) && k >= settled) return side;
    if (side.terms >= ctrl.summation.max_terms) {
      throw NonConvergent("series: no convergence within " +
                          std::to_string(ctrl.summation.max_terms) + " terms");
    }
    Complex<Real> ratio = z;
    for (const auto& a : nums) {
      const Complex<Real> aqk = a * qk;
      if (vanishes(aqk, ctrl.precision.pole_threshold)) {
        ratio = Complex<Real>(0);
        break;
      }
      ratio *= Complex<Real>(1) - aqk;
    }
    for (std::size_t j = 0; j < dens.size() && ratio != Complex<Real>(0); ++j) {
      const Complex<Real> bqk = dens[j] * qk;
      if (vanishes(bqk, ctrl.precision.pole_threshold)) {
        throw PoleDetected("series: denominator factor 1 - b q^" + std::to_string(k) +
                               " vanishes (parameter " + std::to_string(j) + ")",
                           k + 1, j);
      }
      ratio /= Complex<Real>(1) - bqk;
    }
    term *= ratio;
    qk *= q;
  }
}

// Sums t_k for k = -1, -2, ... of a bilateral series with t_0 = 1, using
//   t_{-n}/t_{-n+1} = prod(1 - b_j q^{-n}) / prod(1 - a_i q^{-n}) / z
// with each factor written as -p q^{-n} (1 - q^n/p).
template <class Real>
SideSum<Real> sum_downward(const std::vector<Complex<Real>>& nums,
                           const std::vector<Complex<Real>>& dens, Complex<Real> z,
                           Complex<Real> q, const EvalControl& ctrl) {
  SideSum<Real> side;
  Complex<Real> constant = Complex<Real>(1) / z;
  long power = 0;  // net exponent of q^{-n} per step
  std::vector<Complex<Real>> nz_nums;
  std::vector<Complex<Real>> nz_dens;
  for (const auto& a : nums) {
    if (a != Complex<Real>(0)) {
      nz_nums.push_back(a);
      constant /= -a;
      --power;
    }
  }
  for (const auto& b : dens) {
    if (b != Complex<Real>(0)) {
      nz_dens.push_back(b);
      constant *= -b;
      ++power;
    }
  }
  Complex<Real> term(1);
  Complex<Real> qn(1);
  int small = 0;
  long settled = asymptotic_start(nz_nums, q, true, ctrl.summation.max_terms);
  settled = std::max(settled, asymptotic_start(nz_dens, q, true, ctrl.summation.max_terms));
  for (long n = 1;; ++n) {
    qn *= q;
    Complex<Real> ratio = constant * ipow(qn, -power);
    bool zero = false;
    for (const auto& b : nz_dens) {
      const Complex<Real> x = qn / b;
      if (vanishes(x, ctrl.precision.pole_threshold)) {
        zero = true;
        break;
      }
      ratio *= Complex<Real>(1) - x;
    }
    if (zero) {
      side.terminated = true;
      return side;
    }
    for (std::size_t i = 0; i < nz_nums.size(); ++i) {
      const Complex<Real> x = qn / nz_nums[i];
      if (vanishes(x, ctrl.precision.pole_threshold)) {
        throw PoleDetected("series: (a;q)_{-n} has a vanishing factor at n = " +
                               std::to_string(n),
                           -n, i);
      }
      ratio /= Complex<Real>(1) - x;
    }
    term *= ratio;
    side.value += term;
    side.abs_sum += detail::mabs(term);
    side.previous = side.last;
    side.last = term;
    side.terms = n;
    if (!detail::is_finite(side.value)) {
      throw NonConvergent("series: negative-index partial sum overflowed after " +
                          std::to_string(n) + " terms");
    }
    if (stop_rule(term, side, ctrl.summation, small) && n >= settled) return side;
    if (side.terms >= ctrl.summation.max_terms) {
      throw NonConvergent("series: negative-index side did not converge within " +
                          std::to_string(ctrl.summation.max_terms) + " terms");
    }
  }
}

// A numerator factor 1 - a q^j vanishes within the summation window, so the
// upward series is a terminating polynomial.
template <class Real>
bool terminates(const std::vector<Complex<Real>>& nums, const QBase<Real>& base,
                const EvalControl& ctrl) {
  for (const auto& a : nums) {
    if (detect_pole(a, base, ctrl.summation.max_terms, ctrl.precision)) return true;
  }
  return false;
}

}  // namespace detail

// The k-th summand as a product of q-shifted factorials times z^k; negative k
// go through the (a;q)_{-n} closed form.
template <class Real>
Complex<Real> term_at(const TermRatioSeriesSpec<Real>& spec, const QBase<Real>& base, long k,
                      const PrecisionConfig& cfg = {}) {
  spec.validate();
  if (k < spec.first_index()) {
    throw InvalidInput("term_at: index " + std::to_string(k) + " is below the lower limit");
  }
  const Complex<Real> q = base.value();
  const auto nums = spec.effective_numerators(q);
  const auto dens = spec.effective_denominators(q);
  detail::ScaledProduct<Real> product;
  const std::size_t pairs = std::max(nums.size(), dens.size());
  for (std::size_t i = 0; i < pairs; ++i) {
    if (i < nums.size()) {
      try {
        product.multiply(qpoch_finite(nums[i], base, k, cfg));
      } catch (const PoleDetected& pole) {
        throw PoleDetected(std::string(pole.what()) + " (numerator " + std::to_string(i) + ")",
                           k, i);
      }
    }
    if (i < dens.size()) {
      try {
        product.multiply(reciprocal_qpoch_finite(dens[i], base, k, cfg));
      } catch (const PoleDetected& pole) {
        throw PoleDetected(std::string(pole.what()) + " (denominator " + std::to_string(i) +
                               ")",
                           k, i);
      }
    }
  }
  if (k != 0) {
    if (spec.argument == Complex<Real>(0)) {
      if (k < 0) throw ZeroArgument("term_at: z = 0 with a negative index");
      return Complex<Real>(0);
    }
    product.multiply(ipow(spec.argument, k));
  }
  return product.value();
}

// The modulus conditions under which the series itself converges, plus any
// caller-supplied conditions.
template <class Real>
DomainReport convergence_check(const TermRatioSeriesSpec<Real>& spec, const QBase<Real>& base,
                               const std::vector<ModulusCheck>& constraints,
                               const EvalControl& ctrl = {}) {
  DomainReport report;
  auto add = [&report](const ModulusCheck& check) {
    if (!check.holds()) {
      report.satisfied = false;
      report.violations.push_back({check.description, check.actual_ratio()});
    }
  };
  for (const auto& check : constraints) add(check);

  const Complex<Real> q = base.value();
  const Complex<Real> z = spec.argument;
  const auto to_double = [](Complex<Real> x) {
    return std::complex<double>(static_cast<double>(x.real()), static_cast<double>(x.imag()));
  };
  std::vector<Complex<Real>> nums = spec.effective_numerators(q);
  std::vector<Complex<Real>> dens = spec.effective_denominators(q);
  if (spec.lower_limit.kind == LowerLimitKind::from_minus_m) {
    const Complex<Real> shift = ipow(q, -static_cast<long long>(spec.lower_limit.m));
    for (auto& a : nums) a *= shift;
  }
  if (!detail::terminates(nums, base, ctrl)) {
    add({"|z| < 1", to_double(z), std::nullopt, 1.0});
  }
  if (spec.lower_limit.kind == LowerLimitKind::bilateral) {
    Complex<Real> num_product(1);
    Complex<Real> den_product(1);
    long nonzero_nums = 0;
    long nonzero_dens = 0;
    for (const auto& a : spec.effective_numerators(q)) {
      if (a != Complex<Real>(0)) {
        num_product *= a;
        ++nonzero_nums;
      }
    }
    for (const auto& b : dens) {
      if (b != Complex<Real>(0)) {
        den_product *= b;
        ++nonzero_dens;
      }
    }
    if (nonzero_dens > nonzero_nums) {
      report.satisfied = false;
      report.violations.push_back({"negative-index side diverges (more denominator parameters)",
                                   std::numeric_limits<double>::infinity()});
    } else if (nonzero_dens == nonzero_nums) {
      add({"|prod b / (prod a * z)| < 1", to_double(den_product), to_double(num_product * z),
           1.0});
    }
  }
  return report;
}

// Sum over k >= 0 of the unilateral series.
template <class Real>
ValueWithError<Real> eval_unilateral(const TermRatioSeriesSpec<Real>& spec,
                                     const QBase<Real>& base, const EvalControl& ctrl = {}) {
  spec.validate();
  ctrl.precision.validate();
  ctrl.summation.validate();
  if (spec.lower_limit.kind != LowerLimitKind::from_zero) {
    throw InvalidInput("eval_unilateral: spec must start at k = 0");
  }
  const Complex<Real> q = base.value();
  const auto nums = spec.effective_numerators(q);
  const auto dens = spec.effective_denominators(q);
  if (spec.argument != Complex<Real>(0) && !(detail::mabs(spec.argument) < Real(1)) &&
      !detail::terminates(nums, base, ctrl)) {
    throw NonConvergent("eval_unilateral: |z| >= 1 and the series does not terminate");
  }
  const auto side = detail::sum_upward(nums, dens, spec.argument, q, ctrl);
  ValueWithError<Real> out;
  out.value = side.value;
  out.abs_err = detail::side_error(side, detail::mabs(spec.argument), nums.size() + dens.size());
  out.terms_used = side.terms;
  return out;
}

// Sum over all integers k, as two independent one-sided sums (k >= 0 and k <= -1).
template <class Real>
ValueWithError<Real> eval_bilateral(const TermRatioSeriesSpec<Real>& spec,
                                    const QBase<Real>& base, const EvalControl& ctrl = {}) {
  spec.validate();
  ctrl.precision.validate();
  ctrl.summation.validate();
  if (spec.lower_limit.kind != LowerLimitKind::bilateral) {
    throw InvalidInput("eval_bilateral: spec must be bilateral");
  }
  if (spec.argument == Complex<Real>(0)) {
    throw ZeroArgument("eval_bilateral: z = 0 leaves negative powers undefined");
  }
  const auto domain = convergence_check(spec, base, {}, ctrl);
  if (!domain.satisfied) {
    throw NonConvergent("eval_bilateral: outside the convergence annulus (" +
                        domain.violations.front().description + ")");
  }
  const Complex<Real> q = base.value();
  const auto nums = spec.effective_numerators(q);
  const auto dens = spec.effective_denominators(q);
  const auto upper = detail::sum_upward(nums, dens, spec.argument, q, ctrl);
  const auto lower = detail::sum_downward(nums, dens, spec.argument, q, ctrl);

  Complex<Real> num_product(1);
  Complex<Real> den_product(1);
  for (const auto& a : nums) {
    if (a != Complex<Real>(0)) num_product *= a;
  }
  for (const auto& b : dens) {
    if (b != Complex<Real>(0)) den_product *= b;
  }
  const Real lower_ratio = detail::mabs(den_product / (num_product * spec.argument));
  const std::size_t factors = nums.size() + dens.size();
  ValueWithError<Real> out;
  out.value = upper.value + lower.value;
  out.abs_err = detail::side_error(upper, detail::mabs(spec.argument), factors) +
                detail::side_error(lower, lower_ratio, factors);
  out.terms_used = upper.terms + lower.terms;
  return out;
}

// The unilateral spec of A(k) = G(k - m, m) / G(-m, m): every parameter
// multiplied by q^{-m}, summed from k = 0 with no extra normalisation.
template <class Real>
TermRatioSeriesSpec<Real> shifted_spec(const TermRatioSeriesSpec<Real>& spec,
                                       const QBase<Real>& base) {
  const Complex<Real> q = base.value();
  const Complex<Real> shift = ipow(q, -static_cast<long long>(spec.lower_limit.m));
  TermRatioSeriesSpec<Real> out;
  out.numerator_params = spec.effective_numerators(q);
  out.denominator_params = spec.effective_denominators(q);
  for (auto& a : out.numerator_params) a *= shift;
  for (auto& b : out.denominator_params) b *= shift;
  out.argument = spec.argument;
  out.lower_limit = LowerLimit::from_minus_m(0);
  out.unilateral_q_factor = false;
  return out;
}

template <class Real>
struct SemifiniteStart {
  TermRatioSeriesSpec<Real> spec;
  Complex<Real> leading;
};

// Leading terms that vanish identically (an infinite denominator Pochhammer
// such as (q;q)_{-n}) move the effective lower limit up; returns the trimmed
// spec and its first term G(-m, m).
template <class Real>
SemifiniteStart<Real> trim_leading_zeros(const TermRatioSeriesSpec<Real>& spec,
                                         const QBase<Real>& base, const PrecisionConfig& cfg) {
  SemifiniteStart<Real> out{spec, Complex<Real>(0)};
  out.leading = term_at(out.spec, base, -out.spec.lower_limit.m, cfg);
  while (out.leading == Complex<Real>(0) && out.spec.lower_limit.m > 0) {
    --out.spec.lower_limit.m;
    out.leading = term_at(out.spec, base, -out.spec.lower_limit.m, cfg);
  }
  return out;
}

// Sum over k >= -m, computed as G(-m, m) * sum_{k >= 0} A(k).
template <class Real>
ValueWithError<Real> eval_semifinite(const TermRatioSeriesSpec<Real>& spec,
                                     const QBase<Real>& base, const EvalControl& ctrl = {}) {
  spec.validate();
  ctrl.precision.validate();
  ctrl.summation.validate();
  if (spec.lower_limit.kind != LowerLimitKind::from_minus_m) {
    throw InvalidInput("eval_semifinite: spec must start at k = -m");
  }
  if (spec.argument == Complex<Real>(0)) {
    throw ZeroArgument("eval_semifinite: z = 0 leaves negative powers undefined");
  }
  const auto [working, leading] = trim_leading_zeros(spec, base, ctrl.precision);
  const auto shifted = shifted_spec(working, base);
  const Complex<Real> q = base.value();
  if (!(detail::mabs(spec.argument) < Real(1)) &&
      !detail::terminates(shifted.numerator_params, base, ctrl)) {
    throw NonConvergent("eval_semifinite: |z| >= 1 and the series does not terminate");
  }
  const auto side = detail::sum_upward(shifted.numerator_params, shifted.denominator_params,
                                       spec.argument, q, ctrl);
  const std::size_t factors =
      shifted.numerator_params.size() + shifted.denominator_params.size();
  const Real eps = std::numeric_limits<Real>::epsilon();
  ValueWithError<Real> out;
  out.value = leading * side.value;
  out.abs_err = detail::mabs(leading) *
                    detail::side_error(side, detail::mabs(spec.argument), factors) +
                detail::mabs(out.value) * eps * Real(factors * (working.lower_limit.m + 1) + 1);
  out.terms_used = side.terms;
  return out;
}

template <class Real>
ValueWithError<Real> eval_series(const TermRatioSeriesSpec<Real>& spec, const QBase<Real>& base,
                                 const EvalControl& ctrl = {}) {
  switch (spec.lower_limit.kind) {
    case LowerLimitKind::from_zero: return eval_unilateral(spec, base, ctrl);
    case LowerLimitKind::from_minus_m: return eval_semifinite(spec, base, ctrl);
    case LowerLimitKind::bilateral: return eval_bilateral(spec, base, ctrl);
  }
  throw InvalidInput("eval_series: unknown lower limit");
}

struct ShiftFactorizationReport {
  int m = 0;
  std::vector<long> ks;
  std::vector<double> discrepancies;
  double max_rel_discrepancy = 0.0;
};

// Compares G(k - m, m), evaluated directly, with G(-m, m) * A(k).
template <class Real>
ShiftFactorizationReport check_shift_factorization(const TermRatioSeriesSpec<Real>& spec,
                                                   const QBase<Real>& base,
                                                   const std::vector<long>& sample_ks,
                                                   const PrecisionConfig& cfg = {}) {
  if (spec.lower_limit.kind != LowerLimitKind::from_minus_m) {
    throw InvalidInput("check_shift_factorization: spec must start at k = -m");
  }
  const long m = spec.lower_limit.m;
  const auto shifted = shifted_spec(spec, base);
  const Complex<Real> leading = term_at(spec, base, -m, cfg);
  ShiftFactorizationReport report;
  report.m = static_cast<int>(m);
  for (long k : sample_ks) {
    if (k < 0) throw InvalidInput("check_shift_factorization: k must be nonnegative");
    const Complex<Real> direct = term_at(spec, base, k - m, cfg);
    const Complex<Real> factored = leading * term_at(shifted, base, k, cfg);
    const Real scale = std::max(detail::mabs(direct), detail::mabs(factored));
    const double discrepancy =
        scale == Real(0) ? 0.0 : static_cast<double>(detail::mabs(direct - factored) / scale);
    report.ks.push_back(k);
    report.discrepancies.push_back(discrepancy);
    report.max_rel_discrepancy = std::max(report.max_rel_discrepancy, discrepancy);
  }
  return report;
}

}  // namespace qseries
