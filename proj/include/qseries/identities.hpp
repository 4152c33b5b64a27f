#pragma once

// The identity registry, parameter assignments, expression evaluation and the
// admissible-parameter sampler.

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qseries/formula.hpp"
#include "qseries/qcore.hpp"
#include "qseries/series.hpp"

namespace qseries {

enum class ToleranceClass { A, B };

double tolerance_of(ToleranceClass c);

struct IdentityRecord {
  std::string id;
  std::vector<Symbol> parameters;
  bool requires_m = false;
  std::vector<ModulusCondition> constraints;
  Expression lhs;
  Expression rhs;
  std::string anchor;
  ToleranceClass tolerance_class = ToleranceClass::A;

  double tolerance() const { return tolerance_of(tolerance_class); }
  bool has_parameter(Symbol s) const;
};

struct ParameterAssignment {
  std::map<Symbol, std::complex<double>> values;
  std::complex<double> q{0.5, 0.0};
  std::optional<int> m;

  std::complex<double> at(Symbol s) const;
  bool has(Symbol s) const { return values.count(s) != 0; }
};

// The twelve records, in a fixed order.  Built once; immutable afterwards.
const std::vector<IdentityRecord>& registry();

// nullptr when the id is unknown.
const IdentityRecord* find_identity(std::string_view id);

// Monomial whose square the given square-root symbol must equal.
Monomial sqrt_radicand(Symbol s);

// Fills every square-root symbol the record needs and the assignment lacks
// with the principal square root of its radicand.
void complete_sqrt_symbols(const IdentityRecord& record, ParameterAssignment& asg);

// Throws InvalidInput when a record parameter is missing, |q| >= 1, m is
// missing / negative for a semi-finite record, or a square-root symbol fails
// sqrt^2 = radicand to relative error 1e-14.
void validate_assignment(const IdentityRecord& record, const ParameterAssignment& asg);

std::complex<double> evaluate_monomial(const Monomial& mono, const ParameterAssignment& asg);

std::vector<ModulusCheck> concrete_constraints(const std::vector<ModulusCondition>& conditions,
                                               const ParameterAssignment& asg);

DomainReport check_domain(const IdentityRecord& record, const ParameterAssignment& asg);

template <class Real>
TermRatioSeriesSpec<Real> instantiate_series(const SeriesFormula& formula,
                                             const ParameterAssignment& asg);

// Sum over the terms of (prefactor value) * (series value), with a first-order
// composed error estimate.
template <class Real>
ValueWithError<Real> eval_expression(const Expression& expr, const ParameterAssignment& asg,
                                     const EvalControl& ctrl = {});

struct AdaptiveValue {
  std::complex<double> value;
  double abs_err = 0.0;
  long terms_used = 0;
  WorkingPrecision used = WorkingPrecision::binary64;
};

// Evaluates in the configured precision and repeats the evaluation in quad
// precision when the error estimate exceeds rel_target * |value|.  Large
// summands that cancel (semi-finite sums far outside the bilateral annulus)
// are the usual cause.
AdaptiveValue eval_expression_adaptive(const Expression& expr, const ParameterAssignment& asg,
                                       const EvalControl& ctrl, double rel_target);

// Assignments sampled per (seed, index).  |q| is uniform in [q_min, q_max]
// and every parameter modulus log-uniform in [modulus_min, modulus_max], all
// phases (q included) uniform in [0, 2pi).
struct SamplerOptions {
  double margin = 0.08;
  double q_min = 0.1;
  double q_max = 0.8;
  double modulus_min = 0.2;
  double modulus_max = 2.0;
  std::vector<ModulusCondition> extra_constraints;
  // Values of m at which denominator parameters are screened for poles
  // (ignored for records without m).
  std::vector<int> pole_check_m{0, 1, 2, 3, 5, 8, 13};
  long pole_check_terms = 200;
  // A denominator factor 1 - x counts as a pole when |1 - x| < threshold * (1 + |x|).
  double pole_screen_threshold = 1e-8;
  long max_rejections = 10000;
  // Draw f and then overwrite it with b (the 6psi6 limit of the 8phi7 forms).
  bool f_equals_b = false;
};

ParameterAssignment sample_admissible(const IdentityRecord& record, std::uint64_t seed,
                                      std::uint64_t index, double margin);

ParameterAssignment sample_admissible(const IdentityRecord& record, std::uint64_t seed,
                                      std::uint64_t index, const SamplerOptions& options);

// True when every condition holds with the sampler's slack:
// |smaller| <= (1 - margin) * bound * |larger|.
bool satisfies_with_margin(const std::vector<ModulusCondition>& conditions,
                           const ParameterAssignment& asg, double margin);

}  // namespace qseries
