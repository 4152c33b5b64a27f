#include <cmath>
#include <limits>

#include "qseries/identities.hpp"
#include "qseries/quad.hpp"

namespace qseries {

std::complex<double> ParameterAssignment::at(Symbol s) const {
  const auto it = values.find(s);
  if (it == values.end()) {
    throw InvalidInput("assignment has no value for symbol " + std::string(symbol_name(s)));
  }
  return it->second;
}

Monomial sqrt_radicand(Symbol s) {
  const Monomial a = Monomial::symbol(Symbol::a);
  switch (s) {
    case Symbol::sqrt_a: return a;
    case Symbol::sqrt_efc:
      return Monomial::symbol(Symbol::e) * Monomial::symbol(Symbol::f) /
             Monomial::symbol(Symbol::c);
    case Symbol::sqrt_b2a: return power(Monomial::symbol(Symbol::b), 2) / a;
    default: break;
  }
  throw InvalidInput("symbol " + std::string(symbol_name(s)) + " is not a square root");
}

namespace {

template <class Real>
Complex<Real> widen(std::complex<double> x) {
  return {static_cast<Real>(x.real()), static_cast<Real>(x.imag())};
}

template <class Real>
Complex<Real> monomial_value(const Monomial& mono, const ParameterAssignment& asg) {
  Complex<Real> out(static_cast<Real>(mono.sign));
  for (Symbol s : kAllSymbols) {
    const int p = mono.powers[static_cast<std::size_t>(s)];
    if (p != 0) out *= ipow(widen<Real>(asg.at(s)), p);
  }
  int m = 0;
  if (mono.q_power.depends_on_m()) {
    if (!asg.m) throw InvalidInput("formula depends on m but the assignment has none");
    m = *asg.m;
  }
  const int qexp = mono.q_power.at(m);
  if (qexp != 0) out *= ipow(widen<Real>(asg.q), qexp);
  return out;
}

int count_value(const Affine& count, const ParameterAssignment& asg) {
  if (!count.depends_on_m()) return count.constant;
  if (!asg.m) throw InvalidInput("formula depends on m but the assignment has none");
  return count.at(*asg.m);
}

template <class Real>
struct AtomValue {
  Complex<Real> value;
  Real rel_err;
};

template <class Real>
AtomValue<Real> eval_atom(const PrefactorAtom& atom, const ParameterAssignment& asg,
                          const QBase<Real>& base, bool in_denominator, const EvalControl& ctrl) {
  const Real eps = std::numeric_limits<Real>::epsilon();
  const auto pole = [&atom](const std::string& why) {
    return PoleDetected("prefactor " + atom.to_string() + " vanishes in a denominator (" + why +
                            ")",
                        0);
  };
  switch (atom.kind) {
    case AtomKind::poch_infinite: {
      const auto v = qpoch_infinite(monomial_value<Real>(atom.arg, asg), base, ctrl.precision);
      if (v.zero_factor || v.value == Complex<Real>(0)) {
        if (in_denominator) throw pole("zero factor");
        return {Complex<Real>(0), 0};
      }
      return {v.value, v.abs_err / detail::mabs(v.value)};
    }
    case AtomKind::poch_finite: {
      const int n = count_value(atom.count, asg);
      Complex<Real> v;
      try {
        v = qpoch_finite(monomial_value<Real>(atom.arg, asg), base, n, ctrl.precision);
      } catch (const PoleDetected& p) {
        throw PoleDetected("prefactor " + atom.to_string() + ": " + p.what(), p.index());
      }
      if (v == Complex<Real>(0) && in_denominator) throw pole("zero factor");
      return {v, eps * Real(2 * detail::mabs(n) + 1)};
    }
    case AtomKind::linear: {
      const Complex<Real> x = monomial_value<Real>(atom.arg, asg);
      const Complex<Real> v = Complex<Real>(1) - x;
      if (detail::vanishes(x, ctrl.precision.pole_threshold)) {
        if (in_denominator) throw pole("1 - x = 0");
        return {Complex<Real>(0), 0};
      }
      return {v, eps * (Real(1) + detail::mabs(x) / detail::mabs(v))};
    }
    case AtomKind::monomial_power: {
      const Complex<Real> x = monomial_value<Real>(atom.arg, asg);
      const int n = count_value(atom.count, asg);
      if (x == Complex<Real>(0) && in_denominator) throw pole("zero base");
      return {ipow(x, n), eps * Real(detail::mabs(n) + 1)};
    }
    case AtomKind::scalar: {
      if (atom.denominator == 0) throw InvalidInput("scalar atom with zero denominator");
      return {Complex<Real>(static_cast<Real>(atom.numerator) /
                            static_cast<Real>(atom.denominator)),
              eps};
    }
  }
  throw InvalidInput("unknown prefactor atom");
}

}  // namespace

std::complex<double> evaluate_monomial(const Monomial& mono, const ParameterAssignment& asg) {
  return monomial_value<double>(mono, asg);
}

std::vector<ModulusCheck> concrete_constraints(const std::vector<ModulusCondition>& conditions,
                                               const ParameterAssignment& asg) {
  std::vector<ModulusCheck> out;
  out.reserve(conditions.size());
  for (const auto& cond : conditions) {
    ModulusCheck check;
    check.description = cond.text;
    check.smaller = evaluate_monomial(cond.smaller, asg);
    if (cond.larger) check.larger = evaluate_monomial(*cond.larger, asg);
    check.bound = cond.bound;
    out.push_back(check);
  }
  return out;
}

DomainReport check_domain(const IdentityRecord& record, const ParameterAssignment& asg) {
  DomainReport report;
  for (const auto& check : concrete_constraints(record.constraints, asg)) {
    if (!check.holds()) {
      report.satisfied = false;
      report.violations.push_back({check.description, check.actual_ratio()});
    }
  }
  return report;
}

bool satisfies_with_margin(const std::vector<ModulusCondition>& conditions,
                           const ParameterAssignment& asg, double margin) {
  for (const auto& check : concrete_constraints(conditions, asg)) {
    if (!(check.actual_ratio() <= (1.0 - margin) * check.bound)) return false;
  }
  return true;
}

void complete_sqrt_symbols(const IdentityRecord& record, ParameterAssignment& asg) {
  for (Symbol s : record.parameters) {
    if (is_sqrt_symbol(s) && !asg.has(s)) {
      asg.values[s] = std::sqrt(evaluate_monomial(sqrt_radicand(s), asg));
    }
  }
}

void validate_assignment(const IdentityRecord& record, const ParameterAssignment& asg) {
  if (!(detail::mabs(asg.q) < 1.0)) throw InvalidInput("assignment: |q| must be below 1");
  for (Symbol s : record.parameters) {
    if (!asg.has(s)) {
      throw InvalidInput("assignment for " + record.id + " lacks symbol " +
                         std::string(symbol_name(s)));
    }
    const auto v = asg.at(s);
    if (!detail::misfinite(v.real()) || !detail::misfinite(v.imag())) {
      throw InvalidInput("assignment: symbol " + std::string(symbol_name(s)) + " is not finite");
    }
  }
  for (Symbol s : record.parameters) {
    if (!is_sqrt_symbol(s)) continue;
    const auto root = asg.at(s);
    const auto radicand = evaluate_monomial(sqrt_radicand(s), asg);
    const double scale = std::max(detail::mabs(radicand), detail::mabs(root * root));
    if (scale > 0 && detail::mabs(root * root - radicand) > 1e-14 * scale) {
      throw InvalidInput("assignment: " + std::string(symbol_name(s)) +
                         "^2 does not match its radicand " + sqrt_radicand(s).to_string());
    }
  }
  if (record.requires_m) {
    if (!asg.m) throw InvalidInput("assignment for " + record.id + " needs m");
    if (*asg.m < 0) throw InvalidInput("assignment: m must be nonnegative");
  }
}

template <class Real>
TermRatioSeriesSpec<Real> instantiate_series(const SeriesFormula& formula,
                                             const ParameterAssignment& asg) {
  TermRatioSeriesSpec<Real> spec;
  for (const auto& p : formula.numerator_params) {
    spec.numerator_params.push_back(monomial_value<Real>(p, asg));
  }
  for (const auto& p : formula.denominator_params) {
    spec.denominator_params.push_back(monomial_value<Real>(p, asg));
  }
  spec.argument = monomial_value<Real>(formula.argument, asg);
  if (formula.very_well_poised_sqrt) {
    spec.very_well_poised_sqrt = monomial_value<Real>(*formula.very_well_poised_sqrt, asg);
  }
  spec.unilateral_q_factor = formula.unilateral_q_factor;
  switch (formula.lower) {
    case LowerLimitKind::from_zero: spec.lower_limit = LowerLimit::from_zero(); break;
    case LowerLimitKind::bilateral: spec.lower_limit = LowerLimit::bilateral(); break;
    case LowerLimitKind::from_minus_m:
      if (!asg.m) throw InvalidInput("semi-finite series needs m");
      spec.lower_limit = LowerLimit::from_minus_m(*asg.m);
      break;
  }
  return spec;
}

template <class Real>
ValueWithError<Real> eval_expression(const Expression& expr, const ParameterAssignment& asg,
                                     const EvalControl& ctrl) {
  const QBase<Real> base(widen<Real>(asg.q));
  const Real eps = std::numeric_limits<Real>::epsilon();
  ValueWithError<Real> total;
  total.value = Complex<Real>(0);
  if (expr.terms.empty()) {
    total.value = Complex<Real>(1);
    return total;
  }
  for (const auto& term : expr.terms) {
    Complex<Real> prefactor(1);
    Real rel = 0;
    for (const auto& atom : term.numerator) {
      const auto v = eval_atom(atom, asg, base, false, ctrl);
      prefactor *= v.value;
      rel += v.rel_err + eps;
    }
    for (const auto& atom : term.denominator) {
      const auto v = eval_atom(atom, asg, base, true, ctrl);
      prefactor /= v.value;
      rel += v.rel_err + eps;
    }
    Complex<Real> value = prefactor;
    Real abs_err = detail::mabs(prefactor) * rel;
    if (term.series) {
      const auto spec = instantiate_series<Real>(*term.series, asg);
      const auto s = eval_series(spec, base, ctrl);
      value = prefactor * s.value;
      abs_err = detail::mabs(prefactor) * s.abs_err + detail::mabs(value) * (rel + eps);
      total.terms_used += s.terms_used;
    }
    total.value += value;
    total.abs_err += abs_err;
  }
  total.abs_err += eps * detail::mabs(total.value);
  return total;
}

template TermRatioSeriesSpec<double> instantiate_series<double>(const SeriesFormula&,
                                                                const ParameterAssignment&);
template TermRatioSeriesSpec<long double> instantiate_series<long double>(
    const SeriesFormula&, const ParameterAssignment&);
template ValueWithError<double> eval_expression<double>(const Expression&,
                                                        const ParameterAssignment&,
                                                        const EvalControl&);
template ValueWithError<long double> eval_expression<long double>(const Expression&,
                                                                  const ParameterAssignment&,
                                                                  const EvalControl&);
template TermRatioSeriesSpec<Quad> instantiate_series<Quad>(const SeriesFormula&,
                                                            const ParameterAssignment&);
template ValueWithError<Quad> eval_expression<Quad>(const Expression&, const ParameterAssignment&,
                                                    const EvalControl&);

namespace {

template <class Real>
AdaptiveValue narrow(const ValueWithError<Real>& v, WorkingPrecision used) {
  return {std::complex<double>(static_cast<double>(v.value.real()),
                               static_cast<double>(v.value.imag())),
          static_cast<double>(v.abs_err), v.terms_used, used};
}

AdaptiveValue eval_at(const Expression& expr, const ParameterAssignment& asg,
                      const EvalControl& ctrl) {
  switch (ctrl.precision.working_precision) {
    case WorkingPrecision::binary64:
      return narrow(eval_expression<double>(expr, asg, ctrl), WorkingPrecision::binary64);
    case WorkingPrecision::extended:
      return narrow(eval_expression<long double>(expr, asg, ctrl), WorkingPrecision::extended);
    case WorkingPrecision::quad:
      return narrow(eval_expression<Quad>(expr, asg, ctrl), WorkingPrecision::quad);
  }
  throw InvalidInput("unknown working precision");
}

}  // namespace

AdaptiveValue eval_expression_adaptive(const Expression& expr, const ParameterAssignment& asg,
                                       const EvalControl& ctrl, double rel_target) {
  const AdaptiveValue first = eval_at(expr, asg, ctrl);
  if (ctrl.precision.working_precision == WorkingPrecision::quad) return first;
  const bool accurate = std::isfinite(first.abs_err) &&
                        first.abs_err <= rel_target * std::abs(first.value) &&
                        std::isfinite(first.value.real()) && std::isfinite(first.value.imag());
  if (accurate) return first;
  EvalControl wide = ctrl;
  wide.precision.working_precision = WorkingPrecision::quad;
  return eval_at(expr, asg, wide);
}

}  // namespace qseries
