#include "qseries/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qseries {

namespace {

using C = std::complex<double>;

// Below every tolerance in use by two orders of magnitude.
constexpr double kDefaultTarget = 1e-11;
constexpr double kSweepTarget = 1e-14;

AdaptiveValue evaluate(const Expression& expr, const ParameterAssignment& asg,
                       const EvalControl& ctrl, double rel_target = kDefaultTarget) {
  return eval_expression_adaptive(expr, asg, ctrl, rel_target);
}

bool finite(C x) { return std::isfinite(x.real()) && std::isfinite(x.imag()); }

double relative_error(C lhs, C rhs) {
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  return scale == 0.0 ? 0.0 : std::abs(lhs - rhs) / scale;
}

const Monomial kA = Monomial::symbol(Symbol::a);
const Monomial kB = Monomial::symbol(Symbol::b);
const Monomial kC = Monomial::symbol(Symbol::c);
const Monomial kD = Monomial::symbol(Symbol::d);
const Monomial kE = Monomial::symbol(Symbol::e);
const Monomial kZ = Monomial::symbol(Symbol::z);
const Monomial kQ = Monomial::q_to(1);

const TermRatioSeriesSpec<double> single_series(const IdentityRecord& record,
                                                const ParameterAssignment& asg) {
  if (record.lhs.terms.size() != 1 || !record.lhs.terms.front().series) {
    throw InvalidInput(record.id + ": left side is not a single series");
  }
  return instantiate_series<double>(*record.lhs.terms.front().series, asg);
}

double negative_side_ratio(const TermRatioSeriesSpec<double>& spec, C q) {
  C num(1);
  C den(1);
  for (const auto& a : spec.effective_numerators(q)) {
    if (a != C(0)) num *= a;
  }
  for (const auto& b : spec.effective_denominators(q)) {
    if (b != C(0)) den *= b;
  }
  return std::abs(den / (num * spec.argument));
}

// (q/a, bd/a, aq/bc, aq/cd, aq, aq/de, aq/bd, aq/be)_inf
//   / (q/b, q/c, q/d, aq/b, aq/d, aq/e, aq/bde, bde/a)_inf
Expression chain_prefactor() {
  const Monomial aq = kA * kQ;
  return Expression{{ExpressionTerm{
      {poch_inf(kQ / kA), poch_inf(kB * kD / kA), poch_inf(aq / (kB * kC)),
       poch_inf(aq / (kC * kD)), poch_inf(aq), poch_inf(aq / (kD * kE)), poch_inf(aq / (kB * kD)),
       poch_inf(aq / (kB * kE))},
      {poch_inf(kQ / kB), poch_inf(kQ / kC), poch_inf(kQ / kD), poch_inf(aq / kB),
       poch_inf(aq / kD), poch_inf(aq / kE), poch_inf(aq / (kB * kD * kE)),
       poch_inf(kB * kD * kE / kA)},
      std::nullopt}}};
}

}  // namespace

std::string_view status_name(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::pole: return "pole";
    case Status::nonconvergent: return "nonconvergent";
    case Status::domain_violation: return "domain_violation";
  }
  return "unknown";
}

VerificationReport verify_identity(const IdentityRecord& record, const ParameterAssignment& asg,
                                   const VerifyOptions& options) {
  validate_assignment(record, asg);
  VerificationReport report;
  report.identity_id = record.id;
  report.assignment = asg;
  report.m = record.requires_m ? asg.m : std::nullopt;
  report.tolerance = options.tol_override.value_or(record.tolerance());

  const auto domain = check_domain(record, asg);
  if (!domain.satisfied) {
    report.status = Status::domain_violation;
    report.message = domain.violations.front().description + " violated (modulus " +
                     std::to_string(domain.violations.front().actual_modulus) + ")";
    return report;
  }
  try {
    const double target = std::min(kDefaultTarget, 1e-2 * report.tolerance);
    const auto lhs = evaluate(record.lhs, asg, options.eval, target);
    const auto rhs = evaluate(record.rhs, asg, options.eval, target);
    report.lhs = lhs.value;
    report.rhs = rhs.value;
    report.lhs_terms = lhs.terms_used;
    report.rhs_terms = rhs.terms_used;
  } catch (const PoleDetected& e) {
    report.status = Status::pole;
    report.message = e.what();
    return report;
  } catch (const NonConvergent& e) {
    report.status = Status::nonconvergent;
    report.message = e.what();
    return report;
  } catch (const ZeroArgument& e) {
    report.status = Status::nonconvergent;
    report.message = e.what();
    return report;
  }
  if (!finite(report.lhs) || !finite(report.rhs)) {
    report.status = Status::nonconvergent;
    report.message = "non-finite value";
    return report;
  }
  report.rel_err = relative_error(report.lhs, report.rhs);
  report.status = report.rel_err < report.tolerance ? Status::pass : Status::fail;
  return report;
}

BatchResult verify_batch(const IdentityRecord& record, long count, std::uint64_t seed,
                         double margin, const BatchOptions& options) {
  if (count < 1) throw InvalidInput("verify_batch: count must be at least 1");
  if (record.requires_m) {
    if (options.m_values.empty()) throw InvalidInput("verify_batch: empty m list");
    for (int m : options.m_values) {
      if (m < 0) throw InvalidInput("verify_batch: m values must be nonnegative");
    }
  }
  SamplerOptions sampler = options.sampler;
  sampler.margin = margin;
  sampler.pole_check_m = options.m_values;

  BatchResult result;
  result.summary.identity_id = record.id;
  result.summary.samples = count;
  for (long i = 0; i < count; ++i) {
    ParameterAssignment asg =
        sample_admissible(record, seed, static_cast<std::uint64_t>(i), sampler);
    const std::vector<int> ms = record.requires_m ? options.m_values : std::vector<int>{0};
    for (int m : ms) {
      if (record.requires_m) asg.m = m;
      result.reports.push_back(verify_identity(record, asg, options.verify));
    }
  }
  for (const auto& r : result.reports) {
    ++result.summary.reports;
    if (r.status == Status::pass) ++result.summary.passed;
    if (std::isnan(r.rel_err)) {
      result.summary.max_rel_err = std::numeric_limits<double>::infinity();
    } else {
      result.summary.max_rel_err = std::max(result.summary.max_rel_err, r.rel_err);
    }
  }
  result.summary.pass_rate =
      static_cast<double>(result.summary.passed) / static_cast<double>(result.summary.reports);
  return result;
}

bool is_semifinite(const IdentityRecord& record) { return record.requires_m; }

const IdentityRecord* limit_record(const IdentityRecord& semifinite) {
  if (semifinite.id == "prop1_semifinite_1psi1") return find_identity("ramanujan_1psi1");
  if (semifinite.id == "prop2_semifinite") return find_identity("bailey_2psi2_a");
  if (semifinite.id == "prop3_semifinite") return find_identity("bailey_2psi2_b");
  if (semifinite.id == "prop4_semifinite_6psi6") return find_identity("bailey_6psi6");
  return nullptr;
}

SamplerOptions sweep_sampler_options(const IdentityRecord& semifinite, double margin) {
  const IdentityRecord* limit = limit_record(semifinite);
  if (!limit) throw InvalidInput(semifinite.id + " is not a semi-finite record");
  SamplerOptions options;
  options.margin = margin;
  options.extra_constraints = limit->constraints;
  options.q_min = 0.2;
  options.q_max = 0.35;
  options.pole_check_m = default_sweep_m(semifinite);
  if (semifinite.id == "prop1_semifinite_1psi1") {
    options.extra_constraints.push_back({kB / (kA * kZ), std::nullopt, 0.7, "|b/az| < 0.7"});
  }
  if (semifinite.id == "prop4_semifinite_6psi6") {
    options.f_equals_b = true;
    options.q_min = 0.1;
    options.q_max = 0.15;
    const Monomial arg = power(kA, 2) * kQ / (kB * kC * kD * kE);
    options.extra_constraints.push_back({arg, std::nullopt, 0.05, "|a^2q/bcde| < 0.05"});
  }
  return options;
}

EvalControl tight_eval_control() {
  EvalControl ctrl;
  ctrl.precision.rel_tol = 1e-15;
  ctrl.summation.rel_tol = 1e-15;
  return ctrl;
}

std::vector<int> default_sweep_m(const IdentityRecord& semifinite) {
  if (semifinite.id == "prop4_semifinite_6psi6") return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  return {2, 4, 6, 8, 10, 12, 14, 16, 18, 20};
}

SweepReport sweep_m(std::string_view semifinite_id, const ParameterAssignment& asg,
                    const std::vector<int>& m_values, const SweepOptions& options) {
  const IdentityRecord* semi = find_identity(semifinite_id);
  if (!semi) throw InvalidInput("unknown identity " + std::string(semifinite_id));
  const IdentityRecord* limit = limit_record(*semi);
  if (!limit) throw InvalidInput(semi->id + " is not a semi-finite record");
  if (m_values.empty()) throw InvalidInput("sweep_m: empty m list");
  std::vector<int> ms = m_values;
  std::sort(ms.begin(), ms.end());
  ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
  if (ms.front() < 0) throw InvalidInput("sweep_m: m values must be nonnegative");
  if (semi->id == "prop4_semifinite_6psi6" && ms.back() > options.prop4_m_cap) {
    throw InvalidInput("sweep_m: m above the cap of " + std::to_string(options.prop4_m_cap) +
                       " for " + semi->id);
  }

  ParameterAssignment base = asg;
  base.m = ms.front();
  validate_assignment(*semi, base);
  validate_assignment(*limit, base);
  const auto domain = check_domain(*limit, base);
  if (!domain.satisfied) {
    throw InvalidInput("sweep_m: assignment violates " + limit->id + " constraint " +
                       domain.violations.front().description);
  }

  SweepReport report;
  report.semifinite_id = semi->id;
  report.limit_id = limit->id;
  report.assignment = asg;
  report.assignment.m.reset();
  report.theoretical_ratio =
      std::max(std::abs(asg.q), negative_side_ratio(single_series(*limit, base), asg.q));

  const C closed = evaluate(limit->rhs, base, options.eval, kSweepTarget).value;
  for (int m : ms) {
    SweepRow row;
    row.m = m;
    row.limit_value = closed;
    ParameterAssignment at = base;
    at.m = m;
    try {
      row.semi_finite_value = evaluate(semi->lhs, at, options.eval, kSweepTarget).value;
      row.err = std::abs(row.semi_finite_value - closed) / std::abs(closed);
      if (!std::isfinite(row.err)) row.status = Status::nonconvergent;
    } catch (const PoleDetected&) {
      row.status = Status::pole;
    } catch (const NonConvergent&) {
      row.status = Status::nonconvergent;
    } catch (const ZeroArgument&) {
      row.status = Status::nonconvergent;
    }
    report.rows.push_back(row);
  }

  std::vector<const SweepRow*> resolved;
  for (const auto& row : report.rows) {
    if (row.status == Status::pass && row.err > kResolutionFloor) resolved.push_back(&row);
  }
  if (resolved.size() >= 2) {
    const std::size_t first = resolved.size() >= 4 ? resolved.size() - 4 : 0;
    const SweepRow& lo = *resolved[first];
    const SweepRow& hi = *resolved.back();
    report.fitted_ratio = std::pow(hi.err / lo.err, 1.0 / static_cast<double>(hi.m - lo.m));
  }
  return report;
}

LimitConsistencyReport limit_consistency(std::string_view semifinite_id,
                                         const ParameterAssignment& asg, long k_min, long k_max,
                                         int m_large) {
  const IdentityRecord* semi = find_identity(semifinite_id);
  if (!semi) throw InvalidInput("unknown identity " + std::string(semifinite_id));
  const IdentityRecord* limit = limit_record(*semi);
  if (!limit) throw InvalidInput(semi->id + " is not a semi-finite record");
  if (k_min > k_max) throw InvalidInput("limit_consistency: empty k range");
  if (m_large < std::max(std::abs(k_min), std::abs(k_max))) {
    throw InvalidInput("limit_consistency: m_large must be at least max |k|");
  }
  ParameterAssignment at = asg;
  at.m = m_large;
  validate_assignment(*semi, at);
  const auto semi_spec = single_series(*semi, at);
  const auto bilateral_spec = single_series(*limit, at);
  const QBase<double> base(asg.q);

  LimitConsistencyReport report;
  report.semifinite_id = semi->id;
  report.m_large = m_large;
  for (long k = k_min; k <= k_max; ++k) {
    const C g = term_at(semi_spec, base, k);
    const C b = term_at(bilateral_spec, base, k);
    const double scale = std::abs(b);
    const double discrepancy = scale == 0.0 ? std::abs(g - b) : std::abs(g - b) / scale;
    report.ks.push_back(k);
    report.discrepancies.push_back(discrepancy);
    report.max_rel_discrepancy = std::max(report.max_rel_discrepancy, discrepancy);
  }
  return report;
}

ChainReport prop4_chain(const ParameterAssignment& asg, int m, const EvalControl& ctrl) {
  const IdentityRecord* prop4 = find_identity("prop4_semifinite_6psi6");
  const IdentityRecord* ramanujan = find_identity("ramanujan_1psi1");
  const IdentityRecord* six = find_identity("bailey_6psi6");
  ParameterAssignment at = asg;
  at.m = m;
  validate_assignment(*prop4, at);
  if (relative_error(at.at(Symbol::b), at.at(Symbol::f)) > 1e-15) {
    throw InvalidInput("prop4_chain: needs f = b");
  }

  ParameterAssignment inner;
  inner.q = at.q;
  const C q = at.q;
  const C a = at.at(Symbol::a);
  inner.values[Symbol::a] = at.at(Symbol::e);
  inner.values[Symbol::b] = a * q / at.at(Symbol::c);
  inner.values[Symbol::z] = at.at(Symbol::b) * at.at(Symbol::d) / a;
  const auto inner_domain = check_domain(*ramanujan, inner);
  if (!inner_domain.satisfied) {
    throw InvalidInput("prop4_chain: inner 1psi1 outside its annulus (" +
                       inner_domain.violations.front().description + ")");
  }

  ChainReport report;
  report.m = m;
  report.semi_finite_lhs = evaluate(prop4->lhs, at, ctrl).value;
  report.semi_finite_value = evaluate(prop4->rhs, at, ctrl).value;
  report.lhs_vs_rhs = relative_error(report.semi_finite_lhs, report.semi_finite_value);
  const C prefactor = evaluate(chain_prefactor(), at, ctrl).value;
  report.inner_series_value = prefactor * evaluate(ramanujan->lhs, inner, ctrl).value;
  report.inner_product_value = prefactor * evaluate(ramanujan->rhs, inner, ctrl).value;
  report.closed_form = evaluate(six->rhs, at, ctrl).value;
  report.semi_vs_inner = relative_error(report.semi_finite_value, report.inner_series_value);
  report.series_vs_product = relative_error(report.inner_series_value, report.inner_product_value);
  report.product_vs_closed = relative_error(report.inner_product_value, report.closed_form);
  return report;
}

SamplerOptions chain_sampler_options(double margin) {
  SamplerOptions options = sweep_sampler_options(*find_identity("prop4_semifinite_6psi6"), margin);
  options.extra_constraints.push_back(
      {kA * kQ / (kC * kE), kB * kD / kA, 1.0, "|aq/ce| < |bd/a|"});
  return options;
}

}  // namespace qseries
