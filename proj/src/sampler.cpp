#include <cmath>
#include <numbers>
#include <random>

#include "qseries/identities.hpp"

namespace qseries {

namespace {

using C = std::complex<double>;

// Bit-exact across standard libraries, unlike std::uniform_real_distribution.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

C draw_polar(std::mt19937_64& rng, double modulus) {
  return std::polar(modulus, 2.0 * std::numbers::pi * uniform01(rng));
}

double draw_log_uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = uniform01(rng);
  return std::exp(std::log(lo) + u * (std::log(hi) - std::log(lo)));
}

struct Screen {
  const ParameterAssignment& asg;
  QBase<double> base;
  PrecisionConfig cfg;
  long terms;

  bool pole_free(C b, long k_max) const { return !detect_pole(b, base, k_max, cfg); }

  bool atom_ok(const PrefactorAtom& atom) const {
    const C x = evaluate_monomial(atom.arg, asg);
    switch (atom.kind) {
      case AtomKind::poch_infinite: return pole_free(x, terms);
      case AtomKind::poch_finite: {
        const int n = atom.count.at(asg.m.value_or(0));
        return n <= 0 || pole_free(x, n);
      }
      case AtomKind::linear: return !detail::vanishes(x, cfg.pole_threshold);
      case AtomKind::monomial_power: return std::abs(x) > 0.0;
      case AtomKind::scalar: return atom.numerator != 0;
    }
    return false;
  }

  bool dens_ok(const std::vector<C>& dens) const {
    for (const auto& b : dens) {
      if (!pole_free(b, terms)) return false;
    }
    return true;
  }

  // (a;q)_{-n} has the factor 1 - q^j / a for j = 1..n.
  bool negative_side_ok(const std::vector<C>& nums, long n) const {
    const C q = base.value();
    for (const auto& a : nums) {
      if (a == C(0)) continue;
      if (!pole_free(q / a, n)) return false;
    }
    return true;
  }

  bool series_ok(const SeriesFormula& formula) const {
    const auto spec = instantiate_series<double>(formula, asg);
    const C q = base.value();
    switch (spec.lower_limit.kind) {
      case LowerLimitKind::from_zero: return dens_ok(spec.effective_denominators(q));
      case LowerLimitKind::bilateral:
        return dens_ok(spec.effective_denominators(q)) &&
               negative_side_ok(spec.effective_numerators(q), terms);
      case LowerLimitKind::from_minus_m: {
        const auto start = trim_leading_zeros(spec, base, PrecisionConfig{});
        if (!negative_side_ok(start.spec.effective_numerators(q), start.spec.lower_limit.m)) {
          return false;
        }
        return dens_ok(shifted_spec(start.spec, base).denominator_params);
      }
    }
    return false;
  }

  bool expression_ok(const Expression& expr) const {
    for (const auto& term : expr.terms) {
      for (const auto& atom : term.denominator) {
        if (!atom_ok(atom)) return false;
      }
      if (term.series && !series_ok(*term.series)) return false;
    }
    return true;
  }
};

bool pole_screen(const IdentityRecord& record, ParameterAssignment asg,
                 const SamplerOptions& options) {
  PrecisionConfig cfg;
  cfg.pole_threshold = options.pole_screen_threshold;
  std::vector<std::optional<int>> ms;
  if (record.requires_m) {
    for (int m : options.pole_check_m) ms.emplace_back(m);
  } else {
    ms.emplace_back(std::nullopt);
  }
  try {
    for (const auto& m : ms) {
      asg.m = m;
      const Screen screen{asg, QBase<double>(asg.q), cfg, options.pole_check_terms};
      if (!screen.expression_ok(record.lhs) || !screen.expression_ok(record.rhs)) return false;
    }
  } catch (const QSeriesError&) {
    return false;
  }
  return true;
}

}  // namespace

ParameterAssignment sample_admissible(const IdentityRecord& record, std::uint64_t seed,
                                      std::uint64_t index, double margin) {
  SamplerOptions options;
  options.margin = margin;
  return sample_admissible(record, seed, index, options);
}

ParameterAssignment sample_admissible(const IdentityRecord& record, std::uint64_t seed,
                                      std::uint64_t index, const SamplerOptions& options) {
  if (!(options.margin > 0.0 && options.margin < 1.0)) {
    throw InvalidInput("sampler: margin must lie in (0, 1)");
  }
  if (!(0.0 < options.q_min && options.q_min <= options.q_max && options.q_max < 1.0)) {
    throw InvalidInput("sampler: need 0 < q_min <= q_max < 1");
  }
  if (!(0.0 < options.modulus_min && options.modulus_min <= options.modulus_max)) {
    throw InvalidInput("sampler: need 0 < modulus_min <= modulus_max");
  }
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);

  std::vector<ModulusCondition> conditions = record.constraints;
  conditions.insert(conditions.end(), options.extra_constraints.begin(),
                    options.extra_constraints.end());

  for (long attempt = 0; attempt < options.max_rejections; ++attempt) {
    ParameterAssignment asg;
    const double qmod = options.q_min + (options.q_max - options.q_min) * uniform01(rng);
    asg.q = draw_polar(rng, qmod);
    for (Symbol s : record.parameters) {
      if (is_sqrt_symbol(s)) continue;
      const double r = draw_log_uniform(rng, options.modulus_min, options.modulus_max);
      asg.values[s] = draw_polar(rng, r);
    }
    if (options.f_equals_b && record.has_parameter(Symbol::f)) {
      asg.values[Symbol::f] = asg.at(Symbol::b);
    }
    complete_sqrt_symbols(record, asg);
    if (record.requires_m) asg.m = 0;
    if (!satisfies_with_margin(conditions, asg, options.margin)) continue;
    if (!pole_screen(record, asg, options)) continue;
    if (!record.requires_m) asg.m.reset();
    return asg;
  }
  throw SamplingExhausted("sampler: no admissible assignment for " + record.id + " after " +
                          std::to_string(options.max_rejections) + " draws");
}

}  // namespace qseries
