#pragma once

// Symbolic building blocks for identity records: monomials in the parameter
// symbols and q (with exponents affine in m), prefactor atoms, series
// formulas and expressions.

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qseries/series.hpp"

namespace qseries {

enum class Symbol { a, b, c, d, e, f, z, sqrt_a, sqrt_efc, sqrt_b2a };

inline constexpr std::size_t kSymbolCount = 10;

inline constexpr std::array<Symbol, kSymbolCount> kAllSymbols = {
    Symbol::a, Symbol::b, Symbol::c,      Symbol::d,        Symbol::e,
    Symbol::f, Symbol::z, Symbol::sqrt_a, Symbol::sqrt_efc, Symbol::sqrt_b2a};

std::string_view symbol_name(Symbol s);
std::optional<Symbol> parse_symbol(std::string_view name);
bool is_sqrt_symbol(Symbol s);

// c0 + cm * m
struct Affine {
  int constant = 0;
  int per_m = 0;

  int at(int m) const { return constant + per_m * m; }
  bool depends_on_m() const { return per_m != 0; }
  friend bool operator==(const Affine&, const Affine&) = default;
};

// sign * prod symbol^power * q^(affine in m)
struct Monomial {
  int sign = 1;
  std::array<int, kSymbolCount> powers{};
  Affine q_power;

  static Monomial one() { return {}; }
  static Monomial symbol(Symbol s) {
    Monomial out;
    out.powers[static_cast<std::size_t>(s)] = 1;
    return out;
  }
  static Monomial q_to(int constant, int per_m = 0) {
    Monomial out;
    out.q_power = {constant, per_m};
    return out;
  }

  bool uses(Symbol s) const { return powers[static_cast<std::size_t>(s)] != 0; }
  std::string to_string() const;

  friend Monomial operator*(Monomial lhs, const Monomial& rhs) {
    lhs.sign *= rhs.sign;
    for (std::size_t i = 0; i < kSymbolCount; ++i) lhs.powers[i] += rhs.powers[i];
    lhs.q_power.constant += rhs.q_power.constant;
    lhs.q_power.per_m += rhs.q_power.per_m;
    return lhs;
  }
  friend Monomial operator/(Monomial lhs, const Monomial& rhs) {
    lhs.sign *= rhs.sign;
    for (std::size_t i = 0; i < kSymbolCount; ++i) lhs.powers[i] -= rhs.powers[i];
    lhs.q_power.constant -= rhs.q_power.constant;
    lhs.q_power.per_m -= rhs.q_power.per_m;
    return lhs;
  }
  friend Monomial operator-(Monomial x) {
    x.sign = -x.sign;
    return x;
  }
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

Monomial power(Monomial base, int exponent);

enum class AtomKind { poch_infinite, poch_finite, linear, monomial_power, scalar };

// One prefactor atom:
//   poch_infinite   (arg;q)_inf
//   poch_finite     (arg;q)_{length}
//   linear          1 - arg
//   monomial_power  arg^{exponent}
//   scalar          numerator / denominator
struct PrefactorAtom {
  AtomKind kind = AtomKind::scalar;
  Monomial arg;
  Affine count;  // length for poch_finite, exponent for monomial_power
  long numerator = 1;
  long denominator = 1;

  std::string to_string() const;
};

PrefactorAtom poch_inf(Monomial arg);
PrefactorAtom poch_fin(Monomial arg, Affine length);
PrefactorAtom linear(Monomial arg);
PrefactorAtom monomial_power(Monomial base, Affine exponent);
PrefactorAtom scalar(long numerator, long denominator = 1);

struct SeriesFormula {
  std::vector<Monomial> numerator_params;
  std::vector<Monomial> denominator_params;
  Monomial argument;
  std::optional<Monomial> very_well_poised_sqrt;
  LowerLimitKind lower = LowerLimitKind::from_zero;
  bool unilateral_q_factor = true;

  std::string to_string() const;
};

struct ExpressionTerm {
  std::vector<PrefactorAtom> numerator;
  std::vector<PrefactorAtom> denominator;
  std::optional<SeriesFormula> series;
};

struct Expression {
  std::vector<ExpressionTerm> terms;

  // Every symbol referenced anywhere in the expression.
  std::vector<Symbol> symbols() const;
  bool uses_m() const;
};

// |smaller| < bound * |larger|  (|smaller| < bound when `larger` is empty).
struct ModulusCondition {
  Monomial smaller;
  std::optional<Monomial> larger;
  double bound = 1.0;
  std::string text;
};

}  // namespace qseries
