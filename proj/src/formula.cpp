#include "qseries/formula.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace qseries {

namespace {

constexpr std::array<std::string_view, kSymbolCount> kNames = {
    "a", "b", "c", "d", "e", "f", "z", "sqrt_a", "sqrt_efc", "sqrt_b2a"};

std::string affine_to_string(const Affine& x) {
  std::ostringstream out;
  if (x.per_m == 0) {
    out << x.constant;
  } else {
    if (x.constant != 0) out << x.constant << (x.per_m > 0 ? "+" : "");
    if (x.per_m == -1) {
      out << "-";
    } else if (x.per_m != 1) {
      out << x.per_m;
    }
    out << "m";
  }
  return out.str();
}

void collect(const Monomial& mono, std::set<Symbol>& out) {
  for (Symbol s : kAllSymbols) {
    if (mono.uses(s)) out.insert(s);
  }
}

void collect(const SeriesFormula& series, std::set<Symbol>& out) {
  for (const auto& p : series.numerator_params) collect(p, out);
  for (const auto& p : series.denominator_params) collect(p, out);
  collect(series.argument, out);
  if (series.very_well_poised_sqrt) collect(*series.very_well_poised_sqrt, out);
}

bool uses_m(const Monomial& mono) { return mono.q_power.depends_on_m(); }

bool uses_m(const PrefactorAtom& atom) {
  return uses_m(atom.arg) ||
         ((atom.kind == AtomKind::poch_finite || atom.kind == AtomKind::monomial_power) &&
          atom.count.depends_on_m());
}

std::string list_to_string(const std::vector<Monomial>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += xs[i].to_string();
  }
  return out;
}

}  // namespace

std::string_view symbol_name(Symbol s) { return kNames[static_cast<std::size_t>(s)]; }

std::optional<Symbol> parse_symbol(std::string_view name) {
  for (std::size_t i = 0; i < kSymbolCount; ++i) {
    if (kNames[i] == name) return kAllSymbols[i];
  }
  return std::nullopt;
}

bool is_sqrt_symbol(Symbol s) {
  return s == Symbol::sqrt_a || s == Symbol::sqrt_efc || s == Symbol::sqrt_b2a;
}

Monomial power(Monomial base, int exponent) {
  Monomial out;
  out.sign = (exponent % 2 == 0) ? 1 : base.sign;
  for (std::size_t i = 0; i < kSymbolCount; ++i) out.powers[i] = base.powers[i] * exponent;
  out.q_power = {base.q_power.constant * exponent, base.q_power.per_m * exponent};
  return out;
}

std::string Monomial::to_string() const {
  std::string num;
  std::string den;
  auto append = [](std::string& target, std::string_view name, int p) {
    if (!target.empty()) target += "*";
    target += name;
    if (p != 1) target += "^" + std::to_string(p);
  };
  for (std::size_t i = 0; i < kSymbolCount; ++i) {
    if (powers[i] > 0) append(num, kNames[i], powers[i]);
    if (powers[i] < 0) append(den, kNames[i], -powers[i]);
  }
  if (q_power.constant != 0 || q_power.per_m != 0) {
    if (q_power.per_m == 0 && q_power.constant < 0) {
      append(den, "q", -q_power.constant);
    } else if (q_power.per_m == 0) {
      append(num, "q", q_power.constant);
    } else {
      if (!num.empty()) num += "*";
      num += "q^(" + affine_to_string(q_power) + ")";
    }
  }
  if (num.empty()) num = "1";
  std::string out = (sign < 0 ? "-" : "") + num;
  if (!den.empty()) {
    const bool compound = den.find('*') != std::string::npos;
    out += "/" + (compound ? "(" + den + ")" : den);
  }
  return out;
}

std::string PrefactorAtom::to_string() const {
  switch (kind) {
    case AtomKind::poch_infinite: return "(" + arg.to_string() + ";q)_inf";
    case AtomKind::poch_finite:
      return "(" + arg.to_string() + ";q)_" + affine_to_string(count);
    case AtomKind::linear: return "(1 - " + arg.to_string() + ")";
    case AtomKind::monomial_power:
      return "(" + arg.to_string() + ")^" + affine_to_string(count);
    case AtomKind::scalar:
      return denominator == 1 ? std::to_string(numerator)
                              : std::to_string(numerator) + "/" + std::to_string(denominator);
  }
  return "?";
}

PrefactorAtom poch_inf(Monomial arg) { return {AtomKind::poch_infinite, arg, {}, 1, 1}; }
PrefactorAtom poch_fin(Monomial arg, Affine length) {
  return {AtomKind::poch_finite, arg, length, 1, 1};
}
PrefactorAtom linear(Monomial arg) { return {AtomKind::linear, arg, {}, 1, 1}; }
PrefactorAtom monomial_power(Monomial base, Affine exponent) {
  return {AtomKind::monomial_power, base, exponent, 1, 1};
}
PrefactorAtom scalar(long numerator, long denominator) {
  return {AtomKind::scalar, Monomial::one(), {}, numerator, denominator};
}

std::string SeriesFormula::to_string() const {
  std::string kind;
  switch (lower) {
    case LowerLimitKind::from_zero: kind = "sum_{k>=0}"; break;
    case LowerLimitKind::from_minus_m: kind = "sum_{k>=-m}"; break;
    case LowerLimitKind::bilateral: kind = "sum_{k in Z}"; break;
  }
  std::string out = kind + " [" + list_to_string(numerator_params) + " / " +
                    list_to_string(denominator_params) + "; " + argument.to_string() + "]";
  if (very_well_poised_sqrt) out += " vwp(" + very_well_poised_sqrt->to_string() + ")";
  return out;
}

std::vector<Symbol> Expression::symbols() const {
  std::set<Symbol> found;
  for (const auto& term : terms) {
    for (const auto& atom : term.numerator) collect(atom.arg, found);
    for (const auto& atom : term.denominator) collect(atom.arg, found);
    if (term.series) collect(*term.series, found);
  }
  return {found.begin(), found.end()};
}

bool Expression::uses_m() const {
  for (const auto& term : terms) {
    for (const auto& atom : term.numerator) {
      if (qseries::uses_m(atom)) return true;
    }
    for (const auto& atom : term.denominator) {
      if (qseries::uses_m(atom)) return true;
    }
    if (term.series) {
      if (term.series->lower == LowerLimitKind::from_minus_m) return true;
      for (const auto& p : term.series->numerator_params) {
        if (qseries::uses_m(p)) return true;
      }
      for (const auto& p : term.series->denominator_params) {
        if (qseries::uses_m(p)) return true;
      }
    }
  }
  return false;
}

}  // namespace qseries
