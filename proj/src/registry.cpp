#include <utility>

#include "qseries/identities.hpp"

namespace qseries {

namespace {

const Monomial a = Monomial::symbol(Symbol::a);
const Monomial b = Monomial::symbol(Symbol::b);
const Monomial c = Monomial::symbol(Symbol::c);
const Monomial d = Monomial::symbol(Symbol::d);
const Monomial e = Monomial::symbol(Symbol::e);
const Monomial f = Monomial::symbol(Symbol::f);
const Monomial z = Monomial::symbol(Symbol::z);
const Monomial sqrt_a = Monomial::symbol(Symbol::sqrt_a);
const Monomial sqrt_efc = Monomial::symbol(Symbol::sqrt_efc);
const Monomial sqrt_b2a = Monomial::symbol(Symbol::sqrt_b2a);
const Monomial q = Monomial::q_to(1);

// q^{constant + per_m * m}
Monomial qm(int constant, int per_m) { return Monomial::q_to(constant, per_m); }

constexpr Affine kM{0, 1};

SeriesFormula phi(std::vector<Monomial> nums, std::vector<Monomial> dens, Monomial arg,
                  std::optional<Monomial> vwp = std::nullopt) {
  return {std::move(nums), std::move(dens), arg, vwp, LowerLimitKind::from_zero, true};
}

SeriesFormula psi(std::vector<Monomial> nums, std::vector<Monomial> dens, Monomial arg,
                  std::optional<Monomial> vwp = std::nullopt) {
  return {std::move(nums), std::move(dens), arg, vwp, LowerLimitKind::bilateral, false};
}

SeriesFormula semi(std::vector<Monomial> nums, std::vector<Monomial> dens, Monomial arg,
                   std::optional<Monomial> vwp = std::nullopt) {
  return {std::move(nums), std::move(dens), arg, vwp, LowerLimitKind::from_minus_m, false};
}

Expression series_only(SeriesFormula s) { return Expression{{ExpressionTerm{{}, {}, std::move(s)}}}; }

ExpressionTerm product(std::vector<PrefactorAtom> num, std::vector<PrefactorAtom> den,
                       std::optional<SeriesFormula> s = std::nullopt) {
  return {std::move(num), std::move(den), std::move(s)};
}

ModulusCondition below_one(Monomial x, std::string text) {
  return {x, std::nullopt, 1.0, std::move(text)};
}

ModulusCondition annulus(Monomial smaller, Monomial larger, std::string text) {
  return {smaller, larger, 1.0, std::move(text)};
}

IdentityRecord gauss_2phi1() {
  IdentityRecord r;
  r.id = "gauss_2phi1";
  r.anchor = "q-Gauss summation: 2phi1(a,b;c;q,c/ab) as four infinite products";
  r.parameters = {Symbol::a, Symbol::b, Symbol::c};
  r.constraints = {below_one(c / (a * b), "|c/ab| < 1")};
  r.lhs = series_only(phi({a, b}, {c}, c / (a * b)));
  r.rhs = Expression{{product({poch_inf(c / a), poch_inf(c / b)},
                              {poch_inf(c), poch_inf(c / (a * b))})}};
  return r;
}

IdentityRecord ramanujan_1psi1() {
  IdentityRecord r;
  r.id = "ramanujan_1psi1";
  r.anchor = "Ramanujan's 1psi1 summation, valid for |b/a| < |z| < 1";
  r.parameters = {Symbol::a, Symbol::b, Symbol::z};
  r.constraints = {annulus(b / a, z, "|b/a| < |z|"), below_one(z, "|z| < 1")};
  r.lhs = series_only(psi({a}, {b}, z));
  r.rhs = Expression{{product(
      {poch_inf(q), poch_inf(b / a), poch_inf(a * z), poch_inf(q / (a * z))},
      {poch_inf(b), poch_inf(q / a), poch_inf(z), poch_inf(b / (a * z))})}};
  return r;
}

IdentityRecord prop1_semifinite_1psi1() {
  IdentityRecord r;
  r.id = "prop1_semifinite_1psi1";
  r.anchor = "semi-finite form of the 1psi1 sum, from the q-Gauss summation";
  r.parameters = {Symbol::a, Symbol::b, Symbol::z};
  r.requires_m = true;
  r.constraints = {below_one(z, "|z| < 1")};
  r.lhs = series_only(semi({a, b * qm(0, 1) / (a * z)}, {qm(1, 1), b}, z));
  r.rhs = Expression{{product(
      {poch_fin(q, kM), poch_fin(q / (a * z), kM), poch_inf(b / a), poch_inf(a * z)},
      {poch_fin(q / a, kM), poch_fin(b / (a * z), kM), poch_inf(b), poch_inf(z)})}};
  return r;
}

IdentityRecord bailey_2psi2_a() {
  IdentityRecord r;
  r.id = "bailey_2psi2_a";
  r.anchor = "Bailey 2psi2 transformation to argument d/a (Gasper-Rahman Ex. 5.20(i))";
  r.parameters = {Symbol::a, Symbol::b, Symbol::c, Symbol::d, Symbol::z};
  const Monomial w = c * d / (a * b * z);
  r.constraints = {below_one(z, "|z| < 1"), below_one(w, "|cd/abz| < 1"),
                   below_one(d / a, "|d/a| < 1"), below_one(c / b, "|c/b| < 1")};
  r.lhs = series_only(psi({a, b}, {c, d}, z));
  r.rhs = Expression{{product(
      {poch_inf(a * z), poch_inf(d / a), poch_inf(c / b), poch_inf(d * q / (a * b * z))},
      {poch_inf(z), poch_inf(d), poch_inf(q / b), poch_inf(w)},
      psi({a, a * b * z / d}, {a * z, c}, d / a))}};
  return r;
}

IdentityRecord ktw_3phi2() {
  IdentityRecord r;
  r.id = "ktw_3phi2";
  r.anchor = "q-Kummer-Thomae-Whipple 3phi2 transformation (Gasper-Rahman (3.2.7))";
  r.parameters = {Symbol::a, Symbol::b, Symbol::c, Symbol::d, Symbol::e};
  const Monomial x = d * e / (a * b * c);
  r.constraints = {below_one(x, "|de/abc| < 1"), below_one(e / a, "|e/a| < 1")};
  r.lhs = series_only(phi({a, b, c}, {d, e}, x));
  r.rhs = Expression{{product({poch_inf(e / a), poch_inf(d * e / (b * c))},
                              {poch_inf(e), poch_inf(x)},
                              phi({a, d / b, d / c}, {d, d * e / (b * c)}, e / a))}};
  return r;
}

// Shared left side of the two semi-finite 2psi2 forms.
SeriesFormula semifinite_2psi2_lhs() {
  return semi({a, b, c * d * qm(0, 1) / (a * b * z)}, {c, d, qm(1, 1)}, z);
}

IdentityRecord prop2_semifinite() {
  IdentityRecord r;
  r.id = "prop2_semifinite";
  r.anchor = "semi-finite form of the first Bailey 2psi2 transformation, from q-KTW";
  r.parameters = {Symbol::a, Symbol::b, Symbol::c, Symbol::d, Symbol::z};
  r.requires_m = true;
  r.constraints = {below_one(z, "|z| < 1"), below_one(d / a, "|d/a| < 1")};
  r.lhs = series_only(semifinite_2psi2_lhs());
  const Monomial w = c * d / (a * b * z);
  r.rhs = Expression{{product(
      {poch_inf(a * z), poch_inf(d / a), poch_fin(c / b, kM), poch_fin(d * q / (a * b * z), kM)},
      {poch_inf(z), poch_inf(d), poch_fin(q / b, kM), poch_fin(w, kM)},
      semi({a, c * qm(0, 1) / b, a * b * z / d}, {c, qm(1, 1), a * z}, d / a))}};
  return r;
}

IdentityRecord bailey_2psi2_b() {
  IdentityRecord r;
  r.id = "bailey_2psi2_b";
  r.anchor = "Bailey 2psi2 transformation to argument cd/abz (Gasper-Rahman Ex. 5.20(ii))";
  r.parameters = {Symbol::a, Symbol::b, Symbol::c, Symbol::d, Symbol::z};
  const Monomial w = c * d / (a * b * z);
  r.constraints = {below_one(z, "|z| < 1"), below_one(w, "|cd/abz| < 1")};
  r.lhs = series_only(psi({a, b}, {c, d}, z));
  r.rhs = Expression{{product({poch_inf(a * z), poch_inf(b * z), poch_inf(c * q / (a * b * z)),
                               poch_inf(d * q / (a * b * z))},
                              {poch_inf(q / a), poch_inf(q / b), poch_inf(c), poch_inf(d)},
                              psi({a * b * z / c, a * b * z / d}, {a * z, b * z}, w))}};
  return r;
}

IdentityRecord hall_3phi2() {
  IdentityRecord r;
  r.id = "hall_3phi2";
  r.anchor = "Hall's 3phi2 transformation (Gasper-Rahman (3.2.10))";
  r.parameters = {Symbol::a, Symbol::b, Symbol::c, Symbol::d, Symbol::e};
  const Monomial x = d * e / (a * b * c);
  r.constraints = {below_one(x, "|de/abc| < 1"), below_one(b, "|b| < 1")};
  r.lhs = series_only(phi({a, b, c}, {d, e}, x));
  r.rhs = Expression{{product(
      {poch_inf(b), poch_inf(d * e / (a * b)), poch_inf(d * e / (b * c))},
      {poch_inf(d), poch_inf(e), poch_inf(x)},
      phi({d / b, e / b, x}, {d * e / (a * b), d * e / (b * c)}, b))}};
  return r;
}

IdentityRecord prop3_semifinite() {
  IdentityRecord r;
  r.id = "prop3_semifinite";
  r.anchor = "semi-finite form of the second Bailey 2psi2 transformation, from Hall's sum";
  r.parameters = {Symbol::a, Symbol::b, Symbol::c, Symbol::d, Symbol::z};
  r.requires_m = true;
  const Monomial w = c * d / (a * b * z);
  r.constraints = {below_one(z, "|z| < 1"), below_one(w, "|cd/abz| < 1")};
  r.lhs = series_only(semifinite_2psi2_lhs());
  r.rhs = Expression{{product(
      {poch_inf(a * z), poch_inf(b * z), poch_inf(w), poch_fin(c * q / (a * b * z), kM),
       poch_fin(d * q / (a * b * z), kM), poch_fin(z, kM)},
      {poch_inf(c), poch_inf(d), poch_inf(z), poch_fin(q / a, kM), poch_fin(q / b, kM),
       poch_fin(w, kM)},
      semi({a * b * z / c, a * b * z / d, z * qm(0, 1)}, {a * z, b * z, qm(1, 1)}, w))}};
  return r;
}

const std::vector<Symbol> kSixParameters = {Symbol::a,      Symbol::b,        Symbol::c,
                                            Symbol::d,      Symbol::e,        Symbol::f,
                                            Symbol::sqrt_a, Symbol::sqrt_efc, Symbol::sqrt_b2a};

IdentityRecord bailey_8phi7_3term() {
  IdentityRecord r;
  r.id = "bailey_8phi7_3term";
  r.anchor = "Bailey's three-term transformation of a nonterminating very-well-poised 8phi7 "
             "(Gasper-Rahman (2.11.1))";
  r.parameters = kSixParameters;
  r.tolerance_class = ToleranceClass::B;
  const Monomial arg = power(a, 2) * power(q, 2) / (b * c * d * e * f);
  r.constraints = {below_one(b * d / a, "|bd/a| < 1"),
                   below_one(arg, "|a^2q^2/bcdef| < 1")};
  r.lhs = series_only(
      phi({a, b, c, d, e, f}, {a * q / b, a * q / c, a * q / d, a * q / e, a * q / f}, arg, sqrt_a));

  ExpressionTerm first = product(
      {poch_inf(a * q), poch_inf(a * q / (d * e)), poch_inf(a * q / (d * f)),
       poch_inf(a * q / (e * f)), poch_inf(e * q / c), poch_inf(f * q / c), poch_inf(b / a),
       poch_inf(b * e * f / a)},
      {poch_inf(a * q / d), poch_inf(a * q / e), poch_inf(a * q / f),
       poch_inf(a * q / (d * e * f)), poch_inf(q / c), poch_inf(e * f * q / c),
       poch_inf(b * e / a), poch_inf(b * f / a)},
      phi({e * f / c, a * q / (b * c), a * q / (c * d), e * f / a, e, f},
          {b * e * f / a, d * e * f / a, a * q / c, f * q / c, e * q / c}, b * d / a, sqrt_efc));

  ExpressionTerm second = product(
      {monomial_power(b / a, {1, 0}), poch_inf(a * q), poch_inf(b * q / a), poch_inf(b * q / c),
       poch_inf(b * q / d), poch_inf(b * q / e), poch_inf(b * q / f), poch_inf(d), poch_inf(e),
       poch_inf(f), poch_inf(a * q / (b * c)), poch_inf(b * d * e * f / power(a, 2)),
       poch_inf(power(a, 2) * q / (b * d * e * f))},
      {poch_inf(a * q / b), poch_inf(a * q / c), poch_inf(a * q / d), poch_inf(a * q / e),
       poch_inf(a * q / f), poch_inf(b * d / a), poch_inf(b * e / a), poch_inf(b * f / a),
       poch_inf(d * e * f / a), poch_inf(a * q / (d * e * f)), poch_inf(q / c),
       poch_inf(power(b, 2) * q / a)},
      phi({power(b, 2) / a, b, b * c / a, b * d / a, b * e / a, b * f / a},
          {b * q / a, b * q / c, b * q / d, b * q / e, b * q / f}, arg, sqrt_b2a));

  r.rhs = Expression{{std::move(first), std::move(second)}};
  return r;
}

IdentityRecord prop4_semifinite_6psi6() {
  IdentityRecord r;
  r.id = "prop4_semifinite_6psi6";
  r.anchor = "semi-finite form of Bailey's 6psi6 sum, from the three-term 8phi7 transformation";
  r.parameters = kSixParameters;
  r.requires_m = true;
  r.tolerance_class = ToleranceClass::B;
  const Monomial arg = power(a, 2) * power(q, 2) / (b * c * d * e * f);
  r.constraints = {below_one(b * d / a, "|bd/a| < 1"),
                   below_one(arg, "|a^2q^2/bcdef| < 1")};
  // (q^{m-k+1}/a, f q^m)_k / (q^{m-k} f/a, q^{1+m})_k rewritten with
  // k-independent parameters: (a q^{-m}, f q^m)_k / (a q^{1-m}/f, q^{1+m})_k (q/f)^k.
  r.lhs = series_only(semi({a * qm(0, -1), f * qm(0, 1), b, c, d, e},
                           {a * qm(1, -1) / f, qm(1, 1), a * q / b, a * q / c, a * q / d, a * q / e},
                           arg, sqrt_a));

  const Monomial qm1 = qm(0, 1);   // q^m
  const Monomial q1m = qm(1, 1);   // q^{1+m}
  const Monomial q2m = qm(0, 2);   // q^{2m}
  const Monomial q12m = qm(1, 2);  // q^{1+2m}

  ExpressionTerm first = product(
      {linear(e * f * q2m / c), poch_fin(q / a, kM), poch_fin(d * f / a, kM),
       poch_fin(e * f / a, kM), poch_fin(a * q / (b * c), kM), poch_fin(a * q / (c * d), kM),
       poch_fin(e * f * qm1 / a, kM), poch_inf(a * q), poch_inf(a * q / (d * e)),
       poch_inf(a * q / (d * f)), poch_inf(a * q / (e * f)), poch_inf(e * q1m / c),
       poch_inf(f * q1m / c), poch_inf(b / a), poch_inf(b * e * f * qm1 / a)},
      {linear(e * f * qm1 / c), poch_fin(f / a, kM), poch_fin(q / b, kM), poch_fin(q / c, kM),
       poch_fin(q / d, kM), poch_fin(d * e * f / a, kM), poch_fin(f * q1m / c, kM),
       poch_inf(a * q / d), poch_inf(a * q / e), poch_inf(a * q / f),
       poch_inf(a * q / (d * e * f)), poch_inf(q1m / c), poch_inf(e * f * q1m / c),
       poch_inf(b * e / a), poch_inf(b * f * qm1 / a)},
      semi({e * f * qm1 / c, a * q1m / (b * c), a * q1m / (c * d), e * f * q2m / a, e, f * qm1},
           {q1m, b * e * f * qm1 / a, d * e * f * qm1 / a, a * q / c, f * q12m / c, e * q1m / c},
           b * d / a, qm1 * sqrt_efc));

  ExpressionTerm second = product(
      {monomial_power(b / a, {1, 0}), linear(power(b, 2) * q2m / a),
       monomial_power(power(a, 2) * q / (b * c * d * e), kM), poch_fin(q / a, kM),
       poch_fin(b * c / a, kM), poch_inf(a * q), poch_inf(b * q12m / a), poch_inf(b * q1m / c),
       poch_inf(b * q1m / d), poch_inf(b * q1m / e), poch_inf(b * q / f), poch_inf(d),
       poch_inf(e), poch_inf(f * qm1), poch_inf(a * q / (b * c)),
       poch_inf(b * d * e * f / power(a, 2)), poch_inf(power(a, 2) * q / (b * d * e * f))},
      {linear(power(b, 2) * qm1 / a), poch_fin(f / a, kM), poch_inf(a * q / b),
       poch_inf(a * q / c), poch_inf(a * q / d), poch_inf(a * q / e), poch_inf(a * q / f),
       poch_inf(b * d * qm1 / a), poch_inf(b * e * qm1 / a), poch_inf(b * f * q2m / a),
       poch_inf(d * e * f / a), poch_inf(a * q / (d * e * f)), poch_inf(q / c),
       poch_inf(power(b, 2) * q1m / a)},
      semi({power(b, 2) * qm1 / a, b, b * c * qm1 / a, b * d * qm1 / a, b * e * qm1 / a,
            b * f * q2m / a},
           {q1m, b * q12m / a, b * q1m / c, b * q1m / d, b * q1m / e, b * q / f}, arg,
           qm1 * sqrt_b2a));

  r.rhs = Expression{{std::move(first), std::move(second)}};
  return r;
}

IdentityRecord bailey_6psi6() {
  IdentityRecord r;
  r.id = "bailey_6psi6";
  r.anchor = "Bailey's very-well-poised 6psi6 summation";
  r.parameters = {Symbol::a, Symbol::b, Symbol::c, Symbol::d, Symbol::e, Symbol::sqrt_a};
  r.tolerance_class = ToleranceClass::B;
  const Monomial arg = power(a, 2) * q / (b * c * d * e);
  r.constraints = {below_one(arg, "|a^2q/bcde| < 1")};
  r.lhs = series_only(
      psi({b, c, d, e}, {a * q / b, a * q / c, a * q / d, a * q / e}, arg, sqrt_a));
  r.rhs = Expression{{product(
      {poch_inf(a * q), poch_inf(a * q / (b * c)), poch_inf(a * q / (b * d)),
       poch_inf(a * q / (b * e)), poch_inf(a * q / (c * e)), poch_inf(a * q / (c * d)),
       poch_inf(a * q / (d * e)), poch_inf(q), poch_inf(q / a)},
      {poch_inf(a * q / b), poch_inf(a * q / c), poch_inf(a * q / d), poch_inf(a * q / e),
       poch_inf(q / b), poch_inf(q / c), poch_inf(q / d), poch_inf(q / e), poch_inf(arg)})}};
  return r;
}

std::vector<IdentityRecord> build_registry() {
  std::vector<IdentityRecord> out;
  out.push_back(gauss_2phi1());
  out.push_back(ramanujan_1psi1());
  out.push_back(prop1_semifinite_1psi1());
  out.push_back(bailey_2psi2_a());
  out.push_back(ktw_3phi2());
  out.push_back(prop2_semifinite());
  out.push_back(bailey_2psi2_b());
  out.push_back(hall_3phi2());
  out.push_back(prop3_semifinite());
  out.push_back(bailey_8phi7_3term());
  out.push_back(prop4_semifinite_6psi6());
  out.push_back(bailey_6psi6());
  return out;
}

}  // namespace

double tolerance_of(ToleranceClass c) { return c == ToleranceClass::A ? 1e-9 : 1e-7; }

bool IdentityRecord::has_parameter(Symbol s) const {
  for (Symbol p : parameters) {
    if (p == s) return true;
  }
  return false;
}

const std::vector<IdentityRecord>& registry() {
  static const std::vector<IdentityRecord> records = build_registry();
  return records;
}

const IdentityRecord* find_identity(std::string_view id) {
  for (const auto& record : registry()) {
    if (record.id == id) return &record;
  }
  return nullptr;
}

}  // namespace qseries
