#include <algorithm>
#include <cmath>
#include <complex>
#include <set>
#include <string>
#include <utility>

#include "doctest.h"
#include "qseries/identities.hpp"

using namespace qseries;
using C = std::complex<double>;

namespace {

double rel(C x, C y) {
  const double scale = std::max(std::abs(x), std::abs(y));
  return scale == 0.0 ? 0.0 : std::abs(x - y) / scale;
}

std::vector<std::string> constraint_texts(const IdentityRecord& r) {
  std::vector<std::string> out;
  for (const auto& c : r.constraints) out.push_back(c.text);
  return out;
}

bool same_assignment(const ParameterAssignment& x, const ParameterAssignment& y) {
  return x.values == y.values && x.q == y.q && x.m == y.m;
}

C inf(C a, const QBase<double>& base) { return qpoch_infinite(a, base).value; }

}  // namespace

TEST_CASE("registry contents") {
  const auto& records = registry();
  REQUIRE(records.size() == 12);
  const std::vector<std::string> ids{"gauss_2phi1",         "ramanujan_1psi1",
                                     "prop1_semifinite_1psi1", "bailey_2psi2_a",
                                     "ktw_3phi2",           "prop2_semifinite",
                                     "bailey_2psi2_b",      "hall_3phi2",
                                     "prop3_semifinite",    "bailey_8phi7_3term",
                                     "prop4_semifinite_6psi6", "bailey_6psi6"};
  for (std::size_t i = 0; i < ids.size(); ++i) {
    CHECK(records[i].id == ids[i]);
    CHECK(find_identity(ids[i]) == &records[i]);
    CHECK_FALSE(records[i].anchor.empty());
  }
  CHECK(find_identity("no_such_id") == nullptr);

  const std::set<std::string> semifinite{"prop1_semifinite_1psi1", "prop2_semifinite",
                                         "prop3_semifinite", "prop4_semifinite_6psi6"};
  for (const auto& r : records) CHECK(r.requires_m == (semifinite.count(r.id) == 1));

  CHECK(constraint_texts(*find_identity("ramanujan_1psi1")) ==
        std::vector<std::string>{"|b/a| < |z|", "|z| < 1"});
  CHECK(constraint_texts(*find_identity("bailey_2psi2_a")) ==
        std::vector<std::string>{"|z| < 1", "|cd/abz| < 1", "|d/a| < 1", "|c/b| < 1"});
  CHECK(constraint_texts(*find_identity("prop4_semifinite_6psi6")) ==
        std::vector<std::string>{"|bd/a| < 1", "|a^2q^2/bcdef| < 1"});
}

TEST_CASE("tolerance classes") {
  const std::set<std::string> class_b{"bailey_8phi7_3term", "prop4_semifinite_6psi6",
                                      "bailey_6psi6"};
  for (const auto& r : registry()) {
    CHECK(r.tolerance() == (class_b.count(r.id) ? 1e-7 : 1e-9));
  }
}

TEST_CASE("records only use declared symbols") {
  for (const auto& r : registry()) {
    CAPTURE(r.id);
    std::vector<Symbol> used = r.lhs.symbols();
    const auto rhs = r.rhs.symbols();
    used.insert(used.end(), rhs.begin(), rhs.end());
    for (const auto& c : r.constraints) {
      for (Symbol s : kAllSymbols) {
        if (c.smaller.uses(s) || (c.larger && c.larger->uses(s))) used.push_back(s);
      }
    }
    for (Symbol s : used) CHECK(r.has_parameter(s));
    CHECK((r.lhs.uses_m() || r.rhs.uses_m()) == r.requires_m);
    CHECK(r.lhs.terms.size() <= 2);
    CHECK(r.rhs.terms.size() <= 2);
  }
}

TEST_CASE("symbol names round trip") {
  for (Symbol s : kAllSymbols) CHECK(parse_symbol(symbol_name(s)) == s);
  CHECK_FALSE(parse_symbol("g").has_value());
  CHECK(is_sqrt_symbol(Symbol::sqrt_efc));
  CHECK_FALSE(is_sqrt_symbol(Symbol::e));
}

TEST_CASE("empty expression is 1") {
  ParameterAssignment asg;
  const auto v = eval_expression<double>(Expression{}, asg);
  CHECK(v.value == C(1));
  const auto one_term = eval_expression<double>(Expression{{ExpressionTerm{}}}, asg);
  CHECK(one_term.value == C(1));
}

TEST_CASE("q-Gauss product side") {
  const auto& gauss = *find_identity("gauss_2phi1");
  ParameterAssignment asg;
  asg.values = {{Symbol::a, C(0.4)}, {Symbol::b, C(0.3)}, {Symbol::c, C(0.2)}};
  asg.q = C(0.5);
  const QBase<double> base(asg.q);
  const C expected = inf(C(0.5), base) * inf(C(2.0 / 3.0), base) /
                     (inf(C(0.2), base) * inf(C(0.2 / 0.12), base));
  CHECK(rel(eval_expression<double>(gauss.rhs, asg).value, expected) < 1e-14);

  // 300 terms of the series as a cross-check at a point with |c/ab| < 1.
  asg.values[Symbol::c] = C(0.05);
  const C z = C(0.05) / C(0.12);
  C sum(0);
  C term(1);
  for (long k = 0; k < 300; ++k) {
    sum += term;
    const double qk = std::pow(0.5, static_cast<double>(k));
    term *= (1.0 - 0.4 * qk) * (1.0 - 0.3 * qk) / ((1.0 - 0.05 * qk) * (1.0 - 0.5 * qk)) * z;
  }
  CHECK(rel(eval_expression<double>(gauss.rhs, asg).value, sum) < 1e-12);
}

TEST_CASE("semi-finite 1psi1 product side in two orders") {
  const auto& prop1 = *find_identity("prop1_semifinite_1psi1");
  ParameterAssignment asg;
  const C a(0.8, 0.4), b(0.3, -0.5), z(0.45, 0.25), q(0.35, -0.2);
  asg.values = {{Symbol::a, a}, {Symbol::b, b}, {Symbol::z, z}};
  asg.q = q;
  asg.m = 2;
  const QBase<double> base(q);
  const C finite = qpoch_finite(q, base, 2) * qpoch_finite(q / (a * z), base, 2) /
                   (qpoch_finite(q / a, base, 2) * qpoch_finite(b / (a * z), base, 2));
  const C infinite = inf(b / a, base) * inf(a * z, base) / (inf(b, base) * inf(z, base));
  // Second order: the finite quotients as infinite-product ratios.
  const C finite_as_ratio = inf(q, base) / inf(q * q * q, base) * inf(q / (a * z), base) /
                            inf(q * q * q / (a * z), base) * inf(q * q * q / a, base) /
                            inf(q / a, base) * inf(b * q * q / (a * z), base) /
                            inf(b / (a * z), base);
  const C value = eval_expression<double>(prop1.rhs, asg).value;
  CHECK(rel(value, finite * infinite) < 1e-12);
  CHECK(rel(value, finite_as_ratio * infinite) < 1e-12);
}

TEST_CASE("semi-finite 1psi1 at m = 0 is the q-Gauss sum") {
  const auto& prop1 = *find_identity("prop1_semifinite_1psi1");
  const auto& gauss = *find_identity("gauss_2phi1");
  for (std::uint64_t i = 0; i < 20; ++i) {
    ParameterAssignment asg = sample_admissible(prop1, 3, i, 0.08);
    asg.m = 0;
    ParameterAssignment g;
    g.q = asg.q;
    g.values = {{Symbol::a, asg.at(Symbol::a)},
                {Symbol::b, asg.at(Symbol::b) / (asg.at(Symbol::a) * asg.at(Symbol::z))},
                {Symbol::c, asg.at(Symbol::b)}};
    const C p_lhs = eval_expression<double>(prop1.lhs, asg).value;
    const C p_rhs = eval_expression<double>(prop1.rhs, asg).value;
    CHECK(rel(p_lhs, eval_expression<double>(gauss.lhs, g).value) < 1e-12);
    CHECK(rel(p_rhs, eval_expression<double>(gauss.rhs, g).value) < 1e-12);
  }
}

TEST_CASE("domain checks") {
  const auto& transform = *find_identity("bailey_2psi2_a");
  ParameterAssignment asg;
  // z, cd/abz, d/a and c/b all equal 0.5.
  asg.values = {{Symbol::a, C(1.0)}, {Symbol::b, C(1.0)}, {Symbol::c, C(0.5)},
                {Symbol::d, C(0.5)}, {Symbol::e, C(0.3)}, {Symbol::z, C(0.5)}};
  asg.q = C(0.4);
  CHECK(check_domain(transform, asg).satisfied);
  const auto checks = concrete_constraints(transform.constraints, asg);
  REQUIRE(checks.size() == 4);
  for (const auto& c : checks) CHECK(c.actual_ratio() == doctest::Approx(0.5));

  asg.values[Symbol::d] = C(1.5);
  const auto report = check_domain(transform, asg);
  CHECK_FALSE(report.satisfied);
  CHECK(report.violations.size() == 2);
}

TEST_CASE("assignment validation") {
  const auto& six = *find_identity("bailey_6psi6");
  ParameterAssignment asg = sample_admissible(six, 5, 0, 0.08);
  CHECK_NOTHROW(validate_assignment(six, asg));
  const C root = asg.at(Symbol::sqrt_a);
  CHECK(rel(root * root, asg.at(Symbol::a)) < 1e-14);
  CHECK(root.real() >= 0.0);

  ParameterAssignment negated = asg;
  negated.values[Symbol::sqrt_a] = -root;
  CHECK_NOTHROW(validate_assignment(six, negated));

  ParameterAssignment wrong = asg;
  wrong.values[Symbol::sqrt_a] = root * 1.001;
  CHECK_THROWS_AS(validate_assignment(six, wrong), InvalidInput);

  ParameterAssignment missing = asg;
  missing.values.erase(Symbol::e);
  CHECK_THROWS_AS(validate_assignment(six, missing), InvalidInput);

  ParameterAssignment big_q = asg;
  big_q.q = C(1.0);
  CHECK_THROWS_AS(validate_assignment(six, big_q), InvalidInput);

  const auto& prop1 = *find_identity("prop1_semifinite_1psi1");
  ParameterAssignment no_m = sample_admissible(prop1, 5, 0, 0.08);
  no_m.m.reset();
  CHECK_THROWS_AS(validate_assignment(prop1, no_m), InvalidInput);
  no_m.m = -1;
  CHECK_THROWS_AS(validate_assignment(prop1, no_m), InvalidInput);
}

TEST_CASE("completing square roots") {
  const auto& three_term = *find_identity("bailey_8phi7_3term");
  ParameterAssignment asg;
  asg.values = {{Symbol::a, C(0.3, 0.4)}, {Symbol::b, C(1.2)},     {Symbol::c, C(0.5, 0.5)},
                {Symbol::d, C(-0.7)},     {Symbol::e, C(0.9, -1.1)}, {Symbol::f, C(0.6, 0.2)}};
  complete_sqrt_symbols(three_term, asg);
  for (Symbol s : three_term.parameters) {
    if (!is_sqrt_symbol(s)) continue;
    const C root = asg.at(s);
    const C radicand = evaluate_monomial(sqrt_radicand(s), asg);
    CHECK(rel(root * root, radicand) < 1e-15);
    CHECK(root == std::sqrt(radicand));
  }
  CHECK_THROWS_AS(sqrt_radicand(Symbol::a), InvalidInput);
}

TEST_CASE("6psi6 series argument and symmetry") {
  const auto& six = *find_identity("bailey_6psi6");
  REQUIRE(six.lhs.terms.size() == 1);
  const auto& series = *six.lhs.terms[0].series;
  const Monomial expected =
      power(Monomial::symbol(Symbol::a), 2) * Monomial::q_to(1) /
      (Monomial::symbol(Symbol::b) * Monomial::symbol(Symbol::c) *
       Monomial::symbol(Symbol::d) * Monomial::symbol(Symbol::e));
  CHECK(series.argument == expected);
  CHECK(series.very_well_poised_sqrt == Monomial::symbol(Symbol::sqrt_a));

  const ParameterAssignment asg = sample_admissible(six, 11, 2, 0.08);
  const C base_value = eval_expression<double>(six.rhs, asg).value;
  const std::pair<Symbol, Symbol> swaps[] = {{Symbol::b, Symbol::c}, {Symbol::c, Symbol::e},
                                             {Symbol::b, Symbol::d}};
  for (const auto& [x, y] : swaps) {
    ParameterAssignment swapped = asg;
    std::swap(swapped.values[x], swapped.values[y]);
    CHECK(rel(eval_expression<double>(six.rhs, swapped).value, base_value) < 1e-9);
    CHECK(rel(eval_expression<double>(six.lhs, swapped).value,
              eval_expression<double>(six.lhs, asg).value) < 1e-9);
  }
}

TEST_CASE("sampler is deterministic and respects margins") {
  const auto& ram = *find_identity("ramanujan_1psi1");
  for (std::uint64_t i = 0; i < 50; ++i) {
    const auto x = sample_admissible(ram, 42, i, 0.08);
    const auto y = sample_admissible(ram, 42, i, 0.08);
    CHECK(same_assignment(x, y));
    const C a = x.at(Symbol::a), b = x.at(Symbol::b), z = x.at(Symbol::z);
    CHECK(std::abs(b / a) <= (1.0 - 0.08) * std::abs(z));
    CHECK(std::abs(z) <= 1.0 - 0.08);
    CHECK(std::abs(x.q) >= 0.1);
    CHECK(std::abs(x.q) <= 0.8);
    for (const auto& [s, v] : x.values) {
      CHECK(std::abs(v) >= 0.2 * (1.0 - 1e-12));
      CHECK(std::abs(v) <= 2.0 * (1.0 + 1e-12));
    }
    CHECK_FALSE(x.m.has_value());
  }
  CHECK_FALSE(same_assignment(sample_admissible(ram, 42, 0, 0.08),
                              sample_admissible(ram, 42, 1, 0.08)));
  CHECK_FALSE(same_assignment(sample_admissible(ram, 42, 0, 0.08),
                              sample_admissible(ram, 43, 0, 0.08)));
}

TEST_CASE("sampler option validation") {
  const auto& ram = *find_identity("ramanujan_1psi1");
  CHECK_THROWS_AS(sample_admissible(ram, 1, 0, 0.0), InvalidInput);
  CHECK_THROWS_AS(sample_admissible(ram, 1, 0, 1.0), InvalidInput);
  SamplerOptions bad;
  bad.q_max = 1.0;
  CHECK_THROWS_AS(sample_admissible(ram, 1, 0, bad), InvalidInput);

  SamplerOptions impossible;
  impossible.modulus_min = 1.5;
  impossible.max_rejections = 50;
  impossible.extra_constraints.push_back(
      {Monomial::symbol(Symbol::a), std::nullopt, 0.5, "|a| < 0.5"});
  CHECK_THROWS_AS(sample_admissible(ram, 1, 0, impossible), SamplingExhausted);
}

TEST_CASE("f tied to b") {
  const auto& prop4 = *find_identity("prop4_semifinite_6psi6");
  SamplerOptions options;
  options.f_equals_b = true;
  const auto asg = sample_admissible(prop4, 8, 0, options);
  CHECK(asg.at(Symbol::f) == asg.at(Symbol::b));
  CHECK(asg.m == 0);
}

TEST_CASE("1000 draws per record without exhaustion") {
  for (const auto& r : registry()) {
    CAPTURE(r.id);
    long drawn = 0;
    for (std::uint64_t i = 0; i < 1000; ++i) {
      const auto asg = sample_admissible(r, 2024, i, 0.08);
      CHECK(check_domain(r, asg).satisfied);
      ++drawn;
    }
    CHECK(drawn == 1000);
  }
}

TEST_CASE("adaptive evaluation escalates on cancellation") {
  const auto& prop1 = *find_identity("prop1_semifinite_1psi1");
  ParameterAssignment asg;
  asg.values = {{Symbol::a, C(0.1798002220991918, -0.2581662808764924)},
                {Symbol::b, C(-0.20435855334636752, 1.9489153069649663)},
                {Symbol::z, C(0.5415809885442312, -0.010113848017274094)}};
  asg.q = C(-0.11071032106363754, -0.072508523500261601);
  // Reference values from a 50-digit evaluation.
  const std::pair<int, C> oracle[] = {
      {5, C(-0.20433562828135704, -0.12056946223156273)},
      {8, C(-0.20423952673410156, -0.12059856301620958)},
      {13, C(-0.20423955635902147, -0.12059879395990433)},
  };
  for (const auto& [m, expected] : oracle) {
    asg.m = m;
    const auto lhs = eval_expression_adaptive(prop1.lhs, asg, EvalControl{}, 1e-11);
    const auto rhs = eval_expression_adaptive(prop1.rhs, asg, EvalControl{}, 1e-11);
    CHECK(rel(lhs.value, expected) < 1e-11);
    CHECK(rel(rhs.value, expected) < 1e-12);
  }
  asg.m = 13;
  CHECK(eval_expression_adaptive(prop1.lhs, asg, EvalControl{}, 1e-11).used ==
        WorkingPrecision::quad);
}
