#include <cmath>
#include <complex>
#include <string>

#include "doctest.h"
#include "qseries/verify.hpp"

using namespace qseries;
using C = std::complex<double>;

namespace {

const IdentityRecord& record(const char* id) {
  const IdentityRecord* r = find_identity(id);
  REQUIRE(r != nullptr);
  return *r;
}

std::string summary_line(const BatchResult& batch) {
  const auto& s = batch.summary;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s %ld %ld %ld %.17g %.17g", s.identity_id.c_str(),
                s.samples, s.reports, s.passed, s.pass_rate, s.max_rel_err);
  return buf;
}

SamplerOptions small_q(const IdentityRecord& r) {
  SamplerOptions options = sweep_sampler_options(r);
  options.q_min = 0.1;
  options.q_max = 0.6;
  return options;
}

}  // namespace

TEST_CASE("status names") {
  CHECK(status_name(Status::pass) == "pass");
  CHECK(status_name(Status::fail) == "fail");
  CHECK(status_name(Status::pole) == "pole");
  CHECK(status_name(Status::nonconvergent) == "nonconvergent");
  CHECK(status_name(Status::domain_violation) == "domain_violation");
}

TEST_CASE("q-Gauss sum at sampled assignments") {
  const auto& gauss = record("gauss_2phi1");
  for (std::uint64_t i = 0; i < 10; ++i) {
    const auto report = verify_identity(gauss, sample_admissible(gauss, 42, i, 0.08));
    CHECK(report.status == Status::pass);
    CHECK(report.rel_err < 1e-9);
    CHECK(report.tolerance == 1e-9);
    CHECK(report.lhs_terms > 0);
  }
}

TEST_CASE("pole in a denominator parameter") {
  // b = q^-2 kills (b;q)_k from k = 3 on and (b;q)_inf on the product side.
  ParameterAssignment asg;
  asg.values = {{Symbol::a, C(10.0)}, {Symbol::b, C(4.0)}, {Symbol::z, C(0.5)}};
  asg.q = C(0.5);
  const auto report = verify_identity(record("ramanujan_1psi1"), asg);
  CHECK(report.status == Status::pole);
  CHECK_FALSE(report.message.empty());
}

TEST_CASE("out-of-domain assignment") {
  ParameterAssignment asg;
  asg.values = {{Symbol::a, C(0.9)}, {Symbol::b, C(0.8)}, {Symbol::z, C(0.5)}};
  asg.q = C(0.5);
  const auto report = verify_identity(record("ramanujan_1psi1"), asg);
  CHECK(report.status == Status::domain_violation);
  CHECK(report.message.find("|b/a| < |z|") != std::string::npos);

  ParameterAssignment missing;
  missing.values = {{Symbol::a, C(0.9)}};
  CHECK_THROWS_AS(verify_identity(record("ramanujan_1psi1"), missing), InvalidInput);
}

TEST_CASE("semi-finite 1psi1 at m = 0") {
  const auto& prop1 = record("prop1_semifinite_1psi1");
  for (std::uint64_t i = 0; i < 10; ++i) {
    auto asg = sample_admissible(prop1, 42, i, 0.08);
    asg.m = 0;
    const auto report = verify_identity(prop1, asg);
    CHECK(report.status == Status::pass);
    CHECK(report.rel_err < 1e-12);
    CHECK(report.m == 0);
  }
}

TEST_CASE("tolerance override") {
  const auto& gauss = record("gauss_2phi1");
  VerifyOptions strict;
  strict.tol_override = 1e-30;
  const auto report = verify_identity(gauss, sample_admissible(gauss, 42, 0, 0.08), strict);
  CHECK(report.tolerance == 1e-30);
  CHECK(report.status == (report.rel_err == 0.0 ? Status::pass : Status::fail));
}

TEST_CASE("batch verification") {
  const auto& gauss = record("gauss_2phi1");
  const auto first = verify_batch(gauss, 100, 42, 0.08);
  const auto second = verify_batch(gauss, 100, 42, 0.08);
  CHECK(summary_line(first) == summary_line(second));
  CHECK(first.summary.samples == 100);
  CHECK(first.summary.reports == 100);
  CHECK(first.summary.pass_rate == 1.0);
  for (std::size_t i = 0; i < first.reports.size(); ++i) {
    CHECK(first.reports[i].lhs == second.reports[i].lhs);
    CHECK(first.reports[i].rhs == second.reports[i].rhs);
  }
  CHECK_THROWS_AS(verify_batch(gauss, 0, 42, 0.08), InvalidInput);

  const auto& prop2 = record("prop2_semifinite");
  BatchOptions options;
  options.m_values = {0, 4};
  const auto semi = verify_batch(prop2, 5, 7, 0.08, options);
  REQUIRE(semi.reports.size() == 10);
  CHECK(semi.reports[0].m == 0);
  CHECK(semi.reports[1].m == 4);
  CHECK(semi.summary.passed == 10);
}

TEST_CASE("limit records") {
  CHECK(limit_record(record("prop1_semifinite_1psi1"))->id == "ramanujan_1psi1");
  CHECK(limit_record(record("prop2_semifinite"))->id == "bailey_2psi2_a");
  CHECK(limit_record(record("prop3_semifinite"))->id == "bailey_2psi2_b");
  CHECK(limit_record(record("prop4_semifinite_6psi6"))->id == "bailey_6psi6");
  CHECK(limit_record(record("gauss_2phi1")) == nullptr);
  CHECK_FALSE(is_semifinite(record("bailey_6psi6")));
  CHECK_THROWS_AS(sweep_sampler_options(record("gauss_2phi1")), InvalidInput);
}

TEST_CASE("sweep with one m value") {
  const auto& prop1 = record("prop1_semifinite_1psi1");
  const auto asg = sample_admissible(prop1, 1, 0, sweep_sampler_options(prop1));
  const auto report = sweep_m(prop1.id, asg, {6});
  REQUIRE(report.rows.size() == 1);
  CHECK_FALSE(report.fitted_ratio.has_value());
  CHECK(report.limit_id == "ramanujan_1psi1");
  CHECK(report.rows[0].err >= 0.0);
}

TEST_CASE("sweep input errors") {
  const auto& prop1 = record("prop1_semifinite_1psi1");
  const auto asg = sample_admissible(prop1, 1, 0, sweep_sampler_options(prop1));
  CHECK_THROWS_AS(sweep_m("gauss_2phi1", asg, {1, 2}), InvalidInput);
  CHECK_THROWS_AS(sweep_m("no_such_id", asg, {1, 2}), InvalidInput);
  CHECK_THROWS_AS(sweep_m(prop1.id, asg, {}), InvalidInput);
  CHECK_THROWS_AS(sweep_m(prop1.id, asg, {-1, 2}), InvalidInput);

  const auto& prop4 = record("prop4_semifinite_6psi6");
  const auto six = sample_admissible(prop4, 1, 0, sweep_sampler_options(prop4));
  CHECK_THROWS_AS(sweep_m(prop4.id, six, {4, 11}), InvalidInput);
  SweepOptions wider;
  wider.prop4_m_cap = 12;
  CHECK_NOTHROW(sweep_m(prop4.id, six, {11}, wider));
}

TEST_CASE("sweep rows are sorted and decay toward the limit") {
  const auto& prop1 = record("prop1_semifinite_1psi1");
  const auto options = small_q(prop1);
  for (std::uint64_t i = 0; i < 5; ++i) {
    CAPTURE(i);
    const auto asg = sample_admissible(prop1, 19, i, options);
    const auto report = sweep_m(prop1.id, asg, {20, 4, 6, 8, 10, 12, 14, 16, 18, 4});
    REQUIRE(report.rows.size() == 9);
    for (std::size_t j = 0; j + 1 < report.rows.size(); ++j) {
      CHECK(report.rows[j].m < report.rows[j + 1].m);
      CHECK(report.rows[j + 1].err < 2.0 * report.rows[j].err + kResolutionFloor);
    }
    CHECK(report.rows.back().err < report.rows.front().err);
    CHECK(report.theoretical_ratio >= std::abs(asg.q));
  }
}

TEST_CASE("termwise limit of the semi-finite 1psi1 summand") {
  const auto& prop1 = record("prop1_semifinite_1psi1");
  const auto options = small_q(prop1);
  for (std::uint64_t i = 0; i < 5; ++i) {
    CAPTURE(i);
    const auto asg = sample_admissible(prop1, 23, i, options);
    double previous = INFINITY;
    for (int m : {5, 10, 20, 40}) {
      const auto report = limit_consistency(prop1.id, asg, -5, 5, m);
      CHECK(report.ks.size() == 11);
      CHECK(report.max_rel_discrepancy <= previous);
      previous = report.max_rel_discrepancy;
    }
    CHECK(previous < 1e-8);

    // B(0) = 1, so the k = 0 discrepancy is |G(0, m) - 1|.
    const auto at_zero = limit_consistency(prop1.id, asg, 0, 0, 10);
    auto with_m = asg;
    with_m.m = 10;
    const auto spec = instantiate_series<double>(*prop1.lhs.terms[0].series, with_m);
    const C g0 = term_at(spec, QBase<double>(asg.q), 0);
    CHECK(at_zero.max_rel_discrepancy == doctest::Approx(std::abs(g0 - C(1))).epsilon(1e-6));
  }
  const auto asg = sample_admissible(prop1, 23, 0, options);
  CHECK_THROWS_AS(limit_consistency(prop1.id, asg, -5, 5, 4), InvalidInput);
  CHECK_THROWS_AS(limit_consistency("bailey_6psi6", asg, 0, 1, 4), InvalidInput);
}

TEST_CASE("semi-finite 8phi7 form through the inner 1psi1 to the 6psi6 sum") {
  const auto options = chain_sampler_options();
  const auto& prop4 = record("prop4_semifinite_6psi6");
  for (std::uint64_t i = 0; i < 3; ++i) {
    CAPTURE(i);
    const auto asg = sample_admissible(prop4, 31, i, options);
    const auto chain = prop4_chain(asg, 10);
    CHECK(chain.m == 10);
    CHECK(chain.lhs_vs_rhs < 1e-7);
    CHECK(chain.semi_vs_inner < 1e-7);
    CHECK(chain.series_vs_product < 1e-7);
    CHECK(chain.product_vs_closed < 1e-7);
  }
  auto untied = sample_admissible(prop4, 31, 0, options);
  untied.values[Symbol::f] *= 1.1;
  CHECK_THROWS_AS(prop4_chain(untied, 10), InvalidInput);
}
