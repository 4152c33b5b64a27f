#pragma once

// Batch verification of identity records, m-sweeps of the semi-finite forms
// toward their bilateral limits, and termwise limit checks.

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qseries/identities.hpp"

namespace qseries {

enum class Status { pass, fail, pole, nonconvergent, domain_violation };

std::string_view status_name(Status s);

struct VerifyOptions {
  EvalControl eval;
  std::optional<double> tol_override;
};

struct VerificationReport {
  std::string identity_id;
  ParameterAssignment assignment;
  std::optional<int> m;
  std::complex<double> lhs{std::nan(""), std::nan("")};
  std::complex<double> rhs{std::nan(""), std::nan("")};
  double rel_err = std::nan("");
  double tolerance = 0.0;
  long lhs_terms = 0;
  long rhs_terms = 0;
  Status status = Status::fail;
  std::string message;
};

// Never throws for poles, divergence or out-of-domain assignments; those end
// in a status.  A malformed assignment (missing symbols, bad sqrt) still
// throws InvalidInput.
VerificationReport verify_identity(const IdentityRecord& record, const ParameterAssignment& asg,
                                   const VerifyOptions& options = {});

struct BatchOptions {
  std::vector<int> m_values{0, 1, 2, 3, 5, 8, 13};
  // Base sampler settings; margin and the pole-screen m values are overwritten.
  SamplerOptions sampler;
  VerifyOptions verify;
};

struct BatchSummary {
  std::string identity_id;
  long samples = 0;
  long reports = 0;
  long passed = 0;
  double pass_rate = 0.0;
  double max_rel_err = 0.0;
};

struct BatchResult {
  std::vector<VerificationReport> reports;
  BatchSummary summary;
};

// Sample i is sample_admissible(record, seed, i, margin); records with m get
// one report per value in options.m_values.
BatchResult verify_batch(const IdentityRecord& record, long count, std::uint64_t seed,
                         double margin, const BatchOptions& options = {});

bool is_semifinite(const IdentityRecord& record);

// The bilateral record a semi-finite record tends to as m grows, or nullptr.
const IdentityRecord* limit_record(const IdentityRecord& semifinite);

// Sampler settings for sweeps: the limit identity's constraints are added,
// f is tied to b for the 6psi6 limit, and |q| is kept small enough for the
// geometric decay to be visible within the default m range.  For the 6psi6
// limit the error carries a q^m mode and a (a^2q/bcde)^m mode; the second is
// kept below half the first so they do not interfere.
SamplerOptions sweep_sampler_options(const IdentityRecord& semifinite, double margin = 0.08);

// Default m ranges for `sweep`.
std::vector<int> default_sweep_m(const IdentityRecord& semifinite);

struct SweepRow {
  int m = 0;
  std::complex<double> semi_finite_value;
  std::complex<double> limit_value;
  double err = std::nan("");
  Status status = Status::pass;
};

struct SweepReport {
  std::string semifinite_id;
  std::string limit_id;
  ParameterAssignment assignment;
  std::vector<SweepRow> rows;
  // (err(m_last) / err(m_first))^(1 / (m_last - m_first)) over the last four
  // rows whose err lies above the resolution floor.
  std::optional<double> fitted_ratio;
  // max(|q|, negative-side ratio of the limit series).
  double theoretical_ratio = 0.0;
};

// Truncation tolerances of 1e-15 so that the limit error stays resolvable
// well below the 1e-12 default.
EvalControl tight_eval_control();

// Rows with err at or below this carry rounding noise, not truncation decay.
inline constexpr double kResolutionFloor = 1e-13;

struct SweepOptions {
  EvalControl eval = tight_eval_control();
  int prop4_m_cap = 10;
};

// err(m) = |semi-finite sum at m - limit closed form| / |limit closed form|.
// The assignment must satisfy the limit record's constraints.
SweepReport sweep_m(std::string_view semifinite_id, const ParameterAssignment& asg,
                    const std::vector<int>& m_values, const SweepOptions& options = {});

struct LimitConsistencyReport {
  std::string semifinite_id;
  int m_large = 0;
  std::vector<long> ks;
  std::vector<double> discrepancies;
  double max_rel_discrepancy = 0.0;
};

// Compares the semi-finite summand G(k, m_large) with the bilateral summand B(k).
LimitConsistencyReport limit_consistency(std::string_view semifinite_id,
                                         const ParameterAssignment& asg, long k_min, long k_max,
                                         int m_large);

struct ChainReport {
  int m = 0;
  // Both sides of the semi-finite identity at (asg, m).
  std::complex<double> semi_finite_lhs;
  std::complex<double> semi_finite_value;
  // P * 1psi1(e; aq/c; q, bd/a) with the 1psi1 summed as a series.
  std::complex<double> inner_series_value;
  // Same with the 1psi1 replaced by its product form.
  std::complex<double> inner_product_value;
  std::complex<double> closed_form;
  double lhs_vs_rhs = 0.0;
  double semi_vs_inner = 0.0;
  double series_vs_product = 0.0;
  double product_vs_closed = 0.0;
};

// The f = b, m -> infinity route from the semi-finite 8phi7 form to Bailey's
// 6psi6 sum through a 1psi1 with parameters e, aq/c and argument bd/a.
// Requires |aq/ce| < |bd/a| < 1 and f = b in the assignment.
ChainReport prop4_chain(const ParameterAssignment& asg, int m, const EvalControl& ctrl = {});

// Adds |aq/ce| < |bd/a| and |a^2q/bcde| < 1 to the sweep settings.
SamplerOptions chain_sampler_options(double margin = 0.08);

}  // namespace qseries
