#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qseries/identities.hpp"

namespace qseries {

enum class OutputFormat { json, csv, human };

struct CliConfig {
  std::uint64_t seed = 1;
  long count = 100;
  double margin = 0.08;
  std::optional<double> tol_override;
  std::vector<int> m_list{0, 1, 2, 3, 5, 8, 13};
  std::optional<OutputFormat> format;
  std::optional<std::string> output_path;
  std::optional<std::string> params;

  void validate() const;
};

// "name=re" or "name=re+imj" entries separated by commas.  q is required and
// m optional; missing square-root symbols are filled with the principal root.
ParameterAssignment parse_params(std::string_view text, const IdentityRecord& record);

// "re", "imj", "re+imj" or "re-imj".
std::complex<double> parse_complex(std::string_view text);

// Exit codes: 0 all pass, 1 a verification failure, 2 usage or input error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qseries
