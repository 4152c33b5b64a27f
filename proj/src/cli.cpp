#include "qseries/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qseries/verify.hpp"

namespace qseries {

namespace {

using nlohmann::json;
using C = std::complex<double>;

// Raised for usage problems that CLI11 itself does not catch.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string full(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string sci3(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

std::string complex_text(C x) { return "(" + full(x.real()) + ", " + full(x.imag()) + ")"; }

json complex_json(C x) {
  auto part = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  return json::array({part(x.real()), part(x.imag())});
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json params_json(const ParameterAssignment& asg) {
  json out = json::object();
  for (const auto& [symbol, value] : asg.values) out[std::string(symbol_name(symbol))] = complex_json(value);
  out["q"] = complex_json(asg.q);
  return out;
}

json report_json(const VerificationReport& r) {
  return {{"identity", r.identity_id},
          {"params", params_json(r.assignment)},
          {"m", r.m ? json(*r.m) : json(nullptr)},
          {"lhs", complex_json(r.lhs)},
          {"rhs", complex_json(r.rhs)},
          {"rel_err", number_or_null(r.rel_err)},
          {"status", std::string(status_name(r.status))}};
}

std::string params_text(const ParameterAssignment& asg) {
  std::string out;
  for (const auto& [symbol, value] : asg.values) {
    out += std::string(symbol_name(symbol)) + "=" + complex_text(value) + " ";
  }
  return out + "q=" + complex_text(asg.q);
}

OutputFormat parse_format(const std::string& name) {
  if (name == "json") return OutputFormat::json;
  if (name == "csv") return OutputFormat::csv;
  return OutputFormat::human;
}

const IdentityRecord& lookup(const std::string& id) {
  const IdentityRecord* record = find_identity(id);
  if (!record) throw UsageError("unknown identity id '" + id + "' (see `list`)");
  return *record;
}

void emit(const std::string& text, const CliConfig& cfg, std::ostream& out) {
  if (cfg.output_path) {
    std::ofstream file(*cfg.output_path, std::ios::binary);
    if (!file) throw UsageError("cannot open output file " + *cfg.output_path);
    file << text;
    return;
  }
  out << text;
}

int cmd_list(const CliConfig& cfg, std::ostream& out) {
  std::ostringstream text;
  if (cfg.format.value_or(OutputFormat::human) == OutputFormat::json) {
    json all = json::array();
    for (const auto& r : registry()) {
      json constraints = json::array();
      for (const auto& c : r.constraints) constraints.push_back(c.text);
      all.push_back({{"id", r.id}, {"anchor", r.anchor}, {"constraints", constraints}});
    }
    text << all.dump(2) << "\n";
  } else if (cfg.format == OutputFormat::csv) {
    text << "id,tolerance,requires_m\n";
    for (const auto& r : registry()) {
      text << r.id << "," << sci3(r.tolerance()) << "," << (r.requires_m ? 1 : 0) << "\n";
    }
  } else {
    for (const auto& r : registry()) {
      std::string constraints;
      for (const auto& c : r.constraints) {
        constraints += (constraints.empty() ? "" : ", ") + c.text;
      }
      text << r.id << "  " << r.anchor << "  [" << constraints << "]\n";
    }
  }
  emit(text.str(), cfg, out);
  return 0;
}

struct IndexedReport {
  long sample;
  VerificationReport report;
};

std::vector<IndexedReport> run_record(const IdentityRecord& record, const CliConfig& cfg) {
  VerifyOptions verify;
  verify.tol_override = cfg.tol_override;
  std::vector<IndexedReport> out;
  if (cfg.params) {
    ParameterAssignment asg = parse_params(*cfg.params, record);
    std::vector<std::optional<int>> ms;
    if (record.requires_m && !asg.m) {
      for (int m : cfg.m_list) ms.emplace_back(m);
    } else {
      ms.emplace_back(asg.m);
    }
    for (const auto& m : ms) {
      asg.m = m;
      out.push_back({0, verify_identity(record, asg, verify)});
    }
    return out;
  }
  BatchOptions batch;
  batch.m_values = cfg.m_list;
  batch.verify = verify;
  const auto result = verify_batch(record, cfg.count, cfg.seed, cfg.margin, batch);
  const long per_sample = record.requires_m ? static_cast<long>(cfg.m_list.size()) : 1;
  for (std::size_t i = 0; i < result.reports.size(); ++i) {
    out.push_back({static_cast<long>(i) / per_sample, result.reports[i]});
  }
  return out;
}

int cmd_verify(const std::string& id, const CliConfig& cfg, std::ostream& out) {
  std::vector<const IdentityRecord*> records;
  if (id == "all") {
    if (cfg.params) throw UsageError("--params needs a single identity id, not 'all'");
    for (const auto& r : registry()) records.push_back(&r);
  } else {
    records.push_back(&lookup(id));
  }

  const OutputFormat format = cfg.format.value_or(OutputFormat::human);
  std::ostringstream text;
  json all = json::array();
  if (format == OutputFormat::csv) text << "identity,sample,m,rel_err,status\n";
  long failing_records = 0;
  for (const IdentityRecord* record : records) {
    const auto reports = run_record(*record, cfg);
    long passed = 0;
    double max_rel = 0.0;
    for (const auto& [sample, r] : reports) {
      if (r.status == Status::pass) ++passed;
      max_rel = std::isnan(r.rel_err) ? INFINITY : std::max(max_rel, r.rel_err);
    }
    const bool ok = passed == static_cast<long>(reports.size());
    if (!ok) ++failing_records;
    switch (format) {
      case OutputFormat::json:
        for (const auto& [sample, r] : reports) all.push_back(report_json(r));
        break;
      case OutputFormat::csv:
        for (const auto& [sample, r] : reports) {
          text << r.identity_id << "," << sample << "," << (r.m ? std::to_string(*r.m) : "")
               << "," << full(r.rel_err) << "," << status_name(r.status) << "\n";
        }
        break;
      case OutputFormat::human:
        if (cfg.params) {
          for (const auto& [sample, r] : reports) {
            text << r.identity_id << (r.m ? " m=" + std::to_string(*r.m) : "")
                 << " status=" << status_name(r.status) << " rel_err=" << sci3(r.rel_err)
                 << " lhs=" << complex_text(r.lhs) << " rhs=" << complex_text(r.rhs);
            if (!r.message.empty()) text << " (" << r.message << ")";
            text << "\n";
          }
          break;
        }
        text << record->id << "  reports=" << reports.size() << " passed=" << passed
             << " max_rel_err=" << sci3(max_rel) << "  " << (ok ? "PASS" : "FAIL") << "\n";
        for (const auto& [sample, r] : reports) {
          if (r.status == Status::pass) continue;
          text << "  sample " << sample << (r.m ? " m=" + std::to_string(*r.m) : "") << " "
               << status_name(r.status) << " rel_err=" << sci3(r.rel_err);
          if (!r.message.empty()) text << " (" << r.message << ")";
          text << "\n";
        }
        break;
    }
  }
  if (format == OutputFormat::json) text << all.dump(2) << "\n";
  if (format == OutputFormat::human && !cfg.params) {
    text << (records.size() - failing_records) << " of " << records.size()
         << " identities pass\n";
  }
  emit(text.str(), cfg, out);
  return failing_records == 0 ? 0 : 1;
}

int cmd_sweep(const std::string& id, const CliConfig& cfg, bool m_list_given,
              std::ostream& out) {
  const IdentityRecord& record = lookup(id);
  if (!is_semifinite(record)) throw UsageError(id + " is not a semi-finite identity");
  ParameterAssignment asg = cfg.params ? parse_params(*cfg.params, record)
                                       : sample_admissible(record, cfg.seed, 0,
                                                           sweep_sampler_options(record, cfg.margin));
  const std::vector<int> ms = m_list_given ? cfg.m_list : default_sweep_m(record);
  const auto report = sweep_m(record.id, asg, ms);

  std::vector<double> ratios(report.rows.size(), std::nan(""));
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    const auto& lo = report.rows[i - 1];
    const auto& hi = report.rows[i];
    if (lo.err > 0.0) ratios[i] = std::pow(hi.err / lo.err, 1.0 / (hi.m - lo.m));
  }

  std::ostringstream text;
  switch (cfg.format.value_or(OutputFormat::csv)) {
    case OutputFormat::csv:
      text << "m,err,ratio\n";
      for (std::size_t i = 0; i < report.rows.size(); ++i) {
        text << report.rows[i].m << "," << full(report.rows[i].err) << ","
             << (std::isnan(ratios[i]) ? "" : full(ratios[i])) << "\n";
      }
      break;
    case OutputFormat::json: {
      json rows = json::array();
      for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const auto& row = report.rows[i];
        rows.push_back({{"m", row.m},
                        {"err", number_or_null(row.err)},
                        {"ratio", number_or_null(ratios[i])},
                        {"semi_finite", complex_json(row.semi_finite_value)},
                        {"limit", complex_json(row.limit_value)},
                        {"status", std::string(status_name(row.status))}});
      }
      const json doc = {
          {"identity", report.semifinite_id},
          {"limit", report.limit_id},
          {"params", params_json(report.assignment)},
          {"rows", rows},
          {"fitted_ratio", report.fitted_ratio ? json(*report.fitted_ratio) : json(nullptr)},
          {"theoretical_ratio", report.theoretical_ratio}};
      text << doc.dump(2) << "\n";
      break;
    }
    case OutputFormat::human:
      text << report.semifinite_id << " -> " << report.limit_id << "  " << params_text(asg)
           << "\n";
      for (std::size_t i = 0; i < report.rows.size(); ++i) {
        text << "  m=" << report.rows[i].m << " err=" << sci3(report.rows[i].err)
             << " ratio=" << sci3(ratios[i]) << " " << status_name(report.rows[i].status)
             << "\n";
      }
      text << "fitted_ratio=" << (report.fitted_ratio ? sci3(*report.fitted_ratio) : "n/a")
           << " theoretical_ratio=" << sci3(report.theoretical_ratio) << "\n";
      break;
  }
  emit(text.str(), cfg, out);

  const double tol = cfg.tol_override.value_or(record.tolerance());
  const auto& last = report.rows.back();
  return last.status == Status::pass && last.err < 10.0 * tol ? 0 : 1;
}

int cmd_sample(const std::string& id, const CliConfig& cfg, std::ostream& out) {
  const IdentityRecord& record = lookup(id);
  SamplerOptions options;
  options.margin = cfg.margin;
  options.pole_check_m = cfg.m_list;
  std::ostringstream text;
  json all = json::array();
  const OutputFormat format = cfg.format.value_or(OutputFormat::json);
  for (long i = 0; i < cfg.count; ++i) {
    ParameterAssignment asg =
        sample_admissible(record, cfg.seed, static_cast<std::uint64_t>(i), options);
    if (format == OutputFormat::json) {
      all.push_back({{"identity", record.id}, {"index", i}, {"params", params_json(asg)}});
    } else {
      text << record.id << " " << i << " " << params_text(asg) << "\n";
    }
  }
  if (format == OutputFormat::json) text << all.dump(2) << "\n";
  emit(text.str(), cfg, out);
  return 0;
}

}  // namespace

void CliConfig::validate() const {
  if (count < 1) throw UsageError("--count must be at least 1");
  if (!(margin > 0.0 && margin < 1.0)) throw UsageError("--margin must lie in (0, 1)");
  if (tol_override && !(*tol_override > 0.0)) throw UsageError("--tol must be positive");
  if (m_list.empty()) throw UsageError("--m-list must not be empty");
  for (int m : m_list) {
    if (m < 0) throw UsageError("--m-list entries must be nonnegative");
  }
}

std::complex<double> parse_complex(std::string_view text) {
  const std::string s(text);
  if (s.empty()) throw InvalidInput("empty complex number");
  const char* begin = s.c_str();
  char* end = nullptr;
  const double first = std::strtod(begin, &end);
  if (end == begin) throw InvalidInput("cannot parse complex number '" + s + "'");
  if (*end == '\0') return {first, 0.0};
  if (*end == 'j' && end[1] == '\0') return {0.0, first};
  if (*end != '+' && *end != '-') throw InvalidInput("cannot parse complex number '" + s + "'");
  const char* rest = end;
  const double second = std::strtod(rest, &end);
  if (end == rest || *end != 'j' || end[1] != '\0') {
    throw InvalidInput("cannot parse complex number '" + s + "'");
  }
  return {first, second};
}

ParameterAssignment parse_params(std::string_view text, const IdentityRecord& record) {
  ParameterAssignment asg;
  bool have_q = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string_view item = text.substr(pos, comma - pos);
    pos = comma + 1;
    if (item.empty()) continue;
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw InvalidInput("--params entry '" + std::string(item) + "' lacks '='");
    }
    const std::string name(item.substr(0, eq));
    const std::string_view value = item.substr(eq + 1);
    if (name == "q") {
      asg.q = parse_complex(value);
      have_q = true;
    } else if (name == "m") {
      char* end = nullptr;
      const std::string v(value);
      const long m = std::strtol(v.c_str(), &end, 10);
      if (v.empty() || *end != '\0' || m < 0) throw InvalidInput("--params: bad m '" + v + "'");
      asg.m = static_cast<int>(m);
    } else {
      const auto symbol = parse_symbol(name);
      if (!symbol || !record.has_parameter(*symbol)) {
        throw InvalidInput("--params: " + record.id + " has no parameter '" + name + "'");
      }
      asg.values[*symbol] = parse_complex(value);
    }
  }
  if (!have_q) throw InvalidInput("--params must set q");
  complete_sqrt_symbols(record, asg);
  if (asg.m) validate_assignment(record, asg);
  return asg;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Evaluate basic hypergeometric series and verify identities between them"};
  app.require_subcommand(1);
  CliConfig cfg;
  std::string format_name;
  std::string id;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", format_name, "json, csv or human")
        ->check(CLI::IsMember({"json", "csv", "human"}));
    sub->add_option("--output", cfg.output_path, "write the report to this file");
  };
  const auto add_sampling = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "sampler seed");
    sub->add_option("--count", cfg.count, "number of sampled assignments");
    sub->add_option("--margin", cfg.margin, "relative slack on every modulus constraint");
  };

  CLI::App* list = app.add_subcommand("list", "list the identity records");
  add_common(list);

  CLI::App* verify = app.add_subcommand("verify", "verify one identity or all of them");
  verify->add_option("id", id, "identity id or 'all'")->required();
  add_common(verify);
  add_sampling(verify);
  verify->add_option("--tol", cfg.tol_override, "override the relative tolerance");
  verify->add_option("--m-list", cfg.m_list, "m values for semi-finite identities")
      ->delimiter(',');
  verify->add_option("--params", cfg.params, "explicit assignment, e.g. a=0.5,b=0.2+0.1j,q=0.4");

  CLI::App* sweep = app.add_subcommand("sweep", "m-sweep of a semi-finite identity");
  sweep->add_option("id", id, "semi-finite identity id")->required();
  add_common(sweep);
  sweep->add_option("--seed", cfg.seed, "sampler seed");
  sweep->add_option("--margin", cfg.margin, "relative slack on every modulus constraint");
  sweep->add_option("--tol", cfg.tol_override, "override the relative tolerance");
  CLI::Option* sweep_m_list =
      sweep->add_option("--m-list", cfg.m_list, "m values")->delimiter(',');
  sweep->add_option("--params", cfg.params, "explicit assignment");

  CLI::App* sample = app.add_subcommand("sample", "print sampled admissible assignments");
  sample->add_option("id", id, "identity id")->required();
  add_common(sample);
  add_sampling(sample);
  sample->add_option("--m-list", cfg.m_list, "m values screened for poles")->delimiter(',');

  std::vector<const char*> argv{"qseries"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  if (!format_name.empty()) cfg.format = parse_format(format_name);

  try {
    cfg.validate();
    if (list->parsed()) return cmd_list(cfg, out);
    if (verify->parsed()) return cmd_verify(id, cfg, out);
    if (sweep->parsed()) return cmd_sweep(id, cfg, sweep_m_list->count() > 0, out);
    if (sample->parsed()) return cmd_sample(id, cfg, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const QSeriesError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace qseries
