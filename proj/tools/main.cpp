// Command-line front end: constants, tga, verify, report-diff.
// Exit codes: 0 success, 1 input error / failed verification, 2 budget abort,
// 3 report-diff found differences.

#include "greedy/io.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

using namespace greedy;

struct CliArgs {
  std::string config_path;
  std::string basis_id;
  std::string basis_file;
  std::string field;
  int net_order = -1;
  std::int64_t seed = -1;
  std::int64_t budget = -1;
  int threads = -1;
  std::string out;
  std::string format;
  bool normalize = false;
  bool timings = false;
  std::string coeffs;  // tga only
};

RunConfig merge_config(const CliArgs& a) {
  RunConfig cfg;
  if (!a.config_path.empty()) cfg = run_config_from_json(load_json_file(a.config_path));
  if (!a.basis_id.empty()) cfg.basis_id = a.basis_id;
  if (!a.basis_file.empty()) cfg.basis_file = a.basis_file;
  if (!a.field.empty()) cfg.field = a.field;
  if (a.net_order > 0) cfg.net_order = a.net_order;
  if (a.seed >= 0) cfg.seed = static_cast<std::uint64_t>(a.seed);
  if (a.budget >= 0) cfg.budget = static_cast<std::uint64_t>(a.budget);
  if (a.threads > 0) cfg.threads = a.threads;
  if (!a.out.empty()) cfg.out = a.out;
  if (!a.format.empty()) cfg.format = a.format;
  if (a.normalize) cfg.normalize_columns = true;
  if (a.timings) cfg.timings = true;
  cfg.corpus.seed = cfg.seed;
  if (cfg.field != "real" && cfg.field != "complex") throw InputError("field must be real or complex");
  return cfg;
}

void add_common_flags(CLI::App* cmd, CliArgs& a) {
  cmd->add_option("--config", a.config_path, "run-config JSON file");
  cmd->add_option("--basis", a.basis_id, "catalog basis id, e.g. canonical:2:4");
  cmd->add_option("--basis-file", a.basis_file, "basis JSON file");
  cmd->add_option("--field", a.field, "real | complex");
  cmd->add_option("--net-order", a.net_order, "complex sign net order (>= 4)");
  cmd->add_option("--seed", a.seed, "corpus seed");
  cmd->add_option("--budget", a.budget, "norm-evaluation budget per search");
  cmd->add_option("--threads", a.threads, "worker threads (default 1)");
  cmd->add_option("--out", a.out, "output path");
  cmd->add_option("--format", a.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_flag("--normalize", a.normalize, "normalize basis columns to unit norm");
  cmd->add_flag("--timings", a.timings, "include wall-clock timing in the report (nondeterministic)");
}

template <class Scalar>
Basis<Scalar> load_basis(const RunConfig& cfg, const std::string& id) {
  if (!cfg.basis_file.empty() && id.empty())
    return basis_from_json<Scalar>(load_json_file(cfg.basis_file), cfg.net_order);
  Basis<Scalar> b = make_basis<Scalar>(id.empty() ? cfg.basis_id : id, cfg.normalize_columns,
                                       cfg.net_order);
  return b;
}

template <class Scalar>
int run_constants(const RunConfig& cfg) {
  const std::string id = cfg.basis_id;
  if (id.empty() && cfg.basis_file.empty()) throw InputError("constants needs --basis or --basis-file");
  const Basis<Scalar> basis = load_basis<Scalar>(cfg, "");
  RunOptions opts;
  opts.budget_cap = cfg.budget;
  opts.threads = cfg.threads;
  opts.timings = cfg.timings;
  const auto report = run_verification(basis, cfg.corpus, opts);

  std::cout << "basis: " << basis.label << "  (dim=" << basis.dim() << ", p=" << basis.space.p
            << ")\n";
  std::cout << "corpus: " << report.corpus_closed << " elements (" << report.corpus_base
            << " before closure)\n";
  std::printf("%-8s %-22s %-10s %s\n", "name", "value", "flags", "witness");
  for (const auto& e : report.estimates) {
    std::string flags = e.is_lower_bound ? "lower" : "";
    if (e.infeasible) flags += ",infeasible";
    if (e.aborted) flags += ",aborted";
    std::string wit = e.witness.kind;
    if (e.witness.m >= 0) wit += " m=" + std::to_string(e.witness.m);
    if (!e.witness.A.empty()) {
      wit += " A={";
      for (std::size_t i = 0; i < e.witness.A.size(); ++i)
        wit += (i ? "," : "") + std::to_string(e.witness.A[i] + 1);
      wit += "}";
    }
    std::printf("%-8s %-22s %-10s %s\n", to_string(e.name), format_double(e.value).c_str(),
                flags.c_str(), wit.c_str());
  }
  for (const auto& s : report.stages)
    if (s.status != "ok") std::cerr << "stage " << s.name << ": " << s.status << " (" << s.detail << ")\n";
  return report.budget_hit() ? 2 : 0;
}

template <class Scalar>
int run_tga(const RunConfig& cfg, const std::string& coeffs) {
  if (cfg.basis_id.empty() && cfg.basis_file.empty()) throw InputError("tga needs --basis or --basis-file");
  const Basis<Scalar> basis = load_basis<Scalar>(cfg, "");
  std::vector<double> vals;
  {
    std::stringstream ss(coeffs);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok.empty()) continue;
      vals.push_back(std::stod(tok));
    }
  }
  if (static_cast<Index>(vals.size()) != basis.dim())
    throw InputError("coefficient list length must equal the basis dimension");
  Vec<Scalar> c(basis.dim());
  for (Index i = 0; i < basis.dim(); ++i) c[i] = Scalar(vals[static_cast<std::size_t>(i)]);
  const Vec<Scalar> f = basis.X * c;

  const auto pi = greedy_ordering(basis, f);
  std::string out = "pi";
  for (Index i : pi) out += "," + std::to_string(i + 1);
  out += "\n";
  out += "m,threshold,greedySets,residual,sigma,rho,varrho\n";
  EvalBudget budget(cfg.budget);
  for (Index m = 0; m <= basis.dim(); ++m) {
    const auto fam = greedy_sets(basis, f, m);
    std::string sets;
    for (std::size_t s = 0; s < fam.sets.size(); ++s) {
      if (s) sets += "|";
      for (std::size_t i = 0; i < fam.sets[s].size(); ++i)
        sets += (i ? " " : "") + std::to_string(fam.sets[s][i] + 1);
    }
    const Vec<Scalar> res = f - greedy_sum(basis, f, m);
    budget.reset();
    const double rnorm = eval_norm(basis.space, res, budget);
    const double sig = sigma_m(basis, f, m, budget).value;
    out += std::to_string(m) + ",";
    out += (m >= 1 ? format_double(mth_threshold(basis, f, m)) : "") + ",";
    out += sets + "," + format_double(rnorm) + "," + format_double(sig) + ",";
    if (m >= 1) {
      out += format_double(rho_m(basis, f, m, budget).value) + "," +
             format_double(varrho_m(basis, f, m, budget).value);
    } else {
      out += ",";
    }
    out += "\n";
  }
  if (!cfg.out.empty())
    atomic_write_file(cfg.out, out);
  else
    std::cout << out;
  return 0;
}

template <class Scalar>
int run_verify(const RunConfig& cfg) {
  std::vector<std::string> ids;
  if (!cfg.basis_id.empty() || !cfg.basis_file.empty())
    ids.push_back(cfg.basis_id);
  else
    ids = default_catalog();

  RunOptions opts;
  opts.budget_cap = cfg.budget;
  opts.threads = cfg.threads;
  opts.timings = cfg.timings;

  json out;
  out["schemaVersion"] = kReportSchemaVersion;
  out["seed"] = cfg.seed;
  // the output path is not part of the run's identity
  json cfg_echo = run_config_to_json(cfg);
  cfg_echo.erase("out");
  out["config"] = cfg_echo;
  json runs = json::array();
  bool all_passed = true;
  bool budget_hit = false;
  std::string csv;
  for (const auto& id : ids) {
    const Basis<Scalar> basis = load_basis<Scalar>(cfg, id);
    const auto report = run_verification(basis, cfg.corpus, opts);
    all_passed = all_passed && report.passed();
    budget_hit = budget_hit || report.budget_hit();
    runs.push_back(report_to_json(report));
    if (cfg.format == "csv") csv += report_rows_to_csv(report);
    std::cout << basis.label << ": " << (report.passed() ? "pass" : "FAIL") << " ("
              << report.violations.size() << " violations, corpus " << report.corpus_closed << ")\n";
  }
  out["runs"] = std::move(runs);

  const std::string path = cfg.out.empty() ? "report.json" : cfg.out;
  atomic_write_file(path, out.dump(2) + "\n");
  std::cout << "report: " << path << "\n";
  if (cfg.format == "csv") {
    const std::string csv_path = path.size() > 5 && path.ends_with(".json")
                                     ? path.substr(0, path.size() - 5) + ".csv"
                                     : path + ".csv";
    atomic_write_file(csv_path, csv);
    std::cout << "tables: " << csv_path << "\n";
  }
  if (budget_hit) return 2;
  return all_passed ? 0 : 1;
}

int run_report_diff(const std::string& a, const std::string& b) {
  const auto diffs = compare_reports(load_json_file(a), load_json_file(b));
  if (diffs.empty()) {
    std::cout << "reports identical\n";
    return 0;
  }
  for (const auto& d : diffs) std::cout << d << "\n";
  return 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"greedy-type basis constants and approximation errors"};
  app.require_subcommand(1);

  CliArgs a_const, a_tga, a_verify;
  auto* c_const = app.add_subcommand("constants", "estimate all greedy-type constants");
  add_common_flags(c_const, a_const);
  auto* c_tga = app.add_subcommand("tga", "run the thresholding greedy algorithm on one element");
  add_common_flags(c_tga, a_tga);
  c_tga->add_option("--coeffs", a_tga.coeffs, "comma-separated coefficient list")->required();
  std::string tga_action;
  c_tga->add_option("action", tga_action, "optional action word (run)")
      ->check(CLI::IsMember({"run"}));
  auto* c_verify = app.add_subcommand("verify", "full verification run with report");
  add_common_flags(c_verify, a_verify);
  auto* c_diff = app.add_subcommand("report-diff", "compare two reports");
  std::string diff_a, diff_b;
  c_diff->add_option("a", diff_a, "first report")->required();
  c_diff->add_option("b", diff_b, "second report")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_const->parsed()) {
      const RunConfig cfg = merge_config(a_const);
      return cfg.field == "complex" ? run_constants<std::complex<double>>(cfg)
                                    : run_constants<double>(cfg);
    }
    if (c_tga->parsed()) {
      const RunConfig cfg = merge_config(a_tga);
      return cfg.field == "complex" ? run_tga<std::complex<double>>(cfg, a_tga.coeffs)
                                    : run_tga<double>(cfg, a_tga.coeffs);
    }
    if (c_verify->parsed()) {
      const RunConfig cfg = merge_config(a_verify);
      return cfg.field == "complex" ? run_verify<std::complex<double>>(cfg) : run_verify<double>(cfg);
    }
    if (c_diff->parsed()) return run_report_diff(diff_a, diff_b);
  } catch (const greedy::BudgetError& e) {
    std::cerr << "budget: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
