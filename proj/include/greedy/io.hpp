// JSON schemas (basis file, run config, report), CSV tables and report diffs.
// All user-facing indices are 1-based; internal ones are 0-based.
#pragma once

#include "greedy/verify.hpp"

#include <json.hpp>

#include <fstream>

namespace greedy {

using json = nlohmann::json;
inline constexpr int kReportSchemaVersion = 1;

// scalars: real as number, complex as [re, im]
template <class Scalar>
json scalar_to_json(const Scalar& s) {
  if constexpr (scalar_traits<Scalar>::is_complex)
    return json::array({s.real(), s.imag()});
  else
    return json(s);
}

template <class Scalar>
Scalar scalar_from_json(const json& j) {
  if constexpr (scalar_traits<Scalar>::is_complex) {
    if (j.is_array()) return Scalar(j.at(0).get<double>(), j.at(1).get<double>());
    return Scalar(j.get<double>(), 0.0);
  } else {
    if (j.is_array()) throw InputError("complex entry in a real-field file");
    return j.get<double>();
  }
}

template <class Scalar>
json vec_to_json(const Vec<Scalar>& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(scalar_to_json(v[i]));
  return arr;
}

template <class Scalar>
json mat_to_json_row_major(const Mat<Scalar>& m) {
  json arr = json::array();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) arr.push_back(scalar_to_json(m(i, j)));
  return arr;
}

inline json index_set_to_json(const IndexSet& s) {
  json arr = json::array();
  for (Index n : s) arr.push_back(n + 1);  // 1-based in files and reports
  return arr;
}

// ---- basis file ----

template <class Scalar>
json norm_spec_to_json(const NormSpec<Scalar>& n) {
  json j;
  j["q"] = n.q;
  if (n.kind == NormKind::WeightedLq) {
    j["kind"] = "weighted_lq";
    j["weights"] = json(std::vector<double>(n.weights.data(), n.weights.data() + n.weights.size()));
  } else {
    j["kind"] = "matrix_induced";
    j["matrix"] = mat_to_json_row_major(n.matrix);
  }
  return j;
}

template <class Scalar>
NormSpec<Scalar> norm_spec_from_json(const json& j, Index dim) {
  const std::string kind = j.at("kind").get<std::string>();
  const double q = j.at("q").get<double>();
  if (kind == "weighted_lq") {
    const auto w = j.at("weights").get<std::vector<double>>();
    if (static_cast<Index>(w.size()) != dim) throw InputError("weights length must equal dim");
    Eigen::VectorXd wv(dim);
    for (Index i = 0; i < dim; ++i) wv[i] = w[static_cast<std::size_t>(i)];
    return NormSpec<Scalar>::weighted_lq(q, wv);
  }
  if (kind == "matrix_induced") {
    const json& arr = j.at("matrix");
    if (static_cast<Index>(arr.size()) != dim * dim) throw InputError("inducing matrix must be dim*dim");
    Mat<Scalar> m(dim, dim);
    for (Index i = 0; i < dim; ++i)
      for (Index k = 0; k < dim; ++k)
        m(i, k) = scalar_from_json<Scalar>(arr.at(static_cast<std::size_t>(i * dim + k)));
    return NormSpec<Scalar>::matrix_induced(std::move(m), q);
  }
  throw InputError("unknown norm kind: " + kind);
}

template <class Scalar>
json basis_to_json(const Basis<Scalar>& b) {
  json j;
  j["dim"] = b.dim();
  j["field"] = scalar_traits<Scalar>::is_complex ? "complex" : "real";
  if (scalar_traits<Scalar>::is_complex) j["netOrder"] = b.space.net_order;
  j["norm"] = norm_spec_to_json(b.space.norm);
  j["matrix"] = mat_to_json_row_major(b.X);
  return j;
}

// The optional "dual" entry is verified against X rather than recomputed, so a
// corrupted file fails the biorthogonality check at construction.
template <class Scalar>
Basis<Scalar> basis_from_json(const json& j, int default_net_order = 8) {
  const Index dim = j.at("dim").get<Index>();
  const std::string field = j.value("field", "real");
  if (scalar_traits<Scalar>::is_complex != (field == "complex"))
    throw InputError("basis file field does not match requested scalar field");
  const int net_order = j.value("netOrder", default_net_order);
  auto space = make_space<Scalar>(norm_spec_from_json<Scalar>(j.at("norm"), dim), std::nullopt, net_order);
  const json& arr = j.at("matrix");
  if (static_cast<Index>(arr.size()) != dim * dim) throw InputError("basis matrix must be dim*dim");
  Mat<Scalar> X(dim, dim);
  for (Index i = 0; i < dim; ++i)
    for (Index k = 0; k < dim; ++k)
      X(i, k) = scalar_from_json<Scalar>(arr.at(static_cast<std::size_t>(i * dim + k)));
  auto basis = build_basis(space, std::move(X), j.value("label", std::string("file")));
  if (j.contains("dual")) {
    const json& darr = j.at("dual");
    if (static_cast<Index>(darr.size()) != dim * dim) throw InputError("dual matrix must be dim*dim");
    Mat<Scalar> D(dim, dim);
    for (Index i = 0; i < dim; ++i)
      for (Index k = 0; k < dim; ++k)
        D(i, k) = scalar_from_json<Scalar>(darr.at(static_cast<std::size_t>(i * dim + k)));
    const double err = (D * basis.X - Mat<Scalar>::Identity(dim, dim)).cwiseAbs().maxCoeff();
    if (err > kBiorthTol)
      throw ConstructionError("stored dual fails biorthogonality: " + std::to_string(err));
    basis.Xdual = std::move(D);
  }
  return basis;
}

// ---- run config ----

struct RunConfig {
  std::string basis_id;    // catalog id; empty when basis_file is used
  std::string basis_file;  // path to a basis JSON
  std::string field = "real";
  int net_order = 8;
  std::uint64_t seed = 7;
  std::uint64_t budget = default_budget_cap();
  int threads = 1;
  bool normalize_columns = false;
  bool timings = false;
  std::string out;            // report path; empty = stdout only
  std::string format = "json";  // json | csv (csv written alongside json)
  CorpusSpec corpus;
};

inline json corpus_spec_to_json(const CorpusSpec& s) {
  json j;
  j["seed"] = s.seed;
  j["grid"] = {{"count", s.grid.count}, {"levels", s.grid.levels}};
  j["random"] = {{"count", s.random.count}, {"magLo", s.random.mag_lo}, {"magHi", s.random.mag_hi}};
  j["structured"] = {{"indicators", s.structured.indicators},
                     {"indicatorCap", s.structured.indicator_cap},
                     {"perturbed", s.structured.perturbed},
                     {"perturbedCap", s.structured.perturbed_cap}};
  j["closure"] = {{"lemma41", s.closure.lemma41},
                  {"lemma42", s.closure.lemma42},
                  {"lemma32real", s.closure.lemma32real},
                  {"thagProof", s.closure.thag_proof}};
  j["sizeCap"] = s.size_cap;
  return j;
}

inline CorpusSpec corpus_spec_from_json(const json& j) {
  CorpusSpec s;
  s.seed = j.value("seed", s.seed);
  if (j.contains("grid")) {
    s.grid.count = j["grid"].value("count", s.grid.count);
    s.grid.levels = j["grid"].value("levels", s.grid.levels);
  }
  if (j.contains("random")) {
    s.random.count = j["random"].value("count", s.random.count);
    s.random.mag_lo = j["random"].value("magLo", s.random.mag_lo);
    s.random.mag_hi = j["random"].value("magHi", s.random.mag_hi);
  }
  if (j.contains("structured")) {
    s.structured.indicators = j["structured"].value("indicators", s.structured.indicators);
    s.structured.indicator_cap = j["structured"].value("indicatorCap", s.structured.indicator_cap);
    s.structured.perturbed = j["structured"].value("perturbed", s.structured.perturbed);
    s.structured.perturbed_cap = j["structured"].value("perturbedCap", s.structured.perturbed_cap);
  }
  if (j.contains("closure")) {
    s.closure.lemma41 = j["closure"].value("lemma41", s.closure.lemma41);
    s.closure.lemma42 = j["closure"].value("lemma42", s.closure.lemma42);
    s.closure.lemma32real = j["closure"].value("lemma32real", s.closure.lemma32real);
    s.closure.thag_proof = j["closure"].value("thagProof", s.closure.thag_proof);
  }
  s.size_cap = j.value("sizeCap", s.size_cap);
  return s;
}

inline json run_config_to_json(const RunConfig& c) {
  json j;
  if (!c.basis_id.empty()) j["basis"] = c.basis_id;
  if (!c.basis_file.empty()) j["basisFile"] = c.basis_file;
  j["field"] = c.field;
  j["netOrder"] = c.net_order;
  j["seed"] = c.seed;
  j["budget"] = c.budget;
  j["threads"] = c.threads;
  j["normalizeColumns"] = c.normalize_columns;
  j["timings"] = c.timings;
  if (!c.out.empty()) j["out"] = c.out;
  j["format"] = c.format;
  j["corpus"] = corpus_spec_to_json(c.corpus);
  return j;
}

inline RunConfig run_config_from_json(const json& j) {
  RunConfig c;
  c.basis_id = j.value("basis", "");
  c.basis_file = j.value("basisFile", "");
  c.field = j.value("field", c.field);
  c.net_order = j.value("netOrder", c.net_order);
  c.seed = j.value("seed", c.seed);
  c.budget = j.value("budget", c.budget);
  c.threads = j.value("threads", c.threads);
  c.normalize_columns = j.value("normalizeColumns", c.normalize_columns);
  c.timings = j.value("timings", c.timings);
  c.out = j.value("out", "");
  c.format = j.value("format", c.format);
  if (j.contains("corpus")) c.corpus = corpus_spec_from_json(j["corpus"]);
  return c;
}

// ---- report ----

template <class Scalar>
json witness_to_json(const RatioWitness<Scalar>& w) {
  json j;
  j["kind"] = w.kind;
  if (w.f.size() > 0) j["f"] = vec_to_json(w.f);
  if (w.g.size() > 0) j["g"] = vec_to_json(w.g);
  if (!w.A.empty() || w.kind != "") j["A"] = index_set_to_json(w.A);
  if (!w.B.empty()) j["B"] = index_set_to_json(w.B);
  if (!w.epsA.empty()) {
    json arr = json::array();
    for (const auto& s : w.epsA) arr.push_back(scalar_to_json(s));
    j["epsA"] = arr;
  }
  if (!w.epsB.empty()) {
    json arr = json::array();
    for (const auto& s : w.epsB) arr.push_back(scalar_to_json(s));
    j["epsB"] = arr;
  }
  if (w.m >= 0) j["m"] = w.m;
  if (w.a_coeff != 0.0) j["a"] = w.a_coeff;
  j["numerator"] = w.numerator;
  j["denominator"] = w.denominator;
  return j;
}

template <class Scalar>
json report_to_json(const RunReport<Scalar>& r) {
  json j;
  j["basis"] = {{"id", r.basis_id},
                {"dim", r.dim},
                {"p", r.p},
                {"field", r.field == FieldKind::Real ? "real" : "complex"},
                {"c1", r.c1},
                {"c2Estimate", r.c2_estimate},
                {"exactConstantFamily", r.exact_constant_family}};
  j["corpus"] = {{"id", r.corpus_id},
                 {"base", r.corpus_base},
                 {"closed", r.corpus_closed},
                 {"closure", json(r.closure_counts)},
                 {"spec", corpus_spec_to_json(r.spec)},
                 {"slcScaling", "sup-normalized"}};
  json est = json::array();
  for (const auto& e : r.estimates) {
    json ej;
    ej["name"] = to_string(e.name);
    ej["value"] = e.value;
    ej["isLowerBound"] = e.is_lower_bound;
    ej["infeasible"] = e.infeasible;
    ej["aborted"] = e.aborted;
    ej["witness"] = witness_to_json(e.witness);
    est.push_back(std::move(ej));
  }
  j["estimates"] = std::move(est);
  json led = json::array();
  for (const auto& e : r.ledger.entries)
    led.push_back({{"id", e.id},
                   {"lhs", e.lhs_name},
                   {"lhsValue", e.lhs_value},
                   {"rhsFormula", e.rhs_formula},
                   {"rhsValue", e.rhs_value},
                   {"status", to_string(e.status)},
                   {"asserted", e.asserted}});
  j["ledger"] = std::move(led);
  json vio = json::array();
  for (const auto& x : r.violations)
    vio.push_back({{"item", x.item}, {"m", x.m}, {"kind", x.kind}, {"lhs", x.lhs}, {"rhs", x.rhs}});
  j["violations"] = std::move(vio);
  json stg = json::array();
  for (const auto& s : r.stages)
    stg.push_back({{"name", s.name}, {"status", s.status}, {"detail", s.detail}});
  j["stages"] = std::move(stg);
  j["timing"] = r.elapsed_seconds >= 0.0 ? json(r.elapsed_seconds) : json();
  j["passed"] = r.passed();
  return j;
}

// ---- files ----

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw InputError("cannot parse JSON in " + path + ": " + e.what());
  }
  return j;
}

// temp-file + rename so readers never observe a partial report
void atomic_write_file(const std::string& path, const std::string& content);

std::string format_double(double v);  // 17 significant digits, '.' separator

template <class Scalar>
std::string report_rows_to_csv(const RunReport<Scalar>& r) {
  std::string out =
      "basis,item,m,residual,sigma,rho,varrho,bestProjection,ratioQ,ratioG,ratioAg,ratioPg,ratioPgu\n";
  const auto ratio = [](double num, double den) {
    return den > 1e-12 ? format_double(num / den) : std::string();
  };
  double norm_f = 0.0;
  for (const auto& row : r.rows) {
    if (row.m == 0) norm_f = row.sigma;  // sigma_0 = ||f||
    out += r.basis_id + "," + std::to_string(row.item + 1) + "," + std::to_string(row.m) + "," +
           format_double(row.residual) + "," + format_double(row.sigma) + ",";
    if (row.m >= 1) out += format_double(row.rho);
    out += ",";
    if (row.m >= 1) out += format_double(row.varrho);
    out += "," + format_double(row.best_projection);
    out += "," + ratio(row.residual, norm_f);
    out += "," + ratio(row.residual, row.sigma);
    out += "," + ratio(row.residual, row.best_projection);
    out += "," + (row.m >= 1 ? ratio(row.residual, row.rho) : std::string());
    out += "," + (row.m >= 1 ? ratio(row.residual, row.varrho) : std::string());
    out += "\n";
  }
  return out;
}

// ---- diff ----

// fields differing beyond 1e-9 (numerics) or at all (everything else)
std::vector<std::string> compare_reports(const json& a, const json& b);

}  // namespace greedy
