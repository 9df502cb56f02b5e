#include "greedy/constants.hpp"

#include <cmath>

namespace greedy {

GeometryConstants geometry_constants(double p, FieldKind field) {
  if (!(p > 0.0 && p <= 1.0)) throw InputError("p must lie in (0, 1]");
  GeometryConstants g;
  g.a_p = std::pow(std::pow(2.0, p) - 1.0, -1.0 / p);
  const double base = field == FieldKind::Real ? 2.0 : 4.0;
  g.b_p = std::pow(base, 1.0 / p) * g.a_p;
  return g;
}

double eta_p_objective(double p, double u, double t) {
  const double ap = geometry_constants(p, FieldKind::Real).a_p;
  const double first = std::pow(1.0 - std::pow(t, p), -1.0 / p);
  const double inner = 1.0 - std::pow(1.0 + t / (ap * u), -p);
  return first * std::pow(inner, -1.0 / p);
}

// coarse grid scan to bracket the minimum, then golden-section refinement
double eta_p(double p, double u) {
  if (!(p > 0.0 && p <= 1.0)) throw InputError("p must lie in (0, 1]");
  if (!(u > 0.0)) throw InputError("u must be positive");
  const double lo = 1e-6, hi = 1.0 - 1e-6;
  const int grid = 2000;
  double best_t = lo, best_v = eta_p_objective(p, u, lo);
  for (int i = 1; i <= grid; ++i) {
    const double t = lo + (hi - lo) * static_cast<double>(i) / grid;
    const double v = eta_p_objective(p, u, t);
    if (v < best_v) {
      best_v = v;
      best_t = t;
    }
  }
  const double step = (hi - lo) / grid;
  double a = std::max(lo, best_t - step), b = std::min(hi, best_t + step);
  const double gr = 0.6180339887498949;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = eta_p_objective(p, u, x1), f2 = eta_p_objective(p, u, x2);
  while (b - a > 1e-10) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = eta_p_objective(p, u, x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = eta_p_objective(p, u, x2);
    }
  }
  return std::min(best_v, eta_p_objective(p, u, 0.5 * (a + b)));
}

int min_net_order(double delta) {
  if (delta >= 2.0) return 1;
  for (int n = 1;; ++n) {
    if (2.0 * std::sin(M_PI / (2.0 * n)) <= delta) return n;
    if (n > 100'000'000) throw InputError("net spacing too small");
  }
}

SignNet sign_net(double p, double k1) {
  if (!(p > 0.0 && p <= 1.0)) throw InputError("p must lie in (0, 1]");
  if (!(k1 > 0.0)) throw InputError("k1 must be positive");
  const double bp = geometry_constants(p, FieldKind::Complex).b_p;
  const double delta = 1.0 / (std::pow(2.0, 1.0 / p) * k1 * bp);
  SignNet net;
  net.j1 = min_net_order(delta);
  net.net.reserve(static_cast<std::size_t>(net.j1));
  for (int k = 0; k < net.j1; ++k) net.net.push_back(root_of_unity(k, net.j1));
  return net;
}

Lemma32Constants lemma32_constants(double p, double c) {
  Lemma32Constants out;
  out.k1 = std::pow(1.0 + std::pow(c, p), 1.0 / p);
  out.j1 = sign_net(p, out.k1).j1;
  out.k2 = std::pow(3.0 * out.j1, 1.0 / p) * out.k1;
  return out;
}

namespace {

constexpr double kLedgerTol = 1e-9;

struct LedgerBuilder {
  const LedgerInputs& in;
  BoundLedger ledger;

  double get(const std::string& name, bool& ok) const {
    auto it = in.values.find(name);
    if (it == in.values.end()) {
      ok = false;
      return 0.0;
    }
    return it->second;
  }

  void add(const std::string& id, const std::string& lhs_name, const std::string& rhs_formula,
           const std::vector<std::string>& needs, double rhs_value, bool asserted) {
    LedgerEntry e;
    e.id = id;
    e.lhs_name = lhs_name;
    e.rhs_formula = rhs_formula;
    bool ok = true;
    e.lhs_value = get(lhs_name, ok);
    for (const auto& n : needs) (void)get(n, ok);
    e.rhs_value = rhs_value;
    if (!ok || !std::isfinite(rhs_value)) {
      e.status = LedgerStatus::NotApplicable;
      e.asserted = false;
    } else {
      e.status = e.lhs_value <= e.rhs_value + kLedgerTol ? LedgerStatus::Holds : LedgerStatus::Violated;
      e.asserted = asserted || in.exact_constant_family;
    }
    ledger.entries.push_back(std::move(e));
  }
};

}  // namespace

BoundLedger bound_ledger(const LedgerInputs& in) {
  LedgerBuilder b{in, {}};
  const auto v = [&](const char* name) {
    auto it = in.values.find(name);
    return it == in.values.end() ? std::numeric_limits<double>::quiet_NaN() : it->second;
  };
  const double p = in.p;
  const auto geo = geometry_constants(p, in.field);
  const double ap = geo.a_p, bp = geo.b_p;
  const auto powp = [p](double x) { return std::pow(x, p); };

  // pointwise dominance chains: guaranteed on a shared corpus
  b.add("chain/pgu-pg", "Cpgu", "Cpg", {"Cpg"}, v("Cpg"), true);
  b.add("chain/pg-g", "Cpg", "Cg", {"Cg"}, v("Cg"), true);
  b.add("chain/q-ag", "Cq", "Cag", {"Cag"}, v("Cag"), true);
  b.add("chain/ag-g", "Cag", "Cg", {"Cg"}, v("Cg"), true);
  b.add("chain/end-dis", "Cend", "Cdis", {"Cdis"}, v("Cdis"), true);
  b.add("chain/end2-end", "Cend2", "Cend", {"Cend"}, v("Cend"), true);

  // closure-backed chains
  b.add("lemma41/K", "K", "Cpg", {"Cpg"}, v("Cpg"), in.closure_lemma41);
  b.add("lemma41/Delta", "Delta", "Cpg", {"Cpg"}, v("Cpg"), in.closure_lemma41);
  const bool real = in.field == FieldKind::Real;
  b.add("lemma32/K", "K", "Cplus^2", {"Cplus"}, v("Cplus") * v("Cplus"),
        real && in.closure_lemma32real);

  // informational unless on the exact-constant family
  b.add("lemma42/Cplus", "Cplus", "Cpgu", {"Cpgu"}, v("Cpgu"), false);
  if (real) {
    b.add("lemma42/K", "K", "Cpgu^2", {"Cpgu"}, v("Cpgu") * v("Cpgu"), false);
  } else {
    const double k2 = lemma32_constants(p, v("Cpgu")).k2;
    b.add("lemma42/K", "K", "K2(Cpgu,p)", {"Cpgu"}, k2, false);
  }
  b.add("lemma42/D", "D", "Cpgu^2", {"Cpgu"}, v("Cpgu") * v("Cpgu"), false);

  b.add("remark3/slc", "Cg", "Ap^2 Delta K", {"Delta", "K"}, ap * ap * v("Delta") * v("K"), false);
  {
    const double k = v("K"), d = v("D");
    const double rhs = k * std::pow(1.0 + powp(ap) * powp(d) * std::min(powp(bp), powp(ap) * powp(k)),
                                    1.0 / p);
    b.add("remark3/dem", "Cg", "K(1+Ap^p D^p min{Bp^p, Ap^p K^p})^{1/p}", {"K", "D"}, rhs, false);
  }
  {
    const double cpg = v("Cpg"), cpgu = v("Cpgu");
    const double branch1 = ap * ap * cpg * cpg;
    double branch2;
    if (real) {
      const double k = cpgu * cpgu;
      branch2 = k * std::pow(1.0 + powp(ap) * powp(cpgu * cpgu) * std::min(powp(bp), powp(ap) * powp(cpgu * cpgu)),
                             1.0 / p);
    } else {
      const double k2 = lemma32_constants(p, cpgu).k2;
      branch2 = k2 * std::pow(1.0 + powp(ap) * powp(cpgu * cpgu) * std::min(powp(bp), powp(ap) * powp(k2)),
                              1.0 / p);
    }
    b.add(real ? "th1/1" : "th1/2", "Cg", "min{Ap^2 Cpg^2, ...}", {"Cpg", "Cpgu"},
          std::min(branch1, branch2), false);
  }
  {
    const double cq = v("Cq");
    b.add("th5/gamma", "GammaT", "Cq^2 eta_p(Cq)", {"Cq"},
          std::isfinite(cq) && cq > 0 ? cq * cq * eta_p(p, cq) : std::numeric_limits<double>::quiet_NaN(),
          false);
  }
  {
    const double cq = v("Cq"), ds = v("Ds"), gt = v("GammaT");
    const double rhs = cq * std::pow(1.0 + std::pow(2.0, p) * powp(ds) * powp(gt), 1.0 / p);
    b.add("th2/dis", "Cdis", "Cq(1+2^p Ds^p GammaT^p)^{1/p}", {"Cq", "Ds", "GammaT"}, rhs, false);
  }
  return b.ledger;
}

}  // namespace greedy
