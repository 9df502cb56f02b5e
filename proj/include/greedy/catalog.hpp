// Built-in example bases and the deterministic test corpus: grid vectors,
// seeded random vectors, signed indicators, and the closure operators that
// replay the proof constructions on corpus elements.
#pragma once

#include "greedy/tga.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace greedy {

struct CatalogId {
  enum class Family { Canonical, Weighted, Summing, PerturbedIdentity };
  Family family = Family::Canonical;
  double q = 2.0;
  Index n = 4;
  Eigen::VectorXd weights;  // Weighted only
  double off_diag = 0.0;    // PerturbedIdentity only
};

CatalogId parse_catalog_id(const std::string& text);
std::string to_string(const CatalogId& id);
// ids exercised by default `verify` runs
std::vector<std::string> default_catalog();

template <class Scalar>
Basis<Scalar> make_basis(const CatalogId& id, bool normalize = false, int net_order = 8) {
  if (id.n < 1 || id.n > 16) throw InputError("catalog dimension must be in [1, 16]");
  Mat<Scalar> X = Mat<Scalar>::Identity(id.n, id.n);
  NormSpec<Scalar> norm;
  bool exact_family = false;
  switch (id.family) {
    case CatalogId::Family::Canonical:
      norm = NormSpec<Scalar>::lq(id.q, id.n);
      exact_family = true;
      break;
    case CatalogId::Family::Weighted:
      if (id.weights.size() != id.n) throw InputError("weighted basis needs one weight per coordinate");
      norm = NormSpec<Scalar>::weighted_lq(id.q, id.weights);
      break;
    case CatalogId::Family::Summing:
      // x_j = e_1 + ... + e_j in the unit-weight l1 norm
      for (Index j = 0; j < id.n; ++j)
        for (Index i = 0; i <= j; ++i) X(i, j) = Scalar(1);
      norm = NormSpec<Scalar>::lq(1.0, id.n);
      break;
    case CatalogId::Family::PerturbedIdentity:
      for (Index i = 0; i + 1 < id.n; ++i) X(i, i + 1) = Scalar(id.off_diag);
      norm = NormSpec<Scalar>::lq(2.0, id.n);
      break;
  }
  auto basis = build_basis(make_space<Scalar>(std::move(norm), std::nullopt, net_order), std::move(X),
                           to_string(id));
  basis.exact_constant_family = exact_family;
  if (normalize) {
    const bool keep = basis.exact_constant_family;
    basis = normalize_columns(basis);
    basis.exact_constant_family = keep;
  }
  return basis;
}

template <class Scalar>
Basis<Scalar> make_basis(const std::string& id, bool normalize = false, int net_order = 8) {
  return make_basis<Scalar>(parse_catalog_id(id), normalize, net_order);
}

struct GridSpec {
  Index count = 2500;                          // cap; full grid when it fits
  std::vector<double> levels = {0.0, 0.5, 1.0, 2.0};  // nonnegative; signs added
};
struct RandomSpec {
  Index count = 60;
  double mag_lo = 0.25, mag_hi = 4.0;  // scale range of the whole vector
};
struct StructuredSpec {
  bool indicators = true;
  Index indicator_cap = 7000;
  bool perturbed = true;
  Index perturbed_cap = 400;
};
struct ClosureFlags {
  bool lemma41 = true;
  bool lemma42 = true;
  bool lemma32real = true;
  bool thag_proof = true;
};

struct CorpusSpec {
  std::uint64_t seed = 7;
  GridSpec grid;
  RandomSpec random;
  StructuredSpec structured;
  ClosureFlags closure;
  Index size_cap = 100000;
};

namespace detail {

// signed level values: {0, l, -l, ...} deduplicated, zero first
inline std::vector<double> signed_levels(const std::vector<double>& levels) {
  std::vector<double> out{0.0};
  for (double l : levels)
    if (l != 0.0) {
      out.push_back(l);
      out.push_back(-l);
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  // keep zero first for the odometer, remaining ascending
  const auto it0 = std::find(out.begin(), out.end(), 0.0);
  std::rotate(out.begin(), it0, it0 + 1);
  return out;
}

template <class Scalar>
struct VecKeyLess {
  bool operator()(const Vec<Scalar>& a, const Vec<Scalar>& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    const auto key = [](const Scalar& s, int part) {
      double v;
      if constexpr (scalar_traits<Scalar>::is_complex)
        v = part == 0 ? s.real() : s.imag();
      else
        v = part == 0 ? s : 0.0;
      std::uint64_t bits;
      std::memcpy(&bits, &v, sizeof bits);
      return bits;
    };
    for (Index i = 0; i < a.size(); ++i)
      for (int part = 0; part < 2; ++part) {
        const auto ka = key(a[i], part), kb = key(b[i], part);
        if (ka != kb) return ka < kb;
      }
    return false;
  }
};

}  // namespace detail

// Deterministic corpus in ambient coordinates.  Families in order: grid,
// random, indicators, perturbed indicator pairs.  The zero vector is excluded.
template <class Scalar>
std::vector<Vec<Scalar>> generate_corpus(const Basis<Scalar>& basis, const CorpusSpec& spec) {
  const Index dim = basis.dim();
  std::vector<Vec<Scalar>> corpus;
  std::set<Vec<Scalar>, detail::VecKeyLess<Scalar>> seen;
  const auto push_coeffs = [&](const Vec<Scalar>& c) {
    if (c.cwiseAbs().maxCoeff() <= 0.0) return;  // skip zero
    if (!seen.insert(c).second) return;
    if (static_cast<Index>(corpus.size()) >= spec.size_cap)
      throw BudgetError("corpus size cap exceeded");
    corpus.push_back(basis.X * c);
  };

  // (a) grid vectors over coefficient space
  const auto lv = detail::signed_levels(spec.grid.levels);
  const double total_log = dim * std::log(static_cast<double>(lv.size()));
  const bool full_grid = total_log <= std::log(static_cast<double>(spec.grid.count) + 1.5);
  Vec<Scalar> c(dim);
  if (full_grid) {
    std::vector<std::size_t> digit(static_cast<std::size_t>(dim), 0);
    while (true) {
      for (Index i = 0; i < dim; ++i) c[i] = Scalar(lv[digit[static_cast<std::size_t>(i)]]);
      push_coeffs(c);
      std::size_t pos = 0;
      while (pos < digit.size() && ++digit[pos] == lv.size()) digit[pos++] = 0;
      if (pos == digit.size()) break;
    }
  } else {
    Rng rng(spec.seed ^ 0x67726964ULL);
    Index made = 0;
    for (std::uint64_t attempts = 0; made < spec.grid.count && attempts < 50ull * static_cast<std::uint64_t>(spec.grid.count); ++attempts) {
      for (Index i = 0; i < dim; ++i) c[i] = Scalar(lv[rng.next_below(lv.size())]);
      const std::size_t before = seen.size();
      push_coeffs(c);
      if (seen.size() > before) ++made;
    }
  }

  // (b) seeded random vectors
  {
    Rng rng(spec.seed ^ 0x72616e64ULL);
    for (Index k = 0; k < spec.random.count; ++k) {
      for (Index i = 0; i < dim; ++i) {
        if constexpr (scalar_traits<Scalar>::is_complex)
          c[i] = Scalar(rng.uniform(-1, 1), rng.uniform(-1, 1));
        else
          c[i] = Scalar(rng.uniform(-1, 1));
      }
      const double scale = spec.random.mag_lo *
                           std::pow(spec.random.mag_hi / spec.random.mag_lo, rng.next_double());
      c *= Scalar(scale);
      push_coeffs(c);
    }
  }

  // (c) structured: signed indicators over every support
  const auto fam = sign_family<Scalar>(basis.space.net_order);
  if (spec.structured.indicators) {
    Index made = 0;
    for (std::uint32_t mask = 1; mask < (1u << dim) && made < spec.structured.indicator_cap; ++mask) {
      const IndexSet A = mask_to_set(mask);
      std::vector<int> digit(A.size(), 0);
      while (made < spec.structured.indicator_cap) {
        c.setZero();
        for (std::size_t j = 0; j < A.size(); ++j) c[A[j]] = fam[static_cast<std::size_t>(digit[j])];
        push_coeffs(c);
        ++made;
        std::size_t pos = 0;
        while (pos < digit.size() && ++digit[pos] == static_cast<int>(fam.size())) digit[pos++] = 0;
        if (pos == digit.size()) break;
      }
    }
  }

  // (d) structured: perturbed indicator pairs 1_{eps,A} + (1+e) 1_{eta,B},
  // both at e = 0 (exact ties) and e = 1e-6
  if (spec.structured.perturbed && dim >= 2) {
    Rng rng(spec.seed ^ 0x70657274ULL);
    Index made = 0;
    for (std::uint64_t attempts = 0; made < spec.structured.perturbed_cap && attempts < 40ull * static_cast<std::uint64_t>(spec.structured.perturbed_cap);
         ++attempts) {
      const std::uint32_t all = (1u << dim) - 1u;
      const std::uint32_t amask = static_cast<std::uint32_t>(rng.next_below(all) + 1) & all;
      const std::uint32_t bmask = static_cast<std::uint32_t>(rng.next_below(all) + 1) & all & ~amask;
      if (amask == 0 || bmask == 0) continue;
      if (std::popcount(amask) > std::popcount(bmask)) continue;
      const IndexSet A = mask_to_set(amask), B = mask_to_set(bmask);
      c.setZero();
      for (Index n : A) c[n] = fam[rng.next_below(fam.size())];
      const double e = (attempts % 2 == 0) ? 0.0 : 1e-6;
      for (Index n : B) c[n] = Scalar(1.0 + e) * fam[rng.next_below(fam.size())];
      const std::size_t before = seen.size();
      push_coeffs(c);
      if (seen.size() > before) ++made;
    }
  }
  return corpus;
}

// ---- closure ----

struct ClosureRecord {
  std::size_t corpus_index;  // of the appended vector
  std::string kind;          // lemma41 | lemma42 | lemma32real | thagProof
  IndexSet pad_set;          // A0 for padded vectors
  double t0 = 0.0;
};

namespace detail {

// h = f + g + t0 1_{eps,A0}, A0 = supp(g) + smallest fresh index, eps = sgn(g)
// there and +1 on the fresh index.  Unsigned padding drops the sgn.
// Returns empty when no fresh index exists.
template <class Scalar>
std::optional<std::pair<Vec<Scalar>, std::pair<IndexSet, double>>> pad_coeff_pair(
    const Vec<Scalar>& cf, const Vec<Scalar>& cg, bool signed_pad, double t0) {
  const Index dim = cf.size();
  Index fresh = -1;
  for (Index n = 0; n < dim; ++n)
    if (std::abs(cf[n]) <= kZeroTol && std::abs(cg[n]) <= kZeroTol) {
      fresh = n;
      break;
    }
  if (fresh < 0) return std::nullopt;
  Vec<Scalar> h = cf + cg;
  IndexSet a0;
  for (Index n = 0; n < dim; ++n)
    if (std::abs(cg[n]) > kZeroTol) {
      a0.push_back(n);
      h[n] += Scalar(t0) * (signed_pad ? sign_of(cg[n]) : Scalar(1));
    }
  a0.push_back(fresh);
  std::sort(a0.begin(), a0.end());
  h[fresh] = Scalar(t0);
  return std::make_pair(std::move(h), std::make_pair(std::move(a0), t0));
}

}  // namespace detail

// Appends the proof-construction vectors for pairs/tuples drawn from the
// corpus: t0-padded vectors (signed and unsigned), positive/negative parts
// with intermediates, and the Theorem-2 difference vectors.
template <class Scalar>
std::vector<Vec<Scalar>> close_corpus(const Basis<Scalar>& basis, const std::vector<Vec<Scalar>>& corpus,
                                      const CorpusSpec& spec, std::vector<ClosureRecord>* records = nullptr) {
  const Index dim = basis.dim();
  const ClosureFlags& flags = spec.closure;
  if (corpus.empty()) return {};
  std::vector<Vec<Scalar>> out = corpus;
  std::set<Vec<Scalar>, detail::VecKeyLess<Scalar>> seen;
  std::vector<Vec<Scalar>> coefs;
  coefs.reserve(corpus.size());
  for (const auto& f : corpus) {
    const Vec<Scalar> c = coefficients(basis, f);
    seen.insert(c);
    coefs.push_back(c);
  }
  const auto push = [&](const Vec<Scalar>& c, const char* kind, const IndexSet& pad, double t0) {
    if (c.cwiseAbs().maxCoeff() <= 0.0) return;
    if (!seen.insert(c).second) return;
    if (static_cast<Index>(out.size()) >= spec.size_cap) throw BudgetError("corpus size cap exceeded");
    out.push_back(basis.X * c);
    if (records) records->push_back({out.size() - 1, kind, pad, t0});
  };

  // deterministic selection of source elements and element pairs
  const std::size_t n = coefs.size();
  std::vector<std::size_t> elems(n);
  for (std::size_t i = 0; i < n; ++i) elems[i] = i;
  const std::size_t elem_cap = 300;
  if (n > elem_cap) {
    Rng rng(spec.seed ^ 0x636c6f73ULL);
    for (std::size_t i = 0; i < elem_cap; ++i)
      std::swap(elems[i], elems[i + rng.next_below(n - i)]);
    elems.resize(elem_cap);
  }

  const auto supp_mask = [&](const Vec<Scalar>& c) {
    std::uint32_t m = 0;
    for (Index i = 0; i < dim; ++i)
      if (std::abs(c[i]) > kZeroTol) m |= (1u << i);
    return m;
  };
  const auto t0_of = [&](const Vec<Scalar>& cf, const Vec<Scalar>& cg) {
    return 1.0 + cf.cwiseAbs().maxCoeff() + cg.cwiseAbs().maxCoeff();
  };

  // (1) per-element decomposition tuples (P_A u, u - P_A u) over support subsets
  if (flags.lemma41 || flags.lemma42) {
    const std::size_t subset_cap = 24;
    for (std::size_t ei : elems) {
      const Vec<Scalar>& cu = coefs[ei];
      const std::uint32_t sm = supp_mask(cu);
      std::vector<std::uint32_t> submasks;
      for (std::uint32_t a = sm;; a = (a - 1) & sm) {
        submasks.push_back(a);
        if (a == 0) break;
      }
      if (submasks.size() > subset_cap) {
        Rng rng(spec.seed ^ (0x73756273ULL + ei));
        for (std::size_t i = 0; i < subset_cap; ++i)
          std::swap(submasks[i], submasks[i + rng.next_below(submasks.size() - i)]);
        submasks.resize(subset_cap);
      }
      for (std::uint32_t amask : submasks) {
        Vec<Scalar> cf = Vec<Scalar>::Zero(dim), cg = Vec<Scalar>::Zero(dim);
        for (Index i = 0; i < dim; ++i)
          ((amask & (1u << i)) ? cf[i] : cg[i]) = cu[i];
        const double t0 = t0_of(cf, cg);
        if (flags.lemma41)
          if (auto p = detail::pad_coeff_pair(cf, cg, true, t0))
            push(p->first, "lemma41", p->second.first, p->second.second);
        if (flags.lemma42) {
          bool gpos = true;
          for (Index i = 0; i < dim; ++i)
            if (std::real(cg[i]) < -kZeroTol || std::abs(std::imag(cg[i])) > kZeroTol) gpos = false;
          if (gpos)
            if (auto p = detail::pad_coeff_pair(cf, cg, false, t0))
              push(p->first, "lemma42", p->second.first, p->second.second);
        }
      }
    }
  }

  // (2) disjointly supported element pairs
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  {
    const std::size_t pair_cap = 2000;
    std::vector<std::uint32_t> masks(n);
    for (std::size_t i = 0; i < n; ++i) masks[i] = supp_mask(coefs[i]);
    if (n <= 300) {
      for (std::size_t i = 0; i < n && pairs.size() < pair_cap; ++i)
        for (std::size_t j = 0; j < n && pairs.size() < pair_cap; ++j)
          if (i != j && (masks[i] & masks[j]) == 0) pairs.emplace_back(i, j);
    } else {
      Rng rng(spec.seed ^ 0x70616972ULL);
      for (std::uint64_t att = 0; att < 40000 && pairs.size() < pair_cap; ++att) {
        const std::size_t i = rng.next_below(n), j = rng.next_below(n);
        if (i != j && (masks[i] & masks[j]) == 0) pairs.emplace_back(i, j);
      }
    }
  }
  for (const auto& [i, j] : pairs) {
    const Vec<Scalar>& cf = coefs[i];
    const Vec<Scalar>& cg = coefs[j];
    const double t0 = t0_of(cf, cg);
    if (flags.lemma41)
      if (auto p = detail::pad_coeff_pair(cf, cg, true, t0))
        push(p->first, "lemma41", p->second.first, p->second.second);
    if (flags.lemma42) {
      bool gpos = true;
      for (Index k = 0; k < dim; ++k)
        if (std::real(cg[k]) < -kZeroTol || std::abs(std::imag(cg[k])) > kZeroTol) gpos = false;
      if (gpos)
        if (auto p = detail::pad_coeff_pair(cf, cg, false, t0))
          push(p->first, "lemma42", p->second.first, p->second.second);
    }
    if (flags.lemma32real && !scalar_traits<Scalar>::is_complex) {
      // g = g1 - g2 split plus the chain intermediate f + g1
      Vec<Scalar> g1 = Vec<Scalar>::Zero(dim), g2 = Vec<Scalar>::Zero(dim);
      for (Index k = 0; k < dim; ++k) {
        if (std::real(cg[k]) > 0)
          g1[k] = cg[k];
        else
          g2[k] = -cg[k];
      }
      push(g1, "lemma32real", {}, 0.0);
      push(g2, "lemma32real", {}, 0.0);
      push(Vec<Scalar>(cf + g1), "lemma32real", {}, 0.0);
    }
  }

  // (3) Theorem-2 difference vectors g = f - a 1_{eps,B}
  if (flags.thag_proof) {
    Rng rng(spec.seed ^ 0x74686167ULL);
    const std::size_t diff_cap = 600;
    std::size_t made = 0;
    const auto fam = sign_family<Scalar>(basis.space.net_order);
    for (std::uint64_t att = 0; att < 30000 && made < diff_cap; ++att) {
      const Vec<Scalar>& cf = coefs[elems[rng.next_below(elems.size())]];
      const Eigen::VectorXd mags = cf.cwiseAbs();
      const Index m = 1 + static_cast<Index>(rng.next_below(static_cast<std::uint64_t>(dim)));
      const auto pi = greedy_ordering_from_magnitudes(mags);
      const double alpha = mags[pi[m - 1]];
      if (alpha <= kZeroTol) continue;
      const std::uint32_t all = (1u << dim) - 1u;
      const std::uint32_t bmask = static_cast<std::uint32_t>(rng.next_below(all) + 1) & all;
      if (bmask == 0 || std::popcount(bmask) > static_cast<int>(m)) continue;
      static constexpr double kMul[4] = {1.0, -1.0, 2.0, 0.5};
      const double a = alpha * kMul[rng.next_below(4)];
      Vec<Scalar> g = cf;
      for (Index k : mask_to_set(bmask)) g[k] -= Scalar(a) * fam[rng.next_below(fam.size())];
      const std::size_t before = seen.size();
      push(g, "thagProof", {}, 0.0);
      if (seen.size() > before) ++made;
    }
  }
  return out;
}

// deterministic short id for reports
template <class Scalar>
std::string corpus_id_string(const Basis<Scalar>& basis, const CorpusSpec& spec, std::size_t size) {
  std::ostringstream os;
  os << basis.label << "/seed=" << spec.seed << "/n=" << size;
  return os.str();
}

}  // namespace greedy
