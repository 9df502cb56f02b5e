#include "greedy/catalog.hpp"

#include <charconv>
#include <sstream>

namespace greedy {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}

double parse_num(const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw InputError("trailing characters in number: " + s);
    return v;
  } catch (const std::exception&) {
    throw InputError("cannot parse number: " + s);
  }
}

Index parse_dim(const std::string& s) {
  const double v = parse_num(s);
  const Index n = static_cast<Index>(v);
  if (static_cast<double>(n) != v) throw InputError("dimension must be an integer: " + s);
  return n;
}

}  // namespace

CatalogId parse_catalog_id(const std::string& text) {
  const auto parts = split(text, ':');
  CatalogId id;
  const std::string& fam = parts[0];
  if (fam == "canonical") {
    if (parts.size() != 3) throw InputError("expected canonical:q:n");
    id.family = CatalogId::Family::Canonical;
    id.q = parse_num(parts[1]);
    id.n = parse_dim(parts[2]);
  } else if (fam == "weighted") {
    if (parts.size() != 4) throw InputError("expected weighted:q:n:w1,w2,...");
    id.family = CatalogId::Family::Weighted;
    id.q = parse_num(parts[1]);
    id.n = parse_dim(parts[2]);
    const auto ws = split(parts[3], ',');
    if (static_cast<Index>(ws.size()) != id.n) throw InputError("weight count must equal n");
    id.weights.resize(id.n);
    for (Index i = 0; i < id.n; ++i) id.weights[i] = parse_num(ws[static_cast<std::size_t>(i)]);
  } else if (fam == "summing") {
    if (parts.size() != 2) throw InputError("expected summing:n");
    id.family = CatalogId::Family::Summing;
    id.q = 1.0;
    id.n = parse_dim(parts[1]);
  } else if (fam == "perturbedIdentity" || fam == "perturbed") {
    if (parts.size() != 3) throw InputError("expected perturbedIdentity:n:offDiag");
    id.family = CatalogId::Family::PerturbedIdentity;
    id.q = 2.0;
    id.n = parse_dim(parts[1]);
    id.off_diag = parse_num(parts[2]);
  } else {
    throw InputError("unknown catalog basis family: " + fam);
  }
  return id;
}

std::string to_string(const CatalogId& id) {
  std::ostringstream os;
  switch (id.family) {
    case CatalogId::Family::Canonical:
      os << "canonical:" << id.q << ":" << id.n;
      break;
    case CatalogId::Family::Weighted:
      os << "weighted:" << id.q << ":" << id.n << ":";
      for (Index i = 0; i < id.weights.size(); ++i) {
        if (i) os << ",";
        os << id.weights[i];
      }
      break;
    case CatalogId::Family::Summing:
      os << "summing:" << id.n;
      break;
    case CatalogId::Family::PerturbedIdentity:
      os << "perturbedIdentity:" << id.n << ":" << id.off_diag;
      break;
  }
  return os.str();
}

std::vector<std::string> default_catalog() {
  return {
      "canonical:2:4",
      "canonical:1:4",
      "canonical:0.5:3",
      "weighted:1:4:1,0.5,0.25,0.125",
      "summing:4",
      "summing:6",
      "perturbedIdentity:4:0.25",
  };
}

}  // namespace greedy
