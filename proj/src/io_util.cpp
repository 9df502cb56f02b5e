#include "greedy/io.hpp"

#include <cstdio>
#include <filesystem>

namespace greedy {

void atomic_write_file(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path dir = target.has_parent_path() ? target.parent_path() : fs::path(".");
  const fs::path tmp = dir / (target.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot open for writing: " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw InputError("write failure: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw InputError("cannot rename " + tmp.string() + " to " + path + ": " + ec.message());
  }
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void diff_walk(const json& a, const json& b, const std::string& path, std::vector<std::string>& out) {
  if (a.is_number() && b.is_number()) {
    const double da = a.get<double>(), db = b.get<double>();
    if (std::abs(da - db) > 1e-9)
      out.push_back(path + ": " + format_double(da) + " vs " + format_double(db));
    return;
  }
  if (a.type() != b.type()) {
    out.push_back(path + ": type mismatch");
    return;
  }
  if (a.is_object()) {
    for (auto it = a.begin(); it != a.end(); ++it) {
      if (!b.contains(it.key()))
        out.push_back(path + "/" + it.key() + ": missing on right");
      else
        diff_walk(it.value(), b.at(it.key()), path + "/" + it.key(), out);
    }
    for (auto it = b.begin(); it != b.end(); ++it)
      if (!a.contains(it.key())) out.push_back(path + "/" + it.key() + ": missing on left");
    return;
  }
  if (a.is_array()) {
    if (a.size() != b.size()) {
      out.push_back(path + ": array length " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
      return;
    }
    for (std::size_t i = 0; i < a.size(); ++i)
      diff_walk(a.at(i), b.at(i), path + "[" + std::to_string(i) + "]", out);
    return;
  }
  if (a != b) out.push_back(path + ": " + a.dump() + " vs " + b.dump());
}

}  // namespace

std::vector<std::string> compare_reports(const json& a, const json& b) {
  if (a.value("schemaVersion", -1) != b.value("schemaVersion", -1))
    throw InputError("report schema versions differ");
  if (a == b) return {};
  std::vector<std::string> out;
  diff_walk(a, b, "", out);
  return out;
}

}  // namespace greedy
