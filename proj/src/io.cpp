#include "dyadic/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace dyadic {

namespace fs = std::filesystem;

std::string format_sig(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string trace_csv(const Trace& trace) {
  if (trace.samples.empty()) throw std::invalid_argument("trace_csv: empty trace");
  const int n = trace.samples.front().n_modes;
  std::string out = "t";
  for (int i = 1; i <= n; ++i) out += ",X" + std::to_string(i);
  out += ",energy\n";
  for (std::size_t j = 0; j < trace.samples.size(); ++j) {
    const auto& s = trace.samples[j];
    out += format_sig(s.t);
    for (int i = 0; i < n; ++i) {
      out += ',';
      out += format_sig(s.x[i]);
    }
    out += ',';
    out += format_sig(trace.energies[j].total);
    out += '\n';
  }
  return out;
}

std::string series_csv(const SeriesTable& table) {
  std::string out = "k,d,d_prime,D\n";
  for (int k = 0; k <= table.terms; ++k) {
    out += std::to_string(k);
    out += ',';
    out += format_sig(table.d_at(k));
    out += ',';
    out += format_sig(table.d_prime_at(k));
    out += ',';
    out += format_sig(table.d_capital_at(k));
    out += '\n';
  }
  return out;
}

std::string profile_csv(const SelfSimilarProfile& prof) {
  std::string out = "n,a_n\n";
  for (Eigen::Index i = 0; i < prof.a.size(); ++i) {
    out += std::to_string(i + 1);
    out += ',';
    out += format_sig(prof.a[i]);
    out += '\n';
  }
  return out;
}

nlohmann::ordered_json radius_json(const RadiusReport& rep) {
  nlohmann::ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["R"] = rep.R;
  j["bracket_lo"] = rep.bracket_lo;
  j["bracket_hi"] = rep.bracket_hi;
  j["residual"] = rep.residual;
  j["z1"] = rep.z1;
  return j;
}

}  // namespace dyadic
