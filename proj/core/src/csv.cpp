#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "smd/errors.hpp"
#include "smd/harness.hpp"

namespace smd {

namespace {

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, std::size_t line) {
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw FileError("bad number '" + s + "' on CSV line " + std::to_string(line), "");
  }
  return x;
}

long long parse_int(const std::string& s, std::size_t line) {
  char* end = nullptr;
  const long long x = std::strtoll(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw FileError("bad integer '" + s + "' on CSV line " + std::to_string(line), "");
  }
  return x;
}

}  // namespace

const std::string& csv_header() {
  static const std::string h =
      "model,n,d,mirror,source,error,norm_w_sq,mu1_dot,mu2_dot,alpha,beta,gamma1,seed,converged,"
      "runtime_seconds";
  return h;
}

void write_csv(const ExperimentReport& report, std::ostream& out) {
  out << csv_header() << '\n';
  for (const ReportRow& r : report.rows) {
    out << r.model << ',' << r.n << ',' << r.d << ',' << r.mirror << ',' << source_name(r.source) << ','
        << fmt(r.error) << ',' << fmt(r.norm_w_sq) << ',' << fmt(r.mu1_dot) << ',' << fmt(r.mu2_dot) << ','
        << fmt(r.alpha) << ',' << fmt(r.beta) << ',' << fmt(r.gamma1) << ',' << r.seed << ','
        << (r.converged ? 1 : 0) << ',' << fmt(r.runtime_seconds) << '\n';
  }
}

void emit_csv(const ExperimentReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FileError("cannot open '" + path + "' for writing", path);
  write_csv(report, out);
  out.flush();
  if (!out) throw FileError("write to '" + path + "' failed", path);
}

ExperimentReport read_csv(std::istream& in) {
  ExperimentReport report;
  std::string line;
  if (!std::getline(in, line) || line != csv_header()) throw FileError("missing or unexpected CSV header", "");
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 15) throw FileError("CSV line " + std::to_string(lineno) + " has the wrong field count", "");
    ReportRow r;
    r.model = f[0];
    r.n = static_cast<long>(parse_int(f[1], lineno));
    r.d = static_cast<long>(parse_int(f[2], lineno));
    r.mirror = f[3];
    if (f[4] == "theory") {
      r.source = Source::Theory;
    } else if (f[4] == "empirical") {
      r.source = Source::Empirical;
    } else {
      throw FileError("unknown source '" + f[4] + "' on CSV line " + std::to_string(lineno), "");
    }
    r.error = parse_double(f[5], lineno);
    r.norm_w_sq = parse_double(f[6], lineno);
    r.mu1_dot = parse_double(f[7], lineno);
    r.mu2_dot = parse_double(f[8], lineno);
    r.alpha = parse_double(f[9], lineno);
    r.beta = parse_double(f[10], lineno);
    r.gamma1 = parse_double(f[11], lineno);
    r.seed = parse_int(f[12], lineno);
    r.converged = parse_int(f[13], lineno) != 0;
    r.runtime_seconds = parse_double(f[14], lineno);
    report.rows.push_back(std::move(r));
  }
  return report;
}

ExperimentReport parse_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open '" + path + "'", path);
  try {
    return read_csv(in);
  } catch (const FileError& e) {
    throw FileError(std::string(e.what()) + " in " + path, path);
  }
}

}  // namespace smd
