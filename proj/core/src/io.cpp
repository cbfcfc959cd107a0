#include "hopnet/io.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <iterator>
#include <memory>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "hopnet/error.hpp"

#ifndef HOPNET_VERSION
#define HOPNET_VERSION "0.0.0"
#endif

namespace hopnet {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

double parse_double(std::string_view tok) {
  double x = 0.0;
  const auto* end = tok.data() + tok.size();
  const auto res = std::from_chars(tok.data(), end, x);
  if (res.ec != std::errc() || res.ptr != end) throw ParseError("bad number '" + std::string(tok) + "'");
  return x;
}

template <class Int>
Int parse_int(std::string_view tok) {
  Int x = 0;
  const auto* end = tok.data() + tok.size();
  const auto res = std::from_chars(tok.data(), end, x);
  if (res.ec != std::errc() || res.ptr != end) throw ParseError("bad integer '" + std::string(tok) + "'");
  return x;
}

std::vector<double> parse_numbers(const std::string& line) {
  std::vector<double> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(parse_double(tok));
  return out;
}

std::size_t parse_header_n(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("n=", 0) != 0) throw ParseError("expected 'n=<int>' header");
  return parse_int<std::size_t>(std::string_view(line).substr(2));
}

void write_row(std::ostream& out, std::span<const double> xs) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out << ' ';
    out << format_double(xs[i]);
  }
  out << '\n';
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw ParseError("unterminated quote in CSV row");
  fields.push_back(std::move(cur));
  return fields;
}

std::string sha256_of_stream(std::istream& in) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw IoError("sha256 init failed");
  char buf[1 << 15];
  while (in) {
    in.read(buf, sizeof buf);
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

}  // namespace

std::string version_string() { return HOPNET_VERSION; }

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_params(std::ostream& out, const NetParams& p) {
  out << "n=" << p.n() << '\n';
  write_row(out, p.biases());
  const auto upper = p.upper_triangle();
  write_row(out, upper);
}

NetParams read_params(std::istream& in) {
  const std::size_t n = parse_header_n(in);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing bias line");
  auto b = parse_numbers(line);
  if (b.size() != n) throw ParseError("bias line has " + std::to_string(b.size()) + " values, expected " + std::to_string(n));
  std::vector<double> upper;
  if (std::getline(in, line)) upper = parse_numbers(line);
  if (upper.size() != n * (n - (n ? 1 : 0)) / 2) throw ParseError("weight line has the wrong number of values");
  return NetParams::from_upper(n, upper, std::move(b));
}

void save_params(const fs::path& path, const NetParams& p) {
  auto out = open_out(path);
  write_params(out, p);
  finish(out, path);
}

NetParams load_params(const fs::path& path) {
  auto in = open_in(path);
  return read_params(in);
}

std::vector<EdgeGraph> load_graphs(const fs::path& path) {
  auto in = open_in(path);
  return read_graphs(in);
}

void save_graphs(const fs::path& path, std::span<const EdgeGraph> graphs) {
  auto out = open_out(path);
  write_graphs(out, graphs);
  finish(out, path);
}

void write_trace_csv(std::ostream& out, std::span<const TraceRow> trace) {
  out << "iter,loss,train_frac,grad_norm\n";
  for (const auto& r : trace) {
    out << r.iter << ',' << format_double(r.loss) << ',' << format_double(r.train_frac) << ','
        << format_double(r.grad_norm) << '\n';
  }
}

const char* const kTrialRecordHeader =
    "family,v,k_param,rule,N,trial,seed,train_frac,test_exact,test_bits,test_strict,residual_fraction,"
    "beta1,beta2,beta3,wallclock_ms,failed";

void write_trial_records(std::ostream& out, std::span<const TrialRecord> records) {
  out << kTrialRecordHeader << '\n';
  for (const auto& r : records) {
    out << csv_quote(r.family) << ',' << r.v << ',' << r.k_param << ',' << r.rule << ',' << r.N << ','
        << r.trial << ',' << r.seed << ',' << format_double(r.train_frac) << ',' << format_double(r.test_exact)
        << ',' << format_double(r.test_bits) << ',' << format_double(r.test_strict) << ','
        << format_double(r.residual_fraction) << ',' << format_double(r.beta[0]) << ','
        << format_double(r.beta[1]) << ',' << format_double(r.beta[2]) << ',' << r.wallclock_ms << ','
        << (r.failed ? 1 : 0) << '\n';
  }
}

std::vector<TrialRecord> read_trial_records(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTrialRecordHeader) throw ParseError("trial record header mismatch");
  std::vector<TrialRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 17) throw ParseError("trial record row has " + std::to_string(f.size()) + " fields");
    TrialRecord r;
    r.family = f[0];
    r.v = parse_int<int>(f[1]);
    r.k_param = parse_int<int>(f[2]);
    r.rule = f[3];
    r.N = parse_int<int>(f[4]);
    r.trial = parse_int<int>(f[5]);
    r.seed = parse_int<std::uint64_t>(f[6]);
    r.train_frac = parse_double(f[7]);
    r.test_exact = parse_double(f[8]);
    r.test_bits = parse_double(f[9]);
    r.test_strict = parse_double(f[10]);
    r.residual_fraction = parse_double(f[11]);
    r.beta = {parse_double(f[12]), parse_double(f[13]), parse_double(f[14])};
    r.wallclock_ms = parse_int<long>(f[15]);
    r.failed = parse_int<int>(f[16]) != 0;
    out.push_back(std::move(r));
  }
  return out;
}

void write_scaling_csv(std::ostream& out, const ScalingResult& result) {
  out << "v,s50,censored\n";
  for (const auto& p : result.points) out << p.v << ',' << p.s50 << ',' << (p.censored ? 1 : 0) << '\n';
}

void write_hcp_csv(std::ostream& out, std::span<const HcpRecord> records) {
  out << "N,trial,gen_exact,gen_bits,denoise_exact,denoise_bits\n";
  for (const auto& r : records) {
    out << r.N << ',' << r.trial << ',' << format_double(r.gen_exact) << ',' << format_double(r.gen_bits) << ','
        << format_double(r.denoise_exact) << ',' << format_double(r.denoise_bits) << '\n';
  }
}

void write_descent_csv(std::ostream& out, std::span<const DescentRecord> records) {
  out << "N,trial,bit_error\n";
  for (const auto& r : records) out << r.N << ',' << r.trial << ',' << format_double(r.bit_error) << '\n';
}

void write_histogram_csv(std::ostream& out, const WeightHistogram& hist) {
  out << "class,value\n";
  for (double x : hist.adjacent) out << "adjacent," << format_double(x) << '\n';
  for (double x : hist.non_adjacent) out << "non_adjacent," << format_double(x) << '\n';
  for (double x : hist.bias) out << "bias," << format_double(x) << '\n';
}

void write_sample_gap_csv(std::ostream& out, std::span<const SampleGapRecord> records) {
  out << "N,trial,distance\n";
  for (const auto& r : records) out << r.N << ',' << r.trial << ',' << format_double(r.distance) << '\n';
}

void write_heatmap(std::ostream& out, const HeatmapExport& heat) {
  out << "n=" << heat.n << '\n';
  for (std::size_t i = 0; i < heat.n; ++i) {
    write_row(out, std::span<const double>(heat.weights.data() + i * heat.n, heat.n));
  }
  for (std::size_t i = 0; i < heat.n; ++i) {
    for (std::size_t j = 0; j < heat.n; ++j) out << (j ? " " : "") << heat.classes[i * heat.n + j];
    out << '\n';
  }
}

HeatmapExport read_heatmap(std::istream& in) {
  HeatmapExport heat;
  heat.n = parse_header_n(in);
  std::string line;
  for (std::size_t i = 0; i < heat.n; ++i) {
    if (!std::getline(in, line)) throw ParseError("heatmap has too few weight rows");
    const auto row = parse_numbers(line);
    if (row.size() != heat.n) throw ParseError("heatmap weight row has the wrong length");
    heat.weights.insert(heat.weights.end(), row.begin(), row.end());
  }
  for (std::size_t i = 0; i < heat.n; ++i) {
    if (!std::getline(in, line)) throw ParseError("heatmap has too few class rows");
    std::istringstream ss(line);
    std::string tok;
    std::size_t count = 0;
    while (ss >> tok) {
      heat.classes.push_back(parse_int<int>(tok));
      ++count;
    }
    if (count != heat.n) throw ParseError("heatmap class row has the wrong length");
  }
  return heat;
}

std::string svm_sidecar_json(const HsvmResult& result) {
  json j = {{"norm_sq", result.norm_sq},
            {"min_margin", result.min_margin},
            {"duality_gap", result.duality_gap},
            {"n_constraints", result.n_constraints}};
  return j.dump(2);
}

std::string projection_json(const Projection& proj) {
  json j = {{"beta", {proj.beta.adjacent, proj.beta.non_adjacent, proj.beta.bias}},
            {"residual_norm", proj.residual_norm},
            {"residual_fraction", proj.residual_fraction},
            {"degenerate_beta2", proj.degenerate_non_adjacent}};
  return j.dump(2);
}

std::string hnngic_json(const HnngicVerdict& verdict) {
  json j = {{"verdict", verdict.verdict == Verdict::True ? "True" : "Unknown"},
            {"beta_star", {verdict.beta_star.adjacent, verdict.beta_star.non_adjacent, verdict.beta_star.bias}},
            {"x1_memorized", verdict.x1_memorized},
            {"x2_fixed", verdict.x2_fixed},
            {"iterations", verdict.iterations},
            {"loss", verdict.loss}};
  return j.dump(2);
}

std::string scaling_fit_json(const ScalingResult& result) {
  json pts = json::array();
  for (const auto& p : result.points) {
    json evals = json::array();
    for (const auto& [N, acc] : p.evaluated) evals.push_back({N, acc});
    pts.push_back({{"v", p.v}, {"s50", p.s50}, {"censored", p.censored}, {"evaluated", evals}});
  }
  json j = {{"points", pts}, {"fitted_points", result.fitted_points}};
  if (result.fitted_points >= 2) {
    j["slope"] = result.fit.slope;
    j["intercept"] = result.fit.intercept;
  } else {
    j["slope"] = nullptr;
    j["intercept"] = nullptr;
  }
  return j.dump(2);
}

std::string accuracy_json(const AccuracyResult& acc, std::size_t count) {
  json j = {{"count", count}, {"exact", acc.exact}, {"bits", acc.bits}, {"strict", acc.strict}};
  return j.dump(2);
}

std::string sha256_hex(std::string_view bytes) {
  std::istringstream in{std::string(bytes)};
  return sha256_of_stream(in);
}

std::string sha256_file(const fs::path& path) {
  auto in = open_in(path);
  return sha256_of_stream(in);
}

fs::path write_manifest(const fs::path& dir, const ManifestInput& input) {
  json config = json::object();
  for (const auto& [k, v] : input.config) config[k] = v;
  json artifacts = json::array();
  for (const auto& a : input.artifacts) {
    const fs::path abs = a.is_absolute() ? a : fs::absolute(a);
    artifacts.push_back({{"path", fs::relative(abs, fs::absolute(dir)).generic_string()},
                         {"sha256", sha256_file(abs)},
                         {"bytes", fs::file_size(abs)}});
  }
  json j = {{"tool", "hopnet"},
            {"version", version_string()},
            {"subcommand", input.subcommand},
            {"master_seed", input.master_seed},
            {"config", config},
            {"artifacts", artifacts}};
  const fs::path path = dir / "manifest.json";
  auto out = open_out(path);
  out << j.dump(2) << '\n';
  finish(out, path);
  return path;
}

ManifestCheck verify_manifest(const fs::path& manifest_path) {
  auto in = open_in(manifest_path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError("manifest is not valid JSON: " + std::string(e.what()));
  }
  if (!j.contains("artifacts") || !j["artifacts"].is_array()) throw ParseError("manifest has no artifact list");
  ManifestCheck check;
  const fs::path base = manifest_path.parent_path();
  for (const auto& a : j["artifacts"]) {
    const std::string rel = a.value("path", "");
    const fs::path path = base / rel;
    ++check.checked;
    if (!fs::exists(path)) {
      check.ok = false;
      check.problems.push_back(rel + ": missing");
      continue;
    }
    if (sha256_file(path) != a.value("sha256", "")) {
      check.ok = false;
      check.problems.push_back(rel + ": hash mismatch");
    }
  }
  return check;
}

}  // namespace hopnet
