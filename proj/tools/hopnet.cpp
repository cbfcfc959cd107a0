// hopnet command line tool.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hopnet/hopnet.hpp"

namespace fs = std::filesystem;
using namespace hopnet;

namespace {

// Files written by one run; the manifest is written last, next to them.
struct RunOutputs {
  fs::path manifest_dir = ".";
  std::vector<fs::path> files;

  std::ofstream open(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    files.push_back(path);
    return out;
  }

  void text(const fs::path& path, const std::string& body) {
    auto out = open(path);
    out << body;
    if (body.empty() || body.back() != '\n') out << '\n';
  }
};

struct Common {
  std::uint64_t seed = 0;
  int jobs = 1;
};

std::string join(const std::vector<std::string>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + xs[i];
  return s;
}

std::vector<std::pair<std::string, std::string>> resolved_config(const CLI::App& sub) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string name = opt->get_lnames().front();
    if (name == "help") continue;
    std::string value;
    if (opt->count() > 0) {
      value = opt->get_expected_max() == 0 ? "true" : join(opt->results());
    } else {
      value = opt->get_default_str();
    }
    out.emplace_back(name, value);
  }
  return out;
}

bool g_full_iters = false;

TrainConfig make_train_config(const std::string& rule, int max_iters, double step, double margin) {
  TrainConfig tc;
  tc.stop_at_margin = !g_full_iters;
  tc.rule = parse_rule(rule);
  tc.max_iters = max_iters;
  tc.step_size = step;
  tc.margin_target = margin;
  return tc;
}

EdgeGraph first_graph(const fs::path& path) {
  auto graphs = load_graphs(path);
  if (graphs.empty()) throw ParseError("'" + path.string() + "' contains no graph");
  return graphs.front();
}

std::vector<Bits> bits_of(std::span<const EdgeGraph> graphs) {
  std::vector<Bits> out;
  for (const auto& g : graphs) out.push_back(g.bits());
  return out;
}

std::vector<Bits> orbit_draws(const FamilySpec& spec, int count, std::uint64_t seed, std::string_view label) {
  const EdgeGraph base = make_family(spec);
  Rng rng(derive_seed(seed, label, {}));
  std::vector<Bits> out;
  for (int i = 0; i < count; ++i) out.push_back(random_orbit_sample(base, rng).bits());
  return out;
}

fs::path with_suffix(const fs::path& p, const std::string& suffix) {
  return p.parent_path() / (p.filename().string() + suffix);
}

fs::path dir_of(const fs::path& file) { return file.has_parent_path() ? file.parent_path() : fs::path("."); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hopfield networks trained on graph isomorphism classes"};
  app.set_version_flag("--version", version_string());
  app.set_config("--config", "", "Read flags from a key=value config file");
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  Common common;
  RunOutputs outputs;
  std::function<void()> action;
  bool write_run_manifest = true;
  auto add_common = [&](CLI::App* sub, bool jobs) {
    sub->add_option("--seed", common.seed, "Master seed");
    if (jobs) sub->add_option("--jobs", common.jobs, "Parallel trials")->check(CLI::PositiveNumber);
  };

  // gen
  std::string gen_family;
  int gen_count = 1;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Sample graphs from a family's isomorphism class");
  gen->add_option("--family", gen_family, "Family spec, e.g. clique:v=6,k=3")->required();
  gen->add_option("--count", gen_count, "Number of graphs")->check(CLI::PositiveNumber);
  gen->add_option("--out", gen_out, "Output graph file (stdout when absent)");
  add_common(gen, false);
  gen->callback([&] {
    action = [&] {
      const FamilySpec spec = FamilySpec::parse(gen_family);
      const EdgeGraph base = make_family(spec);
      Rng rng(derive_seed(common.seed, "gen", {}));
      std::vector<EdgeGraph> graphs;
      for (int i = 0; i < gen_count; ++i) graphs.push_back(random_orbit_sample(base, rng));
      if (gen_out.empty()) {
        write_graphs(std::cout, graphs);
      } else {
        outputs.manifest_dir = dir_of(gen_out);
        auto out = outputs.open(gen_out);
        write_graphs(out, graphs);
      }
    };
  });

  // train
  std::string tr_family, tr_graphs, tr_rule = "mef_gd", tr_out;
  int tr_n = 10, tr_iters = 1000;
  double tr_step = 0.0, tr_margin = 1.0;
  auto* trn = app.add_subcommand("train", "Train a network on a graph set");
  trn->add_option("--family", tr_family, "Family spec to sample the training set from");
  trn->add_option("--graphs", tr_graphs, "Training graph file")->check(CLI::ExistingFile);
  trn->add_option("--rule", tr_rule, "mef_gd, mef_agd, perceptron, delta or outer_product");
  trn->add_option("--n", tr_n, "Training set size when sampling")->check(CLI::PositiveNumber);
  trn->add_option("--max-iters", tr_iters, "Iteration cap")->check(CLI::NonNegativeNumber);
  trn->add_option("--step", tr_step, "Step size (0 = rule default)");
  trn->add_flag("--full-iters", g_full_iters, "Run every iteration instead of stopping at the margin");
  trn->add_option("--margin", tr_margin, "Target energy-gap margin");
  trn->add_option("--out", tr_out, "Parameter file")->required();
  add_common(trn, false);
  trn->callback([&] {
    action = [&] {
      if (tr_family.empty() == tr_graphs.empty()) throw PreconditionError("give exactly one of --family, --graphs");
      std::vector<Bits> S = tr_graphs.empty() ? orbit_draws(FamilySpec::parse(tr_family), tr_n, common.seed, "train")
                                              : bits_of(load_graphs(tr_graphs));
      if (S.empty()) throw PreconditionError("training set is empty");
      TrainConfig tc = make_train_config(tr_rule, tr_iters, tr_step, tr_margin);
      tc.seed = derive_seed(common.seed, "train-rule", {});
      const TrainResult res = train(S, tc);
      outputs.manifest_dir = dir_of(tr_out);
      {
        auto out = outputs.open(tr_out);
        write_params(out, res.params);
      }
      {
        auto out = outputs.open(with_suffix(tr_out, ".trace.csv"));
        write_trace_csv(out, res.trace);
      }
      std::vector<EdgeGraph> dump;
      const int v = vertices_for_edges(S.front().size());
      for (const auto& x : S) dump.emplace_back(v, x);
      auto out = outputs.open(with_suffix(tr_out, ".train.graph"));
      write_graphs(out, dump);
      std::cout << "iterations=" << res.iterations << " margin_reached=" << (res.margin_reached ? 1 : 0)
                << " min_margin=" << format_double(res.min_margin) << '\n';
    };
  });

  // eval
  std::string ev_params, ev_graphs, ev_family, ev_mode = "sample1000", ev_verify, ev_out;
  int ev_size = 1000;
  double ev_margin = 1.0;
  auto* ev = app.add_subcommand("eval", "Evaluate parameters on a test set, or verify a manifest");
  ev->add_option("--params", ev_params, "Parameter file")->check(CLI::ExistingFile);
  ev->add_option("--graphs", ev_graphs, "Test graph file")->check(CLI::ExistingFile);
  ev->add_option("--family", ev_family, "Family spec for a sampled or enumerated test set");
  ev->add_option("--test-mode", ev_mode, "enumerate or sample1000");
  ev->add_option("--test-size", ev_size, "Sample size in sample mode")->check(CLI::PositiveNumber);
  ev->add_option("--margin", ev_margin, "Margin for strict accuracy");
  ev->add_option("--verify", ev_verify, "Manifest whose artifact hashes are checked")->check(CLI::ExistingFile);
  ev->add_option("--out", ev_out, "Accuracy JSON file");
  add_common(ev, false);
  ev->callback([&] {
    action = [&] {
      if (!ev_verify.empty()) {
        const auto check = verify_manifest(ev_verify);
        for (const auto& p : check.problems) std::cerr << p << '\n';
        if (!check.ok) throw Error("integrity", std::to_string(check.problems.size()) + " of " +
                                                    std::to_string(check.checked) + " artifacts failed verification");
        std::cout << "verified " << check.checked << " artifacts\n";
        if (ev_params.empty()) {
          write_run_manifest = false;
          return;
        }
      }
      if (ev_params.empty()) throw PreconditionError("--params is required");
      const NetParams p = load_params(ev_params);
      std::vector<Bits> test;
      if (!ev_graphs.empty()) {
        test = bits_of(load_graphs(ev_graphs));
      } else if (!ev_family.empty()) {
        const FamilySpec spec = FamilySpec::parse(ev_family);
        if (parse_test_mode(ev_mode) == TestMode::enumerate) {
          test = bits_of(enumerate_isomorphism_class(make_family(spec)));
        } else {
          test = orbit_draws(spec, ev_size, common.seed, "eval-test");
        }
      } else {
        throw PreconditionError("give --graphs or --family");
      }
      for (const auto& x : test) {
        if (x.size() != p.n()) throw DimensionError("test graphs do not match the parameter size");
      }
      const std::string body = accuracy_json(accuracy(p, test, ev_margin), test.size());
      std::cout << body << '\n';
      if (!ev_out.empty()) {
        outputs.manifest_dir = dir_of(ev_out);
        outputs.text(ev_out, body);
      }
    };
  });

  // curve
  std::string cu_family, cu_rule = "mef_gd", cu_mode = "sample1000", cu_out = "curve", cu_sampling = "iid";
  std::vector<int> cu_ns;
  int cu_trials = 10, cu_size = 1000, cu_iters = 1000;
  double cu_step = 0.0, cu_margin = 1.0;
  bool cu_save = false, cu_timing = false;
  auto* cu = app.add_subcommand("curve", "Generalization curve over training set sizes");
  cu->add_option("--family", cu_family, "Family spec")->required();
  cu->add_option("--rule", cu_rule, "Learning rule");
  cu->add_option("--ns", cu_ns, "Comma list of training set sizes")->delimiter(',')->required();
  cu->add_option("--trials", cu_trials, "Trials per N")->check(CLI::PositiveNumber);
  cu->add_option("--test-mode", cu_mode, "enumerate or sample1000");
  cu->add_option("--test-size", cu_size, "Sample size in sample mode")->check(CLI::PositiveNumber);
  cu->add_option("--sampling", cu_sampling, "iid or distinct training draws");
  cu->add_option("--max-iters", cu_iters, "Iteration cap")->check(CLI::NonNegativeNumber);
  cu->add_option("--step", cu_step, "Step size (0 = rule default)");
  cu->add_flag("--full-iters", g_full_iters, "Run every iteration instead of stopping at the margin");
  cu->add_option("--margin", cu_margin, "Target energy-gap margin");
  cu->add_flag("--save-params", cu_save, "Save parameters per (N, trial)");
  cu->add_flag("--timing", cu_timing, "Record wall-clock time per trial");
  cu->add_option("--out", cu_out, "Output directory");
  add_common(cu, true);
  cu->callback([&] {
    action = [&] {
      CurveConfig cfg;
      cfg.family = FamilySpec::parse(cu_family);
      cfg.train = make_train_config(cu_rule, cu_iters, cu_step, cu_margin);
      cfg.Ns = cu_ns;
      cfg.trials = cu_trials;
      cfg.test_mode = parse_test_mode(cu_mode);
      cfg.test_size = cu_size;
      if (cu_sampling == "iid") {
        cfg.sampling = TrainSampling::iid;
      } else if (cu_sampling == "distinct") {
        cfg.sampling = TrainSampling::distinct;
      } else {
        throw ParseError("unknown sampling '" + cu_sampling + "'");
      }
      cfg.seed = common.seed;
      cfg.jobs = common.jobs;
      cfg.timing = cu_timing;
      const fs::path dir = cu_out;
      fs::create_directories(dir);
      outputs.manifest_dir = dir;
      std::map<std::pair<int, int>, fs::path> saved;
      if (cu_save) {
        cfg.on_trial = [&](const TrialContext& ctx) {
          const fs::path path =
              dir / "params" / ("N" + std::to_string(ctx.record.N) + "_t" + std::to_string(ctx.record.trial) + ".hop");
          fs::create_directories(path.parent_path());
          save_params(path, ctx.params);
          saved[{ctx.record.N, ctx.record.trial}] = path;
        };
      }
      const auto records = generalization_curve(cfg);
      for (const auto& [key, path] : saved) outputs.files.push_back(path);
      auto out = outputs.open(dir / "trials.csv");
      write_trial_records(out, records);
    };
  });

  // scaling
  std::string sc_family, sc_rule = "mef_gd", sc_out = "scaling";
  std::vector<int> sc_vs;
  int sc_trials = 5, sc_size = 1000, sc_nmax = 4096, sc_iters = 1000;
  double sc_threshold = 0.5, sc_step = 0.0, sc_margin = 1.0;
  auto* sc = app.add_subcommand("scaling", "s50 search over vertex counts with a log-log fit");
  sc->add_option("--family", sc_family, "Family template, e.g. clique:k=v/2 or paley")->required();
  sc->add_option("--vs", sc_vs, "Comma list of vertex counts")->delimiter(',')->required();
  sc->add_option("--rule", sc_rule, "Learning rule");
  sc->add_option("--trials", sc_trials, "Trials per N")->check(CLI::PositiveNumber);
  sc->add_option("--test-size", sc_size, "Test sample size")->check(CLI::PositiveNumber);
  sc->add_option("--threshold", sc_threshold, "Mean exact accuracy defining s50");
  sc->add_option("--n-max", sc_nmax, "Largest N searched")->check(CLI::PositiveNumber);
  sc->add_option("--max-iters", sc_iters, "Iteration cap")->check(CLI::NonNegativeNumber);
  sc->add_option("--step", sc_step, "Step size (0 = rule default)");
  sc->add_flag("--full-iters", g_full_iters, "Run every iteration instead of stopping at the margin");
  sc->add_option("--margin", sc_margin, "Target energy-gap margin");
  sc->add_option("--out", sc_out, "Output directory");
  add_common(sc, true);
  sc->callback([&] {
    action = [&] {
      ScalingConfig cfg;
      cfg.family = FamilyTemplate::parse(sc_family);
      cfg.vs = sc_vs;
      cfg.train = make_train_config(sc_rule, sc_iters, sc_step, sc_margin);
      cfg.trials = sc_trials;
      cfg.test_size = sc_size;
      cfg.threshold = sc_threshold;
      cfg.n_max = sc_nmax;
      cfg.seed = common.seed;
      cfg.jobs = common.jobs;
      const auto result = s50_scaling(cfg);
      const fs::path dir = sc_out;
      outputs.manifest_dir = dir;
      {
        auto out = outputs.open(dir / "scaling.csv");
        write_scaling_csv(out, result);
      }
      outputs.text(dir / "scaling.json", scaling_fit_json(result));
      if (result.fitted_points >= 2) std::cout << "slope=" << format_double(result.fit.slope) << '\n';
    };
  });

  // hist
  std::string hi_params, hi_out = "hist";
  auto* hi = app.add_subcommand("hist", "Weight histogram by adjacency class and invariant projection");
  hi->add_option("--params", hi_params, "Parameter file")->required()->check(CLI::ExistingFile);
  hi->add_option("--out", hi_out, "Output directory");
  add_common(hi, false);
  hi->callback([&] {
    action = [&] {
      const NetParams p = load_params(hi_params);
      const auto h = weight_histogram(p);
      const fs::path dir = hi_out;
      outputs.manifest_dir = dir;
      {
        auto out = outputs.open(dir / "hist.csv");
        write_histogram_csv(out, h);
      }
      std::ostringstream js;
      js << "{\n  \"scale\": " << format_double(h.scale) << ",\n  \"normalized\": " << (h.normalized ? "true" : "false")
         << ",\n  \"mean\": [" << format_double(h.mean[0]) << ", " << format_double(h.mean[1]) << ", "
         << format_double(h.mean[2]) << "],\n  \"stddev\": [" << format_double(h.stddev[0]) << ", "
         << format_double(h.stddev[1]) << ", " << format_double(h.stddev[2]) << "]\n}";
      outputs.text(dir / "hist.json", js.str());
      outputs.text(dir / "projection.json", projection_json(project_invariant(p)));
    };
  });

  // heatmap
  std::string hm_params, hm_out = "heatmap.txt";
  std::vector<double> hm_beta;
  int hm_v = 0;
  auto* hm = app.add_subcommand("heatmap", "Dense weight dump with adjacency-class matrix");
  hm->add_option("--params", hm_params, "Parameter file")->check(CLI::ExistingFile);
  hm->add_option("--beta", hm_beta, "Invariant coordinates b1,b2,b3 instead of a parameter file")
      ->delimiter(',')
      ->expected(3);
  hm->add_option("--v", hm_v, "Vertex count for --beta");
  hm->add_option("--out", hm_out, "Output file");
  add_common(hm, false);
  hm->callback([&] {
    action = [&] {
      NetParams p;
      if (!hm_params.empty()) {
        p = load_params(hm_params);
      } else if (hm_beta.size() == 3) {
        p = invariant_params({hm_beta[0], hm_beta[1], hm_beta[2]}, hm_v);
      } else {
        throw PreconditionError("give --params or --beta with --v");
      }
      outputs.manifest_dir = dir_of(hm_out);
      auto out = outputs.open(hm_out);
      write_heatmap(out, heatmap_export(p));
    };
  });

  // hcp
  HcpConfig hcp;
  std::string hc_rule = "mef_gd", hc_out = "hcp";
  int hc_iters = 1000;
  double hc_step = 0.0, hc_margin = 1.0;
  auto* hc = app.add_subcommand("hcp", "Hidden clique generalization and denoising");
  hc->add_option("--v", hcp.v, "Vertex count");
  hc->add_option("--k", hcp.k, "Clique size");
  hc->add_option("--ns", hcp.Ns, "Comma list of training set sizes")->delimiter(',')->required();
  hc->add_option("--noise", hcp.noise, "Fraction of bits flipped");
  hc->add_option("--n-test", hcp.n_test, "Test cliques per trial")->check(CLI::PositiveNumber);
  hc->add_option("--trials", hcp.trials, "Trials per N")->check(CLI::PositiveNumber);
  hc->add_option("--rule", hc_rule, "Learning rule");
  hc->add_option("--max-iters", hc_iters, "Iteration cap")->check(CLI::NonNegativeNumber);
  hc->add_option("--step", hc_step, "Step size (0 = rule default)");
  hc->add_flag("--full-iters", g_full_iters, "Run every iteration instead of stopping at the margin");
  hc->add_option("--margin", hc_margin, "Target energy-gap margin");
  hc->add_option("--out", hc_out, "Output directory");
  add_common(hc, true);
  hc->callback([&] {
    action = [&] {
      hcp.train = make_train_config(hc_rule, hc_iters, hc_step, hc_margin);
      hcp.seed = common.seed;
      hcp.jobs = common.jobs;
      const auto records = hcp_denoise(hcp);
      outputs.manifest_dir = hc_out;
      auto out = outputs.open(fs::path(hc_out) / "hcp.csv");
      write_hcp_csv(out, records);
    };
  });

  // ddescent
  DescentConfig dd;
  std::string dd_rule = "mef_gd", dd_out = "ddescent";
  int dd_iters = 1000;
  double dd_step = 0.0, dd_margin = 1.0;
  auto* ddc = app.add_subcommand("ddescent", "Test bit error over a dense N grid for clique classes");
  ddc->add_option("--v", dd.v, "Vertex count");
  ddc->add_option("--k", dd.k, "Clique size");
  ddc->add_option("--ns", dd.Ns, "Comma list of training set sizes")->delimiter(',')->required();
  ddc->add_option("--n-test", dd.n_test, "Test cliques per trial")->check(CLI::PositiveNumber);
  ddc->add_option("--trials", dd.trials, "Trials per N")->check(CLI::PositiveNumber);
  ddc->add_option("--rule", dd_rule, "Learning rule");
  ddc->add_option("--max-iters", dd_iters, "Iteration cap")->check(CLI::NonNegativeNumber);
  ddc->add_option("--step", dd_step, "Step size (0 = rule default)");
  ddc->add_flag("--full-iters", g_full_iters, "Run every iteration instead of stopping at the margin");
  ddc->add_option("--margin", dd_margin, "Target energy-gap margin");
  ddc->add_option("--out", dd_out, "Output directory");
  add_common(ddc, true);
  ddc->callback([&] {
    action = [&] {
      dd.train = make_train_config(dd_rule, dd_iters, dd_step, dd_margin);
      dd.seed = common.seed;
      dd.jobs = common.jobs;
      const auto records = double_descent_sweep(dd);
      outputs.manifest_dir = dd_out;
      auto out = outputs.open(fs::path(dd_out) / "ddescent.csv");
      write_descent_csv(out, records);
    };
  });

  // hnngic
  std::string hn_g1, hn_g2, hn_out;
  int hn_budget = 2000;
  auto* hn = app.add_subcommand("hnngic", "One-sided non-isomorphism check");
  hn->add_option("--g1", hn_g1, "Graph file (first graph used)")->required()->check(CLI::ExistingFile);
  hn->add_option("--g2", hn_g2, "Graph file (first graph used)")->required()->check(CLI::ExistingFile);
  hn->add_option("--budget", hn_budget, "Gradient steps")->check(CLI::NonNegativeNumber);
  hn->add_option("--out", hn_out, "Verdict JSON file");
  add_common(hn, false);
  hn->callback([&] {
    action = [&] {
      const auto verdict = hnngic(first_graph(hn_g1), first_graph(hn_g2), hn_budget);
      const std::string body = hnngic_json(verdict);
      std::cout << (verdict.verdict == Verdict::True ? "TRUE" : "UNKNOWN") << '\n' << body << '\n';
      if (!hn_out.empty()) {
        outputs.manifest_dir = dir_of(hn_out);
        outputs.text(hn_out, body);
      }
    };
  });

  // svm
  std::string sv_family, sv_graphs, sv_kind = "hsvm", sv_out;
  int sv_n = 10;
  double sv_tol = 1e-6;
  auto* sv = app.add_subcommand("svm", "Minimum-norm margin-1 parameters (hsvm or ahsvm)");
  sv->add_option("--family", sv_family, "Family spec to sample the set from");
  sv->add_option("--graphs", sv_graphs, "Graph file")->check(CLI::ExistingFile);
  sv->add_option("--n", sv_n, "Sample size when sampling")->check(CLI::PositiveNumber);
  sv->add_option("--kind", sv_kind, "hsvm or ahsvm");
  sv->add_option("--tol", sv_tol, "KKT tolerance")->check(CLI::PositiveNumber);
  sv->add_option("--out", sv_out, "Parameter file")->required();
  add_common(sv, false);
  sv->callback([&] {
    action = [&] {
      if (sv_family.empty() == sv_graphs.empty()) throw PreconditionError("give exactly one of --family, --graphs");
      const std::vector<Bits> S = sv_graphs.empty()
                                      ? orbit_draws(FamilySpec::parse(sv_family), sv_n, common.seed, "svm")
                                      : bits_of(load_graphs(sv_graphs));
      outputs.manifest_dir = dir_of(sv_out);
      std::string sidecar;
      NetParams p;
      if (sv_kind == "hsvm") {
        SvmOptions opt;
        opt.tol = sv_tol;
        opt.seed = common.seed;
        const auto res = hsvm(S, opt);
        p = omega_to_theta(res.omega);
        sidecar = svm_sidecar_json(res);
      } else if (sv_kind == "ahsvm") {
        const OmegaVec w = ahsvm(S);
        HsvmResult res;
        res.norm_sq = w.norm_sq();
        res.min_margin = feasibility_margin(w, S);
        res.n_constraints = S.size();
        p = omega_to_theta(w);
        sidecar = svm_sidecar_json(res);
      } else {
        throw ParseError("unknown svm kind '" + sv_kind + "'");
      }
      {
        auto out = outputs.open(sv_out);
        write_params(out, p);
      }
      outputs.text(with_suffix(sv_out, ".json"), sidecar);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    action();
    if (!write_run_manifest) return 0;
    fs::create_directories(outputs.manifest_dir);
    const CLI::App* sub = app.get_subcommands().front();
    ManifestInput manifest;
    manifest.subcommand = sub->get_name();
    manifest.master_seed = common.seed;
    manifest.config = resolved_config(*sub);
    manifest.artifacts = outputs.files;
    write_manifest(outputs.manifest_dir, manifest);
  } catch (const Error& e) {
    std::cerr << "error: " << e.kind() << ": " << e.what() << '\n';
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: io: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
