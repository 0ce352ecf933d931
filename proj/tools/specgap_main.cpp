// Config-driven experiment runner for the spectral-gap laboratory: every
// module is exposed as a subcommand emitting versioned JSON reports and
// plot-ready CSV.  Exit codes: 0 success, 2 verdict failure, 1 error.

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>

#include "specgap/bands.hpp"
#include "specgap/inequalities.hpp"
#include "specgap/io.hpp"
#include "specgap/membership.hpp"
#include "specgap/parallel.hpp"
#include "specgap/quasimode.hpp"
#include "specgap/truncation.hpp"
#include "specgap/version.hpp"

namespace sg = specgap;
using nlohmann::json;

namespace {

struct Common {
  std::string config_path;
  std::string out_dir = ".";
  int workers = sg::default_workers();
};

std::string resolve_config(const std::string& path) {
  if (std::ifstream(path).good()) return path;
  if (const char* dir = std::getenv("SPECGAP_FIXTURES")) {
    std::string alt = std::string(dir) + "/" + path;
    if (std::ifstream(alt).good()) return alt;
  }
  throw std::runtime_error("config not found: " + path);
}

json envelope(const std::string& command, const json& config) {
  json j;
  j["schema_version"] = sg::kSchemaVersion;
  j["specgap_version"] = sg::kVersion;
  j["command"] = command;
  j["config"] = config;
  auto now = std::chrono::system_clock::now().time_since_epoch();
  j["meta"] = {{"generated_at_unix_ms",
                std::chrono::duration_cast<std::chrono::milliseconds>(now).count()}};
  return j;
}

void write_report(const Common& c, const std::string& prefix, const json& j) {
  sg::write_file(c.out_dir + "/" + prefix + ".json", j.dump(2) + "\n");
}

int run_bands(const Common& c) {
  json cfg = sg::load_json_file(resolve_config(c.config_path));
  sg::require_keys(cfg,
                   {"chain", "lambda_max", "grid", "refine_tol", "rk_step", "margin_d",
                    "output_prefix", "emit_discriminant_csv"},
                   "bands");
  sg::ChainConfig chain = sg::chain_config_from_json(cfg.at("chain"));
  double lambda_max = cfg.value("lambda_max", 13.0);
  double grid = cfg.value("grid", 0.02);
  double refine_tol = cfg.value("refine_tol", 1e-7);
  double rk_step = cfg.value("rk_step", 2.5e-4);
  double margin = cfg.value("margin_d", 0.3);
  std::string prefix = cfg.value("output_prefix", "bands");

  sg::Profile profile = sg::assemble_chain(chain);
  std::vector<std::tuple<double, int, double>> sweep;
  sg::GapReport rep = sg::band_structure(profile, lambda_max, grid, refine_tol, rk_step, c.workers,
                                         cfg.value("emit_discriminant_csv", true) ? &sweep : nullptr);
  sg::compare_to_model(rep, rep.model_spectrum, margin);

  json j = envelope("bands", cfg);
  j["report"] = sg::gap_report_json(rep);
  j["report"]["gap_count"] = static_cast<int>(rep.gaps.size());
  j["report"]["hausdorff_to_model"] = sg::hausdorff_to_model(rep);
  write_report(c, prefix, j);
  sg::write_file(c.out_dir + "/" + prefix + "_bands.csv", sg::bands_csv(rep));
  if (!sweep.empty())
    sg::write_file(c.out_dir + "/" + prefix + "_discriminant.csv", sg::discriminant_csv(sweep));
  return sg::all_verdicts_pass(rep) ? 0 : 2;
}

int run_gaps(const Common& c) {
  json cfg = sg::load_json_file(resolve_config(c.config_path));
  sg::require_keys(cfg,
                   {"eps_sweep", "blocks", "h_max", "lambda_max", "grid", "refine_tol", "rk_step",
                    "margin_d", "output_prefix"},
                   "gaps");
  std::vector<double> sweep = cfg.at("eps_sweep").get<std::vector<double>>();
  int blocks = cfg.value("blocks", 1);
  double h_max = cfg.value("h_max", 1e-3);
  double lambda_max = cfg.value("lambda_max", 13.0);
  double grid = cfg.value("grid", 0.02);
  double refine_tol = cfg.value("refine_tol", 1e-7);
  double rk_step = cfg.value("rk_step", 2.5e-4);
  std::string prefix = cfg.value("output_prefix", "gaps");

  json per_eps = json::array();
  std::vector<int> gap_counts;
  std::vector<double> hausdorff;
  std::string csv = "eps,gap_count,hausdorff\n";
  for (double eps : sweep) {
    sg::ChainConfig chain{blocks, eps, std::min(h_max, eps / 10.0), true, 0};
    sg::Profile profile = sg::assemble_chain(chain);
    sg::GapReport rep = sg::band_structure(profile, lambda_max, grid, refine_tol, rk_step, c.workers);
    gap_counts.push_back(static_cast<int>(rep.gaps.size()));
    hausdorff.push_back(sg::hausdorff_to_model(rep));
    json e = sg::gap_report_json(rep);
    e["eps"] = eps;
    e["gap_count"] = gap_counts.back();
    e["hausdorff_to_model"] = hausdorff.back();
    per_eps.push_back(e);
    csv += sg::fmt17(eps) + "," + std::to_string(gap_counts.back()) + "," +
           sg::fmt17(hausdorff.back()) + "\n";
  }
  bool counts_ok = true, hausdorff_ok = true;
  for (std::size_t i = 0; i + 1 < sweep.size(); ++i) {
    counts_ok = counts_ok && gap_counts[i + 1] >= gap_counts[i];
    hausdorff_ok = hausdorff_ok && hausdorff[i + 1] <= hausdorff[i] + 1e-12;
  }
  json j = envelope("gaps", cfg);
  j["report"] = {{"per_eps", per_eps},
                 {"gap_counts", gap_counts},
                 {"hausdorff", hausdorff},
                 {"gap_count_nondecreasing", counts_ok},
                 {"hausdorff_nonincreasing", hausdorff_ok}};
  write_report(c, prefix, j);
  sg::write_file(c.out_dir + "/" + prefix + ".csv", csv);
  return counts_ok && hausdorff_ok ? 0 : 2;
}

int run_scan(const Common& c) {
  json cfg = sg::load_json_file(resolve_config(c.config_path));
  sg::require_keys(cfg, {"chain", "lengths", "intervals", "expected_classification", "output_prefix"},
                   "scan");
  sg::ChainConfig chain = sg::chain_config_from_json(cfg.at("chain"));
  auto lengths = cfg.at("lengths").get<std::vector<int>>();
  std::vector<sg::Interval> intervals;
  for (const auto& iv : cfg.at("intervals")) intervals.push_back({iv.at(0), iv.at(1)});
  std::string prefix = cfg.value("output_prefix", "scan");

  sg::TruncationResult res = sg::truncation_scan(chain, lengths, intervals, c.workers);
  json j = envelope("scan", cfg);
  j["report"] = sg::truncation_json(res);
  write_report(c, prefix, j);
  sg::write_file(c.out_dir + "/" + prefix + "_counts.csv",
                 sg::counts_csv(res.lengths, res.intervals, res.counts));
  int rc = 0;
  if (cfg.contains("expected_classification")) {
    auto expected = cfg.at("expected_classification").get<std::vector<std::string>>();
    if (expected != res.classification) rc = 2;
  }
  return rc;
}

int run_quasimode(const Common& c) {
  json cfg = sg::load_json_file(resolve_config(c.config_path));
  sg::require_keys(cfg,
                   {"chain", "sphere_h", "m", "k", "rho_sweep", "r_outer", "kind", "block_index",
                    "family_blocks", "eps0", "output_prefix", "dump_values"},
                   "quasimode");
  double lambda = 0.0;
  int m = cfg.value("m", 1), k = cfg.value("k", 1);
  lambda = static_cast<double>(k) * (k + 1);
  auto kind_of = [](const std::string& s) {
    if (s == "log") return sg::CutoffKind::log;
    if (s == "linear") return sg::CutoffKind::linear;
    if (s == "smoothstep") return sg::CutoffKind::smoothstep;
    throw std::runtime_error("unknown cutoff kind: " + s);
  };
  sg::CutoffKind kind = kind_of(cfg.value("kind", std::string("smoothstep")));
  double r_outer = cfg.value("r_outer", -1.0);  // default: sqrt(rho)
  std::string prefix = cfg.value("output_prefix", "quasimode");

  json j = envelope("quasimode", cfg);
  json rep;
  bool verdict_ok = true;

  if (cfg.contains("sphere_h")) {  // residual scaling on the closed model sphere
    double h = cfg.at("sphere_h");
    sg::Profile profile = sg::sphere_profile(h);
    sg::TridiagOp op = sg::sl_discretize(profile, m, sg::Bc::neumann);
    json sweep = json::array();
    std::string csv = "rho,residual,residual2_abslog\n";
    for (double rho : cfg.at("rho_sweep").get<std::vector<double>>()) {
      sg::CutoffSpec spec(rho, r_outer, kind);
      sg::QuasiMode qm = sg::build_quasimode(profile, 0, m, k, spec);
      double r = sg::residual(op, qm);
      double r2l = r * r * std::abs(std::log(rho));
      sweep.push_back({{"rho", rho}, {"residual", r}, {"residual2_abslog", r2l}});
      csv += sg::fmt17(rho) + "," + sg::fmt17(r) + "," + sg::fmt17(r2l) + "\n";
    }
    rep["scaling_sweep"] = sweep;
    sg::write_file(c.out_dir + "/" + prefix + "_scaling.csv", csv);
  }

  if (cfg.contains("chain")) {
    sg::ChainConfig chain = sg::chain_config_from_json(cfg.at("chain"));
    sg::Profile profile = sg::assemble_chain(chain);
    sg::TridiagOp op = sg::sl_discretize(profile, m, profile.periodic ? sg::Bc::periodic : sg::Bc::neumann);
    double rho = cfg.contains("rho_sweep") ? cfg.at("rho_sweep").get<std::vector<double>>().front()
                                           : 0.08;
    sg::CutoffSpec spec(rho, r_outer, kind);
    if (cfg.contains("family_blocks")) {
      std::vector<sg::QuasiMode> family;
      for (int b : cfg.at("family_blocks").get<std::vector<int>>())
        family.push_back(sg::build_quasimode(profile, b, m, k, spec));
      sg::DonnellyReport dr = sg::donnelly_report(op, family, lambda, cfg.value("eps0", 0.2));
      rep["donnelly"] = {{"lambda", dr.lambda},
                         {"eps0", dr.eps0},
                         {"count", dr.count},
                         {"max_residual", dr.max_residual},
                         {"gram_min_eigenvalue", dr.gram_min_eigenvalue},
                         {"passes", dr.passes}};
      verdict_ok = dr.passes;
      if (cfg.value("dump_values", false)) {
        std::string csv = "i,s,u\n";
        for (int i = 0; i < profile.size(); ++i)
          csv += std::to_string(i) + "," + sg::fmt17(profile.cell_center(i)) + "," +
                 sg::fmt17(family.front().values[i]) + "\n";
        sg::write_file(c.out_dir + "/" + prefix + "_values.csv", csv);
      }
    } else {
      sg::QuasiMode qm = sg::build_quasimode(profile, cfg.value("block_index", 0), m, k, spec);
      rep["chain_residual"] = sg::residual(op, qm);
    }
  }
  j["report"] = rep;
  write_report(c, prefix, j);
  return verdict_ok ? 0 : 2;
}

int run_scaling(const Common& c) {
  json cfg = sg::load_json_file(resolve_config(c.config_path));
  sg::require_keys(cfg, {"eps_sweep", "h_rule_divisor", "m_max", "min_exponent", "output_prefix"},
                   "scaling");
  auto sweep = cfg.at("eps_sweep").get<std::vector<double>>();
  double div = cfg.value("h_rule_divisor", 20.0);
  int m_max = cfg.value("m_max", 3);
  double min_p = cfg.value("min_exponent", 1.5);
  std::string prefix = cfg.value("output_prefix", "scaling");

  std::vector<double> lam1(sweep.size());
  sg::parallel_for(sweep.size(), c.workers, [&](std::size_t i) {
    sg::ChainConfig chain{1, sweep[i], sweep[i] / div, true, 0};
    sg::Profile profile = sg::assemble_chain(chain);
    lam1[i] = sg::lambda1_neck(profile, m_max);
  });
  // log-log least squares for lambda1 ~ eps^-p
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    double x = std::log(sweep[i]), y = std::log(lam1[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double n = static_cast<double>(sweep.size());
  double p = -(n * sxy - sx * sy) / (n * sxx - sx * sx);

  std::string csv = "eps,lambda1_neck\n";
  json rows = json::array();
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    rows.push_back({{"eps", sweep[i]}, {"lambda1_neck", lam1[i]}});
    csv += sg::fmt17(sweep[i]) + "," + sg::fmt17(lam1[i]) + "\n";
  }
  json j = envelope("scaling", cfg);
  j["report"] = {{"sweep", rows}, {"fitted_exponent", p}, {"min_exponent", min_p},
                 {"pass", p >= min_p}};
  write_report(c, prefix, j);
  sg::write_file(c.out_dir + "/" + prefix + ".csv", csv);
  return p >= min_p ? 0 : 2;
}

int run_classcheck(const Common& c) {
  json cfg = sg::load_json_file(resolve_config(c.config_path));
  sg::require_keys(cfg,
                   {"chain", "rho_bar", "delta_bar", "Lambda", "m_max", "output_prefix",
                    "emit_operator_triplets"},
                   "classcheck");
  sg::ChainConfig chain = sg::chain_config_from_json(cfg.at("chain"));
  sg::ClassParams params(cfg.value("rho_bar", 0.2), cfg.value("delta_bar", 1e-3),
                         cfg.value("Lambda", 10.0));
  sg::Profile profile = sg::assemble_chain(chain);
  sg::MembershipReport rep = sg::class_report(profile, params, cfg.value("m_max", 3));
  std::string prefix = cfg.value("output_prefix", "classcheck");
  json j = envelope("classcheck", cfg);
  j["report"] = {{"rho_measured", rep.rho_measured},
                 {"delta_measured", rep.delta_measured},
                 {"lambda1_neck", rep.lambda1_neck == std::numeric_limits<double>::infinity()
                                      ? json("inf")
                                      : json(rep.lambda1_neck)},
                 {"passes", rep.passes},
                 {"in_class", rep.in_class()}};
  j["profile"] = sg::profile_json(profile);
  write_report(c, prefix, j);
  sg::write_file(c.out_dir + "/" + prefix + "_profile.csv", sg::profile_csv(profile));
  if (cfg.value("emit_operator_triplets", false)) {
    sg::TridiagOp op = sg::sl_discretize(profile, 0, profile.periodic ? sg::Bc::periodic : sg::Bc::neumann);
    sg::write_file(c.out_dir + "/" + prefix + "_m0_operator.txt", sg::triplets_text(op));
  }
  return rep.in_class() ? 0 : 2;
}

int run_cover(const Common& c) {
  json cfg = sg::load_json_file(resolve_config(c.config_path));
  sg::require_keys(cfg,
                   {"block_size", "block_kind", "coupling", "lengths", "interval_halfwidth",
                    "output_prefix"},
                   "cover");
  sg::BlockKind kind = cfg.value("block_kind", std::string("cycle")) == "cycle"
                           ? sg::BlockKind::cycle
                           : sg::BlockKind::discrete_sphere;
  sg::CoveringGapReport rep = sg::covering_gap_experiment(
      cfg.value("block_size", 6), kind, cfg.value("coupling", 0.01),
      cfg.at("lengths").get<std::vector<int>>(), cfg.value("interval_halfwidth", 0.2));
  json j = envelope("cover", cfg);
  j["report"] = sg::covering_json(rep);
  std::string prefix = cfg.value("output_prefix", "cover");
  write_report(c, prefix, j);
  sg::write_file(c.out_dir + "/" + prefix + "_counts.csv",
                 sg::counts_csv(rep.lengths, rep.intervals, rep.counts));
  bool ok = rep.neck_lift_ok;
  for (const auto& v : rep.verdicts) ok = ok && v.pass;
  return ok ? 0 : 2;
}

int run_sphere_verify(const Common& c, double h, int k_max, int m_max) {
  sg::Profile profile = sg::sphere_profile(h);
  double max_err = 0.0;
  std::printf("m  k  computed            exact   error\n");
  for (int m = 0; m <= m_max; ++m) {
    sg::TridiagOp op = sg::sl_discretize(profile, m, sg::Bc::neumann);
    sg::EigenRequest req;
    req.a = -0.5;
    req.b = static_cast<double>(k_max) * (k_max + 1) + 0.5;
    req.tol = 1e-9;
    auto ev = sg::eigs_in_interval(op, req);
    int idx = 0;
    for (int k = std::max(m, 0); k <= k_max && idx < static_cast<int>(ev.size()); ++k, ++idx) {
      double exact = static_cast<double>(k) * (k + 1);
      double err = std::abs(ev[idx] - exact);
      max_err = std::max(max_err, err);
      std::printf("%d  %d  %.12f  %6.1f  %.3e\n", m, k, ev[idx], exact, err);
    }
  }
  std::printf("max error: %.6e (h = %g)\n", max_err, h);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"specgap: desk-scale spectral gap laboratory for neck/core manifolds"};
  app.require_subcommand(1);

  Common common;
  double sv_h = 1e-3;
  int sv_kmax = 4, sv_mmax = 3;

  auto add_common = [&](CLI::App* sub, bool needs_config = true) {
    if (needs_config)
      sub->add_option("--config", common.config_path, "JSON config file")->required();
    sub->add_option("--out-dir", common.out_dir, "output directory");
    sub->add_option("--workers", common.workers, "worker threads (output is worker-count independent)");
  };

  add_common(app.add_subcommand("bands", "Floquet band structure of a periodic chain"));
  add_common(app.add_subcommand("gaps", "gap opening across an eps sweep"));
  add_common(app.add_subcommand("scan", "eigenvalue-count truncation scan on capped chains"));
  add_common(app.add_subcommand("quasimode", "cutoff quasimodes: residual scaling and Donnelly families"));
  add_common(app.add_subcommand("scaling", "neck Dirichlet eigenvalue scaling in eps"));
  add_common(app.add_subcommand("classcheck", "class membership conditions (1)-(4)"));
  add_common(app.add_subcommand("cover", "covering block-graph gap experiment"));
  auto* sv = app.add_subcommand("sphere-verify", "discrete sphere eigenvalues against k(k+1)");
  sv->add_option("--grid-step", sv_h, "grid step h");
  sv->add_option("--k-max", sv_kmax, "highest degree");
  sv->add_option("--modes", sv_mmax, "highest angular mode");
  add_common(sv, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("bands")) return run_bands(common);
    if (app.got_subcommand("gaps")) return run_gaps(common);
    if (app.got_subcommand("scan")) return run_scan(common);
    if (app.got_subcommand("quasimode")) return run_quasimode(common);
    if (app.got_subcommand("scaling")) return run_scaling(common);
    if (app.got_subcommand("classcheck")) return run_classcheck(common);
    if (app.got_subcommand("cover")) return run_cover(common);
    if (app.got_subcommand("sphere-verify")) return run_sphere_verify(common, sv_h, sv_kmax, sv_mmax);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
