#pragma once

#include <cstdio>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "specgap/bands.hpp"
#include "specgap/block_graph.hpp"
#include "specgap/inequalities.hpp"
#include "specgap/operators.hpp"
#include "specgap/profile.hpp"
#include "specgap/truncation.hpp"
#include "specgap/version.hpp"

namespace specgap {

using nlohmann::json;

// 17 significant digits: enough for exact double round-trips
inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
}

// ---- CSV ----

inline std::string profile_csv(const Profile& p) {
  std::string out = "s,f,piece\n";
  for (int i = 0; i < p.size(); ++i) {
    out += fmt17(p.cell_center(i));
    out += ',';
    out += fmt17(p.f[i]);
    out += ',';
    out += piece_kind_name(p.pieces[p.piece_of_cell[i]].kind);
    out += '\n';
  }
  return out;
}

inline std::string bands_csv(const GapReport& rep) {
  std::string out = "m,lo,hi\n";
  for (const auto& b : rep.per_mode_bands) {
    out += std::to_string(b.mode);
    out += ',';
    out += fmt17(b.lo);
    out += ',';
    out += fmt17(b.hi);
    out += '\n';
  }
  return out;
}

inline std::string discriminant_csv(const std::vector<std::tuple<double, int, double>>& rows) {
  std::string out = "lambda,m,D\n";
  for (const auto& [lam, m, d] : rows) {
    out += fmt17(lam);
    out += ',';
    out += std::to_string(m);
    out += ',';
    out += fmt17(d);
    out += '\n';
  }
  return out;
}

inline std::string counts_csv(const std::vector<int>& lengths,
                              const std::vector<Interval>& intervals,
                              const std::vector<std::vector<long long>>& counts) {
  std::string out = "length";
  for (const auto& iv : intervals)
    out += ",count[" + fmt17(iv.first) + "," + fmt17(iv.second) + ")";
  out += '\n';
  for (std::size_t li = 0; li < lengths.size(); ++li) {
    out += std::to_string(lengths[li]);
    for (auto c : counts[li]) out += ',' + std::to_string(c);
    out += '\n';
  }
  return out;
}

// coordinate-triplet export, one "i j value" per line, upper triangle
inline std::string triplets_text(const TridiagOp& op) {
  std::string out;
  for (int i = 0; i < op.size(); ++i)
    out += std::to_string(i) + " " + std::to_string(i) + " " + fmt17(op.diag[i]) + "\n";
  for (int i = 0; i + 1 < op.size(); ++i)
    out += std::to_string(i) + " " + std::to_string(i + 1) + " " + fmt17(op.offdiag[i]) + "\n";
  if (op.cyclic)
    out += "0 " + std::to_string(op.size() - 1) + " " + fmt17(op.corner) + "\n";
  return out;
}

inline std::string triplets_text(const BlockGraphOp& op) {
  std::string out;
  for (const auto& e : op.entries)
    out += std::to_string(e.i) + " " + std::to_string(e.j) + " " + fmt17(e.value) + "\n";
  return out;
}

// ---- JSON ----

inline json intervals_json(const std::vector<Interval>& ivs) {
  json a = json::array();
  for (const auto& iv : ivs) a.push_back({iv.first, iv.second});
  return a;
}

inline json verdicts_json(const std::vector<Verdict>& vs) {
  json a = json::array();
  for (const auto& v : vs) a.push_back({{"subject", v.subject}, {"pass", v.pass}, {"detail", v.detail}});
  return a;
}

inline json gap_report_json(const GapReport& rep) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["method"] = rep.method;
  j["lambda_max"] = rep.lambda_max;
  j["mode_cutoff"] = rep.mode_cutoff;
  j["grid"] = rep.grid;
  j["refine_tol"] = rep.refine_tol;
  j["rk_step"] = rep.rk_step;
  json pm = json::array();
  for (const auto& b : rep.per_mode_bands) pm.push_back({{"m", b.mode}, {"lo", b.lo}, {"hi", b.hi}});
  j["per_mode_bands"] = pm;
  j["bands"] = intervals_json(rep.bands);
  j["gaps"] = intervals_json(rep.gaps);
  json ms = json::array();
  for (const auto& lvl : rep.model_spectrum)
    ms.push_back({{"lambda", lvl.lambda}, {"multiplicity", lvl.multiplicity}});
  j["model_spectrum"] = ms;
  j["verdicts"] = verdicts_json(rep.verdicts);
  j["warning_possible_missed_band"] = rep.warning_possible_missed_band;
  return j;
}

inline json truncation_json(const TruncationResult& res) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["method"] = "truncation";
  j["lengths"] = res.lengths;
  j["intervals"] = intervals_json(res.intervals);
  j["counts"] = res.counts;
  j["counts_natural"] = res.counts_natural;
  j["counts_dirichlet"] = res.counts_dirichlet;
  j["slopes_per_block"] = res.slopes;
  j["classification"] = res.classification;
  j["mode_cutoff"] = res.mode_cutoff;
  return j;
}

inline json covering_json(const CoveringGapReport& rep) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["method"] = "covering_truncation";
  j["block_size"] = rep.block_size;
  j["block_kind"] = rep.kind == BlockKind::cycle ? "cycle" : "discrete_sphere";
  j["coupling"] = rep.coupling;
  j["lengths"] = rep.lengths;
  j["block_spectrum"] = rep.block_spectrum;
  j["intervals"] = intervals_json(rep.intervals);
  j["counts"] = rep.counts;
  j["slopes_per_block"] = rep.slopes;
  j["classification"] = rep.classification;
  j["max_dist_to_block_spectrum"] = rep.max_dist_to_block_spectrum;
  j["base_neck_lambda1"] = rep.base_neck_lambda1;
  j["min_lifted_neck_lambda1"] = rep.min_lifted_neck_lambda1;
  j["neck_lift_ok"] = rep.neck_lift_ok;
  j["verdicts"] = verdicts_json(rep.verdicts);
  return j;
}

inline json ineq_json(const IneqReport& rep) {
  return {{"inequality_id", rep.inequality_id}, {"samples", rep.samples},
          {"seed", rep.seed},                   {"empirical_c", rep.empirical_c},
          {"holds_all", rep.holds_all},         {"reference", rep.extra}};
}

// ---- config parsing ----

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  json j;
  in >> j;
  return j;
}

// strict: unknown keys are rejected so configs stay honest
inline void require_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& context) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw std::runtime_error("unknown config key '" + it.key() + "' in " + context);
}

inline ChainConfig chain_config_from_json(const json& j) {
  require_keys(j, {"blocks", "eps", "h", "periodic", "seed"}, "chain");
  ChainConfig cfg;
  cfg.blocks = j.value("blocks", 1);
  cfg.eps = j.value("eps", 0.1);
  cfg.h = j.value("h", cfg.eps / 10.0);
  cfg.periodic = j.value("periodic", true);
  cfg.seed = j.value("seed", 0ULL);
  return cfg;
}

inline json chain_config_json(const ChainConfig& cfg) {
  return {{"blocks", cfg.blocks}, {"eps", cfg.eps}, {"h", cfg.h},
          {"periodic", cfg.periodic}, {"seed", cfg.seed}};
}

// profile metadata: grid parameters plus the junction bookkeeping
inline json profile_json(const Profile& p) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["cells"] = p.size();
  j["h"] = p.h;
  j["length"] = p.length;
  j["periodic"] = p.periodic;
  j["blocks"] = p.blocks;
  j["junctions"] = p.junctions;
  if (p.eps) j["eps"] = *p.eps;
  if (p.f_match) j["f_match"] = *p.f_match;
  if (p.s_match) j["s_match"] = *p.s_match;
  return j;
}

}  // namespace specgap
