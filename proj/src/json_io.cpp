#include "kshift/json_io.hpp"

#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>

namespace kshift {

double capped(real v) {
  constexpr double lim = 1e308;
  if (std::isnan(static_cast<double>(v))) return 0.0;
  if (v > lim) return lim;
  if (v < -lim) return -lim;
  return static_cast<double>(v);
}

json to_json(const Verdict& v) {
  json w = json::object();
  for (const auto& [k, x] : v.witness) w[k] = capped(x);
  return json{{"outcome", to_string(v.outcome)},
              {"route", v.route},
              {"horizon", v.horizon},
              {"witness", w},
              {"note", v.note}};
}

json to_json(const RhoReport& r) {
  json lags = json::array();
  for (const auto& l : r.lags)
    lags.push_back(json{{"lag", l.lag},
                        {"liminf_est", capped(std::exp(l.ln_lo))},
                        {"limsup_est", capped(std::exp(l.ln_hi))},
                        {"liminf_ln", capped(l.ln_lo)},
                        {"limsup_ln", capped(l.ln_hi)}});
  return json{{"eta", r.eta}, {"horizon", r.horizon}, {"lags", lags}};
}

json to_json(const Classification& c) {
  json open = json::array();
  for (const auto& s : c.open_notes) open.push_back(s);
  return json{{"pattern", c.pattern},
              {"exists_hypercyclic", to_json(c.exists_hc)},
              {"exists_chaotic", to_json(c.exists_chaotic)},
              {"fhc_implies_chaos", to_json(c.fhc_implies_chaos)},
              {"exists_fhc_not_chaotic", to_json(c.exists_fhc_not_chaotic)},
              {"rho", to_json(c.rho)},
              {"open", open}};
}

json to_json(const BlocksVerification& v) {
  return json{{"property_a_violations", v.property_a_violations},
              {"property_b_violations", v.property_b_violations},
              {"overlap_violations", v.overlap_violations},
              {"lower_density_est", v.lower_density_est},
              {"pruned", v.pruned},
              {"digest", v.digest},
              {"ok", v.ok}};
}

json to_json(const ConditionBReport& r) {
  return json{{"alpha", to_json(r.alpha)},
              {"beta", to_json(r.beta)},
              {"gamma", to_json(r.gamma)},
              {"gamma_tilde", to_json(r.gamma_tilde)},
              {"admissible", r.admissible()}};
}

json to_json(const FhcConditionsReport& r) {
  json ci = json::array();
  for (const auto& v : r.cond_i) ci.push_back(to_json(v));
  json cii = json::array();
  for (const auto& row : r.cond_ii) {
    json jrow = json::array();
    for (const auto& v : row) jrow.push_back(to_json(v));
    cii.push_back(jrow);
  }
  return json{{"overall", to_string(r.overall)},
              {"c_const", r.c_const},
              {"horizon", r.horizon},
              {"condition_i", ci},
              {"condition_ii", cii}};
}

json config_json(const RunConfig& cfg) {
  json out = json::object();
  for (const auto& [section, kv] : cfg.raw()) {
    json s = json::object();
    for (const auto& [k, v] : kv) s[k] = v;
    out[section] = s;
  }
  return out;
}

namespace {

json space_desc_json(const SpaceDesc& d) {
  return json{{"builtin", d.builtin},   {"kind", d.kind},
              {"order", capped(d.order)}, {"alpha", d.alpha_expr},
              {"entry", d.entry_expr},  {"type", capped(d.type_r)}};
}

SpaceDesc space_desc_from_json(const json& j) {
  SpaceDesc d;
  d.builtin = j.value("builtin", "");
  d.kind = j.value("kind", "generic");
  d.order = static_cast<real>(j.value("order", 1.0));
  d.alpha_expr = j.value("alpha", "");
  d.entry_expr = j.value("entry", "");
  d.type_r = static_cast<real>(j.value("type", 0.0));
  return d;
}

}  // namespace

json construction_artifact(const RunConfig& cfg, const SpaceDesc& space,
                           const Blocks& blocks, const BMatrix& b, real eps,
                           const FhcConstruction& fhc,
                           const FhcConditionsReport& fhc_conditions) {
  json sets = json::array();
  for (const auto& s : blocks.sets()) sets.push_back(s);
  std::vector<long> cuts_in;
  for (long c : blocks.cuts())
    if (c <= 8 * blocks.horizon()) cuts_in.push_back(c);

  // short reproducibility prefix of the weight profile
  json lnv = json::array();
  for (long n = 0; n <= std::min<long>(blocks.horizon(), 512); ++n)
    lnv.push_back(capped(fhc.w.ln_v(n)));

  return json{{"kind", "construction"},
              {"space", space_desc_json(space)},
              {"b_family", b.family},
              {"eps", capped(eps)},
              {"horizon", blocks.horizon()},
              {"blocks",
               json{{"r_max", blocks.r_max()},
                    {"cuts", cuts_in},
                    {"sets", sets},
                    {"verification", to_json(blocks.verification())}}},
              {"weight",
               json{{"description", fhc.w.description()}, {"ln_v_prefix", lnv}}},
              {"verdicts",
               json{{"operator", to_json(fhc.op)},
                    {"not_chaotic", to_json(fhc.not_chaotic)},
                    {"condition_b", to_json(fhc.b_report)},
                    {"fhc_conditions", to_json(fhc_conditions)}}},
              {"config", config_json(cfg)},
              {"meta", meta_block("construction")}};
}

LoadedArtifact load_construction_artifact(const std::string& path, const Params& p) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open artifact: " + path);
  json j = json::parse(in);
  if (j.value("kind", "") != "construction")
    throw ConfigError("not a construction artifact: " + path);
  LoadedArtifact out{space_desc_from_json(j.at("space")),
                     j.value("b_family", "alpha-partial-sums"),
                     static_cast<real>(j.value("eps", 0.5)),
                     Blocks{},
                     j.value("horizon", 0L)};
  std::vector<long> cuts = j.at("blocks").at("cuts").get<std::vector<long>>();
  std::vector<std::vector<long>> sets =
      j.at("blocks").at("sets").get<std::vector<std::vector<long>>>();
  BlockParams bp;
  bp.r_max = j.at("blocks").value("r_max", 3L);
  bp.density_floor = 0.0;  // densities were checked when the artifact was written
  (void)p;
  out.blocks = blocks_from_parts(std::move(cuts), std::move(sets), out.horizon, bp);
  return out;
}

void write_json(const std::string& path, const json& j) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << j.dump(2) << "\n";
}

json meta_block(const std::string& kind) {
  return json{{"kind", kind},
              {"tool", "kshift 0.1.0"},
              {"generated_unix", static_cast<long>(std::time(nullptr))}};
}

}  // namespace kshift
