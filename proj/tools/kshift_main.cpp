#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "kshift/json_io.hpp"
#include "kshift/verify.hpp"

namespace fs = std::filesystem;
using namespace kshift;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir = "out";
  long horizon_override = 0;
  int threads = 1;
  bool force = false;
};

RunConfig load_config(const CommonOpts& o) {
  if (o.config_path.empty()) return RunConfig::from_string("");
  return RunConfig::from_file(o.config_path);
}

Params effective_params(const RunConfig& cfg, const CommonOpts& o) {
  Params p = cfg.params();
  if (o.threads > 1) p.threads = o.threads;
  return p;
}

long effective_horizon(const RunConfig& cfg, const CommonOpts& o) {
  return o.horizon_override > 0 ? o.horizon_override : cfg.horizon();
}

std::string pattern_text(const std::string& p) {
  if (p == "=") return "every frequently hypercyclic shift is chaotic";
  if (p == "!=") return "exists a frequently hypercyclic shift that is not chaotic";
  if (p == "x") return "no hypercyclic weighted shifts";
  return "undetermined at this horizon";
}

int cmd_classify(const CommonOpts& o) {
  const RunConfig cfg = load_config(o);
  const Params p = effective_params(cfg, o);
  const long horizon = effective_horizon(cfg, o);
  const SpaceDesc desc = cfg.space_desc();
  const SpaceSpec space = desc.build(std::min<long>(horizon, 10000));

  json rep = json::object();
  rep["space"] = json{{"builtin", desc.builtin},
                      {"kind", to_string(space.kind())},
                      {"describe", space.describe()}};
  rep["horizon"] = horizon;

  bool any_determinate = false;
  std::ostringstream summary;
  summary << "space: " << space.describe() << "\n";

  if (space.kind() != SpaceKind::GenericKothe) {
    const Classification c = classify_power_series(space, horizon, p);
    rep["classification"] = to_json(c);
    any_determinate = !c.fhc_implies_chaos.undetermined() ||
                      !c.exists_fhc_not_chaotic.undetermined() ||
                      !c.exists_hc.undetermined();
    summary << "pattern: " << c.pattern << "  (" << pattern_text(c.pattern) << ")\n";
    if (c.pattern == "=")
      summary << "FHC => chaos (route: " << c.fhc_implies_chaos.route << ")\n";
    if (c.pattern == "!=")
      summary << "exists FHC non-chaotic (route: " << c.exists_fhc_not_chaotic.route
              << ")\n";
    if (c.pattern == "x")
      summary << "no hypercyclic weighted shift (route: " << c.exists_hc.route << ")\n";
    for (const auto& s : c.open_notes) summary << "open: " << s << "\n";
    summary << "exists_hc: " << to_string(c.exists_hc.outcome)
            << " | exists_chaotic: " << to_string(c.exists_chaotic.outcome) << "\n";
  } else {
    const Verdict hc = exists_hc_shift(space, horizon, p);
    const Verdict ch = exists_chaotic_shift(space, horizon, p);
    const Verdict n = check_condition_N(space, horizon, p);
    const Verdict bc = check_condition_BC(space, horizon, p);
    const Verdict reg = check_regularity_bound(space, horizon, p);
    rep["exists_hypercyclic"] = to_json(hc);
    rep["exists_chaotic"] = to_json(ch);
    rep["condition_summable"] = to_json(n);
    rep["condition_bounded_complete"] = to_json(bc);
    rep["condition_regularity"] = to_json(reg);
    any_determinate = !hc.undetermined() || !ch.undetermined();
    if (hc.fails()) summary << "no hypercyclic weighted shift (route: " << hc.route << ")\n";
    summary << "exists_hc: " << to_string(hc.outcome)
            << " | exists_chaotic: " << to_string(ch.outcome) << "\n";
  }

  rep["config"] = config_json(cfg);
  rep["meta"] = meta_block("classification");
  write_json((fs::path(o.out_dir) / "classification.json").string(), rep);
  std::ofstream txt(fs::path(o.out_dir) / "classification.txt");
  txt << summary.str();
  std::cout << summary.str();
  std::cout << "report: " << (fs::path(o.out_dir) / "classification.json").string()
            << "\n";
  return any_determinate ? 0 : 2;
}

int cmd_construct(const CommonOpts& o) {
  const RunConfig cfg = load_config(o);
  const Params p = effective_params(cfg, o);
  const long horizon = effective_horizon(cfg, o);
  const SpaceDesc desc = cfg.space_desc();
  const SpaceSpec space = desc.build(std::min<long>(horizon, 10000));

  if (space.kind() != SpaceKind::GenericKothe && !o.force) {
    const Classification c = classify_power_series(space, horizon, p);
    if (c.pattern == "x") {
      std::cerr << "refusal: classification reports no hypercyclic shifts ("
                << c.exists_hc.route << "); use --force to override\n";
      return 1;
    }
  }

  const long r_max = cfg.get_long("construct", "r_max", 3);
  BlockParams bp;
  bp.r_max = r_max;
  bp.density_floor = cfg.get_double("construct", "density_floor", bp.density_floor);
  const Blocks blocks = build_blocks(r_max, horizon, bp);

  const std::string family_name = cfg.get("construct", "b_family", "auto");
  BFamily family = BFamily::Auto;
  if (family_name == "bilinear-powers") family = BFamily::BilinearPowers;
  else if (family_name == "alpha-partial-sums") family = BFamily::AlphaPartialSums;
  else if (family_name == "alpha-power-finite") family = BFamily::AlphaPowerFinite;
  else if (family_name != "auto") throw ConfigError("unknown b_family " + family_name);
  const real eps = static_cast<real>(cfg.get_double("construct", "eps", 0.5));
  const BMatrix b = build_B(space, family, eps);

  try {
    const FhcConstruction fhc = build_fhc_nonchaotic_weight(space, b, blocks, horizon, p);
    const FhcConditionsReport cond =
        check_fhc_conditions(space, fhc.w, blocks, horizon, p, 1.0);
    const json artifact = construction_artifact(cfg, desc, blocks, b, eps, fhc, cond);
    const std::string path = (fs::path(o.out_dir) / "construction.json").string();
    write_json(path, artifact);
    std::cout << "blocks: " << blocks.verification().detail << "\n"
              << "operator: " << to_string(fhc.op.outcome)
              << " | not-chaotic: " << to_string(fhc.not_chaotic.outcome)
              << " | orbit conditions: " << to_string(cond.overall) << "\n"
              << "artifact: " << path << "\n";
    return 0;
  } catch (const PreconditionError& e) {
    std::cerr << "refusal: clause " << e.failing_clause << " — " << e.what() << "\n";
    return 1;
  }
}

int cmd_simulate(const CommonOpts& o) {
  const RunConfig cfg = load_config(o);
  const Params p = effective_params(cfg, o);
  const std::string artifact_path = cfg.get("simulate", "artifact");

  SpaceSpec space = builtin_space("entire").build(1000);
  WeightSeq w = WeightSeq::constant(2.0);
  Blocks blocks;
  long horizon = effective_horizon(cfg, o);

  if (!artifact_path.empty()) {
    if (!fs::exists(artifact_path)) {
      std::cerr << "error: artifact not found: " << artifact_path << "\n";
      return 1;
    }
    const LoadedArtifact art = load_construction_artifact(artifact_path, p);
    space = art.space.build(std::min<long>(art.horizon, 10000));
    BFamily family = BFamily::Auto;
    if (art.b_family == "bilinear-powers") family = BFamily::BilinearPowers;
    else if (art.b_family == "alpha-partial-sums") family = BFamily::AlphaPartialSums;
    else if (art.b_family == "alpha-power-finite") family = BFamily::AlphaPowerFinite;
    const BMatrix b = build_B(space, family, art.eps);
    blocks = art.blocks;
    const real pe = space.p_eff();
    auto blocks_copy = std::make_shared<Blocks>(blocks);
    w = WeightSeq::from_ln_v(
        [blocks_copy, b, pe](long n) {
          if (n == 0) return 0.0L;
          const long k = blocks_copy->block_index(n);
          return -b.ln_entry(n - blocks_copy->cut(k), n) / pe;
        },
        "block-profile weight (" + b.family + ")");
    horizon = std::min<long>(horizon, art.horizon);
  } else {
    const SpaceDesc desc = cfg.space_desc();
    space = desc.build(std::min<long>(horizon, 10000));
    w = cfg.weight_desc().build();
    BlockParams bp;
    bp.r_max = cfg.get_long("construct", "r_max", 3);
    blocks = build_blocks(bp.r_max, horizon, bp);
  }

  const long target_index = cfg.get_long("simulate", "target_index", 0);
  const FiniteVector target = FiniteVector::unit(target_index);
  std::vector<FiniteVector> targets(static_cast<size_t>(blocks.r_max()), target);
  const LazyVector x = build_fhc_vector(space, w, blocks, targets);
  const double delta = cfg.get_double("simulate", "delta", 0.1);
  const long m = cfg.get_long("simulate", "seminorm", 1);
  const long iterates = cfg.get_long("simulate", "iterates", horizon);
  const long guard = cfg.get_long("simulate", "guard", -1);

  const HitStats stats =
      hitting_density(space, w, x, target, m, delta, iterates, &blocks, guard, p.threads);

  fs::create_directories(o.out_dir);
  const std::string csv_path = (fs::path(o.out_dir) / "orbit.csv").string();
  {
    std::ofstream csv(csv_path);
    csv << "n,hit,log_seminorm,cum_density\n";
    for (const auto& r : stats.rows) {
      csv << r.n << "," << (r.hit ? 1 : 0) << ",";
      if (std::isinf(r.log_seminorm) && r.log_seminorm < 0) csv << "-inf";
      else csv << r.log_seminorm;
      csv << "," << r.cum_density << "\n";
    }
  }

  const bool pass = stats.density >= 0.9 * stats.blocks_density;
  json summary{{"kind", "simulation"},
               {"hits", stats.hits},
               {"iterates", iterates},
               {"hit_density", stats.density},
               {"blocks_density", stats.blocks_density},
               {"delta", delta},
               {"seminorm", m},
               {"pass_090_blocks_density", pass},
               {"csv", csv_path},
               {"config", config_json(cfg)},
               {"meta", meta_block("simulation")}};
  write_json((fs::path(o.out_dir) / "simulation.json").string(), summary);
  std::cout << "hit density " << stats.density << " over " << iterates + 1
            << " iterates (blocks density " << stats.blocks_density << ")\n"
            << "hit density >= 0.9 x blocks density: " << (pass ? "PASS" : "FAIL")
            << "\ncsv: " << csv_path << "\n";
  return 0;
}

int cmd_verify(const CommonOpts& o) {
  const RunConfig cfg = load_config(o);
  const long horizon = o.horizon_override > 0 ? o.horizon_override
                                              : cfg.get_long("run", "horizon", 20000);
  const auto results = run_verification_suite(horizon, o.threads);
  json checks = json::array();
  long failures = 0;
  for (const auto& r : results) {
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name
              << (r.detail.empty() ? "" : "  (" + r.detail + ")") << "\n";
    checks.push_back(json{{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    failures += !r.pass;
  }
  json rep{{"kind", "verification"},
           {"failures", failures},
           {"checks", checks},
           {"meta", meta_block("verification")}};
  write_json((fs::path(o.out_dir) / "verification.json").string(), rep);
  std::cout << (failures ? "FAILURES: " + std::to_string(failures) : "all checks passed")
            << "\n";
  return failures ? 1 : 0;
}

int cmd_report(const CommonOpts& o, const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open " << path << "\n";
    return 1;
  }
  const json j = json::parse(in);
  const std::string kind = j.value("kind", j.contains("classification")
                                               ? "classification"
                                               : "unknown");
  std::cout << "report kind: " << kind << "\n";
  if (j.contains("classification")) {
    const auto& c = j["classification"];
    std::cout << "pattern: " << c.value("pattern", "?") << "\n";
    for (const char* key : {"exists_hypercyclic", "exists_chaotic", "fhc_implies_chaos",
                            "exists_fhc_not_chaotic"})
      if (c.contains(key))
        std::cout << "  " << key << ": " << c[key].value("outcome", "?") << "  ["
                  << c[key].value("route", "") << "]\n";
  } else if (kind == "construction") {
    std::cout << "blocks verification: " << j["blocks"]["verification"].dump() << "\n";
    std::cout << "operator: " << j["verdicts"]["operator"].value("outcome", "?")
              << ", not chaotic: " << j["verdicts"]["not_chaotic"].value("outcome", "?")
              << ", orbit conditions: "
              << j["verdicts"]["fhc_conditions"].value("overall", "?") << "\n";
  } else if (kind == "simulation") {
    std::cout << "hit density: " << j.value("hit_density", 0.0)
              << ", blocks density: " << j.value("blocks_density", 0.0) << "\n";
  } else {
    std::cout << j.dump(2) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weighted backward shift dynamics on Köthe and power series spaces"};
  app.require_subcommand(1);
  CommonOpts o;
  app.add_option("--config", o.config_path, "configuration file");
  app.add_option("--out", o.out_dir, "output directory")->capture_default_str();
  app.add_option("--horizon", o.horizon_override, "override the run horizon");
  app.add_option("--threads", o.threads, "worker thread cap")->capture_default_str();
  app.add_flag("--force", o.force, "override refusal gates");

  auto* classify = app.add_subcommand("classify", "classify a space");
  auto* construct = app.add_subcommand(
      "construct", "build the non-chaotic frequently hypercyclic weight");
  auto* simulate = app.add_subcommand("simulate", "orbit hitting-density run");
  auto* verify = app.add_subcommand("verify", "run the cross-module invariant suite");
  auto* report = app.add_subcommand("report", "render a JSON report");
  std::string report_path;
  report->add_option("path", report_path, "report or artifact JSON")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(classify)) return cmd_classify(o);
    if (app.got_subcommand(construct)) return cmd_construct(o);
    if (app.got_subcommand(simulate)) return cmd_simulate(o);
    if (app.got_subcommand(verify)) return cmd_verify(o);
    if (app.got_subcommand(report)) return cmd_report(o, report_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
