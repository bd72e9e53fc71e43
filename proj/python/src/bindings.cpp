#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kshift/classify.hpp"
#include "kshift/config.hpp"
#include "kshift/construct.hpp"
#include "kshift/density.hpp"
#include "kshift/orbit.hpp"
#include "kshift/seqdsl.hpp"
#include "kshift/verify.hpp"

namespace py = pybind11;
using namespace kshift;

namespace {

py::dict verdict_dict(const Verdict& v) {
  py::dict w;
  for (const auto& [k, x] : v.witness) w[py::str(k)] = static_cast<double>(x);
  py::dict out;
  out["outcome"] = to_string(v.outcome);
  out["route"] = v.route;
  out["horizon"] = v.horizon;
  out["witness"] = w;
  out["note"] = v.note;
  return out;
}

py::dict classification_dict(const Classification& c) {
  py::dict out;
  out["pattern"] = c.pattern;
  out["exists_hypercyclic"] = verdict_dict(c.exists_hc);
  out["exists_chaotic"] = verdict_dict(c.exists_chaotic);
  out["fhc_implies_chaos"] = verdict_dict(c.fhc_implies_chaos);
  out["exists_fhc_not_chaotic"] = verdict_dict(c.exists_fhc_not_chaotic);
  py::list lags;
  for (const auto& l : c.rho.lags) {
    py::dict d;
    d["lag"] = l.lag;
    d["liminf_ln"] = static_cast<double>(l.ln_lo);
    d["limsup_ln"] = static_cast<double>(l.ln_hi);
    lags.append(d);
  }
  out["rho_lags"] = lags;
  out["open"] = c.open_notes;
  return out;
}

SpaceSpec space_from_kwargs(const std::string& builtin, const std::string& kind,
                            double order, const std::string& alpha,
                            const std::string& entry, double type_r, long probe) {
  SpaceDesc d;
  if (!builtin.empty()) {
    d = builtin_space(builtin);
    if (order >= 0) d.order = static_cast<real>(order);
  } else {
    d.kind = kind;
    d.order = static_cast<real>(order < 0 ? 1 : order);
    d.alpha_expr = alpha;
    d.entry_expr = entry;
    d.type_r = static_cast<real>(type_r);
  }
  return d.build(probe);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Weighted backward shift dynamics on Köthe and power series spaces";

  py::register_exception<ValidationError>(m, "ValidationError");
  py::register_exception<ConfigError>(m, "KshiftConfigError");
  py::register_exception<PreconditionError>(m, "PreconditionError");
  py::register_exception<DomainError>(m, "KshiftDomainError");

  py::class_<SpaceSpec>(m, "Space")
      .def_property_readonly(
          "order", [](const SpaceSpec& s) { return static_cast<double>(s.order()); })
      .def_property_readonly(
          "kind", [](const SpaceSpec& s) { return std::string(to_string(s.kind())); })
      .def("describe", &SpaceSpec::describe)
      .def("ln_entry", [](const SpaceSpec& s, long mm, long n) {
        return static_cast<double>(s.ln_entry(mm, n));
      });

  m.def("space", &space_from_kwargs, py::arg("builtin") = "",
        py::arg("kind") = "generic", py::arg("order") = -1.0, py::arg("alpha") = "",
        py::arg("entry") = "", py::arg("type_r") = 0.0, py::arg("probe") = 10000,
        "Build a space from a builtin name or from DSL expressions");

  m.def("builtin_names", &builtin_space_names);

  py::class_<WeightSeq>(m, "Weight")
      .def_static("constant", &WeightSeq::constant)
      .def_static("geometric", &WeightSeq::geometric)
      .def_static("from_expr",
                  [](const std::string& text) {
                    WeightDesc d;
                    d.kind = "expr";
                    d.expr = text;
                    return d.build();
                  })
      .def_static("from_values",
                  [](const std::vector<double>& w) { return WeightSeq::from_values(w); })
      .def("ln_w",
           [](const WeightSeq& w, long n) { return static_cast<double>(w.ln_w(n)); })
      .def("ln_v",
           [](const WeightSeq& w, long n) { return static_cast<double>(w.ln_v(n)); })
      .def_property_readonly("description", &WeightSeq::description);

  py::class_<FiniteVector>(m, "FiniteVector")
      .def(py::init([](std::vector<long> idx, std::vector<double> val) {
             FiniteVector x{std::move(idx), std::move(val)};
             x.validate();
             return x;
           }),
           py::arg("idx"), py::arg("val"))
      .def_static("unit", &FiniteVector::unit)
      .def_readonly("idx", &FiniteVector::idx)
      .def_readonly("val", &FiniteVector::val);

  m.def("seminorm_ln", [](const SpaceSpec& s, const FiniteVector& x, long mm) {
    return static_cast<double>(seminorm(s, x, mm).ln());
  });

  m.def("apply_power", &apply_power);

  m.def("check_operator", [](const SpaceSpec& s, const WeightSeq& w, long horizon) {
    return verdict_dict(check_operator(s, w, horizon));
  });
  m.def("check_chaotic", [](const SpaceSpec& s, const WeightSeq& w, long horizon) {
    return verdict_dict(check_chaotic(s, w, horizon));
  });
  m.def("check_ufhc_necessary",
        [](const SpaceSpec& s, const WeightSeq& w, long horizon) {
          return verdict_dict(check_ufhc_necessary(s, w, horizon));
        });
  m.def("check_condition_N", [](const SpaceSpec& s, long horizon) {
    return verdict_dict(check_condition_N(s, horizon));
  });
  m.def("check_condition_BC", [](const SpaceSpec& s, long horizon) {
    return verdict_dict(check_condition_BC(s, horizon));
  });
  m.def("check_regularity_bound", [](const SpaceSpec& s, long horizon) {
    return verdict_dict(check_regularity_bound(s, horizon));
  });

  m.def("exists_hc_shift", [](const SpaceSpec& s, long horizon) {
    return verdict_dict(exists_hc_shift(s, horizon));
  });
  m.def("exists_chaotic_shift", [](const SpaceSpec& s, long horizon) {
    return verdict_dict(exists_chaotic_shift(s, horizon));
  });
  m.def("classify_power_series", [](const SpaceSpec& s, long horizon) {
    return classification_dict(classify_power_series(s, horizon));
  });
  m.def("check_transfer_witness", [](const SpaceSpec& s, const WeightSeq& v, long horizon) {
    const TransferWitnessReport rep = check_transfer_witness(s, v, horizon);
    py::dict out;
    out["premise"] = verdict_dict(rep.premise);
    out["conclusion"] = verdict_dict(rep.conclusion);
    return out;
  });
  m.def("check_transfer_property", [](const SpaceSpec& s, long horizon) {
    return verdict_dict(check_transfer_property(s, horizon));
  });

  // densities
  py::class_<IndexSet>(m, "IndexSet")
      .def(py::init([](std::function<bool(long)> f, std::string desc) {
             return IndexSet(std::move(f), std::move(desc));
           }),
           py::arg("member"), py::arg("description") = "predicate")
      .def_static("residue", &IndexSet::residue)
      .def_static("from_sorted",
                  [](std::vector<long> v) { return IndexSet::from_sorted(std::move(v)); })
      .def("contains", &IndexSet::contains)
      .def("prefix", &IndexSet::prefix)
      .def_property_readonly("description", &IndexSet::description);

  m.def("index_set_from_spec", &index_set_from_spec,
        "Index set from 'residue:r,q', 'list:a,b,c' or 'expr:<dsl in n>'");
  m.def("density_at", &density_at);
  m.def(
      "density_over_schedule",
      [](const IndexSet& a, long horizon) {
        Params p;
        const auto sched = p.schedule(horizon);
        const DensityEstimate est = density_over_schedule(a, sched);
        py::dict out;
        out["lower"] = est.lower;
        out["upper"] = est.upper;
        return out;
      },
      py::arg("set"), py::arg("horizon"));
  m.def("syndetic_gap", &syndetic_gap);
  m.def("correlation_density", &correlation_density);
  m.def(
      "boundedness_transfer_harness",
      [](const SpaceSpec& s, const IndexSet& a, const WeightSeq& v, long horizon) {
        Params p;
        const auto sched = p.schedule(horizon);
        const TransferReport rep = boundedness_transfer_harness(s, a, v, sched, horizon, p);
        py::dict out;
        out["y_bounded"] = rep.y_bounded;
        out["f_bounded"] = rep.f_bounded;
        out["consistent"] = rep.consistent;
        out["delta_est"] = rep.delta_est;
        out["note"] = rep.note;
        py::list rows;
        for (const auto& r : rep.rows) {
          py::dict d;
          d["N"] = r.N;
          d["M"] = r.M;
          d["y_seminorm"] = r.y_seminorm;
          d["f_seminorm"] = r.f_seminorm;
          rows.append(d);
        }
        out["rows"] = rows;
        return out;
      },
      py::arg("space"), py::arg("set"), py::arg("v"), py::arg("horizon"));
  m.def(
      "find_correlation_set",
      [](const IndexSet& a, double eps, long horizon, long k_max, int threads) {
        Params p;
        const auto sched = p.schedule(horizon);
        const auto f = find_correlation_set(a, eps, sched, k_max, threads);
        py::dict out;
        out["members"] = f.members;
        out["delta_est"] = f.delta_est;
        out["threshold"] = f.threshold;
        out["gap"] = f.gap.gap;
        out["gap_stabilized"] = f.gap.stabilized;
        return out;
      },
      py::arg("set"), py::arg("epsilon"), py::arg("horizon"), py::arg("k_max"),
      py::arg("threads") = 1);

  // construction
  py::class_<Blocks>(m, "Blocks")
      .def_property_readonly("cuts", &Blocks::cuts)
      .def_property_readonly("sets", &Blocks::sets)
      .def_property_readonly("r_max", &Blocks::r_max)
      .def_property_readonly("horizon", &Blocks::horizon)
      .def("member", &Blocks::member)
      .def("verification", [](const Blocks& b) {
        const auto& v = b.verification();
        py::dict out;
        out["ok"] = v.ok;
        out["property_a_violations"] = v.property_a_violations;
        out["property_b_violations"] = v.property_b_violations;
        out["overlap_violations"] = v.overlap_violations;
        out["lower_density_est"] = v.lower_density_est;
        out["pruned"] = v.pruned;
        out["digest"] = v.digest;
        return out;
      });

  m.def(
      "build_blocks", [](long r_max, long horizon) { return build_blocks(r_max, horizon); },
      py::arg("r_max"), py::arg("horizon"));

  py::class_<BMatrix>(m, "BMatrix")
      .def("ln_entry",
           [](const BMatrix& b, long mm, long n) {
             return static_cast<double>(b.ln_entry(mm, n));
           })
      .def_readonly("family", &BMatrix::family);

  py::enum_<BFamily>(m, "BFamily")
      .value("AUTO", BFamily::Auto)
      .value("BILINEAR_POWERS", BFamily::BilinearPowers)
      .value("ALPHA_PARTIAL_SUMS", BFamily::AlphaPartialSums)
      .value("ALPHA_POWER_FINITE", BFamily::AlphaPowerFinite);

  m.def(
      "build_b_matrix",
      [](const SpaceSpec& s, BFamily family, double eps) {
        return build_B(s, family, static_cast<real>(eps));
      },
      py::arg("space"), py::arg("family") = BFamily::Auto, py::arg("eps") = 0.5);

  m.def("check_condition_b", [](const SpaceSpec& s, const BMatrix& b, long horizon) {
    const ConditionBReport rep = check_condition_B(s, b, horizon);
    py::dict out;
    out["alpha"] = verdict_dict(rep.alpha);
    out["beta"] = verdict_dict(rep.beta);
    out["gamma"] = verdict_dict(rep.gamma);
    out["gamma_tilde"] = verdict_dict(rep.gamma_tilde);
    out["admissible"] = rep.admissible();
    return out;
  });

  m.def(
      "build_chaotic_weight",
      [](const SpaceSpec& s, long horizon, bool force) {
        const Verdict pre = exists_chaotic_shift(s, horizon);
        const ChaoticWeight cw = build_chaotic_weight(s, horizon, pre, {}, force);
        py::dict out;
        out["weight"] = cw.w;
        out["operator"] = verdict_dict(cw.op);
        out["chaotic"] = verdict_dict(cw.chaotic);
        out["route"] = cw.route;
        return out;
      },
      py::arg("space"), py::arg("horizon"), py::arg("force") = false);

  m.def("build_fhc_nonchaotic_weight",
        [](const SpaceSpec& s, const BMatrix& b, const Blocks& blocks, long horizon) {
          const FhcConstruction fhc = build_fhc_nonchaotic_weight(s, b, blocks, horizon);
          py::dict out;
          out["weight"] = fhc.w;
          out["operator"] = verdict_dict(fhc.op);
          out["not_chaotic"] = verdict_dict(fhc.not_chaotic);
          return out;
        });

  m.def("verify_not_chaotic",
        [](const SpaceSpec& s, const WeightSeq& w, const Blocks& blocks, long horizon) {
          return verdict_dict(verify_not_chaotic(s, w, blocks, horizon));
        });

  // orbit
  py::class_<LazyVector>(m, "LazyVector")
      .def("ln_coord",
           [](const LazyVector& x, long i) { return static_cast<double>(x.ln_coord(i)); })
      .def("section", &LazyVector::section)
      .def_readonly("description", &LazyVector::description);

  m.def("build_fhc_vector",
        [](const SpaceSpec& s, const WeightSeq& w, const Blocks& blocks,
           const std::vector<FiniteVector>& targets) {
          return build_fhc_vector(s, w, blocks, targets);
        });

  m.def(
      "check_fhc_conditions",
      [](const SpaceSpec& s, const WeightSeq& w, const Blocks& blocks, long horizon,
         double c_const) {
        const FhcConditionsReport rep =
            check_fhc_conditions(s, w, blocks, horizon, {}, c_const);
        py::dict out;
        out["overall"] = to_string(rep.overall);
        py::list ci;
        for (const auto& v : rep.cond_i) ci.append(verdict_dict(v));
        out["condition_i"] = ci;
        py::list cii;
        for (const auto& row : rep.cond_ii) {
          py::list jrow;
          for (const auto& v : row) jrow.append(verdict_dict(v));
          cii.append(jrow);
        }
        out["condition_ii"] = cii;
        return out;
      },
      py::arg("space"), py::arg("weight"), py::arg("blocks"), py::arg("horizon"),
      py::arg("c_const") = 1.0);

  m.def(
      "hitting_density",
      [](const SpaceSpec& s, const WeightSeq& w, const LazyVector& x,
         const FiniteVector& target, long mm, double delta, long N, const Blocks* blocks,
         int threads) {
        const HitStats stats =
            hitting_density(s, w, x, target, mm, delta, N, blocks, -1, threads);
        py::dict out;
        out["density"] = stats.density;
        out["hits"] = stats.hits;
        out["blocks_density"] = stats.blocks_density;
        return out;
      },
      py::arg("space"), py::arg("weight"), py::arg("x"), py::arg("target"), py::arg("m"),
      py::arg("delta"), py::arg("iterates"), py::arg("blocks") = nullptr,
      py::arg("threads") = 1);

  // expression DSL
  m.def(
      "dsl_eval_ln",
      [](const std::string& text, double n, double mm) {
        dsl::Bindings b{{"n", static_cast<real>(n)}};
        if (mm > 0) b["m"] = static_cast<real>(mm);
        const dsl::SignedLog s = dsl::eval(dsl::parse(text), b);
        py::dict out;
        out["sign"] = s.sign;
        out["ln"] = static_cast<double>(s.ln);
        return out;
      },
      py::arg("text"), py::arg("n"), py::arg("m") = 0.0);
  m.def("dsl_print",
        [](const std::string& text) { return dsl::print(dsl::parse(text)); });

  m.def(
      "run_verification_suite",
      [](long horizon, int threads) {
        py::list out;
        for (const auto& r : run_verification_suite(horizon, threads)) {
          py::dict d;
          d["name"] = r.name;
          d["pass"] = r.pass;
          d["detail"] = r.detail;
          out.append(d);
        }
        return out;
      },
      py::arg("horizon") = 20000, py::arg("threads") = 1);
}
