#pragma once

#include <string>

#include "json.hpp"
#include "kshift/classify.hpp"
#include "kshift/config.hpp"
#include "kshift/construct.hpp"
#include "kshift/orbit.hpp"

namespace kshift {

using json = nlohmann::ordered_json;

double capped(real v);  // clamps to the double range for serialization

json to_json(const Verdict& v);
json to_json(const RhoReport& r);
json to_json(const Classification& c);
json to_json(const BlocksVerification& v);
json to_json(const ConditionBReport& r);
json to_json(const FhcConditionsReport& r);
json config_json(const RunConfig& cfg);

// Construction artifact: everything needed to reproduce the run bit-exactly.
json construction_artifact(const RunConfig& cfg, const SpaceDesc& space,
                           const Blocks& blocks, const BMatrix& b, real eps,
                           const FhcConstruction& fhc,
                           const FhcConditionsReport& fhc_conditions);

struct LoadedArtifact {
  SpaceDesc space;
  std::string b_family;
  real eps = 0.5L;
  Blocks blocks;
  long horizon = 0;
};

LoadedArtifact load_construction_artifact(const std::string& path, const Params& p);

void write_json(const std::string& path, const json& j);
json meta_block(const std::string& kind);

}  // namespace kshift
