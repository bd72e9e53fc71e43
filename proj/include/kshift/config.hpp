#pragma once

#include <map>
#include <string>
#include <vector>

#include "kshift/density.hpp"
#include "kshift/params.hpp"
#include "kshift/shifts.hpp"
#include "kshift/spaces.hpp"

namespace kshift {

// Index sets from config values: "residue:r,q", "list:a,b,c", or a DSL
// predicate "expr:<expression in n>" (membership = value >= 1/2, a robust
// boolean threshold). Block-set unions come from construction artifacts.
IndexSet index_set_from_spec(const std::string& spec);

// Serializable space description: a named builtin family, a power series
// space over a DSL alpha expression, or a generic matrix over a DSL entry
// expression in (m, n).
struct SpaceDesc {
  std::string builtin;            // one of the named families, or empty
  std::string kind = "generic";   // generic | power-series-infinite | power-series-finite
  real order = 1;
  std::string alpha_expr;         // e.g. "log(n + 2)"
  std::string entry_expr;         // e.g. "m ^ (2 ^ n)"
  real type_r = 0;                // finite-type metadata

  SpaceSpec build(long probe = 10000) const;
};

std::vector<std::string> builtin_space_names();
SpaceDesc builtin_space(const std::string& name);

// Serializable weight description.
struct WeightDesc {
  std::string kind = "constant";  // constant | geometric | expr | table
  double value = 2.0;
  std::string expr;               // w_n as a DSL expression in n
  std::vector<double> table;      // inline values, or loaded from table_file
  std::string table_file;         // one weight per line

  WeightSeq build() const;
};

// Flat sectioned key-value configuration ([section] lines, key = value,
// '#' comments). Values may carry DSL payloads as "expr:<expression>".
class RunConfig {
 public:
  static RunConfig from_file(const std::string& path);
  static RunConfig from_string(const std::string& text);

  bool has(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key,
                  const std::string& fallback = {}) const;
  long get_long(const std::string& section, const std::string& key, long fallback) const;
  double get_double(const std::string& section, const std::string& key,
                    double fallback) const;

  SpaceDesc space_desc() const;
  WeightDesc weight_desc() const;
  Params params() const;
  long horizon() const { return get_long("run", "horizon", 100000); }
  long seed() const { return get_long("run", "seed", 42); }

  const std::map<std::string, std::map<std::string, std::string>>& raw() const {
    return sections_;
  }

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

}  // namespace kshift
