#include "kshift/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "kshift/seqdsl.hpp"

namespace kshift {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::string strip_expr_prefix(const std::string& s) {
  if (s.rfind("expr:", 0) == 0) return trim(s.substr(5));
  return s;
}

AlphaSeq alpha_from_expr(const std::string& text) {
  const dsl::ExprPtr e = dsl::parse(text);
  return AlphaSeq::from_ln(
      [e](long n) {
        return dsl::eval_ln_positive(e, {{"n", static_cast<real>(n)}});
      },
      "expr:" + text);
}

KotheMatrix matrix_from_expr(const std::string& text) {
  const dsl::ExprPtr e = dsl::parse(text);
  return {[e](long m, long n) {
            return dsl::eval_ln_positive(
                e, {{"m", static_cast<real>(m)}, {"n", static_cast<real>(n)}});
          },
          "expr:" + text};
}

real ln_dyadic_factorial(long n) {
  if (n <= 0) return 0;  // alpha_0 = 1
  long k = 0;
  long p = 1;
  while (p < n) {
    p *= 2;
    ++k;
  }
  return std::lgamma(static_cast<real>(k) + 1.0L);  // ln(k!)
}

}  // namespace

IndexSet index_set_from_spec(const std::string& spec) {
  if (spec.rfind("residue:", 0) == 0) {
    const std::string body = spec.substr(8);
    const size_t comma = body.find(',');
    if (comma == std::string::npos)
      throw ConfigError("residue set needs 'residue:r,q'");
    return IndexSet::residue(std::stol(trim(body.substr(0, comma))),
                             std::stol(trim(body.substr(comma + 1))));
  }
  if (spec.rfind("list:", 0) == 0) {
    std::vector<long> elems;
    std::istringstream in(spec.substr(5));
    std::string tok;
    while (std::getline(in, tok, ',')) elems.push_back(std::stol(trim(tok)));
    std::sort(elems.begin(), elems.end());
    return IndexSet::from_sorted(std::move(elems));
  }
  if (spec.rfind("expr:", 0) == 0) {
    const std::string text = trim(spec.substr(5));
    const dsl::ExprPtr e = dsl::parse(text);
    // membership threshold 1/2: log-domain cancellation leaves noise of
    // order 1e-18 around zero, so a strict sign test would be fragile
    return IndexSet(
        [e](long n) {
          if (n < 0) return false;
          const dsl::SignedLog v = dsl::eval(e, {{"n", static_cast<real>(n)}});
          return v.sign > 0 && v.ln >= -std::log(2.0L);
        },
        "expr:" + text);
  }
  throw ConfigError("unknown index-set spec '" + spec +
                    "' (expected residue:, list: or expr:)");
}

std::vector<std::string> builtin_space_names() {
  return {"entire", "disk", "s", "ces1plus", "lacunary2n", "dyadic-factorial",
          "lp",     "c0"};
}

SpaceDesc builtin_space(const std::string& name) {
  SpaceDesc d;
  d.builtin = name;
  if (name == "entire") {
    d.kind = "power-series-infinite";
    d.alpha_expr = "n + 1";
    d.order = 1;
  } else if (name == "disk") {
    d.kind = "power-series-finite";
    d.alpha_expr = "n + 1";
    d.type_r = 0;
    d.order = 1;
  } else if (name == "s") {
    d.kind = "power-series-infinite";
    d.alpha_expr = "log(n + 2)";
    d.order = 1;
  } else if (name == "ces1plus") {
    d.kind = "power-series-finite";
    d.alpha_expr = "log(n + 2)";
    d.type_r = 0;
    d.order = 1;
  } else if (name == "lacunary2n") {
    d.kind = "generic";
    d.entry_expr = "m ^ (2 ^ n)";
    d.order = 1;
  } else if (name == "dyadic-factorial") {
    d.kind = "power-series-infinite";
    d.alpha_expr = "factorial(block(max(n, 1), 2))";
    d.order = 0;
  } else if (name == "lp") {
    d.kind = "generic";
    d.entry_expr = "1";
    d.order = 1;
  } else if (name == "c0") {
    d.kind = "generic";
    d.entry_expr = "1";
    d.order = 0;
  } else {
    throw ConfigError("unknown builtin space '" + name + "'");
  }
  return d;
}

SpaceSpec SpaceDesc::build(long probe) const {
  if (builtin == "lacunary2n") {
    // native entries: the DSL form is equivalent but slower
    KotheMatrix a{[](long m, long n) {
                    const real ln = std::exp2(static_cast<real>(n)) *
                                    std::log(static_cast<real>(m));
                    if (ln == kPosInf)
                      throw DomainError("entry exponent exceeds the extended range");
                    return ln;
                  },
                  "m^(2^n)"};
    return SpaceSpec::generic(std::move(a), order, builtin);
  }
  if (builtin == "dyadic-factorial") {
    AlphaSeq alpha = AlphaSeq::from_ln(ln_dyadic_factorial, "dyadic-factorial");
    return make_power_series(order, true, 0, std::move(alpha), probe);
  }
  if (kind == "generic") {
    if (entry_expr.empty())
      throw ConfigError("generic space needs an entry expression");
    return SpaceSpec::generic(matrix_from_expr(entry_expr), order,
                              builtin.empty() ? "expr" : builtin);
  }
  if (alpha_expr.empty())
    throw ConfigError("power series space needs an alpha expression");
  const bool infinite = kind == "power-series-infinite";
  if (!infinite && kind != "power-series-finite")
    throw ConfigError("unknown space kind '" + kind + "'");
  return make_power_series(order, infinite, type_r, alpha_from_expr(alpha_expr), probe);
}

WeightSeq WeightDesc::build() const {
  // colon shorthand: "constant:2", "geometric:1.5"
  const size_t colon = kind.find(':');
  if (colon != std::string::npos) {
    WeightDesc split = *this;
    split.kind = kind.substr(0, colon);
    split.value = std::stod(kind.substr(colon + 1));
    return split.build();
  }
  if (kind == "constant") return WeightSeq::constant(value);
  if (kind == "geometric") return WeightSeq::geometric(value);
  if (kind == "expr") {
    const dsl::ExprPtr e = dsl::parse(expr);
    return WeightSeq::from_ln_w(
        [e](long n) {
          return dsl::eval_ln_positive(e, {{"n", static_cast<real>(n)}});
        },
        "expr:" + expr);
  }
  if (kind == "table") {
    if (!table_file.empty()) {
      std::ifstream in(table_file);
      if (!in) throw ConfigError("cannot open weight table: " + table_file);
      std::vector<double> vals;
      double x;
      while (in >> x) vals.push_back(x);
      return WeightSeq::from_values(vals);
    }
    return WeightSeq::from_values(table);
  }
  throw ConfigError("unknown weight kind '" + kind + "'");
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_string(buf.str());
}

RunConfig RunConfig::from_string(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line, section = "run";
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("malformed section header at line " + std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected key = value at line " + std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key at line " + std::to_string(lineno));
    cfg.sections_[section][key] = val;
  }
  return cfg;
}

bool RunConfig::has(const std::string& section, const std::string& key) const {
  auto s = sections_.find(section);
  return s != sections_.end() && s->second.count(key) > 0;
}

std::string RunConfig::get(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
  auto s = sections_.find(section);
  if (s == sections_.end()) return fallback;
  auto k = s->second.find(key);
  return k == s->second.end() ? fallback : k->second;
}

long RunConfig::get_long(const std::string& section, const std::string& key,
                         long fallback) const {
  const std::string v = get(section, key);
  if (v.empty()) return fallback;
  try {
    return std::stol(v);
  } catch (const std::exception&) {
    throw ConfigError("expected integer for " + section + "." + key + ", got '" + v + "'");
  }
}

double RunConfig::get_double(const std::string& section, const std::string& key,
                             double fallback) const {
  const std::string v = get(section, key);
  if (v.empty()) return fallback;
  try {
    return std::stod(v);
  } catch (const std::exception&) {
    throw ConfigError("expected number for " + section + "." + key + ", got '" + v + "'");
  }
}

SpaceDesc RunConfig::space_desc() const {
  SpaceDesc d;
  const std::string name = get("space", "builtin");
  if (!name.empty()) {
    d = builtin_space(name);
  } else {
    d.kind = get("space", "kind", "generic");
    d.alpha_expr = strip_expr_prefix(get("space", "alpha"));
    d.entry_expr = strip_expr_prefix(get("space", "entry"));
    d.type_r = static_cast<real>(get_double("space", "type", 0.0));
  }
  if (has("space", "order")) d.order = static_cast<real>(get_double("space", "order", 1.0));
  return d;
}

WeightDesc RunConfig::weight_desc() const {
  WeightDesc w;
  w.kind = get("weight", "kind", "constant");
  w.value = get_double("weight", "value", 2.0);
  w.expr = strip_expr_prefix(get("weight", "expr"));
  w.table_file = get("weight", "table_file");
  const std::string table = get("weight", "table");
  if (!table.empty()) {
    std::istringstream in(table);
    std::string tok;
    while (std::getline(in, tok, ',')) w.table.push_back(std::stod(trim(tok)));
  }
  return w;
}

Params RunConfig::params() const {
  Params p;
  p.eta = get_double("run", "eta", p.eta);
  p.stab_tol = get_double("run", "stab_tol", p.stab_tol);
  p.mu_max = get_long("run", "mu_max", p.mu_max);
  p.c_max = get_long("run", "c_max", p.c_max);
  p.threads = static_cast<int>(get_long("run", "threads", p.threads));
  p.unbounded_level = get_double("run", "unbounded_level", p.unbounded_level);
  p.tail.margin = get_double("run", "margin", p.tail.margin);
  p.tail.window = get_long("run", "window", p.tail.window);
  p.series.tail = p.tail;
  const long probes = get_long("run", "probes", 4);
  p.probe_m.clear();
  for (long m = 1; m <= probes; ++m) p.probe_m.push_back(m);
  return p;
}

}  // namespace kshift
