#pragma once

#include <map>
#include <string>

#include "kshift/logreal.hpp"

namespace kshift {

// Three-valued outcome of a finite-horizon check. Holds/Fails are certificates
// over the examined prefix, not theorems; Undetermined means the bounded
// search was exhausted without either certificate.
enum class Outcome { Holds, Fails, Undetermined };

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Holds: return "holds";
    case Outcome::Fails: return "fails";
    default: return "undetermined";
  }
}

struct Verdict {
  Outcome outcome = Outcome::Undetermined;
  long horizon = 0;
  std::string route;                    // rule that produced the outcome
  std::map<std::string, real> witness;  // named numeric witnesses (mu, C, j, ...)
  std::string note;                     // diagnostic trace

  bool holds() const { return outcome == Outcome::Holds; }
  bool fails() const { return outcome == Outcome::Fails; }
  bool undetermined() const { return outcome == Outcome::Undetermined; }

  static Verdict make(Outcome o, long horizon, std::string route = {},
                      std::map<std::string, real> witness = {},
                      std::string note = {}) {
    return Verdict{o, horizon, std::move(route), std::move(witness), std::move(note)};
  }
};

struct PreconditionError : std::runtime_error {
  explicit PreconditionError(const std::string& clause, const std::string& detail)
      : std::runtime_error("precondition not satisfied: " + clause +
                           (detail.empty() ? "" : " (" + detail + ")")),
        failing_clause(clause) {}
  std::string failing_clause;
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace kshift
