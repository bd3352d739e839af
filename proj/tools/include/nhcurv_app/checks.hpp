#pragma once
// Closed-form reference values for the built-in systems, identity checks,
// and the multi-point verification run.

#include <cstdint>
#include <string>
#include <vector>

#include "nhcurv/system.hpp"

namespace nhcurv::app {

enum class Provenance { reference, property, oracle };
enum class Status { pass, fail, flagged };

const char* to_string(Provenance p);
const char* to_string(Status s);

struct Sample {
  Point point;
  std::vector<double> params;
};

struct CheckOutcome {
  std::string name;
  std::string group;
  Provenance provenance = Provenance::reference;
  std::string expected;  // formula text, or a description for identities
  double rel_tol = 0.0;
  double abs_tol = 0.0;
  std::size_t evaluations = 0;
  std::size_t failures = 0;
  double max_abs_error = 0.0;
  double max_rel_error = 0.0;
  Sample worst;
  double worst_expected = 0.0;
  double worst_computed = 0.0;
  Status status = Status::pass;
  std::string note;
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  int points = 20;
  int draws = 5;
  unsigned threads = 0;
};

struct VerifyReport {
  std::string system;
  VerifyOptions options;
  std::vector<Sample> samples;
  std::vector<CheckOutcome> checks;
  std::size_t count(Status s) const;
  bool passed() const { return count(Status::fail) == 0; }
  const CheckOutcome* find(const std::string& name) const;
};

/// Draws `draws` parameter sets and `points` regular points for each, then
/// evaluates every reference value and identity at every sample. Reference
/// values exist for the built-in systems (matched by id).
VerifyReport run_verify(const SystemDef& sys, const VerifyOptions& opt = {});

}  // namespace nhcurv::app
