#pragma once
// JSON documents written by the command-line tool. Keys are sorted (the
// default object type is an ordered map), numbers print in shortest
// round-trip form.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "nhcurv/mechanics.hpp"
#include "nhcurv/wagner.hpp"
#include "nhcurv_app/checks.hpp"

namespace nhcurv::app {

using json = nlohmann::json;

/// Throws NumericalError on NaN or infinity anywhere in the document.
void require_finite(const json& j, const std::string& where = "report");

/// Two-space indented text with a trailing newline.
std::string serialize(const json& j);

json nested(const RealArray& a);
json matrix(const Eigen::MatrixXd& m);

struct AnalyzeInfo {
  std::uint64_t seed = 0;
  std::vector<std::string> drawn;  // coordinates that were sampled
  int order = 0;
};

json analyze_report(const SystemDef& sys, const Point& q, const WagnerResult& w,
                    const FlagReport& flag, const AnalyzeInfo& info);
json verify_report(const VerifyReport& rep);
json scan_report(const SystemDef& sys, const FlatnessReport& rep, std::uint64_t seed,
                 int points_per_value);
json trajectory_sample(const TrajectorySample& s);
json geodesic_report(const SystemDef& sys, const Trajectory& tr, double t_end, double dt);

}  // namespace nhcurv::app
