#include "nhcurv_app/report.hpp"

#include <cmath>

#include "nhcurv/errors.hpp"

namespace nhcurv::app {
namespace {

json named(const std::vector<std::string>& names, const std::vector<double>& v) {
  json j = json::object();
  for (std::size_t k = 0; k < names.size() && k < v.size(); ++k) j[names[k]] = v[k];
  return j;
}

std::vector<std::string> param_names(const SystemDef& sys) {
  std::vector<std::string> out;
  for (const auto& p : sys.params) out.push_back(p.name);
  return out;
}

json block(const RealArray& a, std::vector<std::string> roles) {
  json j;
  j["roles"] = std::move(roles);
  j["shape"] = a.shape();
  j["values"] = nested(a);
  return j;
}

json jet_matrix_values(const JetMatrix& m) { return matrix(values(m)); }

}  // namespace

void require_finite(const json& j, const std::string& where) {
  if (j.is_number_float()) {
    if (!std::isfinite(j.get<double>())) throw NumericalError("non-finite value in " + where);
  } else if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) require_finite(it.value(), where + "." + it.key());
  } else if (j.is_array()) {
    for (std::size_t k = 0; k < j.size(); ++k) require_finite(j[k], where + "[" + std::to_string(k) + "]");
  }
}

std::string serialize(const json& j) {
  require_finite(j);
  return j.dump(2) + "\n";
}

json nested(const RealArray& a) {
  const auto& ext = a.shape();
  const auto& data = a.data();
  std::size_t pos = 0;
  auto build = [&](auto&& self, std::size_t dim) -> json {
    json arr = json::array();
    for (std::size_t k = 0; k < ext[dim]; ++k) {
      if (dim + 1 == ext.size()) {
        arr.push_back(data[pos++]);
      } else {
        arr.push_back(self(self, dim + 1));
      }
    }
    return arr;
  };
  if (ext.empty()) return json::array();
  return build(build, 0);
}

json matrix(const Eigen::MatrixXd& m) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    arr.push_back(std::move(row));
  }
  return arr;
}

json analyze_report(const SystemDef& sys, const Point& q, const WagnerResult& w,
                    const FlagReport& flag, const AnalyzeInfo& info) {
  json j;
  j["command"] = "analyze";
  j["system"] = sys.id;
  j["seed"] = info.seed;
  j["drawn_coordinates"] = info.drawn;
  j["order"] = info.order;
  j["point"] = named(sys.chart, q);
  j["params"] = named(param_names(sys), sys.param_values());
  j["index_base"] = 0;
  j["flag"] = {{"dims", flag.dims}, {"degree", flag.degree},
               {"weakest_direction", flag.weakest_direction}};

  const auto& ct = w.connection;
  json b;
  b["frame"] = jet_matrix_values(w.frame.B);
  b["induced_metric"] = jet_matrix_values(ct.g);
  b["structure"] = block(values(ct.C), {"c value", "a", "b"});
  b["braces"] = block(values(ct.braces), {"c value", "a direction", "b"});
  b["omega"] = block(values(ct.omega), {"c value", "a", "b"});
  b["gamma"] = block(values(ct.gamma), {"c value", "a direction", "b"});
  b["schouten"] = block(w.schouten_block.components, {"d value", "a slot", "b slot", "c argument"});
  json levels = json::array();
  for (const auto& lv : w.levels) {
    json l;
    l["level"] = lv.level;
    l["block"] = {lv.begin, lv.end};
    l["metric_up"] = jet_matrix_values(lv.gup);
    l["metric_down"] = jet_matrix_values(lv.glow);
    l["mu"] = block(values(lv.mstar), {"P new block", "a", "b"});
    l["pi"] = block(values(lv.pi), {"d value", "a direction", "c argument"});
    l["curvature"] = block(values(lv.curvature), {"d value", "a slot", "b slot", "c argument"});
    levels.push_back(std::move(l));
  }
  b["levels"] = std::move(levels);
  b["wagner"] = block(w.wagner.components, {"d value", "a slot", "b slot", "c argument"});
  j["blocks"] = std::move(b);
  j["wagner_max_abs"] = w.wagner.max_abs();
  return j;
}

json verify_report(const VerifyReport& rep) {
  json j;
  j["command"] = "verify";
  j["system"] = rep.system;
  j["seed"] = rep.options.seed;
  j["points_per_draw"] = rep.options.points;
  j["draws"] = rep.options.draws;
  j["samples"] = rep.samples.size();
  json checks = json::array();
  for (const auto& c : rep.checks) {
    json e;
    e["name"] = c.name;
    e["group"] = c.group;
    e["provenance"] = to_string(c.provenance);
    e["expected"] = c.expected;
    e["rel_tol"] = c.rel_tol;
    e["abs_tol"] = c.abs_tol;
    e["evaluations"] = c.evaluations;
    e["failures"] = c.failures;
    e["max_abs_error"] = c.max_abs_error;
    e["max_rel_error"] = c.max_rel_error;
    e["status"] = to_string(c.status);
    if (!c.note.empty()) e["note"] = c.note;
    json worst;
    worst["point"] = c.worst.point;
    worst["params"] = c.worst.params;
    worst["expected"] = c.worst_expected;
    worst["computed"] = c.worst_computed;
    e["worst"] = std::move(worst);
    checks.push_back(std::move(e));
  }
  j["checks"] = std::move(checks);
  j["summary"] = {{"pass", rep.count(Status::pass)},
                  {"fail", rep.count(Status::fail)},
                  {"flagged", rep.count(Status::flagged)}};
  j["passed"] = rep.passed();
  return j;
}

json scan_report(const SystemDef& sys, const FlatnessReport& rep, std::uint64_t seed,
                 int points_per_value) {
  json j;
  j["command"] = "scan";
  j["system"] = sys.id;
  j["param"] = rep.param;
  j["seed"] = seed;
  j["points_per_value"] = points_per_value;
  j["flat_tol"] = rep.flat_tol;
  json entries = json::array();
  for (const auto& e : rep.entries) {
    entries.push_back({{"value", e.value},
                       {"max_component", e.max_component},
                       {"verdict", e.flat ? "flat" : "non-flat"}});
  }
  j["entries"] = std::move(entries);
  j["all_non_flat"] = rep.all_non_flat();
  return j;
}

json trajectory_sample(const TrajectorySample& s) {
  return {{"t", s.t}, {"q", s.state.q}, {"u", s.state.u}, {"energy", s.energy},
          {"residual", s.residual}};
}

json geodesic_report(const SystemDef& sys, const Trajectory& tr, double t_end, double dt) {
  json j;
  j["command"] = "geodesic";
  j["system"] = sys.id;
  j["chart"] = sys.chart;
  j["params"] = named(param_names(sys), sys.param_values());
  j["t_end"] = t_end;
  j["dt"] = dt;
  j["energy0"] = tr.energy0;
  j["max_energy_drift"] = tr.max_energy_drift;
  j["max_residual"] = tr.max_residual;
  json samples = json::array();
  for (const auto& s : tr.samples) samples.push_back(trajectory_sample(s));
  j["samples"] = std::move(samples);
  return j;
}

}  // namespace nhcurv::app
