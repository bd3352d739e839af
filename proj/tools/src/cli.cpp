#include "nhcurv_app/cli.hpp"

#include <CLI11.hpp>

#include <optional>
#include <sstream>

#include "nhcurv/catalog.hpp"
#include "nhcurv/errors.hpp"
#include "nhcurv/mechanics.hpp"
#include "nhcurv_app/checks.hpp"
#include "nhcurv_app/report.hpp"

namespace nhcurv::app {
namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

// Numbers on the command line may be constant expressions such as pi/3.
double number(const std::string& text) {
  try {
    return expr::eval(expr::parse(text, {}), {}, {});
  } catch (const Error& e) {
    throw UsageError("bad number '" + text + "': " + e.what());
  }
}

std::pair<std::string, double> assignment(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw UsageError("expected name=value, got '" + text + "'");
  return {text.substr(0, eq), number(text.substr(eq + 1))};
}

std::vector<double> numbers(const std::string& text) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) out.push_back(number(part));
  return out;
}

SystemDef with_overrides(SystemDef sys, const std::vector<std::string>& params) {
  for (const auto& p : params) {
    const auto [name, value] = assignment(p);
    if (!sys.param_index(name)) throw UsageError("system '" + sys.id + "' has no parameter '" + name + "'");
    sys = sys.with_param(name, value);
  }
  return sys;
}

struct AnalyzeArgs {
  std::string system;
  std::vector<std::string> at;
  std::vector<std::string> params;
  std::uint64_t seed = 1;
  std::optional<int> order;
};

int analyze(const AnalyzeArgs& a, std::ostream& out) {
  const SystemDef sys = with_overrides(load_system(a.system), a.params);
  std::mt19937_64 rng(a.seed);
  Point q = sample_point(sys, rng);
  std::vector<bool> given(sys.dim(), false);
  for (const auto& group : a.at) {
    for (const auto& item : split(group, ',')) {
      const auto [name, value] = assignment(item);
      const std::size_t i = sys.coord_index(name);
      q[i] = value;
      given[i] = true;
    }
  }
  AnalyzeInfo info;
  info.seed = a.seed;
  for (std::size_t i = 0; i < sys.dim(); ++i) {
    if (!given[i]) info.drawn.push_back(sys.chart[i]);
  }
  info.order = a.order.value_or(sys.degree() + 2);
  const FlagReport flag = flag_at_point(sys, q);
  const WagnerResult w = wagner_tensor(sys, q, info.order);
  out << serialize(analyze_report(sys, q, w, flag, info));
  return 0;
}

struct VerifyArgs {
  std::string system;
  VerifyOptions opt;
};

int verify(const VerifyArgs& a, std::ostream& out) {
  const SystemDef sys = load_system(a.system);
  const VerifyReport rep = run_verify(sys, a.opt);
  out << serialize(verify_report(rep));
  return rep.passed() ? 0 : 1;
}

struct ScanArgs {
  std::string system;
  std::string param;
  double from = 0.0;
  double to = 0.0;
  int steps = 0;
  int points = 10;
  std::uint64_t seed = 1;
  double flat_tol = 1e-8;
  unsigned threads = 0;
};

int scan(const ScanArgs& a, std::ostream& out) {
  const SystemDef sys = load_system(a.system);
  if (a.steps <= 0 || a.from > a.to || (a.steps > 1 && a.from == a.to)) {
    throw UsageError("empty parameter range");
  }
  std::vector<double> vals;
  for (int k = 0; k < a.steps; ++k) {
    vals.push_back(a.steps == 1 ? a.from : a.from + (a.to - a.from) * k / (a.steps - 1));
  }
  const FlatnessReport rep = flatness_scan(sys, a.param, vals, a.points, a.seed, a.flat_tol, a.threads);
  out << serialize(scan_report(sys, rep, a.seed, a.points));
  return 0;
}

struct GeodesicArgs {
  std::string system;
  std::string q0;
  std::string u0;
  std::vector<std::string> params;
  double t = 1.0;
  double dt = 1e-3;
  std::size_t every = 1;
  bool lines = false;
};

int geodesic(const GeodesicArgs& a, std::ostream& out) {
  const SystemDef sys = with_overrides(load_system(a.system), a.params);
  const State s0{numbers(a.q0), numbers(a.u0)};
  const Trajectory tr = integrate_trajectory(sys, s0, a.t, a.dt, a.every);
  if (a.lines) {
    for (const auto& s : tr.samples) {
      const json j = trajectory_sample(s);
      require_finite(j, "sample");
      out << j.dump() << "\n";
    }
  } else {
    out << serialize(geodesic_report(sys, tr, a.t, a.dt));
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Flag, Schouten and Wagner curvature of nonholonomic systems", "nhcurv"};
  app.require_subcommand(1);

  AnalyzeArgs an;
  auto* c_an = app.add_subcommand("analyze", "Full curvature pipeline at one point");
  c_an->add_option("system", an.system, "Built-in id or system file")->required();
  c_an->add_option("--at", an.at, "Coordinates name=value[,name=value...]; others are drawn");
  c_an->add_option("--param", an.params, "Parameter override name=value");
  c_an->add_option("--seed", an.seed, "Seed for drawn coordinates");
  c_an->add_option("--order", an.order, "Jet order (default degree + 2)");

  VerifyArgs ve;
  auto* c_ve = app.add_subcommand("verify", "Reference values and identities at random samples");
  c_ve->add_option("system", ve.system, "Built-in id or system file")->required();
  c_ve->add_option("--seed", ve.opt.seed, "Sampling seed");
  c_ve->add_option("--points", ve.opt.points, "Points per parameter draw");
  c_ve->add_option("--draws", ve.opt.draws, "Parameter draws");
  c_ve->add_option("--threads", ve.opt.threads, "Worker threads (0 = hardware)");

  ScanArgs sc;
  auto* c_sc = app.add_subcommand("scan", "Flatness verdict over a parameter range");
  c_sc->add_option("system", sc.system, "Built-in id or system file")->required();
  c_sc->add_option("--param", sc.param, "Parameter to vary")->required();
  c_sc->add_option("--from", sc.from, "First value")->required();
  c_sc->add_option("--to", sc.to, "Last value")->required();
  c_sc->add_option("--steps", sc.steps, "Number of values")->required();
  c_sc->add_option("--points", sc.points, "Sample points per value");
  c_sc->add_option("--seed", sc.seed, "Sampling seed");
  c_sc->add_option("--flat-tol", sc.flat_tol, "Flatness threshold on max |component|");
  c_sc->add_option("--threads", sc.threads, "Worker threads (0 = hardware)");

  GeodesicArgs ge;
  auto* c_ge = app.add_subcommand("geodesic", "Integrate free motion with energy and constraint monitors");
  c_ge->add_option("system", ge.system, "Built-in id or system file")->required();
  c_ge->add_option("--q0", ge.q0, "Initial coordinates, comma separated")->required();
  c_ge->add_option("--u0", ge.u0, "Initial frame velocities, comma separated")->required();
  c_ge->add_option("--t", ge.t, "End time");
  c_ge->add_option("--dt", ge.dt, "Step size");
  c_ge->add_option("--param", ge.params, "Parameter override name=value");
  c_ge->add_option("--every", ge.every, "Keep every k-th step");
  c_ge->add_flag("--lines", ge.lines, "One JSON record per line instead of a document");

  auto* c_ls = app.add_subcommand("list", "Built-in system ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*c_an) return analyze(an, out);
    if (*c_ve) return verify(ve, out);
    if (*c_sc) return scan(sc, out);
    if (*c_ge) return geodesic(ge, out);
    if (*c_ls) {
      for (const auto& id : builtin_ids()) out << id << "\n";
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_status(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}

}  // namespace nhcurv::app
