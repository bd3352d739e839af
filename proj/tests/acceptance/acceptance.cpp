// Prints one PASS/FAIL line per acceptance criterion.
//
//   acceptance [--expect-red 6,...]
//
// Without options the exit status is 0 only if every criterion passes. With
// --expect-red the status is 0 when exactly the listed criteria fail, so a
// known red criterion is still printed as FAIL but an unexpected change in
// either direction breaks the run.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "nhcurv/catalog.hpp"
#include "nhcurv/errors.hpp"
#include "nhcurv/invariants.hpp"
#include "nhcurv/mechanics.hpp"
#include "nhcurv/wagner.hpp"
#include "nhcurv_app/checks.hpp"

using namespace nhcurv;
using nhcurv::app::Status;
using nhcurv::app::VerifyReport;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

const std::vector<const char*> kSystems{"disc", "ball-sphere", "heisenberg"};

// Shared by criteria 3-5; the whole disc suite is timed once.
const VerifyReport& disc_report(double* seconds = nullptr) {
  static double elapsed = 0.0;
  static const VerifyReport rep = [] {
    const auto t0 = std::chrono::steady_clock::now();
    auto r = app::run_verify(load_system("disc"), {});
    elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
  }();
  if (seconds) *seconds = elapsed;
  return rep;
}

Verdict groups_pass(const VerifyReport& rep, const std::set<std::string>& groups) {
  int n = 0;
  std::string bad;
  double worst = 0.0;
  for (const auto& c : rep.checks) {
    if (!groups.count(c.group)) continue;
    ++n;
    worst = std::max(worst, c.max_rel_error);
    if (c.status != Status::pass) bad += " " + c.name;
  }
  Verdict v;
  v.pass = n > 0 && bad.empty();
  v.detail = std::to_string(n) + " checks x " + std::to_string(rep.samples.size()) +
             " samples, worst rel err " + fmt("%.1e", worst);
  if (!bad.empty()) v.detail += ", failing:" + bad;
  return v;
}

Verdict flag_protocol(const char* id, const std::vector<std::size_t>& dims, int degree) {
  const auto sys = load_system(id);
  std::mt19937_64 rng(2024);
  int ok = 0;
  for (int i = 0; i < 50; ++i) {
    const auto f = flag_at_point(sys.with_params(sample_params(sys, rng)), sample_point(sys, rng));
    if (f.dims == dims && f.degree == degree) ++ok;
  }
  return {ok == 50, std::to_string(ok) + "/50 points with the expected flag"};
}

Verdict c1() { return flag_protocol("disc", {3, 4, 5}, 2); }
Verdict c2() { return flag_protocol("ball-sphere", {3, 5}, 1); }
Verdict c3() { return groups_pass(disc_report(), {"connection"}); }
Verdict c4() { return groups_pass(disc_report(), {"schouten"}); }

Verdict c5() {
  double seconds = 0.0;
  const auto& rep = disc_report(&seconds);
  Verdict v = groups_pass(rep, {"extension", "mu", "pi", "level_curvature", "wagner"});
  v.pass = v.pass && seconds < 5.0;
  v.detail += ", full disc suite " + fmt("%.2f s", seconds);
  return v;
}

Verdict c6() {
  const VerifyReport rep = app::run_verify(load_system("ball-sphere"), {});
  const std::vector<std::string> named{"g_11", "g_12", "g_22", "g_33", "g_13",    "g_23",
                                       "g^44", "g^45", "g^55", "K0^1_121", "K^1_133"};
  std::string bad, flagged;
  for (const auto& name : named) {
    const auto* c = rep.find(name);
    if (!c || c->status != Status::pass) bad += " " + name;
  }
  for (const auto& c : rep.checks) {
    if (c.status == Status::flagged) flagged += " " + c.name;
    if (c.status == Status::fail &&
        std::find(named.begin(), named.end(), c.name) == named.end()) {
      bad += " " + c.name;
    }
  }
  Verdict v{bad.empty(), "flagged:" + flagged};
  if (!bad.empty()) v.detail = "failing:" + bad + "; " + v.detail;
  return v;
}

Verdict c7() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<double> ks;
  for (int i = 0; i < 25; ++i) ks.push_back(0.1 + (10.0 - 0.1) * i / 24.0);
  const auto rep = flatness_scan(load_system("ball-sphere"), "k", ks, 10, 7);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  double smallest = INFINITY;
  for (const auto& e : rep.entries) smallest = std::min(smallest, e.max_component);
  return {rep.all_non_flat() && smallest > 1e-4 && rep.entries.size() == 25 && seconds < 30.0,
          "smallest max|K| over k " + fmt("%.3g", smallest) + ", " + fmt("%.2f s", seconds)};
}

Verdict c8() {
  double worst = 0.0;
  for (const char* id : {"disc", "ball-sphere"}) {
    const auto base = load_system(id);
    std::mt19937_64 rng(31);
    for (int i = 0; i < 40; ++i) {
      const auto sys = base.with_params(sample_params(base, rng));
      const FrameEval fe = evaluate_frame(sys, sample_point(sys, rng), 1);
      worst = std::max(worst, cross_oracle_residual(fe, nonholonomic_connection(fe)));
    }
  }
  return {worst < 1e-9, "max |projected ambient - nonholonomic| " + fmt("%.1e", worst)};
}

double max_abs(const JetVector& v) {
  double m = 0.0;
  for (const auto& c : v) m = std::max(m, std::abs(c.value()));
  return m;
}

JetVector add(const JetVector& a, const JetVector& b, double s = 1.0) {
  JetVector r;
  for (std::size_t i = 0; i < a.size(); ++i) r.push_back(a[i] + s * b[i]);
  return r;
}

// Jacobi, antisymmetry and Leibniz on random triples of frame fields.
double bracket_residual(const SystemDef& sys, std::mt19937_64& rng) {
  const Point q = sample_point(sys, rng);
  const FrameEval fe = evaluate_frame(sys, q, 3);
  std::uniform_int_distribution<std::size_t> pick(0, fe.dim() - 1);
  const auto& X = fe.B[pick(rng)];
  const auto& Y = fe.B[pick(rng)];
  const auto& Z = fe.B[pick(rng)];
  double r = max_abs(add(lie_bracket(X, Y), lie_bracket(Y, X)));
  r = std::max(r, max_abs(add(add(lie_bracket(X, lie_bracket(Y, Z)), lie_bracket(Y, lie_bracket(Z, X))),
                              lie_bracket(Z, lie_bracket(X, Y)))));
  JetSpace space(q, 3);
  const Jet f = cos(space.variable(0)) * space.variable(1) + 0.5 * space.variable(2) * space.variable(0);
  JetVector fX;
  for (const auto& c : X) fX.push_back(f * c);
  const JetVector xy = lie_bracket(X, Y);
  const Jet yf = apply_field(Y, f);
  JetVector rhs;
  for (std::size_t i = 0; i < X.size(); ++i) rhs.push_back(f * xy[i] - yf * X[i]);
  return std::max(r, max_abs(add(lie_bracket(fX, Y), rhs, -1.0)));
}

// Order-k partials of every metric and frame entry against a Richardson
// central difference (h = 1e-5) of the order-(k-1) partial; relative error.
double jet_fd_residual(const SystemDef& sys, const Point& q) {
  const auto params = sys.param_values();
  std::vector<const expr::Expr*> exprs;
  for (const auto& row : sys.metric)
    for (const auto& e : row) exprs.push_back(&e);
  for (const auto& row : sys.frame)
    for (const auto& e : row) exprs.push_back(&e);
  const std::size_t n = q.size();
  const double h = 1e-5;
  double worst = 0.0;
  std::vector<std::vector<int>> level{std::vector<int>(n, 0)};
  for (int k = 1; k <= 3; ++k) {
    std::vector<std::vector<int>> next;
    for (const auto& beta : level) {
      for (std::size_t i = 0; i < n; ++i) {
        // Each alpha is reached once: only extend at or after the last used slot.
        bool later = true;
        for (std::size_t j = i + 1; j < n; ++j) later = later && beta[j] == 0;
        if (!later) continue;
        auto alpha = beta;
        ++alpha[i];
        next.push_back(alpha);
        for (const auto* e : exprs) {
          const double exact = expr::eval_jet(*e, q, params, 3).partial(alpha);
          auto g = [&](double t) {
            Point p = q;
            p[i] += t;
            return expr::eval_jet(*e, p, params, k - 1).partial(beta);
          };
          const auto central = [&](double s) { return (g(s) - g(-s)) / (2 * s); };
          const double fd = (4 * central(h / 2) - central(h)) / 3;
          worst = std::max(worst, std::abs(fd - exact) / std::max(1.0, std::abs(exact)));
        }
      }
    }
    level = std::move(next);
  }
  return worst;
}

Verdict c9() {
  struct Worst {
    double bracket = 0, projector = 0, torsion = 0, compat = 0, slots = 0, covariance = 0, fd = 0;
  } w;
  for (const char* id : kSystems) {
    const auto sys = load_system(id);
    const auto& c = sys.chart;
    std::vector<std::string> factors{"1 + 0.3*sin(" + c[0] + ")^2", "2 + cos(" + c[1] + ")"};
    if (sys.rank() > 2) factors.push_back("1.5 + 0.2*" + c[2] + "^2");
    const auto scaled = rescale_frame(sys, factors);
    std::mt19937_64 rng(47);
    for (int i = 0; i < 10; ++i) {
      w.bracket = std::max(w.bracket, bracket_residual(sys, rng));
      const Point q = sample_point(sys, rng);
      const WagnerResult r = wagner_tensor(sys, q);
      for (int level = 0; level < r.degree; ++level) {
        w.projector = std::max(w.projector, projector_residuals(r.frame, level).max());
      }
      w.torsion = std::max(w.torsion, torsion_residual(r.connection));
      w.compat = std::max(w.compat, metric_compatibility_residual(r.frame, r.connection));
      w.slots = std::max({w.slots, slot_antisymmetry_residual(r.schouten_block),
                          slot_antisymmetry_residual(r.wagner)});
      const WagnerResult r2 = wagner_tensor(scaled, q);
      const Eigen::MatrixXd A = frame_change(r.frame, r2.frame);
      const double scale = std::max(1.0, r.wagner.max_abs());
      w.covariance = std::max({w.covariance,
                               frame_change_residual(r.schouten_block, r2.schouten_block, A) / scale,
                               frame_change_residual(r.wagner, r2.wagner, A) / scale});
      if (i < 2) w.fd = std::max(w.fd, jet_fd_residual(sys, q));
    }
  }
  const bool pass = w.bracket < 1e-10 && w.projector < 1e-10 && w.torsion < 1e-10 &&
                    w.compat < 1e-9 && w.slots == 0.0 && w.covariance < 1e-8 && w.fd < 1e-6;
  std::ostringstream d;
  d.precision(1);
  d << std::scientific << "bracket " << w.bracket << ", projector " << w.projector << ", torsion "
    << w.torsion << ", compatibility " << w.compat << ", slots " << w.slots << ", covariance "
    << w.covariance << ", jet-vs-fd " << w.fd;
  return {pass, d.str()};
}

Verdict c10() {
  const auto sys = load_system("disc");
  const State s0{{0.1, -0.2, 0.3, 0.4, 1.2}, {0.7, -0.4, 0.5}};
  const Trajectory tr = integrate_trajectory(sys, s0, 10.0, 1e-3, 1000);
  auto err = [](const State& a, const State& b) {
    double e = 0.0;
    for (std::size_t i = 0; i < a.q.size(); ++i) e = std::max(e, std::abs(a.q[i] - b.q[i]));
    for (std::size_t i = 0; i < a.u.size(); ++i) e = std::max(e, std::abs(a.u[i] - b.u[i]));
    return e;
  };
  const State ref = integrate_trajectory(sys, s0, 2.0, 0.0025).final_state;
  const double e1 = err(integrate_trajectory(sys, s0, 2.0, 0.04).final_state, ref);
  const double e2 = err(integrate_trajectory(sys, s0, 2.0, 0.02).final_state, ref);
  const double ratio = e1 / e2;
  return {tr.max_energy_drift < 1e-8 && tr.max_residual < 1e-12 && ratio >= 12 && ratio <= 20,
          "energy drift " + fmt("%.1e", tr.max_energy_drift) + ", constraint residual " +
              fmt("%.1e", tr.max_residual) + ", halving ratio " + fmt("%.2f", ratio)};
}

Verdict c11() {
  const VerifyReport rep = app::run_verify(load_system("heisenberg"), {});
  const auto* s = rep.find("oracle schouten");
  const auto* w = rep.find("oracle wagner");
  if (!s || !w) return {false, "oracle checks missing"};
  return {s->status == Status::pass && w->status == Status::pass,
          std::to_string(s->evaluations + w->evaluations) + " components, max abs err " +
              fmt("%.1e", std::max(s->max_abs_error, w->max_abs_error))};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> expect_red;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--expect-red") == 0 && i + 1 < argc) {
      std::istringstream in(argv[++i]);
      std::string item;
      while (std::getline(in, item, ',')) expect_red.insert(std::stoi(item));
    } else {
      std::fprintf(stderr, "usage: acceptance [--expect-red N,...]\n");
      return 2;
    }
  }

  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"disc flag (3,4,5), degree 2", c1},
      {"ball flag (3,5), degree 1", c2},
      {"disc connection suite", c3},
      {"disc Schouten suite", c4},
      {"disc Wagner suite", c5},
      {"ball suite", c6},
      {"ball non-flat for every k", c7},
      {"projected connection cross-oracle", c8},
      {"property suites", c9},
      {"mechanics monitors and convergence", c10},
      {"Heisenberg oracle", c11},
  };

  std::set<int> red;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!v.pass) red.insert(id);
    std::printf("criterion %2d %s  %s [%.2f s]: %s\n", id, v.pass ? "PASS" : "FAIL", criteria[i].first,
                s, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria pass\n", criteria.size() - red.size(), criteria.size());
  if (argc > 1) {
    if (red != expect_red) {
      std::printf("red set differs from the expected one\n");
      return 1;
    }
    return 0;
  }
  return red.empty() ? 0 : 1;
}
