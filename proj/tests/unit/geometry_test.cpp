#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nhcurv/catalog.hpp"
#include "nhcurv/errors.hpp"
#include "nhcurv/geometry.hpp"
#include "nhcurv/invariants.hpp"

namespace nhcurv {
namespace {

constexpr const char* kPlane = R"(
[chart]
x y z
[metric]
1 1 = 1
2 2 = 1
3 3 = 1
[frame]
1 = 1, 0, 0
2 = 0, 1, 0
3 = 0, 0, 1
[levels]
2 3
)";

constexpr const char* kFull = R"(
[chart]
x y
[metric]
1 1 = 1
2 2 = 1
[frame]
1 = 1, 0
2 = 0, 1
[levels]
2
)";

double max_abs(const JetVector& v) {
  double m = 0.0;
  for (const auto& c : v) m = std::max(m, std::abs(c.value()));
  return m;
}

JetVector combine(const JetVector& a, double s, const JetVector& b) {
  JetVector r;
  for (std::size_t i = 0; i < a.size(); ++i) r.push_back(a[i] + s * b[i]);
  return r;
}

TEST(Bracket, SelfBracketVanishes) {
  const auto sys = load_system("disc");
  const FrameEval fe = evaluate_frame(sys, {0.1, 0.2, 0.3, 0.4, 1.0}, 2);
  for (std::size_t a = 0; a < fe.dim(); ++a) {
    EXPECT_LT(max_abs(lie_bracket(fe.B[a], fe.B[a])), 1e-15);
  }
}

TEST(Bracket, HeisenbergGeneratesVertical) {
  const auto sys = load_system("heisenberg");
  const FrameEval fe = evaluate_frame(sys, {0.7, -1.3, 0.4}, 2);
  const JetVector z = lie_bracket(fe.B[0], fe.B[1]);
  EXPECT_NEAR(z[0].value(), 0.0, 1e-15);
  EXPECT_NEAR(z[1].value(), 0.0, 1e-15);
  EXPECT_NEAR(z[2].value(), 1.0, 1e-15);
}

TEST(Bracket, DiscE2E3) {
  const auto sys = load_system("disc");
  for (double theta : {0.5, 1.0, 2.2}) {
    const FrameEval fe = evaluate_frame(sys, {0.3, -0.1, 0.8, -0.6, theta}, 2);
    const JetVector br = lie_bracket(fe.B[1], fe.B[2]);
    for (std::size_t i = 0; i < 5; ++i) {
      EXPECT_NEAR(br[i].value(), -std::sin(theta) * fe.B[0][i].value(), 1e-13);
    }
  }
}

class CatalogFrames : public ::testing::TestWithParam<const char*> {};

TEST_P(CatalogFrames, AntisymmetryAndJacobi) {
  const auto sys = load_system(GetParam());
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const FrameEval fe = evaluate_frame(sys, sample_point(sys, rng), 3);
    const std::size_t n = fe.dim();
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    const auto& X = fe.B[pick(rng)];
    const auto& Y = fe.B[pick(rng)];
    const auto& Z = fe.B[pick(rng)];
    EXPECT_LT(max_abs(combine(lie_bracket(X, Y), 1.0, lie_bracket(Y, X))), 1e-10);
    const JetVector jac = combine(
        combine(lie_bracket(X, lie_bracket(Y, Z)), 1.0, lie_bracket(Y, lie_bracket(Z, X))), 1.0,
        lie_bracket(Z, lie_bracket(X, Y)));
    EXPECT_LT(max_abs(jac), 1e-10);
  }
}

TEST_P(CatalogFrames, Leibniz) {
  const auto sys = load_system(GetParam());
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 5; ++trial) {
    const Point q = sample_point(sys, rng);
    const FrameEval fe = evaluate_frame(sys, q, 3);
    JetSpace space(q, 3);
    const Jet f = sin(space.variable(0)) * space.variable(1) + space.variable(2) * space.variable(2);
    const auto& X = fe.B[trial % fe.dim()];
    const auto& Y = fe.B[(trial + 1) % fe.dim()];
    JetVector fX;
    for (const auto& c : X) fX.push_back(f * c);
    const JetVector lhs = lie_bracket(fX, Y);
    const JetVector xy = lie_bracket(X, Y);
    const Jet yf = apply_field(Y, f);
    JetVector rhs;
    for (std::size_t i = 0; i < X.size(); ++i) rhs.push_back(f * xy[i] - yf * X[i]);
    EXPECT_LT(max_abs(combine(lhs, -1.0, rhs)), 1e-10);
  }
}

TEST_P(CatalogFrames, ProjectorsAtEveryLevel) {
  const auto sys = load_system(GetParam());
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const FrameEval fe = evaluate_frame(sys, sample_point(sys, rng), 1);
    for (int level = 0; level < fe.degree(); ++level) {
      const auto r = projector_residuals(fe, level);
      EXPECT_LT(r.max(), 1e-10) << "level " << level;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Systems, CatalogFrames,
                         ::testing::Values("disc", "ball-sphere", "heisenberg"));

TEST(FrameDerivative, DiscExamples) {
  const auto sys = load_system("disc");
  const Point q{0.0, 0.0, 0.2, 0.3, 0.9};
  const FrameEval fe = evaluate_frame(sys, q, 2);
  JetSpace space(q, 2);
  const double A = 1.0, R = 1.0;
  const Jet theta = space.variable(4);
  const Jet g33 = A + R * R * cos(theta) * cos(theta);
  EXPECT_NEAR(frame_derivative(fe, 2, g33).value(), -2 * R * R * std::cos(0.9) * std::sin(0.9), 1e-14);
  const Jet g22 = A * sin(theta) * sin(theta);
  EXPECT_NEAR(frame_derivative(fe, 1, g22).value(), 0.0, 1e-15);
  EXPECT_NEAR(frame_derivative(fe, 0, space.constant(4.0)).value(), 0.0, 0.0);
}

TEST(InducedMetric, Disc) {
  const auto sys = load_system("disc").with_param("A", 1.5).with_param("C", 0.7).with_param("R", 1.3);
  const double th = 1.1;
  const FrameEval fe = evaluate_frame(sys, {0.1, 0.2, 0.3, 0.4, th}, 1);
  const Eigen::MatrixXd g = values(induced_metric(fe, 0));
  EXPECT_NEAR(g(0, 0), 1.3 * 1.3 + 0.7, 1e-13);
  EXPECT_NEAR(g(1, 1), 1.5 * std::sin(th) * std::sin(th), 1e-13);
  EXPECT_NEAR(g(2, 2), 1.5 + 1.3 * 1.3, 1e-13);
  EXPECT_NEAR(g(0, 1), 0.0, 1e-13);
  EXPECT_NEAR(g(0, 2), 0.0, 1e-13);
  EXPECT_NEAR(g(1, 2), 0.0, 1e-13);
}

TEST(InducedMetric, OrthonormalFrameIsIdentity) {
  const auto sys = parse_system(kPlane, "plane");
  const FrameEval fe = evaluate_frame(sys, {0.1, 0.2, 0.3}, 1);
  EXPECT_TRUE(values(induced_metric(fe, 1)).isIdentity(1e-15));
}

TEST(Projectors, DiscEntries) {
  const double A = 1.5, C = 0.7, R = 1.3, phi = 0.4, th = 1.1;
  const auto sys = load_system("disc").with_param("A", A).with_param("C", C).with_param("R", R);
  const FrameEval fe = evaluate_frame(sys, {0.1, 0.2, phi, 0.3, th}, 1);
  const ProjectorPair pq = orthogonal_projectors(fe, 0);
  EXPECT_NEAR(pq.p_cols(0, 0), R * std::cos(phi) / (C + R * R), 1e-13);
  EXPECT_NEAR(pq.q_cols(4, 0), R * std::sin(th) / (A + R * R), 1e-13);
}

TEST(Projectors, CoordinatePlane) {
  const auto sys = parse_system(kPlane, "plane");
  const FrameEval fe = evaluate_frame(sys, {0.1, 0.2, 0.3}, 1);
  const ProjectorPair pq = orthogonal_projectors(fe, 0);
  Eigen::MatrixXd want = Eigen::MatrixXd::Zero(3, 3);
  want(0, 0) = want(1, 1) = 1.0;
  EXPECT_TRUE(pq.p.isApprox(want, 1e-15));
  EXPECT_TRUE((pq.p + pq.q).isIdentity(1e-15));
}

TEST(Flag, DiscAndBallAtRandomPoints) {
  const auto disc = load_system("disc");
  const auto ball = load_system("ball-sphere");
  std::mt19937_64 rng(21);
  for (int i = 0; i < 50; ++i) {
    const auto fd = flag_at_point(disc, sample_point(disc, rng));
    EXPECT_EQ(fd.dims, (std::vector<std::size_t>{3, 4, 5}));
    EXPECT_EQ(fd.degree, 2);
    const auto fb = flag_at_point(ball, sample_point(ball, rng));
    EXPECT_EQ(fb.dims, (std::vector<std::size_t>{3, 5}));
    EXPECT_EQ(fb.degree, 1);
  }
}

TEST(Flag, DiscAtPiOverThree) {
  const auto f = flag_at_point(load_system("disc"), {0.0, 0.0, 0.1, 0.2, std::numbers::pi / 3});
  EXPECT_EQ(f.dims, (std::vector<std::size_t>{3, 4, 5}));
  EXPECT_EQ(f.degree, 2);
}

TEST(Flag, FullFrameHasDegreeZero) {
  const auto f = flag_at_point(parse_system(kFull, "full"), {0.0, 0.0});
  EXPECT_EQ(f.dims, (std::vector<std::size_t>{2}));
  EXPECT_EQ(f.degree, 0);
}

TEST(Flag, IntegrableDistributionRejected) {
  const auto sys = parse_system(kPlane, "plane");
  EXPECT_THROW(flag_at_point(sys, {0.0, 0.0, 0.0}), Error);
}

TEST(Frame, SingularPointRejected) {
  const auto sys = load_system("disc");
  try {
    evaluate_frame(sys, {0.0, 0.0, 0.0, 0.0, 0.0}, 1);
    FAIL() << "expected a singular-point error";
  } catch (const Error& e) {
    EXPECT_EQ(exit_status(e.kind()), 3);
  }
}

}  // namespace
}  // namespace nhcurv
