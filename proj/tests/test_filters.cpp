#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <vector>

#include "tiltfuse/filters.hpp"
#include "tiltfuse/numeric.hpp"

using namespace tiltfuse;

namespace {

std::vector<CorrectedSample> random_stream(std::uint64_t seed, std::size_t n, double dt) {
  GaussianSource g(seed);
  std::vector<CorrectedSample> s(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * dt;
    s[k].t = t;
    s[k].phi_bar = 5.0 * std::sin(3.0 * t) + g.normal(0.5);
    s[k].rate_bar = 15.0 * std::cos(3.0 * t) + g.normal(0.3);
    s[k].rate_raw = s[k].rate_bar - 1.91195;
    s[k].phi_raw = s[k].phi_bar + g.normal(1.0);
  }
  return s;
}

// Prediction/correction equations written out per variant, state as plain doubles.
std::vector<double> two_phase(Variant v, const FilterParams& p, double dt, const std::vector<CorrectedSample>& s,
                              double gyro_bias) {
  auto P = [&](const char* n) { return p.at(n); };
  double x0 = s[0].phi_raw, x1 = 0.0, x2 = 0.0;
  if (v == Variant::WB) x1 = gyro_bias;
  else if (v != Variant::COMPLEMENTARY) x1 = s[0].rate_bar;
  std::vector<double> out{x0};
  for (std::size_t k = 1; k < s.size(); ++k) {
    const double yb = s[k].phi_bar, wb = s[k].rate_bar;
    switch (v) {
      case Variant::WOB: {
        const double pp = x0 + x1 * dt, pv = x1;
        x0 = pp + P("alpha") * (yb - pp);
        x1 = pv + P("beta") * (wb - pv);
        break;
      }
      case Variant::ABTG: {
        const double pp = x0 + dt * x1, pv = x1;
        x0 = pp + P("alpha") * (yb - pp) + P("theta") * dt * (wb - pv);
        x1 = pv + P("beta") / dt * (yb - pp) + P("gamma") * (wb - pv);
        break;
      }
      case Variant::WB: {
        const double pp = x0 + (s[k - 1].rate_raw - x1) * dt, pb = x1;
        x0 = pp + P("alpha") * (yb - pp);
        x1 = pb + P("beta") * (yb - pp);
        break;
      }
      case Variant::WA_A:
      case Variant::WA_B: {
        const double pp = x0 + dt * x1 + dt * dt / 2.0 * x2, pv = x1 + dt * x2, pa = x2;
        x0 = pp + P("alpha") * (yb - pp);
        x1 = pv + P("beta") * (wb - pv);
        x2 = v == Variant::WA_A ? pa + P("theta") / (dt * dt) * (yb - pp) : pa + P("theta") / dt * (wb - pv);
        break;
      }
      case Variant::COMPLEMENTARY: {
        const double T = P("T_c");
        x0 = T / (T + dt) * (x0 + dt * wb) + dt / (T + dt) * yb;
        break;
      }
      default: break;
    }
    out.push_back(x0);
  }
  return out;
}

// Textbook Kalman with a Joseph-form covariance update, no Eigen.
std::vector<double> textbook_kalman(double q1, double q2, double r, double dt, const std::vector<CorrectedSample>& s,
                                    double P0[2][2]) {
  double x[2] = {s[0].phi_raw, 0.0};
  double P[2][2] = {{P0[0][0], P0[0][1]}, {P0[1][0], P0[1][1]}};
  std::vector<double> out{x[0]};
  for (std::size_t k = 1; k < s.size(); ++k) {
    const double u = s[k - 1].rate_bar;
    const double xp0 = x[0] - dt * x[1] + dt * u, xp1 = x[1];
    // A P A^T with A = [[1, -dt], [0, 1]]
    double Pp[2][2];
    Pp[0][0] = P[0][0] - dt * (P[1][0] + P[0][1]) + dt * dt * P[1][1] + q1 * dt;
    Pp[0][1] = P[0][1] - dt * P[1][1];
    Pp[1][0] = P[1][0] - dt * P[1][1];
    Pp[1][1] = P[1][1] + q2;
    const double S = Pp[0][0] + r;
    const double K0 = Pp[0][0] / S, K1 = Pp[1][0] / S;
    const double innov = s[k].phi_bar - xp0;
    x[0] = xp0 + K0 * innov;
    x[1] = xp1 + K1 * innov;
    // (I - KC) Pp (I - KC)^T + K r K^T
    const double IKC[2][2] = {{1.0 - K0, 0.0}, {-K1, 1.0}};
    double T1[2][2];
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) T1[i][j] = IKC[i][0] * Pp[0][j] + IKC[i][1] * Pp[1][j];
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const double Kv[2] = {K0, K1};
        P[i][j] = T1[i][0] * IKC[j][0] + T1[i][1] * IKC[j][1] + Kv[i] * r * Kv[j];
      }
    out.push_back(x[0]);
  }
  return out;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::fabs(a[k] - b[k]));
  return m;
}

FilterParams row(Variant v, double dt_ms) {
  for (const auto& r : published_tunings())
    if (r.variant == v && r.dt_ms == dt_ms) return r.params;
  return {};
}

}  // namespace

TEST(Variant, NamesRoundTrip) {
  for (const Variant v : kAllVariants) EXPECT_EQ(parse_variant(variant_name(v)), v);
  EXPECT_EQ(parse_variant("kalman-star"), Variant::KALMAN_STAR);
  EXPECT_THROW(parse_variant("lqr"), ConfigError);
}

TEST(MakeFilter, WbMatricesFromPublishedRow) {
  const auto s = make_filter(Variant::WB, {{"alpha", 0.00185}, {"beta", -0.00018}}, 0.002);
  EXPECT_TRUE(s.A.isApprox(Mat{{1.0, -0.002}, {0.0, 1.0}}));
  EXPECT_TRUE(s.B.isApprox(Mat{{0.002}, {0.0}}));
  EXPECT_TRUE(s.C.isApprox(Mat{{1.0, 0.0}}));
  EXPECT_EQ(s.K(0, 0), 0.00185);
  EXPECT_EQ(s.K(1, 0), -0.00018);
  EXPECT_FALSE(s.input_current);
}

TEST(MakeFilter, ComplementaryCoefficients) {
  const double tc = 1.06895, dt = 0.002;
  const auto s = make_filter(Variant::COMPLEMENTARY, {{"T_c", tc}}, dt);
  EXPECT_DOUBLE_EQ(s.A(0, 0), tc / (dt + tc));
  EXPECT_DOUBLE_EQ(s.B(0, 0), dt / (dt + tc));
  EXPECT_DOUBLE_EQ(s.B(0, 1), tc * dt / (dt + tc));
  EXPECT_EQ(s.C(0, 0), 0.0);
  EXPECT_EQ(s.K(0, 0), 0.0);
  EXPECT_TRUE(s.input_current);
}

TEST(MakeFilter, ComplementaryCoefficientIdentity) {
  GaussianSource g(5);
  for (int i = 0; i < 1000; ++i) {
    const double dt = 0.001 + 0.05 * g.uniform();
    const double tc = -0.9 * dt + 20.0 * g.uniform();
    const auto s = make_filter(Variant::COMPLEMENTARY, {{"T_c", tc}}, dt);
    EXPECT_NEAR(s.A(0, 0) + s.B(0, 0), 1.0, 1e-12);
  }
}

TEST(MakeFilter, WobZeroGainsIsPurePrediction) {
  const auto s = make_filter(Variant::WOB, {{"alpha", 0.0}, {"beta", 0.0}}, 0.01);
  EXPECT_TRUE(s.K.isZero(0.0));
  FilterState st{Vec{{0.0, 10.0}}};
  const auto n = filter_step(s, st, Vec(0), Vec{{123.0, -4.0}});
  EXPECT_NEAR(n.x(0), 0.1, 1e-15);
  EXPECT_EQ(n.x(1), 10.0);
}

TEST(MakeFilter, WaVariantsDifferOnlyInThirdGainRow) {
  const FilterParams p{{"alpha", 0.1}, {"beta", 0.2}, {"theta", 0.3}};
  const auto a = make_filter(Variant::WA_A, p, 0.01);
  const auto b = make_filter(Variant::WA_B, p, 0.01);
  EXPECT_TRUE(a.K.topRows(2).isApprox(b.K.topRows(2)));
  EXPECT_NEAR(a.K(2, 0), 0.3 / 1e-4, 1e-9);
  EXPECT_NEAR(b.K(2, 1), 0.3 / 0.01, 1e-12);
  EXPECT_TRUE(a.A.isApprox(b.A));
}

TEST(MakeFilter, AbtgScalesGainsByDt) {
  const auto s = make_filter(Variant::ABTG, {{"alpha", 0.1}, {"beta", 0.2}, {"theta", 0.3}, {"gamma", 0.4}}, 0.02);
  EXPECT_NEAR(s.K(0, 1), 0.3 * 0.02, 1e-15);
  EXPECT_NEAR(s.K(1, 0), 0.2 / 0.02, 1e-12);
}

TEST(MakeFilter, RejectsMissingOrExtraParameters) {
  try {
    make_filter(Variant::WB, {{"alpha", 0.1}}, 0.01);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("beta"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("wb"), std::string::npos);
  }
  EXPECT_THROW(make_filter(Variant::WOB, {{"alpha", 0.1}, {"beta", 0.1}, {"gamma", 1.0}}, 0.01), ConfigError);
  EXPECT_THROW(make_filter(Variant::COMPLEMENTARY, {{"T_c", -0.02}}, 0.01), ConfigError);
  EXPECT_THROW(make_filter(Variant::KALMAN, {{"q1", -1.0}, {"q2", 0.0}, {"r", 1.0}}, 0.01), ConfigError);
  EXPECT_THROW(make_filter(Variant::WB, {{"alpha", 0.1}, {"beta", 0.1}}, 0.0), ConfigError);
}

TEST(FilterStep, DimensionMismatchIsContractViolation) {
  const auto s = make_filter(Variant::WB, {{"alpha", 0.1}, {"beta", 0.1}}, 0.01);
  EXPECT_THROW(filter_step(s, FilterState{Vec{{0.0, 0.0, 0.0}}}, Vec{{1.0}}, Vec{{1.0}}), InvalidStateError);
  EXPECT_THROW(filter_step(s, FilterState{Vec{{0.0, 0.0}}}, Vec(0), Vec{{1.0}}), InvalidStateError);
}

TEST(FilterStep, WbHandExample) {
  const auto s = make_filter(Variant::WB, {{"alpha", 0.00185}, {"beta", -0.00018}}, 0.002);
  const auto n = filter_step(s, FilterState{Vec{{0.0, 0.0}}}, Vec{{10.0}}, Vec{{0.02}});
  EXPECT_NEAR(n.x(0), 0.02, 1e-15);
  EXPECT_NEAR(n.x(1), 0.0, 1e-15);
}

TEST(FilterStep, ComplementaryZeroTcIsPassThrough) {
  const auto s = make_filter(Variant::COMPLEMENTARY, {{"T_c", 0.0}}, 0.01);
  const auto stream = random_stream(3, 500, 0.01);
  const auto est = run_filter(s, stream, 0.0);
  for (std::size_t k = 1; k < est.size(); ++k) EXPECT_EQ(est[k], stream[k].phi_bar);
}

class UnifiedFormMatchesTwoPhase : public ::testing::TestWithParam<std::pair<Variant, double>> {};

TEST_P(UnifiedFormMatchesTwoPhase, Over1000Steps) {
  const auto [v, dt_ms] = GetParam();
  const double dt = dt_ms / 1000.0;
  const auto p = row(v, dt_ms);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto stream = random_stream(seed, 1000, dt);
    const auto unified = run_filter(make_filter(v, p, dt), stream, -1.91195);
    const auto oracle = two_phase(v, p, dt, stream, -1.91195);
    double scale = 1.0;
    for (double x : oracle) scale = std::max(scale, std::fabs(x));
    EXPECT_LE(max_abs_diff(unified, oracle), 1e-12 * scale) << variant_name(v) << " " << dt_ms;
  }
}

INSTANTIATE_TEST_SUITE_P(
    PublishedRows, UnifiedFormMatchesTwoPhase,
    ::testing::Values(std::pair{Variant::WOB, 2.0}, std::pair{Variant::WOB, 20.0}, std::pair{Variant::WB, 2.0},
                      std::pair{Variant::WB, 10.0}, std::pair{Variant::ABTG, 2.0}, std::pair{Variant::ABTG, 20.0},
                      std::pair{Variant::WA_A, 5.0}, std::pair{Variant::WA_B, 2.0}, std::pair{Variant::WA_B, 20.0},
                      std::pair{Variant::COMPLEMENTARY, 2.0}, std::pair{Variant::COMPLEMENTARY, 10.0}));

TEST(VariantAlgebra, WobEqualsAbtgWithRateGainInGamma) {
  const double dt = 0.005;
  const double a = 0.02, b = 0.3;
  const auto wob = make_filter(Variant::WOB, {{"alpha", a}, {"beta", b}}, dt);
  const auto abtg = make_filter(Variant::ABTG, {{"alpha", a}, {"beta", 0.0}, {"theta", 0.0}, {"gamma", b}}, dt);
  const auto s = random_stream(9, 1000, dt);
  EXPECT_LE(max_abs_diff(run_filter(wob, s, 0.0), run_filter(abtg, s, 0.0)), 1e-12);
}

TEST(VariantAlgebra, WobDiffersFromAbtgWithZeroThetaGamma) {
  const double dt = 0.005;
  const auto wob = make_filter(Variant::WOB, {{"alpha", 0.02}, {"beta", 0.3}}, dt);
  const auto abtg = make_filter(Variant::ABTG, {{"alpha", 0.02}, {"beta", 0.3}, {"theta", 0.0}, {"gamma", 0.0}}, dt);
  const auto s = random_stream(9, 1000, dt);
  EXPECT_GT(max_abs_diff(run_filter(wob, s, 0.0), run_filter(abtg, s, 0.0)), 1e-3);
}

TEST(VariantAlgebra, WaAEqualsWaBWhenThetaZero) {
  const double dt = 0.01;
  const FilterParams p{{"alpha", 0.05}, {"beta", 0.4}, {"theta", 0.0}};
  const auto s = random_stream(4, 1000, dt);
  EXPECT_LE(max_abs_diff(run_filter(make_filter(Variant::WA_A, p, dt), s, 0.0),
                         run_filter(make_filter(Variant::WA_B, p, dt), s, 0.0)),
            1e-12);
}

TEST(Kalman, MatchesTextbookOracle) {
  const double dt = 0.002;
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    const auto s = random_stream(seed, 1000, dt);
    const FilterParams p{{"q1", 0.01076}, {"q2", 0.0}, {"r", 0.02792}, {"init_alpha", 0.00185}, {"init_beta", -0.00018}};
    const auto spec = make_filter(Variant::KALMAN, p, dt);
    const auto est = run_filter(spec, s, 0.0);
    const Eigen::Matrix2d P0 = kalman_init_P(0.00185, -0.00018, kalman_process_covariance(0.01076, 0.0, dt), 0.02792, dt);
    double P0a[2][2] = {{P0(0, 0), P0(0, 1)}, {P0(1, 0), P0(1, 1)}};
    EXPECT_LE(max_abs_diff(est, textbook_kalman(0.01076, 0.0, 0.02792, dt, s, P0a)), 1e-9);
  }
}

TEST(Kalman, CovarianceStaysPsdAndGainBounded) {
  const double dt = 0.01;
  const auto s = random_stream(21, 3000, dt);
  KalmanState ks;
  ks.x = Eigen::Vector2d(s[0].phi_raw, 0.0);
  ks.Q = kalman_process_covariance(0.01076, 0.0, dt);
  ks.r = 0.02792;
  ks.P = Eigen::Matrix2d::Identity() * 5.0;
  for (std::size_t k = 1; k < s.size(); ++k) {
    ks = kalman_step(ks, s[k - 1].rate_bar, s[k].phi_bar, dt);
    EXPECT_EQ(ks.P(0, 1), ks.P(1, 0));
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(ks.P);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12);
    EXPECT_GE(ks.K(0), 0.0);
    EXPECT_LE(ks.K(0), 1.0);
  }
}

TEST(Kalman, HugeMeasurementNoiseFollowsPrediction) {
  KalmanState ks;
  ks.r = 1e12;
  ks.P = Eigen::Matrix2d::Identity() * 1e-3;
  ks.x = Eigen::Vector2d(1.0, 0.5);
  const auto n = kalman_step(ks, 10.0, 500.0, 0.01);
  EXPECT_NEAR(n.x(0), 1.0 + 0.01 * (10.0 - 0.5), 1e-9);
  EXPECT_LT(n.K.norm(), 1e-14);
}

TEST(Kalman, SingularInnovation) {
  KalmanState ks;
  EXPECT_THROW(kalman_step(ks, 0.0, 1.0, 0.01), SingularInnovationError);
}

TEST(KalmanInit, FirstGainEqualsRequested) {
  const double dt = 0.002;
  const auto Q = kalman_process_covariance(0.01076, 0.0, dt);
  const Eigen::Matrix2d P0 = kalman_init_P(0.00185, -0.00018, Q, 0.02792, dt);
  KalmanState ks;
  ks.P = P0;
  ks.Q = Q;
  ks.r = 0.02792;
  const auto n = kalman_step(ks, 0.0, 0.0, dt);
  EXPECT_NEAR(n.K(0), 0.00185, 1e-12);
  EXPECT_NEAR(n.K(1), -0.00018, 1e-12);
  EXPECT_EQ(P0(0, 1), P0(1, 0));
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(P0);
  EXPECT_GE(es.eigenvalues().minCoeff(), 0.0);
}

TEST(KalmanInit, ZeroGainsZeroQ) {
  EXPECT_TRUE(kalman_init_P(0.0, 0.0, Eigen::Matrix2d::Zero(), 0.5, 0.01).isZero(0.0));
}

TEST(KalmanInit, InfeasibleGainThrows) {
  const auto Q = kalman_process_covariance(100.0, 0.0, 0.01);
  EXPECT_THROW(kalman_init_P(0.001, 0.0, Q, 0.01, 0.01), InitializationError);
  EXPECT_THROW(kalman_init_P(1.5, 0.0, Q, 0.01, 0.01), InitializationError);
}

TEST(Stability, IdentityGainGivesZeroMatrix) {
  FilterSpec s = make_filter(Variant::WOB, {{"alpha", 1.0}, {"beta", 1.0}}, 0.01);
  const auto rep = check_stability(s);
  EXPECT_EQ(rep.status, Stability::Stable);
  EXPECT_NEAR(rep.spectral_radius, 0.0, 1e-15);
}

TEST(Stability, WbPublishedTwoMsIsStable) {
  const auto rep = check_stability(make_filter(Variant::WB, {{"alpha", 0.00185}, {"beta", -0.00018}}, 0.002));
  EXPECT_EQ(rep.status, Stability::Stable);
  for (double m : rep.magnitudes) EXPECT_LT(m, 1.0);
}

TEST(Stability, WbZeroBetaIsMarginal) {
  const auto rep = check_stability(make_filter(Variant::WB, {{"alpha", 0.0008}, {"beta", 0.0}}, 0.01));
  EXPECT_EQ(rep.status, Stability::Marginal);
  EXPECT_NEAR(rep.spectral_radius, 1.0, 1e-12);
}

TEST(Stability, ClosedFormMatchesEigenSolver) {
  GaussianSource g(8);
  for (int n = 1; n <= 3; ++n)
    for (int trial = 0; trial < 300; ++trial) {
      Mat F(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) F(i, j) = g.normal(1.0);
      auto mine = closed_form_eigenvalues(F);
      Eigen::MatrixXd D = F;
      Eigen::EigenSolver<Eigen::MatrixXd> es(D);
      std::vector<double> a, b;
      for (const auto& l : mine) a.push_back(std::abs(l));
      for (int i = 0; i < n; ++i) b.push_back(std::abs(es.eigenvalues()(i)));
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      for (int i = 0; i < n; ++i) EXPECT_NEAR(a[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(i)], 1e-8);
    }
}

TEST(Stability, PublishedRowsMatchEigenSolver) {
  for (const auto& r : published_tunings()) {
    if (is_kalman(r.variant)) continue;
    const auto spec = make_filter(r.variant, r.params, r.dt_ms / 1000.0);
    const auto rep = check_stability(spec);
    Eigen::MatrixXd F = spec.F;
    Eigen::EigenSolver<Eigen::MatrixXd> es(F);
    double rho = 0.0;
    for (int i = 0; i < F.rows(); ++i) rho = std::max(rho, std::abs(es.eigenvalues()(i)));
    EXPECT_NEAR(rep.spectral_radius, rho, 1e-9) << variant_name(r.variant) << " " << r.dt_ms;
  }
}

TEST(RunFilter, ConvergesToConstantTruth) {
  const double dt = 0.01, truth = 4.0;
  const std::vector<std::pair<Variant, FilterParams>> cases = {
      {Variant::WOB, {{"alpha", 0.2}, {"beta", 0.3}}},
      {Variant::WB, {{"alpha", 0.2}, {"beta", -0.5}}},
      {Variant::ABTG, {{"alpha", 0.2}, {"beta", 0.01}, {"theta", 0.1}, {"gamma", 0.3}}},
      {Variant::WA_A, {{"alpha", 0.2}, {"beta", 0.3}, {"theta", 0.001}}},
      {Variant::WA_B, {{"alpha", 0.2}, {"beta", 0.3}, {"theta", 0.01}}},
      {Variant::COMPLEMENTARY, {{"T_c", 0.1}}},
  };
  std::vector<CorrectedSample> s(3000);
  for (auto& c : s) {
    c.phi_bar = truth;
    c.rate_raw = -1.91195;
    c.phi_raw = truth + 3.0;
  }
  for (const auto& [v, p] : cases) {
    const auto spec = make_filter(v, p, dt);
    ASSERT_EQ(check_stability(spec).status, Stability::Stable) << variant_name(v);
    const auto est = run_filter(spec, s, -1.91195);
    EXPECT_NEAR(est.back(), truth, 1e-9) << variant_name(v);
    EXPECT_LT(std::fabs(est[1000] - truth), std::fabs(est[10] - truth)) << variant_name(v);
  }
}

TEST(RunFilter, ComplementaryReducesNoiseVariance) {
  const double dt = 0.01;
  GaussianSource g(77);
  std::vector<CorrectedSample> s(20000);
  for (auto& c : s) {
    c.phi_bar = g.normal(1.0);
    c.rate_bar = 0.0;
  }
  const auto est = run_filter(make_filter(Variant::COMPLEMENTARY, {{"T_c", 0.2}}, dt), s, 0.0);
  std::vector<double> in;
  for (const auto& c : s) in.push_back(c.phi_bar);
  auto var = [](const std::vector<double>& v) {
    const double m = compensated_mean(v);
    KahanSum sum;
    for (double x : v) sum.add((x - m) * (x - m));
    return sum.value() / static_cast<double>(v.size());
  };
  EXPECT_LT(var(est), var(in));
}

TEST(RunFilter, BoundedInputBoundedOutputForStableRows) {
  GaussianSource g(31);
  for (const auto& r : published_tunings()) {
    if (is_kalman(r.variant)) continue;
    const double dt = r.dt_ms / 1000.0;
    const auto spec = make_filter(r.variant, r.params, dt);
    if (check_stability(spec).status != Stability::Stable) continue;
    std::vector<CorrectedSample> s(5000);
    for (auto& c : s) {
      c.phi_bar = 20.0 * (2.0 * g.uniform() - 1.0);
      c.rate_bar = 100.0 * (2.0 * g.uniform() - 1.0);
      c.rate_raw = c.rate_bar;
      c.phi_raw = c.phi_bar;
    }
    for (double x : run_filter(spec, s, 0.0)) ASSERT_LT(std::fabs(x), 1e5) << variant_name(r.variant);
  }
}

TEST(RunFilter, InitialStateConvention) {
  CorrectedSample first;
  first.phi_raw = 7.0;
  first.phi_bar = 6.0;
  first.rate_bar = 3.0;
  for (const auto& r : published_tunings()) {
    if (r.dt_ms != 10.0) continue;
    const auto spec = make_filter(r.variant, r.params, 0.01);
    const auto x = initial_state(spec, first, -1.91195).x;
    EXPECT_EQ(x(0), 7.0) << variant_name(r.variant);
    if (r.variant == Variant::WB) EXPECT_EQ(x(1), -1.91195);
    if (is_kalman(r.variant)) EXPECT_EQ(x(1), 0.0);
    if (r.variant == Variant::WOB || r.variant == Variant::ABTG || r.variant == Variant::WA_A) EXPECT_EQ(x(1), 3.0);
    if (r.variant == Variant::WA_A || r.variant == Variant::WA_B) EXPECT_EQ(x(2), 0.0);
  }
}

TEST(RunFilter, StepErrorCarriesSampleIndex) {
  std::vector<CorrectedSample> s(10);
  const auto spec = make_filter(Variant::KALMAN, {{"q1", 0.0}, {"q2", 0.0}, {"r", 0.0}}, 0.01);
  try {
    run_filter(spec, s, 0.0);
    FAIL();
  } catch (const StepError& e) {
    EXPECT_EQ(e.sample(), 1u);
  }
  EXPECT_THROW(run_filter(spec, std::vector<CorrectedSample>{}, 0.0), InvalidStateError);
}
