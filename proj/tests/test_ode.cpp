#include <cmath>

#include <gtest/gtest.h>

#include "nbcoll/errors.hpp"
#include "nbcoll/ode.hpp"

namespace nbcoll::ode {
namespace {

void oscillator(double, const VecX& y, VecX& dy) {
  dy[0] = y[1];
  dy[1] = -y[0];
}

VecX xy(double a, double b) {
  VecX v(2);
  v << a, b;
  return v;
}

TEST(Ode, ExponentialDecayMatchesClosedForm) {
  Options opt;
  opt.rtol = opt.atol = 1e-12;
  const Solution sol = integrate([](double, const VecX& y, VecX& dy) { dy = -0.7 * y; }, 0.0, VecX::Ones(1), 5.0, opt);
  EXPECT_DOUBLE_EQ(sol.t.back(), 5.0);
  EXPECT_NEAR(sol.y.back()[0], std::exp(-3.5), 1e-11);
}

TEST(Ode, OscillatorDenseOutputIsAccurate) {
  Options opt;
  opt.rtol = opt.atol = 1e-11;
  const Solution sol = integrate(oscillator, 0.0, xy(1.0, 0.0), 10.0, opt);
  for (double t : {0.3, 2.71, 6.0, 9.99}) {
    const VecX y = sol.at(t);
    EXPECT_NEAR(y[0], std::cos(t), 1e-8) << t;
    EXPECT_NEAR(y[1], -std::sin(t), 1e-8) << t;
  }
}

TEST(Ode, BackwardIntegrationReturnsToInitialData) {
  Options opt;
  opt.rtol = opt.atol = 1e-12;
  const Solution fwd = integrate(oscillator, 0.0, xy(0.4, -1.3), 7.0, opt);
  const Solution back = integrate(oscillator, 7.0, fwd.y.back(), 0.0, opt);
  EXPECT_DOUBLE_EQ(back.t.back(), 0.0);
  EXPECT_NEAR(back.y.back()[0], 0.4, 1e-9);
  EXPECT_NEAR(back.y.back()[1], -1.3, 1e-9);
}

TEST(Ode, DirectionalEventsLocateCrossings) {
  Options opt;
  opt.rtol = opt.atol = 1e-12;
  Event down{"down", [](double, const VecX& y) { return y[0]; }, -1, false};
  Event up{"up", [](double, const VecX& y) { return y[0]; }, +1, false};
  const Solution sol = integrate(oscillator, 0.0, xy(1.0, 0.0), 7.0, opt, {down, up});
  ASSERT_EQ(sol.events.size(), 2u);
  EXPECT_EQ(sol.events[0].name, "down");
  EXPECT_NEAR(sol.events[0].t, M_PI / 2, 1e-10);
  EXPECT_EQ(sol.events[1].name, "up");
  EXPECT_NEAR(sol.events[1].t, 3 * M_PI / 2, 1e-10);
  EXPECT_FALSE(sol.stopped_by_event);
}

TEST(Ode, TerminalEventStopsIntegration) {
  Options opt;
  Event stop{"stop", [](double, const VecX& y) { return y[0] - 0.5; }, -1, true};
  const Solution sol = integrate(oscillator, 0.0, xy(1.0, 0.0), 10.0, opt, {stop});
  EXPECT_TRUE(sol.stopped_by_event);
  EXPECT_NEAR(sol.t.back(), M_PI / 3, 1e-9);
  EXPECT_NEAR(sol.y.back()[0], 0.5, 1e-9);
}

TEST(Ode, RejectsNonPositiveTolerances) {
  Options opt;
  opt.rtol = 0.0;
  try {
    integrate(oscillator, 0.0, xy(1.0, 0.0), 1.0, opt);
    FAIL() << "expected InvalidArgument";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
  }
}

TEST(Ode, StepLimitRaisesStepFailure) {
  Options opt;
  opt.max_steps = 3;
  try {
    integrate(oscillator, 0.0, xy(1.0, 0.0), 100.0, opt);
    FAIL() << "expected StepFailure";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::StepFailure);
  }
}

}  // namespace
}  // namespace nbcoll::ode
