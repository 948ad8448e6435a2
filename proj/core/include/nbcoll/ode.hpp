#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "nbcoll/types.hpp"

namespace nbcoll::ode {

using Rhs = std::function<void(double t, const VecX& y, VecX& dy)>;

struct Options {
  double rtol = 1e-10;
  double atol = 1e-10;
  double h0 = 0.0;  // 0 selects the initial step automatically
  double h_max = std::numeric_limits<double>::infinity();
  long max_steps = 5'000'000;
};

// Scalar event g(t, y) = 0. direction > 0 fires on upward crossings only,
// direction < 0 on downward crossings only, 0 on both.
struct Event {
  std::string name;
  std::function<double(double, const VecX&)> g;
  int direction = 0;
  bool terminal = false;
};

struct EventHit {
  std::string name;
  double t;
  VecX y;
};

// Fourth-order continuous extension of one accepted step on [t0, t0 + h].
struct Segment {
  double t0 = 0.0;
  double h = 0.0;
  VecX r1, r2, r3, r4, r5;
  VecX eval(double t) const;
};

struct Solution {
  std::vector<double> t;
  std::vector<VecX> y;
  std::vector<Segment> segments;
  std::vector<EventHit> events;
  bool stopped_by_event = false;
  long rejected = 0;

  // Dense output at any t inside the integrated range.
  VecX at(double time) const;
  const EventHit* first_event(const std::string& name) const;
};

// Adaptive Dormand-Prince 5(4) with PI step control. t1 < t0 integrates
// backwards. Library errors thrown by rhs during a trial step shrink the step;
// they propagate only when the step size collapses.
Solution integrate(const Rhs& rhs, double t0, const VecX& y0, double t1, const Options& opt,
                   const std::vector<Event>& events = {});

}  // namespace nbcoll::ode
