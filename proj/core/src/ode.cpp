#include "nbcoll/ode.hpp"

#include <algorithm>
#include <cmath>

#include "nbcoll/errors.hpp"

namespace nbcoll::ode {
namespace {

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

double error_norm(const VecX& err, const VecX& y0, const VecX& y1, const Options& opt) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double sc = opt.atol + opt.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = err[i] / sc;
    acc += r * r;
  }
  return std::sqrt(acc / static_cast<double>(err.size()));
}

double initial_step(const Rhs& rhs, double t0, const VecX& y0, const VecX& f0, double dir,
                    const Options& opt) {
  VecX sc = (opt.atol + opt.rtol * y0.array().abs()).matrix();
  const double dnf = std::sqrt((f0.array() / sc.array()).square().mean());
  const double dny = std::sqrt((y0.array() / sc.array()).square().mean());
  double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * dny / dnf;
  h = std::min(h, opt.h_max);
  VecX y1 = y0 + dir * h * f0;
  VecX f1(y0.size());
  try {
    rhs(t0 + dir * h, y1, f1);
  } catch (const Error&) {
    return h * 1e-3;
  }
  const double der2 = std::sqrt(((f1 - f0).array() / sc.array()).square().mean()) / h;
  const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
  const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 0.2);
  return std::min({100 * h, h1, opt.h_max});
}

}  // namespace

VecX Segment::eval(double t) const {
  const double th = (t - t0) / h;
  const double th1 = 1.0 - th;
  return r1 + th * (r2 + th1 * (r3 + th * (r4 + th1 * r5)));
}

VecX Solution::at(double time) const {
  if (segments.empty()) return y.front();
  const bool forward = segments.front().h > 0;
  auto it = std::lower_bound(segments.begin(), segments.end(), time,
                             [forward](const Segment& s, double value) {
                               const double end = s.t0 + s.h;
                               return forward ? end < value : end > value;
                             });
  if (it == segments.end()) --it;
  return it->eval(time);
}

const EventHit* Solution::first_event(const std::string& name) const {
  for (const auto& e : events)
    if (e.name == name) return &e;
  return nullptr;
}

Solution integrate(const Rhs& rhs, double t0, const VecX& y0, double t1, const Options& opt,
                   const std::vector<Event>& events) {
  if (!(opt.rtol > 0.0) || !(opt.atol > 0.0)) fail(ErrorKind::InvalidArgument, "tolerances must be positive");
  Solution sol;
  sol.t.push_back(t0);
  sol.y.push_back(y0);
  if (t1 == t0) return sol;

  const double dir = t1 > t0 ? 1.0 : -1.0;
  const Eigen::Index dim = y0.size();
  VecX k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim), ys(dim), y1(dim);
  rhs(t0, y0, k1);

  double t = t0;
  VecX y = y0;
  double h = opt.h0 > 0.0 ? opt.h0 : initial_step(rhs, t0, y0, k1, dir, opt);
  double err_old = 1e-4;
  const double beta = 0.04, expo = 0.2 - beta * 0.75, safe = 0.9;
  std::vector<double> g_old(events.size());
  for (std::size_t e = 0; e < events.size(); ++e) g_old[e] = events[e].g(t0, y0);

  long steps = 0;
  bool last = false;
  while (!last) {
    if (++steps > opt.max_steps) fail(ErrorKind::StepFailure, "maximum number of steps exceeded");
    const double h_min = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
    if (h < h_min) fail(ErrorKind::StepFailure, "step size underflow near t = " + std::to_string(t));
    if (dir * (t + dir * h - t1) >= 0.0) {
      h = std::abs(t1 - t);
      last = true;
    }
    const double hs = dir * h;
    double err;
    try {
      ys = y + hs * a21 * k1;
      rhs(t + c2 * hs, ys, k2);
      ys = y + hs * (a31 * k1 + a32 * k2);
      rhs(t + c3 * hs, ys, k3);
      ys = y + hs * (a41 * k1 + a42 * k2 + a43 * k3);
      rhs(t + c4 * hs, ys, k4);
      ys = y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
      rhs(t + c5 * hs, ys, k5);
      ys = y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
      rhs(t + hs, ys, k6);
      y1 = y + hs * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
      rhs(t + hs, y1, k7);
      VecX est = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      err = error_norm(est, y, y1, opt);
      if (!std::isfinite(err)) err = 1e10;
    } catch (const Error&) {
      h *= 0.25;
      last = false;
      ++sol.rejected;
      continue;
    }

    if (err > 1.0) {
      h /= std::min(5.0, std::pow(err, expo) / safe);
      last = false;
      ++sol.rejected;
      continue;
    }

    Segment seg;
    seg.t0 = t;
    seg.h = hs;
    seg.r1 = y;
    seg.r2 = y1 - y;
    seg.r3 = hs * k1 - seg.r2;
    seg.r4 = seg.r2 - hs * k7 - seg.r3;
    seg.r5 = hs * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);

    const double t_new = last ? t1 : t + hs;
    bool stop = false;
    double t_stop = t_new;
    for (std::size_t e = 0; e < events.size(); ++e) {
      const double g_new = events[e].g(t_new, y1);
      const double ga = g_old[e];
      const bool up = ga < 0.0 && g_new >= 0.0;
      const bool down = ga > 0.0 && g_new <= 0.0;
      const bool fires = (events[e].direction >= 0 && up) || (events[e].direction <= 0 && down);
      if (fires) {
        double lo = t, hi = t_new, glo = ga;
        for (int it = 0; it < 200 && std::abs(hi - lo) > 4e-16 * std::max(1.0, std::abs(hi)); ++it) {
          const double mid = 0.5 * (lo + hi);
          const double gm = events[e].g(mid, seg.eval(mid));
          if ((glo < 0.0 && gm < 0.0) || (glo > 0.0 && gm > 0.0)) {
            lo = mid;
            glo = gm;
          } else {
            hi = mid;
          }
        }
        sol.events.push_back({events[e].name, hi, seg.eval(hi)});
        if (events[e].terminal && (!stop || dir * (hi - t_stop) < 0)) {
          stop = true;
          t_stop = hi;
        }
      }
      g_old[e] = g_new;
    }

    sol.segments.push_back(seg);
    if (stop) {
      // Drop non-terminal hits recorded beyond the terminal event.
      sol.events.erase(std::remove_if(sol.events.begin(), sol.events.end(),
                                      [&](const EventHit& hit) { return dir * (hit.t - t_stop) > 0; }),
                       sol.events.end());
      // The last segment keeps its full polynomial; it is only queried up to t_stop.
      sol.t.push_back(t_stop);
      sol.y.push_back(seg.eval(t_stop));
      sol.stopped_by_event = true;
      break;
    }
    sol.t.push_back(t_new);
    sol.y.push_back(y1);

    t = t_new;
    y = y1;
    k1 = k7;
    const double fac = std::pow(std::max(err, 1e-10), expo) / std::pow(err_old, beta) / safe;
    h /= std::clamp(fac, 0.1, 5.0);
    h = std::min(h, opt.h_max);
    err_old = std::max(err, 1e-4);
  }
  return sol;
}

}  // namespace nbcoll::ode
