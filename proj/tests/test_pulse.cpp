#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sdmux/bank.hpp"
#include "sdmux/pulse.hpp"
#include "sdmux/rng.hpp"

#include <cmath>
#include <limits>
#include <vector>

using namespace sdmux;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<int> random_bits(int n, std::uint64_t seed) {
  Uniform u(seed);
  std::vector<int> y(n);
  for (auto& v : y) v = u.u01() < 0.5 ? 0 : 1;
  return y;
}

// forward-Euler integration of the documented element dynamics: slew-rate
// limited approach, exponential once within slew reach of the target
std::vector<double> euler_step_response(double from, double to, double tau,
                                        double sr, double t_end, int k,
                                        double dt) {
  std::vector<double> out;
  double v = from;
  double t = 0.0;
  double next_sample = 1.0 / k;
  while (next_sample <= t_end + 1e-12) {
    while (t < next_sample) {
      double drive = (to - v) / tau;
      double lim = sr;
      if (drive > lim) drive = lim;
      if (drive < -lim) drive = -lim;
      v += drive * dt;
      t += dt;
    }
    out.push_back(v);
    next_sample += 1.0 / k;
  }
  return out;
}

double area(const std::vector<double>& w, double dt) {
  double acc = 0.0;
  for (double v : w) acc += v * dt;
  return acc;
}

}  // namespace

TEST_CASE("pure exponential step") {
  // no slew limit: v(t) = target - swing * exp(-t/tau)
  const double tau = 0.7;
  const int k = 8;
  std::vector<double> targets(6, 1.0);
  auto w = shape_element(targets, {tau, tau, kInf, kInf}, -1.0, k);
  for (size_t i = 0; i < w.size(); ++i) {
    double t = (i + 1) / static_cast<double>(k);
    CHECK(w[i] == doctest::Approx(1.0 - 2.0 * std::exp(-t / tau))
                      .epsilon(1e-12));
  }
}

TEST_CASE("slew segment has exactly the programmed slope") {
  const double sr = 0.5, tau = 0.25;  // handover at sr*tau = 0.125 from target
  const int k = 16;
  std::vector<double> targets(8, 1.0);
  auto w = shape_element(targets, {tau, tau, sr, sr}, -1.0, k);
  const double tstar = (2.0 - sr * tau) / sr;  // slew ends here
  for (size_t i = 0; i + 1 < w.size(); ++i) {
    double t1 = (i + 2) / static_cast<double>(k);
    if (t1 <= tstar) {
      double slope = (w[i + 1] - w[i]) * k;
      CHECK(slope == doctest::Approx(sr).epsilon(1e-12));
    }
  }
  // first sample sits on the ramp out of the start level
  CHECK(w[0] == doctest::Approx(-1.0 + sr / k).epsilon(1e-12));
}

TEST_CASE("zero time constant gives a pure ramp, infinite slew a step") {
  const int k = 8;
  std::vector<double> targets(4, 1.0);
  auto ramp = shape_element(targets, {0.0, 0.0, 1.0, 1.0}, -1.0, k);
  for (size_t i = 0; i < ramp.size(); ++i) {
    double t = (i + 1) / static_cast<double>(k);
    CHECK(ramp[i] == doctest::Approx(std::min(-1.0 + t, 1.0)).epsilon(1e-12));
  }
  auto step = shape_element(targets, {0.0, 0.0, kInf, kInf}, -1.0, k);
  for (double v : step) CHECK(v == 1.0);
}

TEST_CASE("isolated edges follow the differential-equation dynamics") {
  // Euler integration of dv/dt = clamp((target - v)/tau, +-sr) converges to
  // the same edge; both directions, with and without a slew segment
  struct Case {
    double tau, sr;
  };
  for (auto c : {Case{0.4, 3.0}, Case{0.4, kInf}, Case{0.25, 1.2}}) {
    std::vector<double> up(12, 1.0);
    auto w = shape_element(up, {c.tau, c.tau, c.sr, c.sr}, -1.0, 4);
    auto ref = euler_step_response(-1.0, 1.0, c.tau,
                                   std::isfinite(c.sr) ? c.sr : 1e12, 12.0, 4,
                                   1e-6);
    REQUIRE(ref.size() >= w.size());
    for (size_t i = 0; i < w.size(); ++i)
      CHECK(w[i] == doctest::Approx(ref[i]).epsilon(5e-5));
  }
}

TEST_CASE("edges superpose linearly") {
  // a short pulse equals the sum of its rising and falling transitions even
  // when the second starts before the first has settled
  const double tau = 0.5, sr = 1.5;
  const int k = 16, n = 24;
  ShapeParams sp{tau, tau, sr, sr};
  std::vector<double> pulse(n, -1.0);
  pulse[4] = pulse[5] = 1.0;  // 2-tick pulse at tick 4

  std::vector<double> rise_only(n, -1.0);
  for (int i = 4; i < n; ++i) rise_only[i] = 1.0;
  std::vector<double> fall_only(n, 1.0);
  for (int i = 6; i < n; ++i) fall_only[i] = -1.0;

  auto wp = shape_element(pulse, sp, -1.0, k);
  auto wr = shape_element(rise_only, sp, -1.0, k);
  auto wf = shape_element(fall_only, sp, 1.0, k);
  for (size_t i = 0; i < wp.size(); ++i)
    CHECK(wp[i] == doctest::Approx(wr[i] + wf[i] - 1.0).epsilon(1e-12));
}

TEST_CASE("pulse area deficit does not depend on pulse width") {
  // each edge carries a fixed area deficit, so widening the pulse leaves
  // the absolute error unchanged and the relative error drops as 1/width
  const double tau = 0.3, sr = 3.0;
  const int k = 32;
  ShapeParams sp{tau, 1.1 * tau, sr, 0.8 * sr};
  const double dt = 1.0 / k;
  auto deficit = [&](int width) {
    const int total = width + 50;
    std::vector<double> targets(total, -1.0);
    for (int i = 5; i < 5 + width; ++i) targets[i] = 1.0;
    auto w = shape_element(targets, sp, -1.0, k);
    std::vector<double> rect;
    for (int i = 0; i < total; ++i)
      for (int j = 0; j < k; ++j) rect.push_back(targets[i]);
    return area(w, dt) - area(rect, dt);
  };
  const double d1 = deficit(1);
  for (int width : {2, 4, 8, 16}) {
    CHECK(deficit(width) == doctest::Approx(d1).epsilon(1e-9));
  }
}

TEST_CASE("waveform settles to the target after the transition") {
  const double tau = 0.2, sr = 5.0;
  std::vector<double> targets(30, -1.0);
  for (int i = 10; i < 30; ++i) targets[i] = 1.0;
  auto w = shape_element(targets, {tau, tau, sr, sr}, -1.0, 8);
  // past ~ tau * ln(1e15) + slew time the output is the rail
  for (size_t i = 22 * 8; i < w.size(); ++i)
    CHECK(std::abs(w[i] - 1.0) < 1e-13);
}

TEST_CASE("instantaneous shaping reproduces the held targets") {
  auto y = random_bits(512, 5);
  auto s = dwa_schedule(y, 4, 1.0);
  std::vector<ElementParams> params(4);
  auto dt_out = render_dt(s, params);
  auto an = render_analog(s, params, 4);
  auto down = downsample_ticks(an, 4);
  REQUIRE(down.size() == dt_out.size());
  for (size_t i = 0; i < down.size(); ++i)
    CHECK(down[i] == doctest::Approx(dt_out[i]).epsilon(1e-12));
}

TEST_CASE("bank waveform is the sum of the shaped elements") {
  auto y = random_bits(256, 6);
  auto s = rz_schedule(y, 4, 1.0);
  Uniform u(7);
  std::vector<ElementParams> params(5);
  for (auto& p : params) {
    p.gain = 1.0 + u.range(-0.05, 0.05);
    p.voff = u.range(-0.05, 0.05);
    p.tau_p = 0.5 * (1.0 + u.range(-0.1, 0.1));
    p.tau_n = 0.5 * (1.0 + u.range(-0.1, 0.1));
    p.sr_p = 1.5 * (1.0 + u.range(-0.1, 0.1));
    p.sr_n = 1.5 * (1.0 + u.range(-0.1, 0.1));
  }
  const int k = 8;
  auto bank = render_analog(s, params, k);
  std::vector<double> acc(bank.size(), 0.0);
  for (int m = 0; m < s.elements; ++m) {
    ShapeParams sp{params[m].tau_p, params[m].tau_n, params[m].sr_p,
                   params[m].sr_n};
    auto w = shape_element(element_targets(s, m, params[m]), sp,
                           params[m].voff - params[m].gain * s.unit, k);
    for (size_t i = 0; i < w.size(); ++i) acc[i] += w[i];
  }
  for (size_t i = 0; i < bank.size(); ++i)
    CHECK(bank[i] == doctest::Approx(acc[i]).epsilon(1e-12));
}

TEST_CASE("parallel and serial analog renders agree bitwise") {
  auto y = random_bits(2048, 8);
  auto s = dwa_schedule(y, 4, 1.0);
  std::vector<ElementParams> params(4);
  for (auto& p : params) {
    p.tau_p = 0.4;
    p.tau_n = 0.5;
    p.sr_p = 2.0;
    p.sr_n = 1.8;
  }
  auto a = render_analog(s, params, 16);
  auto b = render_analog_serial(s, params, 16);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("downsample keeps each tick's final sample") {
  std::vector<double> w = {1, 2, 3, 4, 5, 6, 7, 8};
  auto d = downsample_ticks(w, 4);
  CHECK(d == std::vector<double>{4, 8});
  CHECK_THROWS_AS(downsample_ticks(std::vector<double>(7, 0.0), 4),
                  std::invalid_argument);
}
