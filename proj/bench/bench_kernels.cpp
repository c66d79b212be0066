// Timing harness for the parallel kernels against their serial reference
// implementations. Every pair must agree bitwise; the table reports wall
// times, speedup, and that check.
//
// usage: bench_kernels [ticks] [repeats]
#include "sdmux/bank.hpp"
#include "sdmux/interleave.hpp"
#include "sdmux/io.hpp"
#include "sdmux/modulator.hpp"
#include "sdmux/pulse.hpp"
#include "sdmux/rng.hpp"
#include "sdmux/runner.hpp"
#include "sdmux/scenario.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace sdmux;

namespace {

using Clock = std::chrono::steady_clock;

double time_best(int repeats, const std::function<void()>& fn) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    auto t0 = Clock::now();
    fn();
    best = std::min(
        best, std::chrono::duration<double>(Clock::now() - t0).count());
  }
  return best;
}

double max_abs_diff(const std::vector<double>& a,
                    const std::vector<double>& b) {
  if (a.size() != b.size()) return 1e300;
  double worst = 0.0;
  for (size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::fabs(a[i] - b[i]));
  return worst;
}

void report(const char* name, long long ticks, double serial, double parallel,
            double dev) {
  std::printf("%-28s %9lld %10.2f %10.2f %8.2fx   %s\n", name, ticks,
              serial * 1e3, parallel * 1e3, serial / parallel,
              dev == 0.0 ? "yes" : "NO");
  if (dev != 0.0) std::printf("  !! results differ, max |dev| = %.3e\n", dev);
}

}  // namespace

int main(int argc, char** argv) {
  long long ticks = argc > 1 ? std::atoll(argv[1]) : 32768;
  int repeats = argc > 2 ? std::atoi(argv[2]) : 3;
  if (ticks < 64 || repeats < 1) {
    std::fprintf(stderr, "usage: bench_kernels [ticks >= 64] [repeats >= 1]\n");
    return 2;
  }
  ticks -= ticks % 4;  // phase-latched schedules need whole blocks

#ifdef _OPENMP
  const int threads = omp_get_max_threads();
  std::printf("OpenMP enabled, %d thread(s)\n", threads);
#else
  std::printf("OpenMP not available: parallel paths run serially\n");
#endif
  std::printf("%-28s %9s %10s %10s %9s   %s\n", "kernel", "ticks",
              "serial/ms", "parallel/ms", "speedup", "bitwise");

  // single-bit and 3-bit code streams driving the kernels
  Uniform u(99);
  std::vector<double> x1(ticks), x3(ticks);
  for (auto& v : x1) v = u.range(-0.6, 0.6);
  for (auto& v : x3) v = u.range(-0.8, 0.8);
  const Quantizer q1{1, 1.0}, q3{3, 1.0};
  std::vector<int> y1 = modulate(x1, design_loop_filter(2), q1).codes;
  std::vector<int> y3 = modulate(x3, design_loop_filter(1), q3).codes;

  std::vector<ElementParams> p4(4), p5(5), p28(28);
  MismatchSpec mm;
  mm.kind = MismatchSpec::Kind::uniform;
  mm.range = 0.07;
  mm.has_range = true;
  p4 = gen_mismatch(4, mm, 4);
  p28 = gen_mismatch(4, mm, 28);
  ShapeSpec sh;
  sh.variant = ShapeSpec::Variant::draws;
  sh.tau = 0.5;
  sh.slew = 1.5;
  sh.dev_std = 0.05;
  apply_shape(p4, sh, 5);
  p5 = gen_mismatch(4, mm, 5);
  apply_shape(p5, sh, 5);

  {
    auto sched = dwa_schedule(y1, 4, 1.0);
    std::vector<double> ws, wp;
    double ts = time_best(repeats, [&] { ws = render_dt_serial(sched, p4); });
    double tp = time_best(repeats, [&] { wp = render_dt(sched, p4); });
    report("render_dt, 4 elements", ticks, ts, tp, max_abs_diff(ws, wp));
  }
  {
    auto sched = dwa_schedule_multibit(y3, 4, 3, 1.0);
    std::vector<double> ws, wp;
    double ts = time_best(repeats, [&] { ws = render_dt_serial(sched, p28); });
    double tp = time_best(repeats, [&] { wp = render_dt(sched, p28); });
    report("render_dt, 28 elements", ticks, ts, tp, max_abs_diff(ws, wp));
  }
  {
    auto sched = dwa_schedule(y1, 4, 1.0);
    std::vector<double> ws, wp;
    double ts = time_best(
        repeats, [&] { ws = render_analog_serial(sched, p4, 16); });
    double tp =
        time_best(repeats, [&] { wp = render_analog(sched, p4, 16); });
    report("render_analog x16, 4 elem", ticks, ts, tp, max_abs_diff(ws, wp));
  }
  {
    auto sched = rz_schedule(y1, 4, 1.0);
    std::vector<double> ws, wp;
    double ts = time_best(
        repeats, [&] { ws = render_analog_serial(sched, p5, 16); });
    double tp =
        time_best(repeats, [&] { wp = render_analog(sched, p5, 16); });
    report("render_analog x16, 5 elem", ticks, ts, tp, max_abs_diff(ws, wp));
  }

  // whole-pipeline sweep: parallel over amplitude points
  {
    Scenario s = load_scenario(*find_bundled("fig11"), "fig11");
    std::string serial_csv, parallel_csv;
    double ts, tp;
#ifdef _OPENMP
    omp_set_num_threads(1);
    ts = time_best(1, [&] { serial_csv = sweep_csv(run_sweep(s)); });
    omp_set_num_threads(threads);
    tp = time_best(1, [&] { parallel_csv = sweep_csv(run_sweep(s)); });
#else
    ts = time_best(1, [&] { serial_csv = sweep_csv(run_sweep(s)); });
    tp = time_best(1, [&] { parallel_csv = sweep_csv(run_sweep(s)); });
#endif
    std::printf("%-28s %9s %10.2f %10.2f %8.2fx   %s\n",
                "run_sweep fig11 (12 pts)", "-", ts * 1e3, tp * 1e3, ts / tp,
                serial_csv == parallel_csv ? "yes" : "NO");
  }
  return 0;
}
