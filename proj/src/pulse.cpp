#include "sdmux/pulse.hpp"

#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sdmux {

namespace {

constexpr double kSettleFraction = 1e-15;  // residue cutoff per edge

struct EdgeTemplate {
  double swing;  // total excursion (positive)
  double tau;
  double sr;     // may be +inf
  double vo;     // slew/exponential handover distance
  double tstar;  // end of the slew segment
  double tend;   // residue below kSettleFraction * swing from here on
};

EdgeTemplate make_template(double swing, double tau, double sr) {
  EdgeTemplate e;
  e.swing = swing;
  e.tau = tau;
  e.sr = sr;
  const bool slew_limited = std::isfinite(sr);
  e.vo = slew_limited ? sr * tau : swing;
  if (!slew_limited) {
    e.tstar = 0.0;
  } else if (e.vo >= swing) {
    e.tstar = 0.0;
    e.vo = swing;
  } else {
    e.tstar = (swing - e.vo) / sr;
  }
  if (tau > 0.0)
    e.tend = e.tstar + tau * std::log(e.vo / (swing * kSettleFraction));
  else
    e.tend = slew_limited ? swing / sr : 0.0;
  return e;
}

double eval_template(const EdgeTemplate& e, double u) {
  if (u <= 0.0) return 0.0;
  if (u <= e.tstar) return e.sr * u;
  if (e.tau <= 0.0) return e.swing;
  return e.swing - e.vo * std::exp(-(u - e.tstar) / e.tau);
}

}  // namespace

std::vector<double> shape_element(const std::vector<double>& targets,
                                  const ShapeParams& sp, double start_level,
                                  int oversample) {
  if (oversample < 1) throw std::invalid_argument("oversample must be >= 1");
  if (sp.tau_p < 0.0 || sp.tau_n < 0.0 || sp.sr_p <= 0.0 || sp.sr_n <= 0.0)
    throw std::invalid_argument("shape parameters out of range");
  const long long N = static_cast<long long>(targets.size());
  const long long total = N * oversample;
  const double dt = 1.0 / oversample;
  std::vector<double> out(total, 0.0);
  std::vector<double> settle(total, 0.0);  // diff array of completed edges

  // every level change launches one fixed rail-to-rail edge shape; shapes
  // from successive transitions add up, so a pulse's area deficit is set by
  // its two edges alone, not by its width
  double prev = start_level;
  for (long long n = 0; n < N; ++n) {
    const double delta = targets[n] - prev;
    if (delta != 0.0) {
      const bool rising = delta > 0.0;
      EdgeTemplate e = make_template(std::abs(delta),
                                     rising ? sp.tau_p : sp.tau_n,
                                     rising ? sp.sr_p : sp.sr_n);
      const double sign = rising ? 1.0 : -1.0;
      // samples sit at u = (j+1)*dt past the tick edge
      long long span = static_cast<long long>(std::ceil(e.tend * oversample));
      long long first = n * oversample;
      long long stop = std::min(total, first + span);
      for (long long i = first; i < stop; ++i)
        out[i] += sign * eval_template(e, (i - first + 1) * dt);
      if (stop < total) settle[stop] += delta;
      prev = targets[n];
    }
  }

  double base = start_level;
  for (long long i = 0; i < total; ++i) {
    base += settle[i];
    out[i] += base;
  }
  return out;
}

namespace {

std::vector<double> render_analog_impl(
    const ActivationSchedule& s, const std::vector<ElementParams>& params,
    int oversample, bool parallel) {
  if (static_cast<int>(params.size()) != s.elements)
    throw std::invalid_argument("one ElementParams per element required");
  const long long total = s.ticks * oversample;
  std::vector<std::vector<double>> waves(s.elements);

  // phase 1: each element's waveform, independent of the others
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
  for (int m = 0; m < s.elements; ++m) {
    ShapeParams sp{params[m].tau_p, params[m].tau_n, params[m].sr_p,
                   params[m].sr_n};
    auto targets = element_targets(s, m, params[m]);
    double idle = params[m].voff - params[m].gain * s.unit;
    waves[m] = shape_element(targets, sp, idle, oversample);
  }
  (void)parallel;

  // phase 2: sum in fixed element order so the total is independent of the
  // phase-1 schedule
  std::vector<double> out(total, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
  for (long long i = 0; i < total; ++i) {
    double acc = 0.0;
    for (int m = 0; m < s.elements; ++m) acc += waves[m][i];
    out[i] = acc;
  }
  return out;
}

}  // namespace

std::vector<double> render_analog(const ActivationSchedule& s,
                                  const std::vector<ElementParams>& params,
                                  int oversample) {
  return render_analog_impl(s, params, oversample, true);
}

std::vector<double> render_analog_serial(
    const ActivationSchedule& s, const std::vector<ElementParams>& params,
    int oversample) {
  return render_analog_impl(s, params, oversample, false);
}

std::vector<double> downsample_ticks(const std::vector<double>& wave,
                                     int oversample) {
  if (oversample < 1 || wave.size() % oversample != 0)
    throw std::invalid_argument("wave length must be a multiple of oversample");
  std::vector<double> out(wave.size() / oversample);
  for (size_t n = 0; n < out.size(); ++n)
    out[n] = wave[(n + 1) * oversample - 1];
  return out;
}

}  // namespace sdmux
