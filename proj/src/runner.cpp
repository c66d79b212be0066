#include "sdmux/runner.hpp"

#include "sdmux/interleave.hpp"
#include "sdmux/modulator.hpp"
#include "sdmux/pulse.hpp"
#include "sdmux/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sdmux {

namespace {

constexpr double kVs = 1.0;  // scenario outputs are in fullscale units

std::vector<double> tone(long long total, long long period, int bin,
                         double amplitude) {
  std::vector<double> x(total);
  const double w = 2.0 * std::numbers::pi * bin / static_cast<double>(period);
  for (long long n = 0; n < total; ++n)
    x[n] = amplitude * std::sin(w * static_cast<double>(n));
  return x;
}

std::vector<std::vector<int>> split_paths(const std::vector<int>& codes,
                                          int paths) {
  const size_t blocks = codes.size() / paths;
  std::vector<std::vector<int>> out(paths, std::vector<int>(blocks));
  for (size_t n = 0; n < blocks * paths; ++n)
    out[n % paths][n / paths] = codes[n];
  return out;
}

ActivationSchedule build_schedule(BankMode mode, const std::vector<int>& codes,
                                  int paths, int bits) {
  switch (mode) {
    case BankMode::single: return single_dac_schedule(codes, kVs);
    case BankMode::phase:
      return phase_assigned_schedule(split_paths(codes, paths), paths, kVs);
    case BankMode::dwa: return dwa_schedule(codes, paths, kVs);
    case BankMode::rz: return rz_schedule(codes, paths, kVs);
    case BankMode::dwa_multibit:
      return dwa_schedule_multibit(codes, paths, bits, kVs);
    case BankMode::thermometer:
      return thermometer_schedule(split_paths(codes, paths), paths, bits,
                                  kVs);
  }
  throw std::logic_error("unhandled mode");
}

std::vector<ElementParams> case_params(const Scenario& s,
                                       const CaseConfig& cc) {
  const int elems = mode_elements(cc.mode, s.paths, s.bits);
  std::uint64_t mseed = cc.mismatch.has_seed ? cc.mismatch.seed : s.seed;
  std::uint64_t sseed = cc.shape.has_seed ? cc.shape.seed : s.seed + 1;
  auto params = gen_mismatch(mseed, cc.mismatch, elems);
  apply_shape(params, cc.shape, sseed);
  return params;
}

// render one case and measure it; the first `paths` ticks of the record are
// start-up and are dropped before analysis
CaseResult measure_case(const Scenario& s, const CaseConfig& cc,
                        const std::vector<int>& codes,
                        const std::vector<ElementParams>& params) {
  CaseResult res;
  res.name = cc.name;
  res.params = params;
  ActivationSchedule sched = build_schedule(cc.mode, codes, s.paths, s.bits);
  const double fullscale = sched.paths * kVs;
  SpectrumReport rep;
  if (cc.shape.variant == ShapeSpec::Variant::ideal) {
    auto wave = render_dt(sched, params);
    std::vector<double> win(wave.begin() + s.paths, wave.end());
    rep = psd(win, 1, fullscale, s.bin);
  } else {
    auto wave = render_analog(sched, params, s.oversample);
    std::vector<double> win(
        wave.begin() + static_cast<long long>(s.paths) * s.oversample,
        wave.end());
    rep = psd(win, s.oversample, fullscale, s.bin);
  }
  res.sndr_db = sndr(rep, s.osr);
  res.h2_dbfs = harmonic_dbfs(rep, 2);
  res.h3_dbfs = harmonic_dbfs(rep, 3);
  res.slope_db_per_dec = noise_slope(rep, s.osr);
  res.spectrum = std::move(rep);
  return res;
}

}  // namespace

RunOutput run_scenario(const Scenario& s) {
  if (s.is_sweep())
    throw std::invalid_argument(
        "scenario '" + s.name + "' defines an amplitude sweep; run it with "
        "the sweep command");
  RunOutput out;
  out.scenario = s;
  Quantizer q{s.bits, kVs};
  LoopFilter f = s.den.empty() ? design_loop_filter(s.order)
                               : design_loop_filter(s.order, s.den);
  const long long total = s.samples + s.paths;
  const double amp = std::pow(10.0, s.amplitude_dbfs / 20.0);
  auto x = tone(total, s.samples, s.bin, amp);
  ModResult mr = modulate(x, f, q);
  for (const auto& cc : s.cases)
    out.cases.push_back(measure_case(s, cc, mr.codes, case_params(s, cc)));
  return out;
}

SweepOutput run_sweep(const Scenario& s) {
  if (!s.is_sweep())
    throw std::invalid_argument(
        "scenario '" + s.name + "' has no sweep list; run it with the run "
        "command");
  SweepOutput out;
  out.scenario = s;
  for (const auto& cc : s.cases) {
    out.case_names.push_back(cc.name);
    out.params.push_back(case_params(s, cc));  // one realization per case
  }
  Quantizer q{s.bits, kVs};
  LoopFilter f = s.den.empty() ? design_loop_filter(s.order)
                               : design_loop_filter(s.order, s.den);
  const long long total = s.samples + s.paths;
  const int npts = static_cast<int>(s.sweep_dbfs.size());
  out.rows.resize(npts);

  // amplitude points are independent; rows keep the input order
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int i = 0; i < npts; ++i) {
    const double adb = s.sweep_dbfs[i];
    auto x = tone(total, s.samples, s.bin, std::pow(10.0, adb / 20.0));
    ModResult mr = modulate(x, f, q);
    SweepRow row;
    row.amplitude_dbfs = adb;
    for (size_t c = 0; c < s.cases.size(); ++c) {
      ActivationSchedule sched =
          build_schedule(s.cases[c].mode, mr.codes, s.paths, s.bits);
      const double fullscale = sched.paths * kVs;
      SpectrumReport rep;
      if (s.cases[c].shape.variant == ShapeSpec::Variant::ideal) {
        auto wave = render_dt_serial(sched, out.params[c]);
        std::vector<double> win(wave.begin() + s.paths, wave.end());
        rep = psd(win, 1, fullscale, s.bin);
      } else {
        auto wave = render_analog_serial(sched, out.params[c], s.oversample);
        std::vector<double> win(
            wave.begin() + static_cast<long long>(s.paths) * s.oversample,
            wave.end());
        rep = psd(win, s.oversample, fullscale, s.bin);
      }
      row.sndr_db.push_back(sndr(rep, s.osr));
    }
    out.rows[i] = std::move(row);
  }
  return out;
}

DropStats dwa_drop_stats(const Scenario& s, const CaseConfig& cc,
                         double reference_db, int n_draws,
                         std::uint64_t seed) {
  Quantizer q{s.bits, kVs};
  LoopFilter f = s.den.empty() ? design_loop_filter(s.order)
                               : design_loop_filter(s.order, s.den);
  const long long total = s.samples + s.paths;
  const double amp = std::pow(10.0, s.amplitude_dbfs / 20.0);
  auto x = tone(total, s.samples, s.bin, amp);
  ModResult mr = modulate(x, f, q);
  ActivationSchedule sched = build_schedule(cc.mode, mr.codes, s.paths,
                                            s.bits);
  const double fullscale = sched.paths * kVs;
  const int elems = sched.elements;
  const double a = cc.mismatch.has_range
                       ? cc.mismatch.range
                       : cc.mismatch.std_dev * std::sqrt(3.0);

  DropStats st;
  Uniform u(seed);  // one stream across all draws
  for (int d = 0; d < n_draws; ++d) {
    std::vector<ElementParams> params(elems);
    for (int m = 0; m < elems; ++m) params[m].gain = 1.0 + u.range(-a, a);
    for (int m = 0; m < elems; ++m) params[m].voff = u.range(-a, a);
    auto wave = render_dt(sched, params);
    std::vector<double> win(wave.begin() + s.paths, wave.end());
    auto rep = psd(win, 1, fullscale, s.bin);
    st.drops_db.push_back(reference_db - sndr(rep, s.osr));
  }
  double sum = 0.0, mx = st.drops_db.empty() ? 0.0 : st.drops_db[0];
  for (double d : st.drops_db) {
    sum += d;
    mx = std::max(mx, d);
  }
  st.mean_db = st.drops_db.empty() ? 0.0 : sum / st.drops_db.size();
  st.max_db = mx;
  return st;
}

}  // namespace sdmux
