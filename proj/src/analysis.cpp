#include "sdmux/analysis.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace sdmux {

namespace {

bool power_of_two(long long n) { return n > 0 && (n & (n - 1)) == 0; }

// plan creation is not thread safe; execution on caller-owned arrays is
fftw_plan r2c_plan(long long n) {
  static std::mutex mu;
  static std::map<long long, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<double> in(n, 0.0);
  std::vector<fftw_complex> out(n / 2 + 1);
  fftw_plan p = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(),
                                     out.data(),
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!p) throw std::runtime_error("fft plan creation failed");
  cache.emplace(n, p);
  return p;
}

constexpr double kPowerFloor = 1e-300;

}  // namespace

std::vector<std::complex<double>> fft_real(const std::vector<double>& x) {
  const long long n = static_cast<long long>(x.size());
  if (!power_of_two(n))
    throw std::invalid_argument("record length must be a power of two");
  fftw_plan p = r2c_plan(n);
  std::vector<double> in(x);
  std::vector<std::complex<double>> out(n / 2 + 1);
  fftw_execute_dft_r2c(p, in.data(),
                       reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

double SpectrumReport::dbfs(long long k) const {
  double ref = fullscale * fullscale / 2.0;
  return 10.0 * std::log10(std::max(p[k], kPowerFloor) / ref);
}

SpectrumReport psd(const std::vector<double>& x, int oversample,
                   double fullscale, int signal_bin) {
  const long long n = static_cast<long long>(x.size());
  if (oversample < 1 || n % oversample != 0)
    throw std::invalid_argument("record length must be a multiple of oversample");
  SpectrumReport r;
  r.nfft = n;
  r.oversample = oversample;
  r.ticks = n / oversample;
  r.fullscale = fullscale;
  r.signal_bin = signal_bin;
  auto spec = fft_real(x);
  const long long half = n / 2;
  r.p.resize(half + 1);
  const double norm = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
  for (long long k = 0; k <= half; ++k) {
    double mag2 = std::norm(spec[k]) * norm;
    r.p[k] = (k == 0 || k == half) ? mag2 : 2.0 * mag2;
  }
  return r;
}

double signal_dbfs(const SpectrumReport& r) {
  if (r.signal_bin <= 0) throw std::invalid_argument("signal bin not set");
  return r.dbfs(r.signal_bin);
}

double sndr(const SpectrumReport& r, int osr) {
  if (r.signal_bin <= 0) throw std::invalid_argument("signal bin not set");
  const long long edge = r.band_edge(osr);
  if (r.signal_bin > edge)
    throw std::invalid_argument("signal bin outside the measurement band");
  double sig = 0.0, rest = 0.0;
  for (long long k = 1; k <= edge; ++k) {
    if (k == r.signal_bin)
      sig += r.p[k];
    else
      rest += r.p[k];
  }
  return 10.0 * std::log10(std::max(sig, kPowerFloor) /
                           std::max(rest, kPowerFloor));
}

double harmonic_dbfs(const SpectrumReport& r, int k) {
  if (r.signal_bin <= 0) throw std::invalid_argument("signal bin not set");
  // coherent sampling puts harmonic k entirely in one bin; alias against
  // the tick rate, folding back into [0, ticks/2]
  long long fold = (static_cast<long long>(k) * r.signal_bin) % r.ticks;
  if (fold > r.ticks / 2) fold = r.ticks - fold;
  return r.dbfs(fold);
}

double inband_slope(const SpectrumReport& r, long long k_lo, long long k_hi,
                    const std::vector<long long>& mask) {
  if (k_lo < 1 || k_hi >= static_cast<long long>(r.p.size()) || k_hi < k_lo)
    throw std::invalid_argument("slope fit range out of bounds");
  if (static_cast<double>(k_hi) < 10.0 * static_cast<double>(k_lo) - 1e-9)
    throw std::invalid_argument("slope fit needs at least one decade");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  long long count = 0;
  for (long long k = k_lo; k <= k_hi; ++k) {
    if (std::find(mask.begin(), mask.end(), k) != mask.end()) continue;
    double lx = std::log10(static_cast<double>(k));
    double ly = 10.0 * std::log10(std::max(r.p[k], kPowerFloor));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++count;
  }
  if (count < 10)
    throw std::invalid_argument("slope fit needs at least 10 bins");
  double denom = count * sxx - sx * sx;
  return (count * sxy - sx * sy) / denom;
}

double noise_slope(const SpectrumReport& r, int osr) {
  const long long edge = r.band_edge(osr);
  std::vector<long long> mask;
  for (int k = 1; k <= 5; ++k) {
    long long fold = (static_cast<long long>(k) * r.signal_bin) % r.ticks;
    if (fold > r.ticks / 2) fold = r.ticks - fold;
    mask.push_back(fold);
  }
  return inband_slope(r, std::max<long long>(edge / 10, 1), edge, mask);
}

}  // namespace sdmux
