#pragma once
#include <complex>
#include <vector>

namespace sdmux {

// One-sided power spectrum of a coherently sampled record. p[k] holds the
// absolute power in bin k (sum over bins equals the mean square), so dbfs()
// references fullscale^2 / 2, the power of a fullscale sine.
struct SpectrumReport {
  long long nfft = 0;      // record length in samples
  long long ticks = 0;     // record length in modulator ticks
  int oversample = 1;      // samples per tick (nfft == ticks * oversample)
  double fullscale = 1.0;  // amplitude reference for dBFS
  int signal_bin = -1;     // f_in as a bin index at the tick rate
  std::vector<double> p;   // nfft/2 + 1 one-sided powers

  double dbfs(long long k) const;
  long long band_edge(int osr) const { return ticks / (2 * osr); }
};

// Unnormalized complex spectrum of a real record (power-of-two length).
std::vector<std::complex<double>> fft_real(const std::vector<double>& x);

// Rectangular-window periodogram. x.size() must be a power of two and a
// multiple of oversample.
SpectrumReport psd(const std::vector<double>& x, int oversample,
                   double fullscale, int signal_bin = -1);

double signal_dbfs(const SpectrumReport& r);

// Signal power over everything else in (0, ticks/(2*osr)], in dB.
// DC and the signal bin are excluded; harmonics are not.
double sndr(const SpectrumReport& r, int osr);

// Power at harmonic k of the signal bin, alias-folded at the tick rate, in
// dBFS. Coherent sampling lands each harmonic in exactly one bin.
double harmonic_dbfs(const SpectrumReport& r, int k);

// Least-squares slope of bin power [dB] versus log10(bin index) over
// k in [k_lo, k_hi], skipping bins listed in mask. Units: dB/decade.
// Requires at least one decade of span and 10 surviving bins.
double inband_slope(const SpectrumReport& r, long long k_lo, long long k_hi,
                    const std::vector<long long>& mask = {});

// Noise slope helper: fits [band_edge/10, band_edge] with the signal bin
// and its first five harmonics masked.
double noise_slope(const SpectrumReport& r, int osr);

}  // namespace sdmux
