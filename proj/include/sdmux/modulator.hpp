#pragma once
#include <complex>
#include <vector>

namespace sdmux {

// Uniform mid-rise quantizer with 2^bits levels spanning [-vs, +vs].
struct Quantizer {
  int bits = 1;
  double vs = 1.0;

  int levels() const { return 1 << bits; }
  int max_code() const { return levels() - 1; }
  double delta() const { return 2.0 * vs / static_cast<double>(max_code()); }
  double level(int code) const { return -vs + delta() * code; }
};

// Output code for input w; clamped, ties resolve toward the higher code.
int quantize(double w, const Quantizer& q);

// Error-feedback loop filter. h[i] weights e(n-1-i) in the input sum, so the
// noise transfer function is 1 + sum_i h[i] z^-(i+1).
struct LoopFilter {
  int order = 0;
  std::vector<double> h;
  std::vector<double> den;  // 1 + den[1] z^-1 + ... (den[0] == 1)
};

// Pure differentiator noise shaping (1 - z^-1)^order; exact for order <= 2.
LoopFilter design_loop_filter(int order);

// Noise transfer (1 - z^-1)^order / den. den must have all poles strictly
// inside the unit circle; h is truncated when the residue falls below
// tail_tol relative to the largest coefficient.
LoopFilter design_loop_filter(int order, const std::vector<double>& den,
                              double tail_tol = 1e-12);

// Roots of c[0] x^n + ... + c[n] (Durand-Kerner iteration).
std::vector<std::complex<double>> polynomial_roots(std::vector<double> c);

struct ModResult {
  std::vector<int> codes;
  std::vector<double> err;  // quantization error sequence, for diagnostics
};

// Run the error-feedback loop over x. Throws if the state diverges,
// reporting the first bad tick.
ModResult modulate(const std::vector<double>& x, const LoopFilter& f,
                   const Quantizer& q);

// Map codes to analog levels (for bits == 1 these are -vs / +vs).
std::vector<double> code_levels(const std::vector<int>& codes,
                                const Quantizer& q);

}  // namespace sdmux
