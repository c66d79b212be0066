#include "sdmux/modulator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sdmux {

int quantize(double w, const Quantizer& q) {
  // floor(x + 0.5) puts the tie between two codes on the higher one
  double pos = (w + q.vs) / q.delta();
  double code = std::floor(pos + 0.5);
  if (code < 0.0) return 0;
  if (code > q.max_code()) return q.max_code();
  return static_cast<int>(code);
}

std::vector<std::complex<double>> polynomial_roots(std::vector<double> c) {
  while (!c.empty() && c.front() == 0.0) c.erase(c.begin());
  if (c.size() < 2) return {};
  const int n = static_cast<int>(c.size()) - 1;
  std::vector<std::complex<double>> a(c.begin(), c.end());
  for (auto& v : a) v /= c.front();

  // Durand-Kerner from non-real seed points
  std::vector<std::complex<double>> r(n);
  std::complex<double> seed(0.4, 0.9);
  r[0] = seed;
  for (int i = 1; i < n; ++i) r[i] = r[i - 1] * seed;

  for (int it = 0; it < 500; ++it) {
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      std::complex<double> num = a[0];
      for (int k = 1; k <= n; ++k) num = num * r[i] + a[k];
      std::complex<double> den(1.0, 0.0);
      for (int j = 0; j < n; ++j)
        if (j != i) den *= (r[i] - r[j]);
      std::complex<double> step = num / den;
      r[i] -= step;
      worst = std::max(worst, std::abs(step));
    }
    if (worst < 1e-14) break;
  }
  return r;
}

LoopFilter design_loop_filter(int order) {
  return design_loop_filter(order, {1.0});
}

LoopFilter design_loop_filter(int order, const std::vector<double>& den,
                              double tail_tol) {
  if (order < 1) throw std::invalid_argument("loop filter order must be >= 1");
  std::vector<double> d = den.empty() ? std::vector<double>{1.0} : den;
  if (d[0] != 1.0)
    throw std::invalid_argument("denominator must be monic (leading 1)");

  if (d.size() > 1) {
    // z^L * D(z) has descending coefficients d[0..L]; its roots are the poles
    for (const auto& z : polynomial_roots(d)) {
      double pole = std::abs(z);
      if (pole >= 1.0 - 1e-12) {
        std::ostringstream msg;
        msg << "unstable noise transfer denominator: pole magnitude "
            << pole;
        throw std::invalid_argument(msg.str());
      }
    }
  }

  // numerator (1 - z^-1)^order
  std::vector<double> num(order + 1);
  num[0] = 1.0;
  for (int i = 1; i <= order; ++i)
    num[i] = -num[i - 1] * (order - i + 1) / i;

  // long division num/d in powers of z^-1; quotient starts at 1
  LoopFilter f;
  f.order = order;
  f.den = d;
  std::vector<double> quot;
  quot.push_back(num[0] / d[0]);
  const int hard_cap = 1 << 16;
  double peak = std::abs(quot[0]);
  for (int k = 1; k < hard_cap; ++k) {
    double v = (k < static_cast<int>(num.size())) ? num[k] : 0.0;
    for (int i = 1; i < static_cast<int>(d.size()) && i <= k; ++i)
      v -= d[i] * quot[k - i];
    quot.push_back(v);
    peak = std::max(peak, std::abs(v));
    if (k >= order && std::abs(v) < tail_tol * peak) break;
  }
  if (std::abs(quot.back()) >= tail_tol * peak && quot.size() > 2)
    throw std::runtime_error("loop filter expansion did not converge");
  f.h.assign(quot.begin() + 1, quot.end());
  while (f.h.size() > 1 && f.h.back() == 0.0) f.h.pop_back();
  return f;
}

ModResult modulate(const std::vector<double>& x, const LoopFilter& f,
                   const Quantizer& q) {
  const int taps = static_cast<int>(f.h.size());
  ModResult out;
  out.codes.resize(x.size());
  out.err.resize(x.size());
  // e[(n - 1 - i) % taps] holds e(n-1-i); zero initial state
  std::vector<double> e(std::max(taps, 1), 0.0);
  const double bound = 64.0 * q.vs;
  for (size_t n = 0; n < x.size(); ++n) {
    double w = x[n];
    for (int i = 0; i < taps; ++i) {
      size_t idx = (n + taps - 1 - i) % taps;
      w += f.h[i] * e[idx];
    }
    if (!std::isfinite(w) || std::abs(w) > bound) {
      std::ostringstream msg;
      msg << "modulator state diverged at tick " << n << " (w = " << w << ")";
      throw std::runtime_error(msg.str());
    }
    int code = quantize(w, q);
    out.codes[n] = code;
    double err = q.level(code) - w;
    out.err[n] = err;
    if (taps > 0) e[n % taps] = err;
  }
  return out;
}

std::vector<double> code_levels(const std::vector<int>& codes,
                                const Quantizer& q) {
  std::vector<double> v(codes.size());
  for (size_t i = 0; i < codes.size(); ++i) v[i] = q.level(codes[i]);
  return v;
}

}  // namespace sdmux
