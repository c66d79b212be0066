#include "sdmux/interleave.hpp"

#include <sstream>
#include <stdexcept>

namespace sdmux {

PolyphaseSet polyphase_decompose(const std::vector<double>& h, int paths) {
  if (paths < 1) throw std::invalid_argument("paths must be >= 1");
  PolyphaseSet ps;
  ps.paths = paths;
  ps.comp.resize(paths);
  for (size_t i = 0; i < h.size(); ++i)
    ps.comp[i % paths].push_back(h[i]);
  for (auto& c : ps.comp)
    if (c.empty()) c.push_back(0.0);
  return ps;
}

std::vector<double> interleave_coefficients(const PolyphaseSet& ps) {
  size_t longest = 0;
  for (const auto& c : ps.comp) longest = std::max(longest, c.size());
  std::vector<double> h(longest * ps.paths, 0.0);
  for (int k = 0; k < ps.paths; ++k)
    for (size_t j = 0; j < ps.comp[k].size(); ++j)
      h[k + j * ps.paths] = ps.comp[k][j];
  return h;
}

BlockFilter make_block_filter(const PolyphaseSet& ps) {
  const int M = ps.paths;
  std::vector<double> h = interleave_coefficients(ps);
  BlockFilter bf;
  bf.paths = M;
  bf.taps = static_cast<int>(h.size());
  bf.terms.resize(M);
  // output phase r, high-rate lag k = s + q*M: input phase r-s mod M,
  // block lag q (+1 when the phase wraps). Ascending k keeps the
  // accumulation order identical to the flat convolution.
  for (int r = 0; r < M; ++r) {
    for (int k = 0; k < bf.taps; ++k) {
      int s = k % M;
      int q = k / M;
      int phase = r - s;
      int block = q;
      if (phase < 0) {
        phase += M;
        block += 1;
      }
      bf.terms[r].push_back({k, phase, block, h[k]});
    }
  }
  return bf;
}

std::vector<std::vector<double>> block_filter_apply(
    const std::vector<std::vector<double>>& blocks, const BlockFilter& bf) {
  const int M = bf.paths;
  std::vector<std::vector<double>> out(blocks.size(),
                                       std::vector<double>(M, 0.0));
  for (size_t m = 0; m < blocks.size(); ++m) {
    if (static_cast<int>(blocks[m].size()) != M)
      throw std::invalid_argument("block width must equal paths");
    for (int r = 0; r < M; ++r) {
      double acc = 0.0;
      for (const auto& t : bf.terms[r]) {
        long long mb = static_cast<long long>(m) - t.block;
        double x = (mb >= 0) ? blocks[mb][t.phase] : 0.0;
        acc += t.coeff * x;
      }
      out[m][r] = acc;
    }
  }
  return out;
}

TiResult ti_modulate(const std::vector<double>& x, int paths,
                     const LoopFilter& f, const Quantizer& q) {
  if (paths < 1) throw std::invalid_argument("paths must be >= 1");
  if (x.size() % paths != 0) {
    std::ostringstream msg;
    msg << "input length " << x.size() << " is not a multiple of " << paths;
    throw std::invalid_argument(msg.str());
  }
  const int M = paths;
  const size_t blocks = x.size() / M;

  // blocked form of the feedback response sum_k h[k] z^-(k+1): within a
  // block, phase r sees same-block errors of phases < r (lag > 0, block 0)
  // and earlier blocks otherwise, the pseudo-circulant layout. Terms stay
  // in ascending high-rate lag order so the accumulation matches the flat
  // recursion bitwise.
  std::vector<double> hfb(f.h.size() + 1, 0.0);
  for (size_t i = 0; i < f.h.size(); ++i) hfb[i + 1] = f.h[i];
  BlockFilter bf = make_block_filter(polyphase_decompose(hfb, M));

  TiResult out;
  out.paths = M;
  out.err.resize(x.size());
  std::vector<int> raw(x.size(), 0);
  std::vector<std::vector<double>> err_blocks(
      blocks, std::vector<double>(M, 0.0));
  const double bound = 64.0 * q.vs;
  for (size_t m = 0; m < blocks; ++m) {
    for (int r = 0; r < M; ++r) {
      double w = x[m * M + r];
      for (const auto& t : bf.terms[r]) {
        if (t.coeff == 0.0) continue;  // the lag-0 slot is structurally zero
        long long mb = static_cast<long long>(m) - t.block;
        if (mb >= 0) w += t.coeff * err_blocks[mb][t.phase];
      }
      if (!std::isfinite(w) || std::abs(w) > bound) {
        std::ostringstream msg;
        msg << "modulator state diverged at tick " << m * M + r
            << " (w = " << w << ")";
        throw std::runtime_error(msg.str());
      }
      int code = quantize(w, q);
      raw[m * M + r] = code;
      double e = q.level(code) - w;
      err_blocks[m][r] = e;
      out.err[m * M + r] = e;
    }
  }

  // the serializer empties a block over the next M ticks: one block of
  // latency, logic 0 before the first block lands
  out.codes.assign(x.size(), 0);
  for (size_t n = M; n < x.size(); ++n) out.codes[n] = raw[n - M];
  out.path_codes.assign(M, std::vector<int>(blocks, 0));
  for (size_t n = 0; n < x.size(); ++n)
    out.path_codes[n % M][n / M] = out.codes[n];
  return out;
}

}  // namespace sdmux
