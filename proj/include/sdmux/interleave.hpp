#pragma once
#include "sdmux/modulator.hpp"

#include <vector>

namespace sdmux {

// Polyphase components of an FIR response: comp[k][j] = h[k + j*paths].
struct PolyphaseSet {
  int paths = 1;
  std::vector<std::vector<double>> comp;
};

PolyphaseSet polyphase_decompose(const std::vector<double>& h, int paths);

// Inverse of polyphase_decompose (round-trip identity, trailing zeros kept).
std::vector<double> interleave_coefficients(const PolyphaseSet& ps);

// Blocked form of an FIR filter operating on paths-way sample blocks.
// Applying it to the blocked input and re-serializing matches the direct
// convolution bitwise: every output accumulates its terms in ascending
// high-rate lag order, exactly like the flat loop.
struct BlockFilter {
  int paths = 1;
  int taps = 0;  // flat response length
  // per output phase: (high-rate lag, input phase, block lag, coefficient)
  struct Term {
    int lag;
    int phase;
    int block;
    double coeff;
  };
  std::vector<std::vector<Term>> terms;
};

BlockFilter make_block_filter(const PolyphaseSet& ps);

// blocks[m][p] is sample m*paths + p. Output has the same shape.
std::vector<std::vector<double>> block_filter_apply(
    const std::vector<std::vector<double>>& blocks, const BlockFilter& bf);

struct TiResult {
  int paths = 1;
  std::vector<int> codes;                    // serialized, see below
  std::vector<std::vector<int>> path_codes;  // [paths][n_blocks] low-rate streams
  std::vector<double> err;
};

// Block-wise error-feedback modulation producing paths low-rate code streams.
// The serialized stream equals modulate(x) delayed by one block: codes[n] is
// logic 0 for n < paths and modulate(x).codes[n - paths] afterwards, exactly.
// x.size() must be a multiple of paths.
TiResult ti_modulate(const std::vector<double>& x, int paths,
                     const LoopFilter& f, const Quantizer& q);

}  // namespace sdmux
