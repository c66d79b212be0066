#pragma once
#include "sdmux/bank.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace sdmux {

// Static element gain/offset dispersion. Uniform draws may be given either
// as a half-range or as a standard deviation (range = std * sqrt(3)); both
// together must agree.
struct MismatchSpec {
  enum class Kind { none, uniform, vectors } kind = Kind::none;
  double range = 0.0;
  bool has_range = false;
  bool has_std = false;
  double std_dev = 0.0;
  bool has_seed = false;
  std::uint64_t seed = 0;
  std::vector<double> gains;    // explicit per-element gains (vectors kind)
  std::vector<double> offsets;  // explicit per-element offsets
};

// Element transition dynamics. Times in ticks, slew in V per tick.
//   ideal: instantaneous settling.
//   split: rising params scaled by (1 + split), falling by (1 - split).
//   draws: per-element factors 1 + U(-dev, +dev), dev = dev_std * sqrt(3),
//          drawn per element as (tau_p, tau_n, sr_p, sr_n).
struct ShapeSpec {
  enum class Variant { ideal, split, draws } variant = Variant::ideal;
  double tau = 0.5;
  double slew = 1.5;
  double split = 0.05;
  double dev_std = 0.05;
  bool has_seed = false;
  std::uint64_t seed = 0;
};

struct CaseConfig {
  std::string name;
  BankMode mode = BankMode::phase;
  MismatchSpec mismatch;
  ShapeSpec shape;
};

struct Scenario {
  std::string name;
  std::string description;

  // modulator
  int order = 2;
  int osr = 64;
  int bits = 1;
  std::vector<double> den;  // optional noise-transfer denominator

  // bank
  int paths = 4;

  // input
  double amplitude_dbfs = -3.0;
  int bin = 0;

  // analysis
  long long samples = 1LL << 15;
  int oversample = 16;
  std::vector<double> sweep_dbfs;  // non-empty: amplitude sweep scenario

  std::uint64_t seed = 1;

  std::vector<CaseConfig> cases;

  // parse bookkeeping for error messages: source name and the line each
  // "section.key" (or "case NAME.key") was set on
  std::string origin;
  std::map<std::string, int> key_lines;

  bool is_sweep() const { return !sweep_dbfs.empty(); }
};

// Parse the line-oriented key=value format (see README). origin names the
// source for error messages; failures throw with "origin:line: message".
Scenario parse_scenario(const std::string& text, const std::string& origin);

// Parse + full semantic validation (mode/bits compatibility, vector
// lengths, bin placement, power-of-two record, distribution consistency).
Scenario load_scenario(const std::string& text, const std::string& origin);

void validate_scenario(const Scenario& s, const std::string& origin);

// Element count implied by a mode.
int mode_elements(BankMode mode, int paths, int bits);

// Materialize per-element gain/offset values. Draw order is fixed: all
// gains first, then all offsets, one Uniform stream from the seed.
std::vector<ElementParams> gen_mismatch(std::uint64_t seed,
                                        const MismatchSpec& spec,
                                        int elements);

// Fill tau/sr fields from a shape spec (draw order per element:
// tau_p, tau_n, sr_p, sr_n).
void apply_shape(std::vector<ElementParams>& params, const ShapeSpec& spec,
                 std::uint64_t seed);

// Round-trip serialization of a resolved scenario.
std::string canonical_text(const Scenario& s);

// Built-in scenarios, addressable by name from the command line.
const std::vector<std::pair<std::string, std::string>>& bundled_scenarios();
const std::string* find_bundled(const std::string& name);

}  // namespace sdmux
