#pragma once
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace sdmux {

enum class BankMode {
  single,        // one DAC at full rate
  phase,         // element p serves phase p, no rotation
  dwa,           // rotating pointer over paths elements (1-bit data)
  rz,            // rotating pointer over paths+1 elements, idle gap each cycle
  dwa_multibit,  // rotating pointer over paths*(2^bits-1) unit elements
  thermometer,   // static unit-element assignment per phase (multibit)
};

const char* to_string(BankMode m);
BankMode bank_mode_from_string(const std::string& s);

// Static per-element imperfections. gain/voff scale and shift the element
// output; tau/sr describe its transition shape (see pulse.hpp). Defaults are
// ideal: unity gain, no offset, instantaneous transitions.
struct ElementParams {
  double gain = 1.0;
  double voff = 0.0;
  double tau_p = 0.0;  // rising time constant, units of one tick
  double tau_n = 0.0;  // falling time constant
  double sr_p = std::numeric_limits<double>::infinity();  // rising slew, V/tick
  double sr_n = std::numeric_limits<double>::infinity();  // falling slew
};

// Half-open activation window [start, start+len) in high-rate ticks.
struct DutyInterval {
  long long start;
  int len;
};

// Which element drives when. Elements idle at -unit and drive +unit inside
// their intervals; intervals per element are strictly ordered and disjoint
// by construction (validate_schedule re-checks independently).
struct ActivationSchedule {
  BankMode mode = BankMode::single;
  int elements = 0;
  int paths = 1;      // data paths; output fullscale is paths * unit
  int duty_len = 1;   // activation length in ticks
  long long ticks = 0;
  double unit = 1.0;  // element level magnitude
  std::vector<std::vector<DutyInterval>> duty;
};

// One full-rate DAC: y(n) = 1 holds +vs for tick n, else -vs.
ActivationSchedule single_dac_schedule(const std::vector<int>& y, double vs);

// Element p latches path p's code at ticks p, p+M, ... and holds M ticks.
// path_codes is [M][n_blocks] of 1-bit codes.
ActivationSchedule phase_assigned_schedule(
    const std::vector<std::vector<int>>& path_codes, int paths, double vs);

// Rotating element selection: each y(n) = 1 claims the next of `elements`
// elements for `paths` ticks. elements >= paths guarantees the claimed
// element is free again; a collision throws.
ActivationSchedule dwa_schedule(const std::vector<int>& y, int paths,
                                double vs, int elements = 0);

// dwa_schedule over paths+1 elements: every element sees an idle tick
// between uses, so its pulse always launches from the rest level.
ActivationSchedule rz_schedule(const std::vector<int>& y, int paths,
                               double vs);

// Unit-element rotation for multibit codes: y(n) claims y(n) consecutive
// elements out of paths*(2^bits - 1), each held for paths ticks.
ActivationSchedule dwa_schedule_multibit(const std::vector<int>& y, int paths,
                                         int bits, double vs);

// Static multibit reference: phase p owns unit elements [p*D, (p+1)*D) with
// D = 2^bits - 1 and always drives the first code-many of them.
ActivationSchedule thermometer_schedule(
    const std::vector<std::vector<int>>& path_codes, int paths, int bits,
    double vs);

// Number of overlapping tick pairs across all elements (0 when legal).
long long collision_count(const ActivationSchedule& s);

// Per-tick drive state of one element: true inside an activation window.
std::vector<std::uint8_t> duty_mask(const ActivationSchedule& s, int element);

// Per-tick target level of one element: voff + gain * (+-unit).
std::vector<double> element_targets(const ActivationSchedule& s, int element,
                                    const ElementParams& p);

// Bank output with instantaneous settling: per-tick sum of element targets.
// Parallelized over ticks; element accumulation order is fixed, so the
// result is bitwise equal to render_dt_serial.
std::vector<double> render_dt(const ActivationSchedule& s,
                              const std::vector<ElementParams>& params);
std::vector<double> render_dt_serial(const ActivationSchedule& s,
                                     const std::vector<ElementParams>& params);

}  // namespace sdmux
