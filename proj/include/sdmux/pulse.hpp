#pragma once
#include "sdmux/bank.hpp"

#include <limits>
#include <vector>

namespace sdmux {

// Transition dynamics of one element. Times are in units of one tick; an
// output step first slews at the direction's rate while more than sr*tau
// away from the target, then relaxes exponentially with the direction's tau.
struct ShapeParams {
  double tau_p = 0.0;
  double tau_n = 0.0;
  double sr_p = std::numeric_limits<double>::infinity();
  double sr_n = std::numeric_limits<double>::infinity();
};

// Continuous-time element output sampled oversample times per tick, sample i
// taken at time (i+1)/oversample. targets[n] holds for tick n; start_level
// is the value settled before tick 0. Each level change contributes one
// rail-to-rail edge waveform; contributions superpose, which keeps the area
// deficit of a pulse independent of how long the pulse holds.
std::vector<double> shape_element(const std::vector<double>& targets,
                                  const ShapeParams& sp, double start_level,
                                  int oversample);

// Full bank waveform: per-element shaped outputs summed sample-wise.
// Element gain/offset scale the targets; tau/sr come from the same params.
// Parallel version renders elements into private buffers and sums them in
// fixed element order, bitwise equal to the serial version.
std::vector<double> render_analog(const ActivationSchedule& s,
                                  const std::vector<ElementParams>& params,
                                  int oversample);
std::vector<double> render_analog_serial(
    const ActivationSchedule& s, const std::vector<ElementParams>& params,
    int oversample);

// Keep the last of each tick's oversample samples.
std::vector<double> downsample_ticks(const std::vector<double>& wave,
                                     int oversample);

}  // namespace sdmux
