#include "sdmux/bank.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sdmux {

const char* to_string(BankMode m) {
  switch (m) {
    case BankMode::single: return "single";
    case BankMode::phase: return "phase";
    case BankMode::dwa: return "dwa";
    case BankMode::rz: return "rz";
    case BankMode::dwa_multibit: return "dwa-multibit";
    case BankMode::thermometer: return "thermometer";
  }
  return "?";
}

BankMode bank_mode_from_string(const std::string& s) {
  if (s == "single") return BankMode::single;
  if (s == "phase") return BankMode::phase;
  if (s == "dwa") return BankMode::dwa;
  if (s == "rz") return BankMode::rz;
  if (s == "dwa-multibit") return BankMode::dwa_multibit;
  if (s == "thermometer") return BankMode::thermometer;
  throw std::invalid_argument("unknown bank mode '" + s + "'");
}

namespace {

void check_binary(const std::vector<int>& y) {
  for (size_t n = 0; n < y.size(); ++n)
    if (y[n] != 0 && y[n] != 1) {
      std::ostringstream msg;
      msg << "code at tick " << n << " is " << y[n] << ", expected 0 or 1";
      throw std::invalid_argument(msg.str());
    }
}

// append [start, start+len) to an element's list; windows must arrive in
// strictly increasing, non-overlapping order
void claim(ActivationSchedule& s, int element, long long start, int len) {
  auto& lst = s.duty[element];
  if (!lst.empty() && lst.back().start + lst.back().len > start) {
    std::ostringstream msg;
    msg << "element " << element << " retriggered at tick " << start
        << " while still active";
    throw std::runtime_error(msg.str());
  }
  lst.push_back({start, len});
}

}  // namespace

ActivationSchedule single_dac_schedule(const std::vector<int>& y, double vs) {
  check_binary(y);
  ActivationSchedule s;
  s.mode = BankMode::single;
  s.elements = 1;
  s.paths = 1;
  s.duty_len = 1;
  s.ticks = static_cast<long long>(y.size());
  s.unit = vs;
  s.duty.resize(1);
  for (size_t n = 0; n < y.size(); ++n)
    if (y[n] == 1) claim(s, 0, static_cast<long long>(n), 1);
  return s;
}

ActivationSchedule phase_assigned_schedule(
    const std::vector<std::vector<int>>& path_codes, int paths, double vs) {
  if (paths < 1 || static_cast<int>(path_codes.size()) != paths)
    throw std::invalid_argument("path_codes must hold one stream per path");
  ActivationSchedule s;
  s.mode = BankMode::phase;
  s.elements = paths;
  s.paths = paths;
  s.duty_len = paths;
  s.unit = vs;
  s.duty.resize(paths);
  const size_t blocks = path_codes[0].size();
  for (int p = 0; p < paths; ++p) {
    if (path_codes[p].size() != blocks)
      throw std::invalid_argument("path streams must have equal length");
    check_binary(path_codes[p]);
    for (size_t m = 0; m < blocks; ++m)
      if (path_codes[p][m] == 1)
        claim(s, p, static_cast<long long>(m) * paths + p, paths);
  }
  s.ticks = static_cast<long long>(blocks) * paths;
  return s;
}

ActivationSchedule dwa_schedule(const std::vector<int>& y, int paths,
                                double vs, int elements) {
  if (paths < 1) throw std::invalid_argument("paths must be >= 1");
  if (elements == 0) elements = paths;
  if (elements < paths)
    throw std::invalid_argument("element count below path count");
  check_binary(y);
  ActivationSchedule s;
  s.mode = elements == paths ? BankMode::dwa : BankMode::rz;
  s.elements = elements;
  s.paths = paths;
  s.duty_len = paths;
  s.ticks = static_cast<long long>(y.size());
  s.unit = vs;
  s.duty.resize(elements);
  int ptr = 0;
  for (size_t n = 0; n < y.size(); ++n) {
    if (y[n] != 1) continue;
    claim(s, ptr, static_cast<long long>(n), paths);
    ptr = (ptr + 1) % elements;
  }
  return s;
}

ActivationSchedule rz_schedule(const std::vector<int>& y, int paths,
                               double vs) {
  return dwa_schedule(y, paths, vs, paths + 1);
}

ActivationSchedule dwa_schedule_multibit(const std::vector<int>& y, int paths,
                                         int bits, double vs) {
  if (paths < 1) throw std::invalid_argument("paths must be >= 1");
  if (bits < 2)
    throw std::invalid_argument("multibit rotation requires bits >= 2");
  const int levels_above = (1 << bits) - 1;  // unit elements per path
  const int E = paths * levels_above;
  ActivationSchedule s;
  s.mode = BankMode::dwa_multibit;
  s.elements = E;
  s.paths = paths;
  s.duty_len = paths;
  s.ticks = static_cast<long long>(y.size());
  s.unit = vs / levels_above;
  s.duty.resize(E);
  int ptr = 0;
  for (size_t n = 0; n < y.size(); ++n) {
    int code = y[n];
    if (code < 0 || code > levels_above) {
      std::ostringstream msg;
      msg << "code at tick " << n << " is " << code << ", expected 0.."
          << levels_above;
      throw std::invalid_argument(msg.str());
    }
    for (int j = 0; j < code; ++j) {
      claim(s, ptr, static_cast<long long>(n), paths);
      ptr = (ptr + 1) % E;
    }
  }
  return s;
}

ActivationSchedule thermometer_schedule(
    const std::vector<std::vector<int>>& path_codes, int paths, int bits,
    double vs) {
  if (paths < 1 || static_cast<int>(path_codes.size()) != paths)
    throw std::invalid_argument("path_codes must hold one stream per path");
  if (bits < 2)
    throw std::invalid_argument("thermometer coding requires bits >= 2");
  const int levels_above = (1 << bits) - 1;
  ActivationSchedule s;
  s.mode = BankMode::thermometer;
  s.elements = paths * levels_above;
  s.paths = paths;
  s.duty_len = paths;
  s.unit = vs / levels_above;
  s.duty.resize(s.elements);
  const size_t blocks = path_codes[0].size();
  for (int p = 0; p < paths; ++p) {
    if (path_codes[p].size() != blocks)
      throw std::invalid_argument("path streams must have equal length");
    for (size_t m = 0; m < blocks; ++m) {
      int code = path_codes[p][m];
      if (code < 0 || code > levels_above) {
        std::ostringstream msg;
        msg << "path " << p << " block " << m << " code " << code
            << " out of range 0.." << levels_above;
        throw std::invalid_argument(msg.str());
      }
      for (int j = 0; j < code; ++j)
        claim(s, p * levels_above + j,
              static_cast<long long>(m) * paths + p, paths);
    }
  }
  s.ticks = static_cast<long long>(blocks) * paths;
  return s;
}

long long collision_count(const ActivationSchedule& s) {
  long long bad = 0;
  for (const auto& lst : s.duty) {
    for (size_t i = 0; i + 1 < lst.size(); ++i) {
      long long end = lst[i].start + lst[i].len;
      if (lst[i + 1].start < end) bad += end - lst[i + 1].start;
    }
    for (size_t i = 0; i + 1 < lst.size(); ++i)
      if (lst[i + 1].start < lst[i].start) bad += 1;  // ordering breach
  }
  return bad;
}

std::vector<std::uint8_t> duty_mask(const ActivationSchedule& s, int element) {
  std::vector<std::uint8_t> mask(s.ticks, 0);
  for (const auto& iv : s.duty[element]) {
    long long stop = std::min<long long>(iv.start + iv.len, s.ticks);
    for (long long t = iv.start; t < stop; ++t) mask[t] = 1;
  }
  return mask;
}

std::vector<double> element_targets(const ActivationSchedule& s, int element,
                                    const ElementParams& p) {
  auto mask = duty_mask(s, element);
  std::vector<double> v(s.ticks);
  const double hi = p.voff + p.gain * s.unit;
  const double lo = p.voff - p.gain * s.unit;
  for (long long t = 0; t < s.ticks; ++t) v[t] = mask[t] ? hi : lo;
  return v;
}

namespace {

std::vector<double> render_dt_impl(const ActivationSchedule& s,
                                   const std::vector<ElementParams>& params,
                                   bool parallel) {
  if (static_cast<int>(params.size()) != s.elements)
    throw std::invalid_argument("one ElementParams per element required");
  std::vector<std::vector<std::uint8_t>> masks(s.elements);
  for (int m = 0; m < s.elements; ++m) masks[m] = duty_mask(s, m);
  std::vector<double> hi(s.elements), lo(s.elements);
  for (int m = 0; m < s.elements; ++m) {
    hi[m] = params[m].voff + params[m].gain * s.unit;
    lo[m] = params[m].voff - params[m].gain * s.unit;
  }
  std::vector<double> out(s.ticks, 0.0);
  const long long N = s.ticks;
  // each tick sums elements in index order; tick iterations are independent,
  // so the parallel split cannot change any result bit
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
  for (long long t = 0; t < N; ++t) {
    double acc = 0.0;
    for (int m = 0; m < s.elements; ++m)
      acc += masks[m][t] ? hi[m] : lo[m];
    out[t] = acc;
  }
  (void)parallel;
  return out;
}

}  // namespace

std::vector<double> render_dt(const ActivationSchedule& s,
                              const std::vector<ElementParams>& params) {
  return render_dt_impl(s, params, true);
}

std::vector<double> render_dt_serial(const ActivationSchedule& s,
                                     const std::vector<ElementParams>& params) {
  return render_dt_impl(s, params, false);
}

}  // namespace sdmux
