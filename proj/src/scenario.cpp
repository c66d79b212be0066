#include "sdmux/scenario.hpp"

#include "sdmux/rng.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sdmux {

namespace {

[[noreturn]] void fail(const std::string& origin, int line,
                       const std::string& msg) {
  std::ostringstream out;
  out << origin << ":" << line << ": " << msg;
  throw std::runtime_error(out.str());
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v, const std::string& origin,
                    int line) {
  try {
    size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return d;
  } catch (...) {
    fail(origin, line, "expected a number, got '" + v + "'");
  }
}

long long parse_int(const std::string& v, const std::string& origin,
                    int line) {
  try {
    size_t pos = 0;
    long long d = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return d;
  } catch (...) {
    fail(origin, line, "expected an integer, got '" + v + "'");
  }
}

std::uint64_t parse_seed(const std::string& v, const std::string& origin,
                         int line) {
  try {
    size_t pos = 0;
    std::uint64_t d = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return d;
  } catch (...) {
    fail(origin, line, "expected a seed (unsigned integer), got '" + v + "'");
  }
}

std::vector<double> parse_list(const std::string& v, const std::string& origin,
                               int line) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(v);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) fail(origin, line, "empty entry in list");
    out.push_back(parse_double(item, origin, line));
  }
  if (out.empty()) fail(origin, line, "expected a list of numbers");
  return out;
}

// keys a [case] section accepts
void apply_case_key(CaseConfig& cc, const std::string& key,
                    const std::string& val, const std::string& origin,
                    int line) {
  if (key == "mode") {
    try {
      cc.mode = bank_mode_from_string(val);
    } catch (const std::exception& e) {
      fail(origin, line, e.what());
    }
  } else if (key == "mismatch.kind") {
    if (val == "none")
      cc.mismatch.kind = MismatchSpec::Kind::none;
    else if (val == "uniform")
      cc.mismatch.kind = MismatchSpec::Kind::uniform;
    else if (val == "vectors")
      cc.mismatch.kind = MismatchSpec::Kind::vectors;
    else
      fail(origin, line, "mismatch.kind must be none, uniform or vectors");
  } else if (key == "mismatch.range") {
    cc.mismatch.range = parse_double(val, origin, line);
    cc.mismatch.has_range = true;
  } else if (key == "mismatch.std") {
    cc.mismatch.std_dev = parse_double(val, origin, line);
    cc.mismatch.has_std = true;
  } else if (key == "mismatch.seed") {
    cc.mismatch.seed = parse_seed(val, origin, line);
    cc.mismatch.has_seed = true;
  } else if (key == "mismatch.gains") {
    cc.mismatch.gains = parse_list(val, origin, line);
  } else if (key == "mismatch.offsets") {
    cc.mismatch.offsets = parse_list(val, origin, line);
  } else if (key == "shape.variant") {
    if (val == "ideal")
      cc.shape.variant = ShapeSpec::Variant::ideal;
    else if (val == "split")
      cc.shape.variant = ShapeSpec::Variant::split;
    else if (val == "draws")
      cc.shape.variant = ShapeSpec::Variant::draws;
    else
      fail(origin, line, "shape.variant must be ideal, split or draws");
  } else if (key == "shape.tau") {
    cc.shape.tau = parse_double(val, origin, line);
  } else if (key == "shape.slew") {
    cc.shape.slew = parse_double(val, origin, line);
  } else if (key == "shape.split") {
    cc.shape.split = parse_double(val, origin, line);
  } else if (key == "shape.dev_std") {
    cc.shape.dev_std = parse_double(val, origin, line);
  } else if (key == "shape.seed") {
    cc.shape.seed = parse_seed(val, origin, line);
    cc.shape.has_seed = true;
  } else {
    fail(origin, line, "unknown case key '" + key + "'");
  }
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  Scenario s;
  s.origin = origin;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  CaseConfig* cur_case = nullptr;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string str = raw;
    size_t hash = str.find('#');
    if (hash != std::string::npos) str = str.substr(0, hash);
    str = trim(str);
    if (str.empty()) continue;

    if (str.front() == '[') {
      if (str.back() != ']')
        fail(origin, line, "unterminated section header");
      std::string name = trim(str.substr(1, str.size() - 2));
      if (name.rfind("case", 0) == 0 && name.size() > 4 &&
          (name[4] == ' ' || name[4] == '\t')) {
        std::string cname = trim(name.substr(5));
        if (cname.empty()) fail(origin, line, "case section without a name");
        for (const auto& c : s.cases)
          if (c.name == cname)
            fail(origin, line, "duplicate case '" + cname + "'");
        s.cases.push_back(CaseConfig{});
        s.cases.back().name = cname;
        cur_case = &s.cases.back();
        section = "case";
      } else if (name == "scenario" || name == "modulator" ||
                 name == "bank" || name == "input" || name == "analysis") {
        section = name;
        cur_case = nullptr;
      } else {
        fail(origin, line, "unknown section [" + name + "]");
      }
      continue;
    }

    size_t eq = str.find('=');
    if (eq == std::string::npos)
      fail(origin, line, "expected key = value");
    std::string key = trim(str.substr(0, eq));
    std::string val = trim(str.substr(eq + 1));
    if (key.empty()) fail(origin, line, "empty key");
    if (val.empty()) fail(origin, line, "key '" + key + "' has no value");
    if (section.empty())
      fail(origin, line, "key '" + key + "' outside any section");

    if (cur_case) {
      apply_case_key(*cur_case, key, val, origin, line);
      s.key_lines["case " + cur_case->name + "." + key] = line;
      continue;
    }
    s.key_lines[section + "." + key] = line;

    if (section == "scenario") {
      if (key == "name")
        s.name = val;
      else if (key == "description")
        s.description = val;
      else if (key == "seed")
        s.seed = parse_seed(val, origin, line);
      else
        fail(origin, line, "unknown scenario key '" + key + "'");
    } else if (section == "modulator") {
      if (key == "order")
        s.order = static_cast<int>(parse_int(val, origin, line));
      else if (key == "osr")
        s.osr = static_cast<int>(parse_int(val, origin, line));
      else if (key == "bits")
        s.bits = static_cast<int>(parse_int(val, origin, line));
      else if (key == "den")
        s.den = parse_list(val, origin, line);
      else
        fail(origin, line, "unknown modulator key '" + key + "'");
    } else if (section == "bank") {
      if (key == "paths")
        s.paths = static_cast<int>(parse_int(val, origin, line));
      else
        fail(origin, line, "unknown bank key '" + key + "'");
    } else if (section == "input") {
      if (key == "amplitude_dbfs")
        s.amplitude_dbfs = parse_double(val, origin, line);
      else if (key == "bin")
        s.bin = static_cast<int>(parse_int(val, origin, line));
      else
        fail(origin, line, "unknown input key '" + key + "'");
    } else if (section == "analysis") {
      if (key == "samples")
        s.samples = parse_int(val, origin, line);
      else if (key == "oversample")
        s.oversample = static_cast<int>(parse_int(val, origin, line));
      else if (key == "sweep")
        s.sweep_dbfs = parse_list(val, origin, line);
      else
        fail(origin, line, "unknown analysis key '" + key + "'");
    }
  }
  return s;
}

int mode_elements(BankMode mode, int paths, int bits) {
  switch (mode) {
    case BankMode::single: return 1;
    case BankMode::phase: return paths;
    case BankMode::dwa: return paths;
    case BankMode::rz: return paths + 1;
    case BankMode::dwa_multibit:
    case BankMode::thermometer: return paths * ((1 << bits) - 1);
  }
  return 0;
}

namespace {

int line_of(const Scenario& s, const std::string& key) {
  auto it = s.key_lines.find(key);
  return it == s.key_lines.end() ? 0 : it->second;
}

[[noreturn]] void vfail(const Scenario& s, const std::string& origin,
                        const std::string& key, const std::string& msg) {
  fail(origin, line_of(s, key), msg);
}

bool power_of_two(long long n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

void validate_scenario(const Scenario& s, const std::string& origin) {
  if (s.name.empty()) fail(origin, 0, "scenario has no name");
  if (s.order < 1 || s.order > 8)
    vfail(s, origin, "modulator.order", "order must be in 1..8");
  if (s.osr < 2) vfail(s, origin, "modulator.osr", "osr must be >= 2");
  if (s.bits < 1 || s.bits > 8)
    vfail(s, origin, "modulator.bits", "bits must be in 1..8");
  if (!s.den.empty() && s.den[0] != 1.0)
    vfail(s, origin, "modulator.den", "den must start with 1");
  if (s.paths < 1 || s.paths > 64)
    vfail(s, origin, "bank.paths", "paths must be in 1..64");
  if (!power_of_two(s.samples))
    vfail(s, origin, "analysis.samples", "samples must be a power of two");
  if (s.samples % (2LL * s.osr) != 0)
    vfail(s, origin, "analysis.samples",
          "samples must be a multiple of 2*osr");
  if (s.oversample < 1 || s.oversample > 256)
    vfail(s, origin, "analysis.oversample", "oversample must be in 1..256");
  const long long edge = s.samples / (2LL * s.osr);
  if (s.bin < 1 || s.bin > edge)
    vfail(s, origin, "input.bin",
          "bin must lie inside the measurement band (1.." +
              std::to_string(edge) + ")");
  if (s.bin % 2 == 0)
    vfail(s, origin, "input.bin",
          "bin must be odd so harmonics fold onto distinct bins");
  for (size_t i = 1; i < s.sweep_dbfs.size(); ++i)
    if (s.sweep_dbfs[i] <= s.sweep_dbfs[i - 1])
      vfail(s, origin, "analysis.sweep",
            "sweep amplitudes must be strictly ascending");
  if (s.cases.empty()) fail(origin, 0, "scenario defines no cases");

  for (const auto& cc : s.cases) {
    const std::string kp = "case " + cc.name + ".";
    const bool multibit = cc.mode == BankMode::dwa_multibit ||
                          cc.mode == BankMode::thermometer;
    if (multibit && s.bits < 2)
      vfail(s, origin, kp + "mode",
            std::string(to_string(cc.mode)) + " mode requires bits >= 2");
    if (!multibit && s.bits != 1)
      vfail(s, origin, kp + "mode",
            std::string(to_string(cc.mode)) + " mode requires bits = 1");
    const bool latched = cc.mode == BankMode::phase ||
                         cc.mode == BankMode::thermometer;
    if (latched && s.samples % s.paths != 0)
      vfail(s, origin, kp + "mode",
            "phase-latched modes need samples divisible by paths");
    const int elems = mode_elements(cc.mode, s.paths, s.bits);

    const auto& mm = cc.mismatch;
    switch (mm.kind) {
      case MismatchSpec::Kind::none:
        if (mm.has_range || mm.has_std || !mm.gains.empty() ||
            !mm.offsets.empty())
          vfail(s, origin, kp + "mismatch.kind",
                "mismatch parameters given but kind is none");
        break;
      case MismatchSpec::Kind::uniform: {
        if (!mm.has_range && !mm.has_std)
          vfail(s, origin, kp + "mismatch.kind",
                "uniform mismatch needs range or std");
        if (mm.has_range && mm.has_std) {
          double implied = mm.std_dev * std::sqrt(3.0);
          if (std::abs(implied - mm.range) > 1e-12 * std::max(1.0, mm.range))
            vfail(s, origin, kp + "mismatch.range",
                  "range and std disagree (range must equal std*sqrt(3))");
        }
        double r = mm.has_range ? mm.range : mm.std_dev * std::sqrt(3.0);
        if (!(r > 0.0) || r >= 1.0)
          vfail(s, origin, kp + "mismatch.range",
                "uniform half-range must be in (0, 1)");
        break;
      }
      case MismatchSpec::Kind::vectors:
        if (static_cast<int>(mm.gains.size()) != elems)
          vfail(s, origin, kp + "mismatch.gains",
                "expected " + std::to_string(elems) + " gains, got " +
                    std::to_string(mm.gains.size()));
        if (static_cast<int>(mm.offsets.size()) != elems)
          vfail(s, origin, kp + "mismatch.offsets",
                "expected " + std::to_string(elems) + " offsets, got " +
                    std::to_string(mm.offsets.size()));
        break;
    }

    const auto& sh = cc.shape;
    if (sh.variant != ShapeSpec::Variant::ideal) {
      if (!(sh.tau >= 0.0) || sh.tau > 64.0)
        vfail(s, origin, kp + "shape.tau", "tau must be in [0, 64] ticks");
      if (!(sh.slew > 0.0))
        vfail(s, origin, kp + "shape.slew", "slew must be positive");
      if (s.oversample < 2)
        vfail(s, origin, "analysis.oversample",
              "shaped cases need oversample >= 2");
      if (sh.variant == ShapeSpec::Variant::split &&
          (sh.split <= -1.0 || sh.split >= 1.0))
        vfail(s, origin, kp + "shape.split", "split must be in (-1, 1)");
      if (sh.variant == ShapeSpec::Variant::draws &&
          (sh.dev_std < 0.0 || sh.dev_std * std::sqrt(3.0) >= 1.0))
        vfail(s, origin, kp + "shape.dev_std",
              "dev_std too large: draws could reach zero");
    }
  }
}

Scenario load_scenario(const std::string& text, const std::string& origin) {
  Scenario s = parse_scenario(text, origin);
  validate_scenario(s, origin);
  return s;
}

std::vector<ElementParams> gen_mismatch(std::uint64_t seed,
                                        const MismatchSpec& spec,
                                        int elements) {
  std::vector<ElementParams> out(elements);
  switch (spec.kind) {
    case MismatchSpec::Kind::none:
      break;
    case MismatchSpec::Kind::vectors:
      for (int m = 0; m < elements; ++m) {
        out[m].gain = spec.gains[m];
        out[m].voff = spec.offsets[m];
      }
      break;
    case MismatchSpec::Kind::uniform: {
      const double a =
          spec.has_range ? spec.range : spec.std_dev * std::sqrt(3.0);
      Uniform u(seed);
      // fixed draw order: all gains first, then all offsets
      for (int m = 0; m < elements; ++m)
        out[m].gain = 1.0 + u.range(-a, a);
      for (int m = 0; m < elements; ++m) out[m].voff = u.range(-a, a);
      break;
    }
  }
  return out;
}

void apply_shape(std::vector<ElementParams>& params, const ShapeSpec& spec,
                 std::uint64_t seed) {
  switch (spec.variant) {
    case ShapeSpec::Variant::ideal:
      return;  // defaults already instantaneous
    case ShapeSpec::Variant::split:
      for (auto& p : params) {
        p.tau_p = spec.tau * (1.0 + spec.split);
        p.tau_n = spec.tau * (1.0 - spec.split);
        p.sr_p = spec.slew * (1.0 + spec.split);
        p.sr_n = spec.slew * (1.0 - spec.split);
      }
      return;
    case ShapeSpec::Variant::draws: {
      const double a = spec.dev_std * std::sqrt(3.0);
      Uniform u(seed);
      // per element: tau_p, tau_n, sr_p, sr_n
      for (auto& p : params) {
        p.tau_p = spec.tau * (1.0 + u.range(-a, a));
        p.tau_n = spec.tau * (1.0 + u.range(-a, a));
        p.sr_p = spec.slew * (1.0 + u.range(-a, a));
        p.sr_n = spec.slew * (1.0 + u.range(-a, a));
      }
      return;
    }
  }
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt_list(const std::vector<double>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += fmt(v[i]);
  }
  return out;
}

}  // namespace

std::string canonical_text(const Scenario& s) {
  std::ostringstream out;
  out << "[scenario]\n";
  out << "name = " << s.name << "\n";
  if (!s.description.empty()) out << "description = " << s.description << "\n";
  out << "seed = " << s.seed << "\n";
  out << "\n[modulator]\n";
  out << "order = " << s.order << "\n";
  out << "osr = " << s.osr << "\n";
  out << "bits = " << s.bits << "\n";
  if (!s.den.empty()) out << "den = " << fmt_list(s.den) << "\n";
  out << "\n[bank]\n";
  out << "paths = " << s.paths << "\n";
  out << "\n[input]\n";
  out << "amplitude_dbfs = " << fmt(s.amplitude_dbfs) << "\n";
  if (s.bin > 0) out << "bin = " << s.bin << "\n";
  out << "\n[analysis]\n";
  out << "samples = " << s.samples << "\n";
  out << "oversample = " << s.oversample << "\n";
  if (!s.sweep_dbfs.empty())
    out << "sweep = " << fmt_list(s.sweep_dbfs) << "\n";
  for (const auto& cc : s.cases) {
    out << "\n[case " << cc.name << "]\n";
    out << "mode = " << to_string(cc.mode) << "\n";
    const auto& mm = cc.mismatch;
    if (mm.kind == MismatchSpec::Kind::uniform) {
      out << "mismatch.kind = uniform\n";
      if (mm.has_range) out << "mismatch.range = " << fmt(mm.range) << "\n";
      if (mm.has_std) out << "mismatch.std = " << fmt(mm.std_dev) << "\n";
      if (mm.has_seed) out << "mismatch.seed = " << mm.seed << "\n";
    } else if (mm.kind == MismatchSpec::Kind::vectors) {
      out << "mismatch.kind = vectors\n";
      out << "mismatch.gains = " << fmt_list(mm.gains) << "\n";
      out << "mismatch.offsets = " << fmt_list(mm.offsets) << "\n";
    }
    const auto& sh = cc.shape;
    if (sh.variant != ShapeSpec::Variant::ideal) {
      out << "shape.variant = "
          << (sh.variant == ShapeSpec::Variant::split ? "split" : "draws")
          << "\n";
      out << "shape.tau = " << fmt(sh.tau) << "\n";
      out << "shape.slew = " << fmt(sh.slew) << "\n";
      if (sh.variant == ShapeSpec::Variant::split)
        out << "shape.split = " << fmt(sh.split) << "\n";
      else
        out << "shape.dev_std = " << fmt(sh.dev_std) << "\n";
      if (sh.has_seed) out << "shape.seed = " << sh.seed << "\n";
    }
  }
  return out.str();
}

namespace {

const char* kFig10 = R"(# four-path bank at a fixed tone: ideal elements, static
# gain/offset spread, and the same spread with rotation enabled
[scenario]
name = fig10
description = element spread versus rotation at a fixed -3 dBFS tone
seed = 1

[modulator]
order = 2
osr = 64
bits = 1

[bank]
paths = 4

[input]
amplitude_dbfs = -3
bin = 61

[analysis]
samples = 32768
oversample = 16

[case ideal]
mode = phase

[case mismatch]
mode = phase
mismatch.kind = vectors
mismatch.gains = 1.07, 0.93, 0.98, 0.96
mismatch.offsets = 0.05, -0.01, 0.07, -0.06

[case dwa]
mode = dwa
mismatch.kind = vectors
mismatch.gains = 1.07, 0.93, 0.98, 0.96
mismatch.offsets = 0.05, -0.01, 0.07, -0.06
)";

const char* kFig11 = R"(# amplitude sweep of a 3-bit four-path bank: ideal elements,
# 7% uniform spread without rotation, and the same spread with rotation
[scenario]
name = fig11
description = dynamic range of a multibit bank with and without rotation
seed = 1

[modulator]
order = 1
osr = 32
bits = 3

[bank]
paths = 4

[input]
bin = 151

[analysis]
samples = 32768
oversample = 16
sweep = -90, -80, -70, -60, -50, -40, -30, -20, -10, -6, -3, 0

[case ideal]
mode = thermometer

[case mismatch]
mode = thermometer
mismatch.kind = uniform
mismatch.range = 0.07
mismatch.seed = 4

[case dwa]
mode = dwa-multibit
mismatch.kind = uniform
mismatch.range = 0.07
mismatch.seed = 4
)";

const char* kFig15 = R"(# finite-transition study: one full-rate DAC with asymmetric
# edges, a four-path bank without and with rotation, and a
# five-element return-to-zero bank, all at tau = 0.5 ticks and
# slew = 1.5 V/tick
[scenario]
name = fig15
description = finite transition shapes across multiplexing schemes
seed = 1

[modulator]
order = 2
osr = 64
bits = 1

[bank]
paths = 4

[input]
amplitude_dbfs = -3
bin = 61

[analysis]
samples = 32768
oversample = 16

[case single]
mode = single
shape.variant = split
shape.tau = 0.5
shape.slew = 1.5
shape.split = 0.05

[case nrz4]
mode = phase
shape.variant = draws
shape.tau = 0.5
shape.slew = 1.5
shape.dev_std = 0.05
shape.seed = 5

[case dwa4]
mode = dwa
shape.variant = draws
shape.tau = 0.5
shape.slew = 1.5
shape.dev_std = 0.05
shape.seed = 5

[case rz5]
mode = rz
shape.variant = draws
shape.tau = 0.5
shape.slew = 1.5
shape.dev_std = 0.05
shape.seed = 5
)";

}  // namespace

const std::vector<std::pair<std::string, std::string>>& bundled_scenarios() {
  static const std::vector<std::pair<std::string, std::string>> all = {
      {"fig10", kFig10}, {"fig11", kFig11}, {"fig15", kFig15}};
  return all;
}

const std::string* find_bundled(const std::string& name) {
  std::string key = name;
  const std::string suffix = ".scenario";
  if (key.size() > suffix.size() &&
      key.compare(key.size() - suffix.size(), suffix.size(), suffix) == 0)
    key = key.substr(0, key.size() - suffix.size());
  for (const auto& [n, text] : bundled_scenarios())
    if (n == key) return &text;
  return nullptr;
}

}  // namespace sdmux
