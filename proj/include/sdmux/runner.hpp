#pragma once
#include "sdmux/analysis.hpp"
#include "sdmux/bank.hpp"
#include "sdmux/scenario.hpp"

#include <string>
#include <vector>

namespace sdmux {

struct CaseResult {
  std::string name;
  SpectrumReport spectrum;
  std::vector<ElementParams> params;  // resolved element values for manifest
  double sndr_db = 0.0;
  double h2_dbfs = 0.0;
  double h3_dbfs = 0.0;
  double slope_db_per_dec = 0.0;
};

struct RunOutput {
  Scenario scenario;
  std::vector<CaseResult> cases;
};

// Render every case of a single-point scenario and measure it.
RunOutput run_scenario(const Scenario& s);

struct SweepRow {
  double amplitude_dbfs;
  std::vector<double> sndr_db;  // one per case, scenario order
};

struct SweepOutput {
  Scenario scenario;
  std::vector<std::string> case_names;
  std::vector<std::vector<ElementParams>> params;  // per case
  std::vector<SweepRow> rows;
};

// Amplitude sweep: one modulator run per amplitude, every case rendered
// from the same codes, mismatch drawn once per case up front. Amplitude
// points are independent and run in parallel.
SweepOutput run_sweep(const Scenario& s);

struct DropStats {
  std::vector<double> drops_db;  // reference SNDR minus per-draw SNDR
  double mean_db = 0.0;
  double max_db = 0.0;
};

// Repeated-draw robustness check for one case: re-draw its mismatch
// n_draws times from one seed chain and compare against reference_db.
DropStats dwa_drop_stats(const Scenario& s, const CaseConfig& cc,
                         double reference_db, int n_draws,
                         std::uint64_t seed);

}  // namespace sdmux
