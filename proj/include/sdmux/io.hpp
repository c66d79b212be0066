#pragma once
#include "sdmux/runner.hpp"

#include <string>
#include <vector>

namespace sdmux {

// 12 significant digits, '.' decimal separator, no locale influence.
std::string format_number(double v);

// Rows of already-formatted cells; writes header + rows, LF line endings.
std::string csv_text(const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows);

void write_file(const std::string& path, const std::string& text);

// One spectrum: bin index, frequency as a fraction of the tick rate, dBFS.
// Rows cover bins 0 .. ticks/2 (content above the tick Nyquist is omitted).
std::string psd_csv(const SpectrumReport& r);

// Scalar measurements, one row per case.
std::string metrics_csv(const std::vector<CaseResult>& cases);

// Sweep table: amplitude column + one SNDR column per case.
std::string sweep_csv(const SweepOutput& out);

// Machine-readable record of a run: resolved scenario, seeds, every drawn
// element value, output file list. JSON.
std::string manifest_json(const Scenario& s,
                          const std::vector<std::string>& case_names,
                          const std::vector<std::vector<ElementParams>>& params,
                          const std::vector<std::string>& outputs);

}  // namespace sdmux
