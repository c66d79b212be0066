#include "sdmux/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace sdmux {

std::string format_number(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_text(const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += row[i];
    }
    out += '\n';
  }
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);  // binary keeps LF endings
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

std::string psd_csv(const SpectrumReport& r) {
  std::vector<std::vector<std::string>> rows;
  const long long last = r.ticks / 2;  // content above tick Nyquist omitted
  rows.reserve(last + 1);
  for (long long k = 0; k <= last; ++k) {
    rows.push_back({std::to_string(k),
                    format_number(static_cast<double>(k) /
                                  static_cast<double>(r.ticks)),
                    format_number(r.dbfs(k))});
  }
  return csv_text({"bin", "freq_per_tick_rate", "power_dbfs"}, rows);
}

std::string metrics_csv(const std::vector<CaseResult>& cases) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& c : cases)
    rows.push_back({c.name, format_number(c.sndr_db),
                    format_number(c.h2_dbfs), format_number(c.h3_dbfs),
                    format_number(c.slope_db_per_dec)});
  return csv_text(
      {"case", "sndr_db", "h2_dbfs", "h3_dbfs", "noise_slope_db_per_decade"},
      rows);
}

std::string sweep_csv(const SweepOutput& out) {
  std::vector<std::string> header = {"amplitude_dbfs"};
  for (const auto& n : out.case_names) header.push_back(n + "_sndr_db");
  std::vector<std::vector<std::string>> rows;
  for (const auto& row : out.rows) {
    std::vector<std::string> cells = {format_number(row.amplitude_dbfs)};
    for (double v : row.sndr_db) cells.push_back(format_number(v));
    rows.push_back(std::move(cells));
  }
  return csv_text(header, rows);
}

std::string manifest_json(const Scenario& s,
                          const std::vector<std::string>& case_names,
                          const std::vector<std::vector<ElementParams>>& params,
                          const std::vector<std::string>& outputs) {
  using json = nlohmann::ordered_json;
  json root;
  json sc;
  sc["name"] = s.name;
  sc["description"] = s.description;
  sc["seed"] = s.seed;
  sc["modulator"] = {{"order", s.order}, {"osr", s.osr}, {"bits", s.bits}};
  if (!s.den.empty()) sc["modulator"]["den"] = s.den;
  sc["bank"] = {{"paths", s.paths}};
  sc["input"] = {{"amplitude_dbfs", s.amplitude_dbfs}, {"bin", s.bin}};
  sc["analysis"] = {{"samples", s.samples}, {"oversample", s.oversample}};
  if (s.is_sweep()) sc["analysis"]["sweep"] = s.sweep_dbfs;
  root["scenario"] = sc;

  json jcases = json::array();
  for (size_t i = 0; i < s.cases.size(); ++i) {
    const auto& cc = s.cases[i];
    json jc;
    jc["name"] = cc.name;
    jc["mode"] = to_string(cc.mode);
    switch (cc.mismatch.kind) {
      case MismatchSpec::Kind::none: jc["mismatch"] = "none"; break;
      case MismatchSpec::Kind::uniform: {
        json jm;
        jm["kind"] = "uniform";
        if (cc.mismatch.has_range) jm["range"] = cc.mismatch.range;
        if (cc.mismatch.has_std) jm["std"] = cc.mismatch.std_dev;
        jm["seed"] = cc.mismatch.has_seed ? cc.mismatch.seed : s.seed;
        jc["mismatch"] = jm;
        break;
      }
      case MismatchSpec::Kind::vectors:
        jc["mismatch"] = {{"kind", "vectors"},
                          {"gains", cc.mismatch.gains},
                          {"offsets", cc.mismatch.offsets}};
        break;
    }
    if (cc.shape.variant == ShapeSpec::Variant::ideal) {
      jc["shape"] = "ideal";
    } else {
      json js;
      js["variant"] = cc.shape.variant == ShapeSpec::Variant::split
                          ? "split"
                          : "draws";
      js["tau"] = cc.shape.tau;
      js["slew"] = cc.shape.slew;
      if (cc.shape.variant == ShapeSpec::Variant::split)
        js["split"] = cc.shape.split;
      else {
        js["dev_std"] = cc.shape.dev_std;
        js["seed"] = cc.shape.has_seed ? cc.shape.seed : s.seed + 1;
      }
      jc["shape"] = js;
    }
    // resolved element values: everything drawn is recoverable from here
    if (i < params.size() &&
        (i >= case_names.size() || case_names[i] == cc.name)) {
      json jel = json::array();
      for (const auto& p : params[i]) {
        json je;
        je["gain"] = p.gain;
        je["voff"] = p.voff;
        if (cc.shape.variant != ShapeSpec::Variant::ideal) {
          je["tau_p"] = p.tau_p;
          je["tau_n"] = p.tau_n;
          je["sr_p"] = p.sr_p;
          je["sr_n"] = p.sr_n;
        }
        jel.push_back(je);
      }
      jc["elements"] = jel;
    }
    jcases.push_back(jc);
  }
  root["cases"] = jcases;
  root["outputs"] = outputs;
  return root.dump(2) + "\n";
}

}  // namespace sdmux
