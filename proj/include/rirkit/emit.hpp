#pragma once

// Structured data exports: EDC/spectrum CSV, mode tables, reflection paths,
// time-frequency grids, and dataset metadata (JSON Lines).

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rirkit/decay.hpp"
#include "rirkit/report_json.hpp"
#include "rirkit/simulate.hpp"
#include "rirkit/spatial.hpp"
#include "rirkit/spectral.hpp"
#include "rirkit/types.hpp"
#include "rirkit/wav.hpp"

namespace rirkit {

namespace detail {

inline std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw Error(errc::io_error, "cannot open for writing: " + path);
  return f;
}

inline void append_num(std::string& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  out += buf;
}

}  // namespace detail

inline void write_edc_csv(const std::string& path, const EnergyDecayCurve& edc) {
  auto f = detail::open_out(path);
  std::string body = "time_s,edc_db\n";
  for (std::size_t n = 0; n < edc.values_db.size(); ++n) {
    detail::append_num(body, double(n) / edc.sample_rate);
    body += ',';
    detail::append_num(body, edc.values_db[n]);
    body += '\n';
  }
  f << body;
}

inline void write_spectrum_csv(const std::string& path, const SpectrumFrame& spec) {
  auto f = detail::open_out(path);
  std::string body = "freq_hz,magnitude_db\n";
  for (std::size_t k = 0; k < spec.freqs_hz.size(); ++k) {
    detail::append_num(body, spec.freqs_hz[k]);
    body += ',';
    detail::append_num(body, spec.magnitude_db[k]);
    body += '\n';
  }
  f << body;
}

inline void write_modes_csv(const std::string& path, const std::vector<RoomMode>& modes) {
  auto f = detail::open_out(path);
  std::string body = "f_hz,nx,ny,nz,type\n";
  for (const RoomMode& m : modes) {
    detail::append_num(body, m.f_hz);
    body += ',' + std::to_string(m.nx) + ',' + std::to_string(m.ny) + ',' +
            std::to_string(m.nz) + ',' + to_string(m.type) + '\n';
  }
  f << body;
}

inline void write_reflections_json(const std::string& path, const ReflectionSet& set) {
  auto f = detail::open_out(path);
  f << detail::reflections_json(set).dump(2) << '\n';
}

// Header row carries the frequency axis; the first column carries times.
inline void write_grid_csv(const std::string& path, const TimeFrequencyGrid& grid) {
  auto f = detail::open_out(path);
  std::string header = "time_s";
  for (double fq : grid.freqs_hz) {
    header += ',';
    detail::append_num(header, fq);
  }
  header += '\n';
  f << header;
  for (std::size_t t = 0; t < grid.times_s.size(); ++t) {
    std::string row;
    detail::append_num(row, grid.times_s[t]);
    for (double v : grid.magnitude_db[t]) {
      row += ',';
      detail::append_num(row, v);
    }
    row += '\n';
    f << row;
  }
}

inline void write_grid_json(const std::string& path, const TimeFrequencyGrid& grid) {
  ordered_json j;
  j["times_s"] = grid.times_s;
  j["freqs_hz"] = grid.freqs_hz;
  j["magnitude_db"] = grid.magnitude_db;
  auto f = detail::open_out(path);
  f << j.dump() << '\n';
}

inline ordered_json record_metadata_json(const RirRecord& rec, const std::string& wav_path) {
  const SimulationConfig& c = rec.config;
  ordered_json j;
  j["length_m"] = c.geom.length;
  j["width_m"] = c.geom.width;
  j["height_m"] = c.geom.height;
  j["source_xyz_m"] = {c.geom.source.x, c.geom.source.y, c.geom.source.z};
  j["receiver_xyz_m"] = {c.geom.receiver.x, c.geom.receiver.y, c.geom.receiver.z};
  ordered_json absorption;
  for (int s = 0; s < 6; ++s)
    absorption[to_string(static_cast<Surface>(s))] = c.absorption[static_cast<std::size_t>(s)];
  absorption["mean"] = mean_absorption(c.geom, c.absorption);
  j["absorption"] = absorption;
  j["max_order"] = c.max_order;
  j["rt60_s"] = rec.metrics.rt60_s ? ordered_json(*rec.metrics.rt60_s) : ordered_json(nullptr);
  j["drr_db"] = rec.metrics.drr_db;
  j["c80_db"] = rec.metrics.c80_db;
  j["d50"] = rec.metrics.d50;
  j["sample_rate"] = c.sample_rate;
  j["wav_path"] = wav_path;
  return j;
}

// Writes rir_NNNNNN.wav files (peak-normalized to 0.9 for playback headroom;
// every stored metric is scale invariant) plus metadata.jsonl, one object
// per record in index order. Returns the metadata path.
inline std::string write_dataset(const std::vector<RirRecord>& records,
                                 const std::string& dir) {
  const std::string meta_path = dir + "/metadata.jsonl";
  auto meta = detail::open_out(meta_path);
  for (std::size_t i = 0; i < records.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "rir_%06zu.wav", i);
    ImpulseResponse to_store = records[i].rir;
    const double peak = joint_peak(to_store);
    if (peak > 0.0)
      for (auto& ch : to_store.samples)
        for (double& v : ch) v *= 0.9 / peak;
    save_wav(dir + "/" + name, to_store);
    meta << record_metadata_json(records[i], name).dump() << '\n';
  }
  return meta_path;
}

inline ordered_json validation_report_json(const ValidationReport& v) {
  ordered_json j;
  j["median_edc_r2"] = v.median_edc_r2;
  j["t30_sabine_correlation"] = v.t30_sabine_correlation;
  j["t30_count"] = v.t30_count;
  j["max_first_reflection_error_samples"] = v.max_first_reflection_error_samples;
  ordered_json modes = ordered_json::array();
  for (const ModePeakCheck& c : v.mode_checks)
    modes.push_back({{"predicted_hz", c.predicted_hz},
                     {"peak_hz", c.peak_hz},
                     {"error_hz", c.error_hz}});
  j["mode_checks"] = modes;
  j["mode_mean_error_hz"] = v.mode_mean_error_hz;
  ordered_json recs = ordered_json::array();
  for (const RecordValidation& r : v.records) {
    recs.push_back(
        {{"edc_r2", r.edc_r2 ? ordered_json(*r.edc_r2) : ordered_json(nullptr)},
         {"t30_s", r.t30_s ? ordered_json(*r.t30_s) : ordered_json(nullptr)},
         {"sabine_t60_s", r.sabine_t60_s},
         {"first_reflection_error_samples", r.first_reflection_error_samples}});
  }
  j["records"] = recs;
  return j;
}

}  // namespace rirkit
