#pragma once

// MetricsReport <-> JSON. Unavailable metrics serialize as a null value plus
// a reason string; key order is fixed so identical analyses produce
// byte-identical documents.

#include <string>

#include <json.hpp>

#include "rirkit/report.hpp"

namespace rirkit {

using ordered_json = nlohmann::ordered_json;

namespace detail {

inline ordered_json decay_estimate_json(const DecayEstimate& e) {
  ordered_json j;
  if (e.available()) {
    j["value"] = *e.seconds;
    j["r2"] = e.r2;
  } else {
    j["value"] = nullptr;
    j["reason"] = e.reason;
  }
  return j;
}

inline DecayEstimate decay_estimate_from(const ordered_json& j) {
  DecayEstimate e;
  if (!j.at("value").is_null()) {
    e.seconds = j.at("value").get<double>();
    e.r2 = j.value("r2", 0.0);
  } else {
    e.reason = j.value("reason", "");
  }
  return e;
}

template <typename T, typename Fn>
ordered_json metric_json(const Metric<T>& m, Fn&& encode) {
  ordered_json j;
  if (m.available()) {
    j["value"] = encode(*m.value);
  } else {
    j["value"] = nullptr;
    j["reason"] = m.reason;
  }
  return j;
}

inline ordered_json sti_inputs_json(const StiInputs& in) {
  return ordered_json{{"rt60_s", in.rt60_s},
                      {"snr_db", in.snr_db},
                      {"snr_source",
                       in.snr_source == SnrSource::estimated ? "estimated" : "user-supplied"}};
}

inline ordered_json vec3_json(const Vec3& v) { return ordered_json::array({v.x, v.y, v.z}); }

inline ordered_json reflections_json(const ReflectionSet& set) {
  ordered_json j;
  j["direct"] = {{"path_length_m", set.direct_length_m}, {"arrival_s", set.direct_arrival_s}};
  ordered_json paths = ordered_json::array();
  for (const ReflectionPath& p : set.reflections) {
    paths.push_back({{"surface", to_string(p.surface)},
                     {"image_source", vec3_json(p.image_source)},
                     {"path_length_m", p.path_length_m},
                     {"arrival_s", p.arrival_s}});
  }
  j["reflections"] = paths;
  return j;
}

inline ordered_json modes_summary_json(const ModesSummary& s) {
  ordered_json j;
  j["f_max_hz"] = s.f_max_hz;
  j["count"] = s.count;
  j["axial"] = s.axial;
  j["tangential"] = s.tangential;
  j["oblique"] = s.oblique;
  ordered_json lowest = ordered_json::array();
  for (const RoomMode& m : s.lowest)
    lowest.push_back({{"f_hz", m.f_hz},
                      {"nx", m.nx},
                      {"ny", m.ny},
                      {"nz", m.nz},
                      {"type", to_string(m.type)}});
  j["lowest"] = lowest;
  return j;
}

}  // namespace detail

inline ordered_json to_json(const MetricsReport& r) {
  ordered_json j;
  j["schema_version"] = r.schema_version;
  j["source"] = r.source;
  j["sample_rate"] = r.sample_rate;
  j["length_samples"] = r.length;
  j["duration_s"] = r.sample_rate > 0 ? double(r.length) / r.sample_rate : 0.0;
  j["input_channels"] = r.input_channels;

  j["preprocess"] = {{"samples_trimmed_leading", r.preprocess.samples_trimmed_leading},
                     {"truncated", r.preprocess.truncated},
                     {"peak_before_normalize", r.preprocess.peak_before_normalize},
                     {"original_sample_rate", r.preprocess.original_sample_rate}};

  const BroadbandSection& bb = r.broadband;
  ordered_json broadband;
  broadband["edt_s"] = detail::decay_estimate_json(bb.decay.edt);
  broadband["t20_s"] = detail::decay_estimate_json(bb.decay.t20);
  broadband["t30_s"] = detail::decay_estimate_json(bb.decay.t30);
  broadband["rt60_used"] = detail::metric_json(bb.rt60_used, [](const RtUsed& u) {
    return ordered_json{{"seconds", u.seconds}, {"source", u.source}};
  });
  broadband["c80_db"] = {{"value", bb.c80.c80_db}, {"saturated", bb.c80.saturated}};
  broadband["d50"] = {{"value", bb.d50}};
  broadband["drr_db"] = {{"value", bb.drr.drr_db}, {"saturated", bb.drr.saturated}};
  broadband["snr_db"] = {{"value", bb.snr.snr_db},
                         {"source", bb.snr_source == SnrSource::estimated ? "estimated"
                                                                          : "user-supplied"},
                         {"fallback", bb.snr.fallback}};
  broadband["sti"] = detail::metric_json(bb.sti, [](const StiResult& s) {
    return ordered_json{{"sti", s.value}, {"inputs", detail::sti_inputs_json(s.inputs)}};
  });
  j["broadband"] = broadband;

  ordered_json bands = ordered_json::array();
  for (const OctaveBandResult& b : r.octave.bands) {
    bands.push_back({{"center_hz", b.center_hz},
                     {"lower_hz", b.lower_hz},
                     {"upper_hz", b.upper_hz},
                     {"edt_s", detail::decay_estimate_json(b.metrics.edt)},
                     {"t20_s", detail::decay_estimate_json(b.metrics.t20)},
                     {"t30_s", detail::decay_estimate_json(b.metrics.t30)}});
  }
  j["octave_bands"] = bands;
  j["octave_band_warnings"] = r.octave.warnings;

  ordered_json spatial;
  spatial["iacc"] = detail::metric_json(r.spatial.iacc, [](double v) { return v; });
  spatial["modes"] = detail::metric_json(r.spatial.modes, detail::modes_summary_json);
  spatial["schroeder_hz"] =
      detail::metric_json(r.spatial.schroeder, [](const SchroederResult& s) {
        return ordered_json{{"hz", s.hz}, {"formula", s.formula}};
      });
  spatial["reflections"] = detail::metric_json(r.spatial.reflections, detail::reflections_json);
  j["spatial"] = spatial;

  ordered_json wellness;
  wellness["score"] = detail::metric_json(r.wellness.score, [](double v) { return v; });
  if (r.wellness.inputs) {
    const WellnessInputs& in = *r.wellness.inputs;
    wellness["inputs"] = {{"rt60_s", in.rt60_s},
                          {"sti", in.sti},
                          {"d50", in.d50},
                          {"c80_db", in.c80_db},
                          {"volume_m3", in.volume_m3}};
  } else {
    wellness["inputs"] = nullptr;
  }
  j["wellness"] = wellness;

  // Measured values shared by every compliance row.
  ordered_json measured;
  measured["rt60_s"] = bb.rt60_used.available() ? ordered_json(bb.rt60_used.value->seconds)
                                                : ordered_json(nullptr);
  measured["sti"] =
      bb.sti.available() ? ordered_json(bb.sti.value->value) : ordered_json(nullptr);

  ordered_json compliance = ordered_json::array();
  for (const ComplianceOutcome& oc : r.compliance) {
    ordered_json thresholds;
    if (oc.rule.rt60_min_s) thresholds["rt60_min_s"] = *oc.rule.rt60_min_s;
    if (oc.rule.rt60_max_s) thresholds["rt60_max_s"] = *oc.rule.rt60_max_s;
    if (oc.rule.sti_min) thresholds["sti_min"] = *oc.rule.sti_min;
    ordered_json row;
    row["space_type"] = oc.rule.space_type;
    row["thresholds"] = thresholds;
    row["measured"] = measured;
    row["rt60_pass"] = oc.rt60_pass ? ordered_json(*oc.rt60_pass) : ordered_json(nullptr);
    row["sti_pass"] = oc.sti_pass ? ordered_json(*oc.sti_pass) : ordered_json(nullptr);
    row["overall"] = to_string(oc.overall);
    row["advisory"] = oc.advisory_flags;
    compliance.push_back(row);
  }
  j["compliance"] = compliance;
  if (!r.compliance_reason.empty()) j["compliance_reason"] = r.compliance_reason;

  ordered_json fp;
  fp["clarity"] = detail::metric_json(r.fingerprint.clarity, [](double v) { return v; });
  fp["definition"] = detail::metric_json(r.fingerprint.definition, [](double v) { return v; });
  fp["spatial"] = detail::metric_json(r.fingerprint.spatial, [](double v) { return v; });
  fp["intelligibility"] =
      detail::metric_json(r.fingerprint.intelligibility, [](double v) { return v; });
  j["fingerprint"] = fp;

  j["timings_ms"] = {{"preprocess", r.timings_ms.preprocess_ms},
                     {"broadband", r.timings_ms.broadband_ms},
                     {"octave", r.timings_ms.octave_ms},
                     {"spectral", r.timings_ms.spectral_ms},
                     {"spatial", r.timings_ms.spatial_ms},
                     {"report", r.timings_ms.report_ms},
                     {"total", r.timings_ms.total_ms}};
  return j;
}

namespace detail {

template <typename T, typename Fn>
Metric<T> metric_from(const ordered_json& j, Fn&& decode) {
  if (j.at("value").is_null()) return Metric<T>::missing(j.value("reason", ""));
  return Metric<T>::present(decode(j.at("value")));
}

}  // namespace detail

// Parses a report document; throws errc::schema_error on anything that does
// not look like a version-1 report.
inline MetricsReport report_from_json(const ordered_json& j) {
  try {
    if (!j.is_object() || !j.contains("schema_version"))
      throw Error(errc::schema_error, "not a metrics report document");
    if (j.at("schema_version").get<int>() != kReportSchemaVersion)
      throw Error(errc::schema_error,
                  "unsupported schema version " + j.at("schema_version").dump());

    MetricsReport r;
    r.schema_version = j.at("schema_version").get<int>();
    r.source = j.at("source").get<std::string>();
    r.sample_rate = j.at("sample_rate").get<int>();
    r.length = j.at("length_samples").get<std::size_t>();
    r.input_channels = j.value("input_channels", 1);

    const auto& pp = j.at("preprocess");
    r.preprocess.samples_trimmed_leading = pp.at("samples_trimmed_leading").get<std::size_t>();
    r.preprocess.truncated = pp.at("truncated").get<bool>();
    r.preprocess.peak_before_normalize = pp.at("peak_before_normalize").get<double>();
    r.preprocess.original_sample_rate = pp.at("original_sample_rate").get<int>();

    const auto& bb = j.at("broadband");
    r.broadband.decay.edt = detail::decay_estimate_from(bb.at("edt_s"));
    r.broadband.decay.t20 = detail::decay_estimate_from(bb.at("t20_s"));
    r.broadband.decay.t30 = detail::decay_estimate_from(bb.at("t30_s"));
    r.broadband.rt60_used = detail::metric_from<RtUsed>(bb.at("rt60_used"), [](const auto& v) {
      return RtUsed{v.at("seconds").template get<double>(),
                    v.at("source").template get<std::string>()};
    });
    r.broadband.c80 = {bb.at("c80_db").at("value").template get<double>(),
                       bb.at("c80_db").at("saturated").template get<bool>()};
    r.broadband.d50 = bb.at("d50").at("value").get<double>();
    r.broadband.drr = {bb.at("drr_db").at("value").template get<double>(),
                       bb.at("drr_db").at("saturated").template get<bool>()};
    r.broadband.snr = {bb.at("snr_db").at("value").template get<double>(),
                       bb.at("snr_db").at("fallback").template get<bool>()};
    r.broadband.snr_source = bb.at("snr_db").at("source").get<std::string>() == "user-supplied"
                                 ? SnrSource::user_supplied
                                 : SnrSource::estimated;
    r.broadband.sti = detail::metric_from<StiResult>(bb.at("sti"), [](const auto& v) {
      StiResult s;
      s.value = v.at("sti").template get<double>();
      const auto& in = v.at("inputs");
      s.inputs.rt60_s = in.at("rt60_s").template get<double>();
      s.inputs.snr_db = in.at("snr_db").template get<double>();
      s.inputs.snr_source =
          in.at("snr_source").template get<std::string>() == "user-supplied"
              ? SnrSource::user_supplied
              : SnrSource::estimated;
      return s;
    });

    for (const auto& b : j.at("octave_bands")) {
      OctaveBandResult band;
      band.center_hz = b.at("center_hz").get<double>();
      band.lower_hz = b.at("lower_hz").get<double>();
      band.upper_hz = b.at("upper_hz").get<double>();
      band.metrics.edt = detail::decay_estimate_from(b.at("edt_s"));
      band.metrics.t20 = detail::decay_estimate_from(b.at("t20_s"));
      band.metrics.t30 = detail::decay_estimate_from(b.at("t30_s"));
      r.octave.bands.push_back(std::move(band));
    }
    r.octave.warnings = j.at("octave_band_warnings").get<std::vector<std::string>>();

    const auto& sp = j.at("spatial");
    r.spatial.iacc = detail::metric_from<double>(
        sp.at("iacc"), [](const auto& v) { return v.template get<double>(); });
    r.spatial.modes = detail::metric_from<ModesSummary>(sp.at("modes"), [](const auto& v) {
      ModesSummary s;
      s.f_max_hz = v.at("f_max_hz").template get<double>();
      s.count = v.at("count").template get<std::size_t>();
      s.axial = v.at("axial").template get<std::size_t>();
      s.tangential = v.at("tangential").template get<std::size_t>();
      s.oblique = v.at("oblique").template get<std::size_t>();
      for (const auto& m : v.at("lowest")) {
        RoomMode mode;
        mode.f_hz = m.at("f_hz").template get<double>();
        mode.nx = m.at("nx").template get<int>();
        mode.ny = m.at("ny").template get<int>();
        mode.nz = m.at("nz").template get<int>();
        const std::string t = m.at("type").template get<std::string>();
        mode.type = t == "axial"        ? ModeType::axial
                    : t == "tangential" ? ModeType::tangential
                                        : ModeType::oblique;
        s.lowest.push_back(mode);
      }
      return s;
    });
    r.spatial.schroeder =
        detail::metric_from<SchroederResult>(sp.at("schroeder_hz"), [](const auto& v) {
          return SchroederResult{v.at("hz").template get<double>(),
                                 v.at("formula").template get<std::string>()};
        });
    r.spatial.reflections =
        detail::metric_from<ReflectionSet>(sp.at("reflections"), [](const auto& v) {
          ReflectionSet set;
          set.direct_length_m = v.at("direct").at("path_length_m").template get<double>();
          set.direct_arrival_s = v.at("direct").at("arrival_s").template get<double>();
          std::size_t i = 0;
          for (const auto& p : v.at("reflections")) {
            if (i >= set.reflections.size()) break;
            ReflectionPath path;
            const std::string s = p.at("surface").template get<std::string>();
            path.surface = s == "x0"      ? Surface::x0
                           : s == "xL"    ? Surface::xL
                           : s == "y0"    ? Surface::y0
                           : s == "yW"    ? Surface::yW
                           : s == "floor" ? Surface::floor
                                          : Surface::ceiling;
            const auto& img = p.at("image_source");
            path.image_source = {img.at(0).template get<double>(),
                                 img.at(1).template get<double>(),
                                 img.at(2).template get<double>()};
            path.path_length_m = p.at("path_length_m").template get<double>();
            path.arrival_s = p.at("arrival_s").template get<double>();
            set.reflections[i++] = path;
          }
          return set;
        });

    const auto& wl = j.at("wellness");
    r.wellness.score = detail::metric_from<double>(
        wl.at("score"), [](const auto& v) { return v.template get<double>(); });
    if (!wl.at("inputs").is_null()) {
      const auto& in = wl.at("inputs");
      WellnessInputs win;
      win.rt60_s = in.at("rt60_s").get<double>();
      win.sti = in.at("sti").get<double>();
      win.d50 = in.at("d50").get<double>();
      win.c80_db = in.at("c80_db").get<double>();
      win.volume_m3 = in.at("volume_m3").get<double>();
      r.wellness.inputs = win;
    }

    for (const auto& row : j.at("compliance")) {
      ComplianceOutcome oc;
      oc.rule.space_type = row.at("space_type").get<std::string>();
      const auto& th = row.at("thresholds");
      if (th.contains("rt60_min_s")) oc.rule.rt60_min_s = th.at("rt60_min_s").get<double>();
      if (th.contains("rt60_max_s")) oc.rule.rt60_max_s = th.at("rt60_max_s").get<double>();
      if (th.contains("sti_min")) oc.rule.sti_min = th.at("sti_min").get<double>();
      if (!row.at("rt60_pass").is_null()) oc.rt60_pass = row.at("rt60_pass").get<bool>();
      if (!row.at("sti_pass").is_null()) oc.sti_pass = row.at("sti_pass").get<bool>();
      const std::string ov = row.at("overall").get<std::string>();
      oc.overall = ov == "pass"   ? ComplianceStatus::pass
                   : ov == "fail" ? ComplianceStatus::fail
                                  : ComplianceStatus::not_applicable;
      oc.advisory_flags = row.at("advisory").get<std::vector<std::string>>();
      r.compliance.push_back(std::move(oc));
    }
    if (j.contains("compliance_reason"))
      r.compliance_reason = j.at("compliance_reason").get<std::string>();

    const auto& fp = j.at("fingerprint");
    const auto as_double = [](const auto& v) { return v.template get<double>(); };
    r.fingerprint.clarity = detail::metric_from<double>(fp.at("clarity"), as_double);
    r.fingerprint.definition = detail::metric_from<double>(fp.at("definition"), as_double);
    r.fingerprint.spatial = detail::metric_from<double>(fp.at("spatial"), as_double);
    r.fingerprint.intelligibility =
        detail::metric_from<double>(fp.at("intelligibility"), as_double);

    const auto& tm = j.at("timings_ms");
    r.timings_ms.preprocess_ms = tm.at("preprocess").get<double>();
    r.timings_ms.broadband_ms = tm.at("broadband").get<double>();
    r.timings_ms.octave_ms = tm.at("octave").get<double>();
    r.timings_ms.spectral_ms = tm.at("spectral").get<double>();
    r.timings_ms.spatial_ms = tm.at("spatial").get<double>();
    r.timings_ms.report_ms = tm.at("report").get<double>();
    r.timings_ms.total_ms = tm.at("total").get<double>();
    return r;
  } catch (const Error&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw Error(errc::schema_error, std::string("report document does not match schema: ") +
                                        e.what());
  }
}

}  // namespace rirkit
