#pragma once

// Renders a MetricsReport as a Markdown document: input metadata, metric
// tables, visualization data, the compliance summary, and methodology notes.

#include <cstdio>
#include <string>

#include "rirkit/report.hpp"

namespace rirkit {

namespace detail {

inline std::string fmt3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

inline std::string fmt1(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

inline std::string decay_cell(const DecayEstimate& e) {
  if (!e.available()) return "n/a (" + e.reason + ")";
  return fmt3(*e.seconds) + " s (r2=" + fmt3(e.r2) + ")";
}

template <typename T, typename Fn>
std::string metric_cell(const Metric<T>& m, Fn&& fmt) {
  if (!m.available()) return "n/a (" + m.reason + ")";
  return fmt(*m.value);
}

}  // namespace detail

inline std::string render_markdown(const MetricsReport& r) {
  using detail::fmt3;
  std::string md;
  md += "# Room Acoustics Analysis Report\n\n";

  md += "## Input Metadata\n\n";
  md += "| Field | Value |\n|---|---|\n";
  md += "| Source | " + r.source + " |\n";
  md += "| Channels | " + std::to_string(r.input_channels) + " |\n";
  md += "| Sample rate | " + std::to_string(r.sample_rate) + " Hz |\n";
  md += "| Analyzed length | " + std::to_string(r.length) + " samples (" +
        fmt3(r.sample_rate > 0 ? double(r.length) / r.sample_rate : 0.0) + " s) |\n";
  md += "| Leading samples trimmed | " + std::to_string(r.preprocess.samples_trimmed_leading) +
        " |\n";
  md += "| Truncated to 10 s | " + std::string(r.preprocess.truncated ? "yes" : "no") + " |\n";
  md += "| Peak before normalization | " + fmt3(r.preprocess.peak_before_normalize) + " |\n\n";

  md += "## Metrics\n\n";
  md += "### Broadband\n\n";
  md += "| Metric | Value |\n|---|---|\n";
  const BroadbandSection& bb = r.broadband;
  md += "| EDT | " + detail::decay_cell(bb.decay.edt) + " |\n";
  md += "| T20 | " + detail::decay_cell(bb.decay.t20) + " |\n";
  md += "| T30 | " + detail::decay_cell(bb.decay.t30) + " |\n";
  md += "| RT60 (used) | " +
        detail::metric_cell(bb.rt60_used,
                            [&](const RtUsed& u) {
                              return fmt3(u.seconds) + " s (from " + u.source + ")";
                            }) +
        " |\n";
  md += "| C80 | " + fmt3(bb.c80.c80_db) + " dB" +
        (bb.c80.saturated ? std::string(" (saturated)") : std::string()) + " |\n";
  md += "| D50 | " + fmt3(bb.d50) + " |\n";
  md += "| DRR | " + fmt3(bb.drr.drr_db) + " dB" +
        (bb.drr.saturated ? std::string(" (saturated)") : std::string()) + " |\n";
  md += "| SNR | " + fmt3(bb.snr.snr_db) + " dB (" +
        (bb.snr_source == SnrSource::estimated ? "estimated" : "user-supplied") +
        (bb.snr.fallback ? ", fallback default" : "") + ") |\n";
  md += "| STI (proxy) | " +
        detail::metric_cell(bb.sti, [&](const StiResult& s) { return fmt3(s.value); }) + " |\n";
  md += "| Wellness score | " +
        detail::metric_cell(r.wellness.score,
                            [&](double v) { return fmt3(v) + " / 100"; }) +
        " |\n\n";

  md += "### Octave Bands\n\n";
  if (r.octave.bands.empty()) {
    md += "No octave band fits below Nyquist.\n\n";
  } else {
    md += "| Center (Hz) | Lower (Hz) | Upper (Hz) | EDT | T20 | T30 |\n";
    md += "|---|---|---|---|---|---|\n";
    for (const OctaveBandResult& b : r.octave.bands) {
      md += "| " + detail::fmt1(b.center_hz) + " | " + detail::fmt1(b.lower_hz) + " | " +
            detail::fmt1(b.upper_hz) + " | " + detail::decay_cell(b.metrics.edt) + " | " +
            detail::decay_cell(b.metrics.t20) + " | " + detail::decay_cell(b.metrics.t30) +
            " |\n";
    }
    md += "\n";
  }
  for (const std::string& w : r.octave.warnings) md += "- Warning: " + w + "\n";
  if (!r.octave.warnings.empty()) md += "\n";

  md += "## Visualization Data\n\n";
  md += "### Fingerprint\n\n";
  md += "| Axis | Value |\n|---|---|\n";
  const auto fp_cell = [&](const Metric<double>& m) {
    return detail::metric_cell(m, [](double v) { return detail::fmt3(v); });
  };
  md += "| Clarity | " + fp_cell(r.fingerprint.clarity) + " |\n";
  md += "| Definition | " + fp_cell(r.fingerprint.definition) + " |\n";
  md += "| Spatial | " + fp_cell(r.fingerprint.spatial) + " |\n";
  md += "| Intelligibility | " + fp_cell(r.fingerprint.intelligibility) + " |\n\n";

  md += "### Spatial\n\n";
  md += "| Quantity | Value |\n|---|---|\n";
  md += "| IACC (early) | " + fp_cell(r.spatial.iacc) + " |\n";
  md += "| Schroeder frequency | " +
        detail::metric_cell(r.spatial.schroeder,
                            [&](const SchroederResult& s) {
                              return detail::fmt1(s.hz) + " Hz (" + s.formula + ")";
                            }) +
        " |\n";
  md += "| Room modes | " +
        detail::metric_cell(r.spatial.modes,
                            [&](const ModesSummary& s) {
                              return std::to_string(s.count) + " below " +
                                     detail::fmt1(s.f_max_hz) + " Hz (" +
                                     std::to_string(s.axial) + " axial, " +
                                     std::to_string(s.tangential) + " tangential, " +
                                     std::to_string(s.oblique) + " oblique)";
                            }) +
        " |\n";
  md += "| First reflections | " +
        detail::metric_cell(r.spatial.reflections,
                            [&](const ReflectionSet& s) {
                              return "direct " + fmt3(s.direct_arrival_s * 1000.0) +
                                     " ms, six first-order paths computed";
                            }) +
        " |\n\n";
  if (r.spatial.modes.available() && !r.spatial.modes.value->lowest.empty()) {
    md += "Lowest modes:\n\n| f (Hz) | nx | ny | nz | Type |\n|---|---|---|---|---|\n";
    for (const RoomMode& m : r.spatial.modes.value->lowest)
      md += "| " + detail::fmt1(m.f_hz) + " | " + std::to_string(m.nx) + " | " +
            std::to_string(m.ny) + " | " + std::to_string(m.nz) + " | " + to_string(m.type) +
            " |\n";
    md += "\n";
  }
  md += "EDC, spectrum, spectrogram and waterfall grids are available through the "
        "CLI `--emit` flag.\n\n";

  md += "## Standards Compliance\n\n";
  if (r.compliance.empty()) {
    md += "Compliance not evaluated: " + r.compliance_reason + "\n\n";
  } else {
    md += "| Space type | RT60 threshold | STI threshold | RT60 | STI | Overall |\n";
    md += "|---|---|---|---|---|---|\n";
    for (const ComplianceOutcome& oc : r.compliance) {
      std::string rt_th;
      if (oc.rule.rt60_min_s && oc.rule.rt60_max_s)
        rt_th = fmt3(*oc.rule.rt60_min_s) + " - " + fmt3(*oc.rule.rt60_max_s) + " s";
      else if (oc.rule.rt60_max_s)
        rt_th = "<= " + fmt3(*oc.rule.rt60_max_s) + " s";
      else if (oc.rule.rt60_min_s)
        rt_th = ">= " + fmt3(*oc.rule.rt60_min_s) + " s";
      else
        rt_th = "-";
      const std::string sti_th = oc.rule.sti_min ? ">= " + fmt3(*oc.rule.sti_min) : "-";
      const auto pf = [](const std::optional<bool>& b) {
        return !b ? std::string("-") : (*b ? std::string("pass") : std::string("fail"));
      };
      md += "| " + oc.rule.space_type + " | " + rt_th + " | " + sti_th + " | " +
            pf(oc.rt60_pass) + " | " + pf(oc.sti_pass) + " | " + to_string(oc.overall) +
            " |\n";
    }
    md += "\nSTI rows are proxy-based and advisory; formal compliance testing requires a "
          "certified IEC 60268-16 measurement.\n\n";
  }

  md += "## Methodology\n\n";
  md += "- Energy decay curves use Schroeder backward integration of the squared impulse "
        "response, normalized to 0 dB at time zero (Schroeder, JASA 1965).\n";
  md += "- EDT extrapolates the 0 to -10 dB regression slope to 60 dB; T20 uses -5 to -25 dB "
        "and T30 uses -5 to -35 dB, following ISO 3382-1.\n";
  md += "- Octave bands use fourth-order Butterworth bandpass filters (second-order "
        "sections, bilinear transform with prewarping) with edges at fc/sqrt(2) and "
        "fc*sqrt(2).\n";
  md += "- C80 and D50 split energy at 80 ms and 50 ms; DRR isolates the peak +-2.5 ms as "
        "the direct sound.\n";
  md += "- STI is the Houtgast-Steeneken style RT60/SNR proxy, not the full IEC 60268-16 "
        "modulation-transfer procedure.\n";
  md += "- The wellness score weights the RT60 penalty (0.45), STI (0.25), D50 (0.20) and "
        "C80 (0.10), scaled by a room-volume adjustment.\n";
  md += "- Compliance thresholds follow ANSI S12.60, ISO 3382-3 and published room-type "
        "recommendations; boundary values pass.\n";
  return md;
}

}  // namespace rirkit
