#pragma once

// Full analysis orchestration: preprocessing, broadband decay and energy
// ratios, octave bands, spectral grids, spatial metrics, wellness,
// compliance, and the normalized fingerprint, with per-stage timings.

#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rirkit/compliance.hpp"
#include "rirkit/decay.hpp"
#include "rirkit/energy.hpp"
#include "rirkit/preprocess.hpp"
#include "rirkit/spatial.hpp"
#include "rirkit/spectral.hpp"
#include "rirkit/types.hpp"

namespace rirkit {

// A metric that is either present or carries the reason it is not.
template <typename T>
struct Metric {
  std::optional<T> value;
  std::string reason;

  bool available() const { return value.has_value(); }
  static Metric present(T v) { return {std::move(v), {}}; }
  static Metric missing(std::string why) { return {std::nullopt, std::move(why)}; }
};

struct RtUsed {
  double seconds = 0.0;
  std::string source;  // "t30" or "t20"
};

struct StiResult {
  double value = 0.0;
  StiInputs inputs;
};

struct BroadbandSection {
  DecayMetrics decay;
  C80Result c80;
  double d50 = 0.0;
  DrrResult drr;
  SnrEstimate snr;
  SnrSource snr_source = SnrSource::estimated;
  Metric<RtUsed> rt60_used;
  Metric<StiResult> sti;
};

struct ModesSummary {
  double f_max_hz = 0.0;
  std::size_t count = 0, axial = 0, tangential = 0, oblique = 0;
  std::vector<RoomMode> lowest;  // up to 10
};

struct SchroederResult {
  double hz = 0.0;
  std::string formula;
};

struct SpatialSection {
  Metric<double> iacc;
  Metric<ModesSummary> modes;
  Metric<SchroederResult> schroeder;
  Metric<ReflectionSet> reflections;
};

struct WellnessSection {
  Metric<double> score;
  std::optional<WellnessInputs> inputs;
};

// Normalized radar axes, each in [0, 1].
struct Fingerprint {
  Metric<double> clarity;          // clip((C80 + 2) / 10)
  Metric<double> definition;       // D50
  Metric<double> spatial;          // 1 - IACC, stereo only
  Metric<double> intelligibility;  // STI proxy
};

struct StageTimings {
  double preprocess_ms = 0.0;
  double broadband_ms = 0.0;
  double octave_ms = 0.0;
  double spectral_ms = 0.0;
  double spatial_ms = 0.0;
  double report_ms = 0.0;
  double total_ms = 0.0;
};

constexpr int kReportSchemaVersion = 1;

struct MetricsReport {
  int schema_version = kReportSchemaVersion;
  std::string source;
  int sample_rate = 0;
  std::size_t length = 0;
  int input_channels = 0;
  PreprocessReport preprocess;
  BroadbandSection broadband;
  OctaveBandAnalysis octave;
  SpatialSection spatial;
  WellnessSection wellness;
  std::vector<ComplianceOutcome> compliance;
  std::string compliance_reason;  // set when the compliance list is empty
  Fingerprint fingerprint;
  StageTimings timings_ms;
};

struct AnalyzeOptions {
  std::optional<RoomGeometry> geom;
  std::optional<double> snr_override_db;
  double iacc_limit_s = kIaccDefaultLimitS;
  double modes_fmax_hz = 300.0;
  SchroederFormula schroeder_formula = SchroederFormula::standard;
  double spectrogram_window_s = 0.025;
  double spectrogram_hop_s = 0.010;
  Smoothing spectrum_smoothing = Smoothing::none;
};

// Report plus the bulky intermediates callers may want to export.
struct AnalysisOutput {
  MetricsReport report;
  ImpulseResponse preprocessed;
  EnergyDecayCurve edc;
  SpectrumFrame spectrum;
  TimeFrequencyGrid spectrogram_grid;
};

inline AnalysisOutput analyze(const ImpulseResponse& input, const std::string& source_name,
                              const AnalyzeOptions& options = {}) {
  using clock = std::chrono::steady_clock;
  const auto ms_since = [](clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock::now() - t0).count();
  };
  if (options.geom) validate_geometry(*options.geom);

  AnalysisOutput out;
  MetricsReport& rep = out.report;
  rep.source = source_name;
  rep.input_channels = input.channel_count();

  auto t0 = clock::now();
  auto [prepped, prep_report] = preprocess(input);
  out.preprocessed = std::move(prepped);
  const ImpulseResponse mono = to_mono(out.preprocessed);
  rep.preprocess = prep_report;
  rep.sample_rate = out.preprocessed.sample_rate;
  rep.length = out.preprocessed.length();
  rep.timings_ms.preprocess_ms = ms_since(t0);

  // Broadband decay and energy ratios.
  t0 = clock::now();
  out.edc = schroeder_edc(mono);
  BroadbandSection& bb = rep.broadband;
  bb.decay = decay_metrics(out.edc);
  bb.c80 = clarity_c80(mono);
  bb.d50 = definition_d50(mono);
  bb.drr = drr(mono);
  if (options.snr_override_db) {
    bb.snr = {*options.snr_override_db, false};
    bb.snr_source = SnrSource::user_supplied;
  } else {
    bb.snr = estimate_snr(mono);
    bb.snr_source = SnrSource::estimated;
  }
  if (bb.decay.t30.available())
    bb.rt60_used = Metric<RtUsed>::present({*bb.decay.t30.seconds, "t30"});
  else if (bb.decay.t20.available())
    bb.rt60_used = Metric<RtUsed>::present({*bb.decay.t20.seconds, "t20"});
  else
    bb.rt60_used = Metric<RtUsed>::missing("no usable decay slope (t30: " +
                                           bb.decay.t30.reason + "; t20: " +
                                           bb.decay.t20.reason + ")");
  if (bb.rt60_used.available()) {
    StiInputs sti_in{bb.rt60_used.value->seconds, bb.snr.snr_db, bb.snr_source};
    bb.sti = Metric<StiResult>::present({sti_proxy(sti_in), sti_in});
  } else {
    bb.sti = Metric<StiResult>::missing("RT60 unavailable: " + bb.rt60_used.reason);
  }
  rep.timings_ms.broadband_ms = ms_since(t0);

  t0 = clock::now();
  rep.octave = octave_band_analysis(mono);
  rep.timings_ms.octave_ms = ms_since(t0);

  t0 = clock::now();
  out.spectrum = magnitude_spectrum(mono, options.spectrum_smoothing);
  out.spectrogram_grid =
      spectrogram(mono, options.spectrogram_window_s, options.spectrogram_hop_s);
  rep.timings_ms.spectral_ms = ms_since(t0);

  // Spatial metrics: IACC needs stereo input, modes/reflections need geometry.
  t0 = clock::now();
  SpatialSection& sp = rep.spatial;
  if (out.preprocessed.channel_count() == 2) {
    try {
      sp.iacc = Metric<double>::present(iacc(out.preprocessed, options.iacc_limit_s));
    } catch (const Error& e) {
      sp.iacc = Metric<double>::missing(e.what());
    }
  } else {
    sp.iacc = Metric<double>::missing("input is mono; IACC needs a stereo capture");
  }
  if (options.geom) {
    const std::vector<RoomMode> modes = room_modes(*options.geom, options.modes_fmax_hz);
    ModesSummary summary;
    summary.f_max_hz = options.modes_fmax_hz;
    summary.count = modes.size();
    for (const RoomMode& m : modes) {
      if (m.type == ModeType::axial) ++summary.axial;
      else if (m.type == ModeType::tangential) ++summary.tangential;
      else ++summary.oblique;
    }
    summary.lowest.assign(modes.begin(),
                          modes.begin() + std::min<std::size_t>(modes.size(), 10));
    sp.modes = Metric<ModesSummary>::present(std::move(summary));
    sp.reflections = Metric<ReflectionSet>::present(first_order_reflections(*options.geom));
    if (rep.broadband.rt60_used.available()) {
      SchroederResult sr;
      sr.hz = schroeder_frequency(rep.broadband.rt60_used.value->seconds,
                                  options.geom->volume_m3(), options.schroeder_formula);
      sr.formula = options.schroeder_formula == SchroederFormula::standard
                       ? "2000*sqrt(rt60/volume)"
                       : "4*rt60*volume^(1/3)";
      sp.schroeder = Metric<SchroederResult>::present(std::move(sr));
    } else {
      sp.schroeder = Metric<SchroederResult>::missing("RT60 unavailable");
    }
  } else {
    const std::string why = "room geometry not provided";
    sp.modes = Metric<ModesSummary>::missing(why);
    sp.reflections = Metric<ReflectionSet>::missing(why);
    sp.schroeder = Metric<SchroederResult>::missing(why);
  }
  rep.timings_ms.spatial_ms = ms_since(t0);

  // Wellness, compliance, fingerprint.
  t0 = clock::now();
  if (!options.geom) {
    rep.wellness.score = Metric<double>::missing("room geometry not provided (volume unknown)");
  } else if (!bb.rt60_used.available()) {
    rep.wellness.score = Metric<double>::missing("RT60 unavailable");
  } else {
    WellnessInputs win;
    win.rt60_s = bb.rt60_used.value->seconds;
    win.sti = bb.sti.available() ? bb.sti.value->value : 0.0;
    win.d50 = bb.d50;
    win.c80_db = bb.c80.c80_db;
    win.volume_m3 = options.geom->volume_m3();
    rep.wellness.inputs = win;
    rep.wellness.score = Metric<double>::present(wellness_score(win));
  }

  if (bb.rt60_used.available()) {
    ComplianceMetrics cm;
    cm.rt60_s = bb.rt60_used.value->seconds;
    if (bb.sti.available()) cm.sti = bb.sti.value->value;
    rep.compliance = check_all(cm);
  } else {
    rep.compliance_reason = "RT60 unavailable: " + bb.rt60_used.reason;
  }

  Fingerprint& fp = rep.fingerprint;
  fp.clarity = Metric<double>::present(std::clamp((bb.c80.c80_db + 2.0) / 10.0, 0.0, 1.0));
  fp.definition = Metric<double>::present(std::clamp(bb.d50, 0.0, 1.0));
  fp.intelligibility = bb.sti.available()
                           ? Metric<double>::present(bb.sti.value->value)
                           : Metric<double>::missing(bb.sti.reason);
  fp.spatial = sp.iacc.available() ? Metric<double>::present(1.0 - *sp.iacc.value)
                                   : Metric<double>::missing(sp.iacc.reason);
  rep.timings_ms.report_ms = ms_since(t0);

  rep.timings_ms.total_ms = rep.timings_ms.preprocess_ms + rep.timings_ms.broadband_ms +
                            rep.timings_ms.octave_ms + rep.timings_ms.spectral_ms +
                            rep.timings_ms.spatial_ms + rep.timings_ms.report_ms;
  return out;
}

}  // namespace rirkit
