// Command-line front end: analyze a RIR, simulate datasets, auralize dry
// audio, and render report documents.
//
// Exit codes: 0 success, 2 unreadable/unsupported input file, 3 degenerate
// signal, 4 report schema mismatch, 64 bad flags, 1 anything else.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "rirkit/rirkit.hpp"

namespace {

int exit_code_for(const rirkit::Error& e) {
  switch (e.code()) {
    case rirkit::errc::io_error:
    case rirkit::errc::format_error:
    case rirkit::errc::unsupported_format:
    case rirkit::errc::empty_input:
      return 2;
    case rirkit::errc::degenerate_input:
    case rirkit::errc::length_error:
      return 3;
    case rirkit::errc::schema_error:
      return 4;
    case rirkit::errc::config_error:
      return 64;
    default:
      return 1;
  }
}

std::vector<double> parse_triplet(const std::string& text, char sep, const std::string& what) {
  std::vector<double> vals;
  std::string token;
  std::stringstream ss(text);
  while (std::getline(ss, token, sep)) {
    try {
      vals.push_back(std::stod(token));
    } catch (...) {
      throw rirkit::Error(rirkit::errc::config_error, "cannot parse " + what + ": " + text);
    }
  }
  if (vals.size() != 3)
    throw rirkit::Error(rirkit::errc::config_error,
                        what + " needs three values, got: " + text);
  return vals;
}

rirkit::RoomGeometry parse_geometry(const std::string& room, const std::string& source,
                                    const std::string& receiver) {
  rirkit::RoomGeometry g;
  const auto dims = parse_triplet(room, 'x', "--room (LxWxH)");
  g.length = dims[0];
  g.width = dims[1];
  g.height = dims[2];
  const auto s = parse_triplet(source, ',', "--source (x,y,z)");
  const auto r = parse_triplet(receiver, ',', "--receiver (x,y,z)");
  g.source = {s[0], s[1], s[2]};
  g.receiver = {r[0], r[1], r[2]};
  rirkit::validate_geometry(g);
  return g;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct AnalyzeArgs {
  std::string input;
  std::string room, source, receiver;
  std::optional<double> snr_db;
  double modes_fmax = 300.0;
  bool schroeder_legacy = false;
  std::string smoothing = "none";
  std::vector<std::string> emits;
  std::string json_out;
  std::size_t waterfall_slices = 40;
};

int run_analyze(const AnalyzeArgs& args, bool quiet) {
  rirkit::ImpulseResponse ir = rirkit::load_wav(args.input);

  rirkit::AnalyzeOptions options;
  if (!args.room.empty()) {
    if (args.source.empty() || args.receiver.empty())
      throw rirkit::Error(rirkit::errc::config_error,
                          "--room requires --source and --receiver");
    options.geom = parse_geometry(args.room, args.source, args.receiver);
  }
  options.snr_override_db = args.snr_db;
  options.modes_fmax_hz = args.modes_fmax;
  options.schroeder_formula = args.schroeder_legacy
                                  ? rirkit::SchroederFormula::legacy_printed
                                  : rirkit::SchroederFormula::standard;
  options.spectrum_smoothing = args.smoothing == "sixth-octave"
                                   ? rirkit::Smoothing::sixth_octave
                                   : rirkit::Smoothing::none;

  const rirkit::AnalysisOutput out = rirkit::analyze(ir, args.input, options);

  for (const std::string& path : args.emits) {
    const std::string name = std::filesystem::path(path).filename().string();
    if (ends_with(name, "edc.csv")) {
      rirkit::write_edc_csv(path, out.edc);
    } else if (ends_with(name, "spectrum.csv")) {
      rirkit::write_spectrum_csv(path, out.spectrum);
    } else if (ends_with(name, "spectrogram.csv")) {
      rirkit::write_grid_csv(path, out.spectrogram_grid);
    } else if (ends_with(name, "spectrogram.json")) {
      rirkit::write_grid_json(path, out.spectrogram_grid);
    } else if (ends_with(name, "waterfall.csv") || ends_with(name, "waterfall.json")) {
      const auto grid =
          rirkit::waterfall(rirkit::to_mono(out.preprocessed), args.waterfall_slices);
      if (ends_with(name, ".csv"))
        rirkit::write_grid_csv(path, grid);
      else
        rirkit::write_grid_json(path, grid);
    } else if (ends_with(name, "modes.csv")) {
      if (!options.geom)
        throw rirkit::Error(rirkit::errc::config_error,
                            "--emit modes.csv requires --room/--source/--receiver");
      rirkit::write_modes_csv(path, rirkit::room_modes(*options.geom, args.modes_fmax));
    } else if (ends_with(name, "reflections.json")) {
      if (!options.geom)
        throw rirkit::Error(rirkit::errc::config_error,
                            "--emit reflections.json requires --room/--source/--receiver");
      rirkit::write_reflections_json(path, rirkit::first_order_reflections(*options.geom));
    } else {
      throw rirkit::Error(rirkit::errc::config_error, "unknown --emit target: " + name);
    }
  }

  if (!args.json_out.empty()) {
    std::ofstream f(args.json_out, std::ios::trunc);
    if (!f)
      throw rirkit::Error(rirkit::errc::io_error, "cannot write " + args.json_out);
    f << rirkit::to_json(out.report).dump(2) << '\n';
  }

  if (!quiet) {
    const rirkit::MetricsReport& rep = out.report;
    const auto decay_str = [](const rirkit::DecayEstimate& e) {
      return e.available() ? std::to_string(*e.seconds) + " s" : "n/a";
    };
    std::cout << "source: " << rep.source << "\n"
              << "EDT: " << decay_str(rep.broadband.decay.edt)
              << "  T20: " << decay_str(rep.broadband.decay.t20)
              << "  T30: " << decay_str(rep.broadband.decay.t30) << "\n"
              << "C80: " << rep.broadband.c80.c80_db << " dB  D50: " << rep.broadband.d50
              << "  DRR: " << rep.broadband.drr.drr_db << " dB\n";
    if (rep.broadband.sti.available())
      std::cout << "STI (proxy): " << rep.broadband.sti.value->value << "\n";
    if (rep.wellness.score.available())
      std::cout << "wellness: " << *rep.wellness.score.value << " / 100\n";
    int passed = 0;
    for (const auto& oc : rep.compliance)
      if (oc.overall == rirkit::ComplianceStatus::pass) ++passed;
    std::cout << "compliance: " << passed << "/" << rep.compliance.size() << " rules pass\n"
              << "total time: " << rep.timings_ms.total_ms << " ms\n";
  }
  return 0;
}

struct SimulateArgs {
  std::string out_dir;
  std::string config_path;
  int n = 1;
  std::uint64_t seed = 0;
  bool seed_from_flag = false;  // an explicit --seed wins over the config file
  int order = 6;
  int sample_rate = 48000;
  std::string tail = "noise";
  std::string room, source, receiver;
  std::vector<double> absorption;
  bool validate = false;
};

rirkit::TailMode parse_tail(const std::string& s) {
  if (s == "none") return rirkit::TailMode::none;
  if (s == "noise" || s == "exponential-noise") return rirkit::TailMode::exponential_noise;
  throw rirkit::Error(rirkit::errc::config_error, "unknown tail mode: " + s);
}

int run_simulate(SimulateArgs args, bool quiet) {
  if (!args.config_path.empty()) {
    std::ifstream f(args.config_path);
    if (!f)
      throw rirkit::Error(rirkit::errc::io_error, "cannot open config: " + args.config_path);
    nlohmann::json cfg;
    try {
      f >> cfg;
    } catch (const nlohmann::json::exception& e) {
      throw rirkit::Error(rirkit::errc::config_error,
                          std::string("config is not valid JSON: ") + e.what());
    }
    args.n = cfg.value("n", args.n);
    if (!args.seed_from_flag) args.seed = cfg.value("seed", args.seed);
    args.order = cfg.value("max_order", args.order);
    args.sample_rate = cfg.value("sample_rate", args.sample_rate);
    args.tail = cfg.value("tail", args.tail);
    if (cfg.contains("room")) {
      const auto dims = cfg["room"].get<std::vector<double>>();
      const auto s = cfg["source"].get<std::vector<double>>();
      const auto r = cfg["receiver"].get<std::vector<double>>();
      if (dims.size() != 3 || s.size() != 3 || r.size() != 3)
        throw rirkit::Error(rirkit::errc::config_error, "room/source/receiver need 3 values");
      char room[96], src[96], rcv[96];
      std::snprintf(room, sizeof room, "%.17gx%.17gx%.17g", dims[0], dims[1], dims[2]);
      std::snprintf(src, sizeof src, "%.17g,%.17g,%.17g", s[0], s[1], s[2]);
      std::snprintf(rcv, sizeof rcv, "%.17g,%.17g,%.17g", r[0], r[1], r[2]);
      args.room = room;
      args.source = src;
      args.receiver = rcv;
    }
    if (cfg.contains("absorption"))
      args.absorption = cfg["absorption"].is_array()
                            ? cfg["absorption"].get<std::vector<double>>()
                            : std::vector<double>{cfg["absorption"].get<double>()};
  }

  std::filesystem::create_directories(args.out_dir);
  std::vector<rirkit::RirRecord> records;

  if (!args.room.empty()) {
    // Fixed single configuration.
    rirkit::SimulationConfig c;
    c.geom = parse_geometry(args.room, args.source, args.receiver);
    if (!args.absorption.empty()) {
      if (args.absorption.size() == 1) {
        c.absorption.fill(args.absorption[0]);
      } else if (args.absorption.size() == 6) {
        for (std::size_t i = 0; i < 6; ++i) c.absorption[i] = args.absorption[i];
      } else {
        throw rirkit::Error(rirkit::errc::config_error,
                            "--absorption takes 1 or 6 values");
      }
    }
    c.max_order = args.order;
    c.sample_rate = args.sample_rate;
    c.tail = parse_tail(args.tail);
    c.seed = args.seed;
    rirkit::RirRecord rec;
    rec.config = c;
    rec.rir = rirkit::simulate_ism(c);
    rec.metrics = rirkit::compute_record_metrics(rec.rir);
    records.push_back(std::move(rec));
  } else {
    rirkit::DatasetParams params;
    params.count = args.n;
    params.seed = args.seed;
    params.max_order = args.order;
    params.sample_rate = args.sample_rate;
    params.tail = parse_tail(args.tail);
    if (!args.absorption.empty()) {
      if (args.absorption.size() != 2)
        throw rirkit::Error(rirkit::errc::config_error,
                            "--absorption for a sampled batch takes min,max");
      params.absorption_min = args.absorption[0];
      params.absorption_max = args.absorption[1];
    }
    records = rirkit::generate_dataset(params);
  }

  const std::string meta = rirkit::write_dataset(records, args.out_dir);
  if (!quiet)
    std::cout << "wrote " << records.size() << " record(s), metadata: " << meta << "\n";

  if (args.validate) {
    const rirkit::ValidationReport v = rirkit::validate_batch(records);
    const std::string vpath = args.out_dir + "/validation.json";
    std::ofstream f(vpath, std::ios::trunc);
    f << rirkit::validation_report_json(v).dump(2) << '\n';
    if (!quiet)
      std::cout << "validation: median EDC r2 " << v.median_edc_r2 << ", T30/Sabine corr "
                << v.t30_sabine_correlation << ", max reflection timing error "
                << v.max_first_reflection_error_samples << " samples -> " << vpath << "\n";
  }
  return 0;
}

int run_auralize(const std::string& dry_path, const std::string& rir_path,
                 const std::string& out_path, bool quiet) {
  const rirkit::ImpulseResponse dry = rirkit::load_wav(dry_path);
  rirkit::ImpulseResponse rir = rirkit::load_wav(rir_path);
  if (rir.channel_count() > 1) {
    std::cerr << "warning: RIR has " << rir.channel_count()
              << " channels, averaging to mono\n";
    rir = rirkit::to_mono(rir);
  }
  const rirkit::AuralizeResult result = rirkit::convolve(dry, rir);
  if (result.rir_resampled)
    std::cerr << "warning: RIR resampled from " << rir.sample_rate << " Hz to "
              << dry.sample_rate << " Hz\n";
  rirkit::save_wav(out_path, result.out);
  if (!quiet)
    std::cout << "wrote " << out_path << " (" << result.out.length() << " samples at "
              << result.out.sample_rate << " Hz)\n";
  return 0;
}

int run_report(const std::string& json_path, const std::string& format,
               const std::string& out_path) {
  std::ifstream f(json_path);
  if (!f) throw rirkit::Error(rirkit::errc::io_error, "cannot open: " + json_path);
  rirkit::ordered_json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw rirkit::Error(rirkit::errc::schema_error,
                        std::string("report file is not valid JSON: ") + e.what());
  }
  const rirkit::MetricsReport rep = rirkit::report_from_json(j);

  std::string rendered;
  if (format == "markdown")
    rendered = rirkit::render_markdown(rep);
  else if (format == "json")
    rendered = rirkit::to_json(rep).dump(2) + "\n";
  else
    throw rirkit::Error(rirkit::errc::config_error, "unknown format: " + format);

  if (out_path.empty()) {
    std::cout << rendered;
  } else {
    std::ofstream out(out_path, std::ios::trunc);
    if (!out) throw rirkit::Error(rirkit::errc::io_error, "cannot write: " + out_path);
    out << rendered;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rirkit - room impulse response analysis toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  bool quiet = false;
  std::uint64_t seed = 0;
  app.add_flag("--quiet", quiet, "suppress the human-readable summary");
  auto* seed_opt = app.add_option("--seed", seed, "seed for stochastic components");

  AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze", "compute the full metric suite for a WAV RIR");
  analyze->add_option("input", an.input, "input WAV file")->required();
  analyze->add_option("--room", an.room, "room dimensions LxWxH in meters");
  analyze->add_option("--source", an.source, "source position x,y,z in meters");
  analyze->add_option("--receiver", an.receiver, "receiver position x,y,z in meters");
  analyze->add_option("--snr", an.snr_db, "override the SNR estimate (dB)");
  analyze->add_option("--modes-fmax", an.modes_fmax, "mode enumeration limit in Hz");
  analyze->add_flag("--schroeder-legacy", an.schroeder_legacy,
                    "use the legacy 4*RT60*V^(1/3) Schroeder frequency expression");
  analyze->add_option("--smoothing", an.smoothing, "spectrum smoothing: none|sixth-octave");
  analyze->add_option("--emit", an.emits,
                      "export data file; name selects content "
                      "(edc.csv, spectrum.csv, spectrogram.csv|.json, waterfall.csv|.json, "
                      "modes.csv, reflections.json)");
  analyze->add_option("--json-out", an.json_out, "write the metrics report JSON here");
  analyze->add_option("--waterfall-slices", an.waterfall_slices, "waterfall slice count");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "generate image-source RIR datasets");
  simulate->add_option("--out", sim.out_dir, "output directory")->required();
  simulate->add_option("--config", sim.config_path, "JSON config file (same keys as flags)");
  simulate->add_option("--n", sim.n, "number of sampled rooms");
  simulate->add_option("--order", sim.order, "maximum image-source order");
  simulate->add_option("--sr", sim.sample_rate, "sample rate in Hz");
  simulate->add_option("--tail", sim.tail, "late tail: none|noise");
  simulate->add_option("--room", sim.room, "fixed room dimensions LxWxH");
  simulate->add_option("--source", sim.source, "fixed source position x,y,z");
  simulate->add_option("--receiver", sim.receiver, "fixed receiver position x,y,z");
  simulate->add_option("--absorption", sim.absorption,
                       "absorption: single value or 6 per-surface values (fixed room), "
                       "min max (sampled batch)");
  simulate->add_flag("--validate", sim.validate, "run the validation battery on the batch");

  std::string aur_dry, aur_rir, aur_out;
  auto* auralize = app.add_subcommand("auralize", "convolve dry audio with a RIR");
  auralize->add_option("dry", aur_dry, "dry input WAV")->required();
  auralize->add_option("rir", aur_rir, "impulse response WAV")->required();
  auralize->add_option("out", aur_out, "output WAV")->required();

  std::string rep_json, rep_format = "markdown", rep_out;
  auto* report = app.add_subcommand("report", "render a metrics report document");
  report->add_option("report_json", rep_json, "metrics report JSON from analyze")->required();
  report->add_option("--format", rep_format, "markdown|json");
  report->add_option("-o,--out", rep_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 64;
  }

  try {
    if (*analyze) return run_analyze(an, quiet);
    if (*simulate) {
      sim.seed = seed;
      sim.seed_from_flag = seed_opt->count() > 0;
      return run_simulate(sim, quiet);
    }
    if (*auralize) return run_auralize(aur_dry, aur_rir, aur_out, quiet);
    if (*report) return run_report(rep_json, rep_format, rep_out);
  } catch (const rirkit::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
