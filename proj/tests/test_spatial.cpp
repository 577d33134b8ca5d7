#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "rirkit/rng.hpp"
#include "rirkit/spatial.hpp"
#include "test_helpers.hpp"

using rirkit::RoomGeometry;
using rirkit::RoomMode;

namespace {
RoomGeometry box(double l, double w, double h) {
  RoomGeometry g;
  g.length = l;
  g.width = w;
  g.height = h;
  g.source = {l / 4, w / 4, h / 2};
  g.receiver = {3 * l / 4, 3 * w / 4, h / 2};
  return g;
}
}  // namespace

TEST_CASE("identical and inverted channels give IACC 1", "[spatial]") {
  rirkit::Rng rng(3);
  const auto x = testutil::white_noise(rng, 8000);
  CHECK(rirkit::iacc(rirkit::make_stereo(x, x, 48000)) ==
        Catch::Approx(1.0).margin(1e-9));

  std::vector<double> neg(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) neg[i] = -x[i];
  CHECK(rirkit::iacc(rirkit::make_stereo(x, neg, 48000)) ==
        Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("independent noise decorrelates below 0.15", "[spatial]") {
  // Monte Carlo: the bound must hold in at least 99% of seeded trials
  int below = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    rirkit::Rng rng(1000 + t);
    const auto l = testutil::white_noise(rng, 4800);
    const auto r = testutil::white_noise(rng, 4800);
    if (rirkit::iacc(rirkit::make_stereo(l, r, 48000), 0.080) < 0.15) ++below;
  }
  CHECK(below >= trials * 99 / 100);
}

TEST_CASE("integration limit selects early vs full-signal IACC", "[spatial]") {
  // channels identical early, independent late: early IACC high, full IACC lower
  rirkit::Rng rng(15);
  const int fs = 48000;
  const std::size_t n = fs;  // 1 s
  const std::size_t early_n = static_cast<std::size_t>(0.080 * fs);
  std::vector<double> l(n), r(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double shared = rng.gaussian();
    l[i] = i < early_n ? shared : rng.gaussian();
    r[i] = i < early_n ? shared : rng.gaussian();
  }
  const auto ir = rirkit::make_stereo(l, r, fs);
  const double early = rirkit::iacc(ir);          // default 80 ms window
  const double full = rirkit::iacc(ir, 0.0);      // nonpositive limit = full signal
  CHECK(early == Catch::Approx(1.0).margin(1e-9));
  CHECK(full < 0.5);
  CHECK(rirkit::iacc(ir, 10.0) == Catch::Approx(full).margin(1e-12));
}

TEST_CASE("IACC input validation", "[spatial]") {
  rirkit::Rng rng(9);
  const auto x = testutil::white_noise(rng, 4800);
  CHECK_THROWS_AS(rirkit::iacc(rirkit::make_mono(x, 48000)), rirkit::Error);

  const std::vector<double> zeros(4800, 0.0);
  CHECK_THROWS_AS(rirkit::iacc(rirkit::make_stereo(x, zeros, 48000)), rirkit::Error);
}

TEST_CASE("cube room puts the (1,0,0) mode at c/(2L)", "[spatial]") {
  const auto g = box(3.43, 3.43, 3.43);
  const auto modes = rirkit::room_modes(g, 60.0);
  REQUIRE(modes.size() >= 3);
  // the three axial fundamentals are degenerate at exactly 50 Hz
  for (int i = 0; i < 3; ++i) {
    CHECK(modes[i].f_hz == Catch::Approx(50.0).margin(1e-9));
    CHECK(modes[i].type == rirkit::ModeType::axial);
  }
  const int sum = modes[0].nx + modes[0].ny + modes[0].nz;
  CHECK(sum == 1);
}

TEST_CASE("mode enumeration matches an independent brute force", "[spatial]") {
  const auto g = box(5.0, 4.0, 3.0);
  const double f_max = 300.0;
  const auto modes = rirkit::room_modes(g, f_max);

  // independent enumeration: fixed generous bounds, different loop order
  std::vector<RoomMode> brute;
  for (int nz = 40; nz >= 0; --nz) {
    for (int ny = 40; ny >= 0; --ny) {
      for (int nx = 40; nx >= 0; --nx) {
        if (nx == 0 && ny == 0 && nz == 0) continue;
        const double fx = nx / g.length, fy = ny / g.width, fz = nz / g.height;
        const double f = 343.0 / 2.0 * std::sqrt(fx * fx + fy * fy + fz * fz);
        if (f <= f_max) {
          RoomMode m;
          m.f_hz = f;
          m.nx = nx;
          m.ny = ny;
          m.nz = nz;
          const int nonzero = (nx != 0) + (ny != 0) + (nz != 0);
          m.type = nonzero == 1   ? rirkit::ModeType::axial
                   : nonzero == 2 ? rirkit::ModeType::tangential
                                  : rirkit::ModeType::oblique;
          brute.push_back(m);
        }
      }
    }
  }
  const auto order = [](const RoomMode& a, const RoomMode& b) {
    return std::tie(a.f_hz, a.nx, a.ny, a.nz) < std::tie(b.f_hz, b.nx, b.ny, b.nz);
  };
  std::sort(brute.begin(), brute.end(), order);

  REQUIRE(modes.size() == brute.size());
  for (std::size_t i = 0; i < modes.size(); ++i) {
    CHECK(modes[i].f_hz == Catch::Approx(brute[i].f_hz).margin(1e-9));
    CHECK(modes[i].nx == brute[i].nx);
    CHECK(modes[i].ny == brute[i].ny);
    CHECK(modes[i].nz == brute[i].nz);
    CHECK(modes[i].type == brute[i].type);
  }
}

TEST_CASE("mode count grows with the frequency limit", "[spatial]") {
  const auto g = box(5.0, 4.0, 3.0);
  std::size_t prev = 0;
  for (double f : {50.0, 100.0, 200.0, 400.0}) {
    const auto modes = rirkit::room_modes(g, f);
    CHECK(modes.size() >= prev);
    prev = modes.size();
    // sorted ascending
    for (std::size_t i = 1; i < modes.size(); ++i)
      REQUIRE(modes[i].f_hz >= modes[i - 1].f_hz);
  }
}

TEST_CASE("relabeling room axes permutes indices but keeps frequencies", "[spatial]") {
  const auto a = rirkit::room_modes(box(5.0, 4.0, 3.0), 200.0);
  const auto b = rirkit::room_modes(box(4.0, 3.0, 5.0), 200.0);
  REQUIRE(a.size() == b.size());
  std::vector<double> fa, fb;
  for (const auto& m : a) fa.push_back(m.f_hz);
  for (const auto& m : b) fb.push_back(m.f_hz);
  std::sort(fa.begin(), fa.end());
  std::sort(fb.begin(), fb.end());
  for (std::size_t i = 0; i < fa.size(); ++i)
    CHECK(fa[i] == Catch::Approx(fb[i]).margin(1e-9));
}

TEST_CASE("Schroeder frequency formulas", "[spatial]") {
  CHECK(rirkit::schroeder_frequency(1.0, 400.0) == Catch::Approx(100.0).margin(1e-12));
  CHECK(rirkit::schroeder_frequency(0.5, 125.0,
                                    rirkit::SchroederFormula::legacy_printed) ==
        Catch::Approx(10.0).margin(1e-12));
  // quadrupling the volume halves the standard result
  const double f1 = rirkit::schroeder_frequency(0.7, 200.0);
  const double f4 = rirkit::schroeder_frequency(0.7, 800.0);
  CHECK(f4 == Catch::Approx(0.5 * f1).epsilon(1e-12));
}

TEST_CASE("first-order image sources follow the mirror construction", "[spatial]") {
  RoomGeometry g;
  g.length = 4.0;
  g.width = 5.0;
  g.height = 3.0;
  g.source = {1.0, 2.0, 1.5};
  g.receiver = {3.0, 2.5, 1.5};
  const auto set = rirkit::first_order_reflections(g);

  const auto& x0 = set.reflections[0];
  CHECK(x0.surface == rirkit::Surface::x0);
  CHECK(x0.image_source.x == -1.0);
  CHECK(x0.image_source.y == 2.0);
  CHECK(x0.image_source.z == 1.5);

  const auto& xl = set.reflections[1];
  CHECK(xl.surface == rirkit::Surface::xL);
  CHECK(xl.image_source.x == 7.0);  // 2L - s_x

  for (const auto& p : set.reflections) {
    CHECK(p.path_length_m ==
          Catch::Approx(rirkit::distance(p.image_source, g.receiver)).epsilon(1e-12));
    CHECK(p.arrival_s == Catch::Approx(p.path_length_m / 343.0).epsilon(1e-12));
  }
}

TEST_CASE("centered source and receiver in a cube give six equal paths", "[spatial]") {
  RoomGeometry g;
  g.length = g.width = g.height = 4.0;
  g.source = g.receiver = {2.0, 2.0, 2.0};
  const auto set = rirkit::first_order_reflections(g);
  CHECK(set.direct_length_m == 0.0);
  for (const auto& p : set.reflections) {
    CHECK(p.path_length_m == Catch::Approx(4.0).margin(1e-12));
    CHECK(p.arrival_s == Catch::Approx(4.0 / 343.0).margin(1e-9));
    CHECK(p.arrival_s == Catch::Approx(0.011662).margin(1e-6));
  }
}

TEST_CASE("direct path is strictly earliest", "[spatial]") {
  rirkit::Rng rng(61);
  for (int t = 0; t < 50; ++t) {
    RoomGeometry g;
    g.length = rng.uniform(3.0, 20.0);
    g.width = rng.uniform(3.0, 15.0);
    g.height = rng.uniform(2.4, 8.0);
    g.source = {rng.uniform(0.3, g.length - 0.3), rng.uniform(0.3, g.width - 0.3),
                rng.uniform(0.3, g.height - 0.3)};
    g.receiver = {rng.uniform(0.3, g.length - 0.3), rng.uniform(0.3, g.width - 0.3),
                  rng.uniform(0.3, g.height - 0.3)};
    const auto set = rirkit::first_order_reflections(g);
    for (const auto& p : set.reflections) REQUIRE(p.arrival_s > set.direct_arrival_s);
  }
}

TEST_CASE("mirroring through a wall plane swaps the opposing paths", "[spatial]") {
  RoomGeometry g;
  g.length = 6.0;
  g.width = 4.0;
  g.height = 3.0;
  g.source = {1.5, 1.0, 1.2};
  g.receiver = {4.0, 3.0, 2.0};
  RoomGeometry mirrored = g;
  mirrored.source.x = g.length - g.source.x;
  mirrored.receiver.x = g.length - g.receiver.x;

  const auto a = rirkit::first_order_reflections(g);
  const auto b = rirkit::first_order_reflections(mirrored);
  CHECK(a.reflections[0].path_length_m ==
        Catch::Approx(b.reflections[1].path_length_m).epsilon(1e-12));
  CHECK(a.reflections[1].path_length_m ==
        Catch::Approx(b.reflections[0].path_length_m).epsilon(1e-12));
  // other walls unaffected
  CHECK(a.reflections[2].path_length_m ==
        Catch::Approx(b.reflections[2].path_length_m).epsilon(1e-12));
}
