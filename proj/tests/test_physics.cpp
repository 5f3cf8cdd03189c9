#include <doctest.h>

#include <cmath>
#include <limits>

#include "fogbench/physics.h"
#include "fogbench/rng.h"

using namespace fogbench;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

RgbImage random_image(rng::Stream& s, int h, int w) {
  RgbImage img(h, w);
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < img.pixels(); ++i) img.plane(c)[i] = s.unit();
  return img;
}

ScalarField random_transmission(rng::Stream& s, int h, int w) {
  ScalarField t(h, w);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = s.unit();
  return t;
}

}  // namespace

TEST_CASE("transmission follows exponential extinction") {
  ScalarField d(2, 3);
  d.at(0, 0) = 0.0;
  d.at(0, 1) = 10.0;
  d.at(0, 2) = 100.0;
  d.at(1, 0) = kInf;
  d.at(1, 1) = 2500.0;
  d.at(1, 2) = 1e6;

  ScalarField t = physics::transmission_from_depth(d, 0.05);
  CHECK(t.at(0, 0) == 1.0);
  CHECK(t.at(0, 1) == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
  CHECK(t.at(0, 2) == doctest::Approx(std::exp(-5.0)).epsilon(1e-14));
  CHECK(t.at(1, 0) == 0.0);  // sky: fully extinguished
  CHECK(t.at(1, 1) == doctest::Approx(std::exp(-125.0)).epsilon(1e-13));
  CHECK(t.at(1, 2) == 0.0);  // deep underflow flushes to zero

  SUBCASE("zero extinction leaves everything visible except the sky") {
    ScalarField t0 = physics::transmission_from_depth(d, 0.0);
    CHECK(t0.at(0, 2) == 1.0);
    CHECK(t0.at(1, 0) == 0.0);  // D = +inf dominates beta = 0
  }
  SUBCASE("input validation") {
    CHECK_THROWS_AS(physics::transmission_from_depth(d, -0.1), std::domain_error);
    ScalarField bad(1, 1);
    bad[0] = -2.0;
    CHECK_THROWS_AS(physics::transmission_from_depth(bad, 0.1), std::domain_error);
    bad[0] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(physics::transmission_from_depth(bad, 0.1), std::domain_error);
  }
}

TEST_CASE("synthesize blends toward the airlight") {
  RgbImage j(1, 1, 0.2);
  Airlight a(0.8, 0.8, 0.8);

  ScalarField t(1, 1, 0.5);
  RgbImage i = physics::synthesize(j, t, a);
  CHECK(i.at(0, 0, 0) == doctest::Approx(0.5).epsilon(1e-15));

  t[0] = 1.0;  // no fog
  CHECK(physics::synthesize(j, t, a).at(0, 0, 1) == 0.2);
  t[0] = 0.0;  // opaque fog
  CHECK(physics::synthesize(j, t, a).at(0, 0, 2) == 0.8);

  SUBCASE("transmission outside [0,1] is rejected") {
    t[0] = 1.5;
    CHECK_THROWS_AS(physics::synthesize(j, t, a), std::domain_error);
    t[0] = -0.1;
    CHECK_THROWS_AS(physics::synthesize(j, t, a), std::domain_error);
  }
  SUBCASE("shape mismatch is rejected") {
    ScalarField t2(2, 2, 0.5);
    CHECK_THROWS_AS(physics::synthesize(j, t2, a), std::invalid_argument);
  }
}

TEST_CASE("defog inverts synthesize above the transmission floor") {
  rng::Stream s(11);
  RgbImage j = random_image(s, 16, 16);
  ScalarField t = random_transmission(s, 16, 16);
  Airlight a(0.9, 0.85, 0.95);

  RgbImage foggy = physics::synthesize(j, t, a);
  MaskedImage back = physics::defog(foggy, a, t, 0.01);

  for (int r = 0; r < 16; ++r)
    for (int c = 0; c < 16; ++c) {
      if (t.at(r, c) >= 0.01) {
        CHECK(back.valid.at(r, c) == 1);
        for (int ch = 0; ch < 3; ++ch)
          CHECK(back.image.at(r, c, ch) == doctest::Approx(j.at(r, c, ch)).epsilon(1e-10));
      } else {
        CHECK(back.valid.at(r, c) == 0);
      }
    }

  SUBCASE("results are clamped to [0,1]") {
    MaskedImage any = physics::defog(foggy, Airlight(1.0, 1.0, 1.0), t, 1e-300);
    for (int ch = 0; ch < 3; ++ch)
      for (std::size_t i = 0; i < any.image.pixels(); ++i) {
        CHECK(any.image.plane(ch)[i] >= 0.0);
        CHECK(any.image.plane(ch)[i] <= 1.0);
      }
  }
  SUBCASE("floor must be positive") {
    CHECK_THROWS_AS(physics::defog(foggy, a, t, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(physics::defog(foggy, a, t, -1.0), std::invalid_argument);
  }
}

TEST_CASE("black patch contrast equals the transmission") {
  rng::Stream s(12);
  Airlight a(0.83, 0.8, 0.86);
  RgbImage black(8, 8, 0.0);
  ScalarField t = random_transmission(s, 8, 8);

  RgbImage seen = physics::synthesize(black, t, a);
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c)
      for (int ch = 0; ch < 3; ++ch) {
        double cw = physics::contrast(seen.at(r, c, ch), a.channel(ch));
        CHECK(std::fabs(std::fabs(cw) - t.at(r, c)) < 1e-9);
      }

  CHECK(physics::contrast(0.2, 0.4) == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK_THROWS_AS(physics::contrast(0.5, 0.0), std::domain_error);
}

TEST_CASE("visibility map reproduces the closed form") {
  ScalarField d(1, 3), t(1, 3);
  d[0] = 50.0;
  t[0] = 0.5;
  d[1] = 10.0;
  t[1] = 1.0;  // T = 1 carries no fog information
  d[2] = 30.0;
  t[2] = 0.0;  // fully extinguished

  MaskedField v = physics::visibility_map(d, t, Epsilon(0.05));
  CHECK(v.valid[0] == 1);
  CHECK(v.values[0] == doctest::Approx(216.0964047443681).epsilon(1e-13));
  CHECK(v.valid[1] == 0);
  CHECK(v.valid[2] == 0);

  SUBCASE("uniform fog yields the global visibility at every pixel") {
    rng::Stream s(13);
    ScalarField depth(6, 7);
    for (std::size_t i = 0; i < depth.size(); ++i) depth[i] = s.uniform(1.0, 400.0);
    double beta = physics::beta_from_visibility(320.0, Epsilon(0.05));
    ScalarField tt = physics::transmission_from_depth(depth, beta);
    MaskedField vv = physics::visibility_map(depth, tt, Epsilon(0.05));
    for (std::size_t i = 0; i < vv.values.size(); ++i) {
      CHECK(vv.valid[i] == 1);
      CHECK(vv.values[i] == doctest::Approx(320.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("visibility and extinction convert both ways") {
  Epsilon eps(0.05);
  CHECK(physics::beta_from_visibility(10.0, eps) ==
        doctest::Approx(0.2995732273553991).epsilon(1e-15));
  CHECK(physics::visibility_from_beta(0.0059914645471079815, eps) ==
        doctest::Approx(500.0).epsilon(1e-13));
  for (double v : {10.0, 55.5, 999.0}) {
    CHECK(physics::visibility_from_beta(physics::beta_from_visibility(v, eps), eps) ==
          doctest::Approx(v).epsilon(1e-14));
  }
  CHECK_THROWS_AS(physics::beta_from_visibility(0.0, eps), std::domain_error);
  CHECK_THROWS_AS(physics::visibility_from_beta(-1.0, eps), std::domain_error);
}
