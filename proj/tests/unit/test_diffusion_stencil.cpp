#include <cmath>
#include <random>

#include "doctest.h"
#include "slns/diffusion_stencil.hpp"

using namespace slns;

namespace {

struct Moments {
  double weight[2] = {0, 0};
  double first[2] = {0, 0};
  double second[2] = {0, 0};
};

// Per-axis moments; an entry displaced along one axis only belongs to that
// axis, a zero displacement is split evenly.
Moments moments(const DiffusionStencil& st) {
  Moments m;
  for (const auto& e : st.view()) {
    const bool on_x = e.offset.x != 0.0, on_y = e.offset.y != 0.0;
    REQUIRE_FALSE((on_x && on_y));
    for (int a = 0; a < 2; ++a) {
      const double d = e.offset[a];
      const bool mine = a == 0 ? on_x : on_y;
      const double w = mine ? e.weight : (!on_x && !on_y ? 0.5 * e.weight : 0.0);
      m.weight[a] += w;
      m.first[a] += w * d;
      m.second[a] += w * d * d;
    }
  }
  return m;
}

}  // namespace

TEST_CASE("interior stencil") {
  const Grid g = make_uniform_grid(11, 11, {0, 1, 0, 1}, false, false);
  const DiffusionStencil st = build_stencil({0.5, 0.5}, 0.01, 0.1, g);
  REQUIRE(st.count == 4);
  CHECK_FALSE(st.corrected[0]);
  CHECK_FALSE(st.corrected[1]);
  for (const auto& e : st.view()) {
    CHECK(e.weight == 0.25);
    CHECK(std::hypot(e.offset.x, e.offset.y) == doctest::Approx(0.0632456).epsilon(1e-6));
  }
}

TEST_CASE("near-wall correction values") {
  const Grid g = make_uniform_grid(11, 11, {0, 1, 0, 1}, false, false);
  const DiffusionStencil st = build_stencil({0.04, 0.5}, 0.01, 0.1, g);
  REQUIRE(st.count == 4);
  CHECK(st.corrected[0]);
  CHECK_FALSE(st.corrected[1]);
  CHECK_FALSE(st.flagged());
  double wm = 0, dm = 0, wp = 0, dp = 0;
  for (const auto& e : st.view()) {
    if (e.offset.x < 0) {
      wm = e.weight;
      dm = -e.offset.x;
    } else if (e.offset.x > 0) {
      wp = e.weight;
      dp = e.offset.x;
    }
  }
  CHECK(dm == doctest::Approx(0.04));
  CHECK(dp == doctest::Approx(0.1));
  CHECK(wm == doctest::Approx(0.3571429).epsilon(1e-6));
  CHECK(wp == doctest::Approx(0.1428571).epsilon(1e-6));
  CHECK(std::abs(wp * dp - wm * dm) < 1e-15);
  CHECK(wp * dp * dp + wm * dm * dm == doctest::Approx(0.002).epsilon(1e-13));
}

TEST_CASE("zero viscosity collapses to the foot") {
  const Grid g = make_uniform_grid(5, 5, {0, 1, 0, 1}, false, false);
  const DiffusionStencil st = build_stencil({0.0, 0.3}, 0.0, 0.5, g);
  REQUIRE(st.count == 1);
  CHECK(st.entries[0].weight == 1.0);
  CHECK(st.entries[0].offset.x == 0.0);
  CHECK(st.entries[0].offset.y == 0.0);
}

TEST_CASE("invalid arguments") {
  CHECK_THROWS(interior_delta(-1.0, 0.1));
  CHECK_THROWS(interior_delta(0.1, 0.0));
}

TEST_CASE("foot on the wall is flagged degenerate") {
  const Grid g = make_uniform_grid(11, 11, {0, 1, 0, 1}, false, false);
  const DiffusionStencil st = build_stencil({0.0, 0.5}, 0.01, 0.1, g);
  CHECK(st.degenerate[0]);
  CHECK(st.flagged());
  double total = 0;
  for (const auto& e : st.view()) total += e.weight;
  CHECK(total == doctest::Approx(1.0));
}

TEST_CASE("long displacement capped at the opposite wall") {
  const Grid g = make_uniform_grid(5, 5, {0, 1, 0, 1}, false, false);
  const DiffusionStencil st = build_stencil({0.01, 0.5}, 1.0, 1.0, g);
  CHECK(st.capped[0]);
  CHECK(st.flagged());
  for (const auto& e : st.view()) CHECK(0.01 + e.offset.x <= 1.0 + 1e-15);
}

TEST_CASE("interior stencils are point symmetric") {
  const Grid g = make_uniform_grid(8, 8, {0, 6.283185307179586, 0, 6.283185307179586}, true, true);
  const DiffusionStencil st = build_stencil({0.01, 6.2}, 0.3, 2.0, g);
  REQUIRE(st.count == 4);
  for (const auto& e : st.view()) {
    bool mirrored = false;
    for (const auto& f : st.view())
      mirrored = mirrored || (f.offset.x == -e.offset.x && f.offset.y == -e.offset.y && f.weight == e.weight);
    CHECK(mirrored);
  }
}

TEST_CASE("randomized moments, walls and corners included") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  int corrected = 0, corners = 0;
  for (int k = 0; k < 2000; ++k) {
    const bool refined = k % 2 == 0;
    const Grid g = refined ? make_boundary_refined_grid(9 + k % 20, {0, 1, 0, 2}, 0.5)
                           : make_uniform_grid(5 + k % 30, 6, {0, 1, 0, 2}, k % 3 == 0, false);
    const double nu = std::pow(10.0, -4 + 3 * u01(rng));
    const double dt = std::pow(10.0, -3 + 2 * u01(rng));
    // Bias half the feet toward walls and corners.
    auto coord = [&](double lo, double hi) {
      const double s = u01(rng);
      if (k % 2 == 1) return lo + (hi - lo) * s;
      const double d = 0.05 * (hi - lo) * s;
      return u01(rng) < 0.5 ? lo + d : hi - d;
    };
    const Vec2 z{coord(0, 1), coord(0, 2)};
    const DiffusionStencil st = build_stencil(z, nu, dt, g);
    if (st.corrected[0] || st.corrected[1]) ++corrected;
    if (st.corrected[0] && st.corrected[1]) ++corners;
    for (const auto& e : st.view()) {
      const Vec2 p = z + e.offset;
      if (!g.x().periodic()) {
        CHECK(p.x >= -1e-15);
        CHECK(p.x <= 1.0 + 1e-15);
      }
      CHECK(p.y >= -1e-15);
      CHECK(p.y <= 2.0 + 1e-15);
      CHECK(e.weight > 0.0);
    }
    if (st.flagged()) continue;
    const Moments m = moments(st);
    for (int a = 0; a < 2; ++a) {
      CHECK(std::abs(m.weight[a] - 0.5) <= 1e-12);
      CHECK(std::abs(m.first[a]) <= 1e-12 * std::sqrt(2 * nu * dt));
      CHECK(std::abs(m.second[a] - 2 * nu * dt) <= 1e-12 * 2 * nu * dt);
    }
  }
  CHECK(corrected > 200);
  CHECK(corners > 20);
}
