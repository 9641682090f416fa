#include "slns/diffusion_stencil.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace slns {

namespace {

Vec2 along(int axis, double d) { return axis == 0 ? Vec2{d, 0.0} : Vec2{0.0, d}; }

}  // namespace

double interior_delta(double nu, double dt) {
  if (nu < 0.0 || !(dt > 0.0)) throw std::invalid_argument("interior_delta needs nu >= 0, dt > 0");
  return std::sqrt(4.0 * nu * dt);
}

DiffusionStencil build_stencil(Vec2 z, double nu, double dt, const Grid& g) {
  DiffusionStencil st;
  const double delta = interior_delta(nu, dt);
  if (delta == 0.0) {
    st.entries[0] = {{0.0, 0.0}, 1.0};
    st.count = 1;
    return st;
  }

  auto push = [&st](Vec2 offset, double w) { st.entries[st.count++] = {offset, w}; };

  for (int a = 0; a < 2; ++a) {
    const Axis& ax = g.axis(a);
    if (ax.periodic()) {
      push(along(a, -delta), 0.25);
      push(along(a, +delta), 0.25);
      continue;
    }
    const double to_lower = z[a] - ax.lower();
    const double to_upper = ax.upper() - z[a];
    const bool exits_lower = delta > to_lower;
    const bool exits_upper = delta > to_upper;
    if (!exits_lower && !exits_upper) {
      push(along(a, -delta), 0.25);
      push(along(a, +delta), 0.25);
      continue;
    }

    st.corrected[a] = true;
    // Shortened side faces the nearer violated wall.
    const bool toward_lower = exits_lower && (!exits_upper || to_lower <= to_upper);
    const double sign = toward_lower ? -1.0 : 1.0;
    const double wall_dist = std::max(toward_lower ? to_lower : to_upper, 0.0);
    const double room = std::max(toward_lower ? to_upper : to_lower, 0.0);

    if (wall_dist == 0.0) {
      st.degenerate[a] = true;
      push(along(a, 0.0), 0.25);
      push(along(a, -sign * std::min(delta, room)), 0.25);
      continue;
    }

    const double d_minus = wall_dist;
    double d_plus = 4.0 * nu * dt / d_minus;
    if (d_plus > room) {
      d_plus = room;
      st.capped[a] = true;
    }
    // Both weights from the ratio form; 0.5 - w_minus loses w_plus to
    // cancellation when d_plus >> d_minus.
    const double w_minus = 0.5 * d_plus / (d_plus + d_minus);
    const double w_plus = 0.5 * d_minus / (d_plus + d_minus);
    push(along(a, sign * d_minus), w_minus);
    push(along(a, -sign * d_plus), w_plus);
  }
  return st;
}

}  // namespace slns
