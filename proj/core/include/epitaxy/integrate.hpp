#pragma once

// Classical fixed-step RK4 for the w-equation, marched from r = 1 down to
// r = epsilon.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <variant>
#include <vector>

#include "epitaxy/model.hpp"

namespace epitaxy {

class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

// Magnitude beyond which a shot is declared divergent.
inline constexpr double kBlowupThreshold = 1e12;

struct OdeState {
  double r = 1.0;
  double w = 0.0;
  double wp = 0.0;
};

namespace detail {

// RK4 stages from r to r_next = r + h. Non-finite values propagate.
template <class Rhs>
OdeState rk4_advance(const OdeState& s, double h, double r_next, const Rhs& rhs,
                     bool* stages_finite = nullptr) {
  const double half = 0.5 * h;
  const double r_mid = s.r + half;

  const double k1w = s.wp;
  const double k1p = rhs(s.r, s.w, s.wp);
  const double k2w = s.wp + half * k1p;
  const double k2p = rhs(r_mid, s.w + half * k1w, s.wp + half * k1p);
  const double k3w = s.wp + half * k2p;
  const double k3p = rhs(r_mid, s.w + half * k2w, s.wp + half * k2p);
  const double k4w = s.wp + h * k3p;
  const double k4p = rhs(r_next, s.w + h * k3w, s.wp + h * k3p);

  if (stages_finite)
    *stages_finite = std::isfinite(k1p) && std::isfinite(k2p) && std::isfinite(k3p) &&
                     std::isfinite(k4p) && std::isfinite(k2w) && std::isfinite(k3w) &&
                     std::isfinite(k4w);
  return {r_next, s.w + h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w),
          s.wp + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)};
}

}  // namespace detail

// One RK4 step of (w, w')' = (w', rhs(r, w, w')). Throws DomainError if r or
// r + h_signed leaves (0, 1], OverflowError on any non-finite stage.
template <class Rhs>
OdeState rk4_step(const OdeState& s, double h_signed, const Rhs& rhs) {
  const double r_next = s.r + h_signed;
  if (!(s.r > 0.0 && s.r <= 1.0 && r_next > 0.0 && r_next <= 1.0))
    throw DomainError("rk4_step: r and r + h must lie in (0, 1]");
  bool finite = true;
  const OdeState out = detail::rk4_advance(s, h_signed, r_next, rhs, &finite);
  if (!finite || !std::isfinite(out.w) || !std::isfinite(out.wp))
    throw OverflowError("rk4_step: non-finite evaluation");
  return out;
}

// Ascending-radius trajectory of a bounded shot.
struct WProfile {
  std::vector<double> radii;  // epsilon = radii.front() < ... < radii.back() = 1
  std::vector<double> w;
  std::vector<double> wp;
  std::uint64_t spec_hash = 0;

  std::size_t size() const { return radii.size(); }
};

// A shot that escaped; radius is where the escape was detected.
struct Blowup {
  double radius = 1.0;
};

using Trajectory = std::variant<WProfile, Blowup>;

// Radii visited by the backward march, in descending order: 1, 1-h, ...,
// with the last step shortened so the final node is exactly epsilon.
std::vector<double> backward_grid(double epsilon, double step);

Trajectory integrate_backward(const ProblemSpec& spec, double s);

// Same march without storing the trajectory; returns (w, w') at epsilon or
// the blow-up radius. Bitwise identical to the last node of
// integrate_backward.
std::variant<OdeState, Blowup> integrate_endpoint(const ProblemSpec& spec, double s);

}  // namespace epitaxy
