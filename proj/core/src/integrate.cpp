#include "epitaxy/integrate.hpp"

#include <algorithm>
#include <cmath>

namespace epitaxy {

namespace {

bool escaped(const OdeState& s) {
  return !std::isfinite(s.w) || !std::isfinite(s.wp) ||
         std::abs(s.w) > kBlowupThreshold || std::abs(s.wp) > kBlowupThreshold;
}

// Right-hand side data at one radius: 1/r and lambda * F(r).
struct Coeffs {
  double inv_r;
  double load;
};

// Marches the backward grid, calling visit(state) at every node including
// r = 1. Returns the state at epsilon or the radius where escape was found.
template <bool kFull, class Visit>
std::variant<OdeState, Blowup> march(const ProblemSpec& spec, double s,
                                     const std::vector<double>& grid, Visit&& visit) {
  const FinalValues fv = final_conditions(spec.bc, s, spec.navier_shooting);
  OdeState state{grid.front(), fv.w, fv.wp};
  visit(state);

  const double lambda = spec.lambda;
  const Forcing& forcing = spec.forcing;
  const bool unit = forcing.is_constant_one();
  auto coeffs = [&](double r) {
    return Coeffs{1.0 / r, lambda * (unit ? 0.5 * r * r : forcing.cumulative(r))};
  };
  auto rhs = [](const Coeffs& c, double w, double wp) {
    if constexpr (kFull) return wp * c.inv_r + 0.5 * w * w * c.inv_r * c.inv_r + c.load;
    return wp * c.inv_r + c.load;
  };

  Coeffs at = coeffs(grid.front());
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const double h = grid[k] - grid[k - 1];
    const double half = 0.5 * h;
    const Coeffs mid = coeffs(state.r + half);
    const Coeffs next = coeffs(grid[k]);

    const double k1w = state.wp;
    const double k1p = rhs(at, state.w, state.wp);
    const double k2w = state.wp + half * k1p;
    const double k2p = rhs(mid, state.w + half * k1w, k2w);
    const double k3w = state.wp + half * k2p;
    const double k3p = rhs(mid, state.w + half * k2w, k3w);
    const double k4w = state.wp + h * k3p;
    const double k4p = rhs(next, state.w + h * k3w, k4w);
    state = {grid[k], state.w + h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w),
             state.wp + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)};
    if (escaped(state)) return Blowup{grid[k]};
    visit(state);
    at = next;
  }
  return state;
}

template <class Visit>
std::variant<OdeState, Blowup> march(const ProblemSpec& spec, double s,
                                     const std::vector<double>& grid, Visit&& visit) {
  if (spec.nonlinearity == Nonlinearity::Full)
    return march<true>(spec, s, grid, std::forward<Visit>(visit));
  return march<false>(spec, s, grid, std::forward<Visit>(visit));
}

}  // namespace

std::vector<double> backward_grid(double epsilon, double step) {
  const double span = 1.0 - epsilon;
  const double q = span / step;
  auto intervals = static_cast<std::size_t>(std::ceil(q - 1e-9));
  intervals = std::max<std::size_t>(intervals, 1);

  std::vector<double> grid(intervals + 1);
  for (std::size_t k = 0; k < intervals; ++k) grid[k] = 1.0 - static_cast<double>(k) * step;
  grid[intervals] = epsilon;
  return grid;
}

Trajectory integrate_backward(const ProblemSpec& spec, double s) {
  spec.validate();
  const auto grid = backward_grid(spec.epsilon, spec.step);

  WProfile profile;
  profile.radii.reserve(grid.size());
  profile.w.reserve(grid.size());
  profile.wp.reserve(grid.size());
  auto result = march(spec, s, grid, [&](const OdeState& st) {
    profile.radii.push_back(st.r);
    profile.w.push_back(st.w);
    profile.wp.push_back(st.wp);
  });
  if (const auto* b = std::get_if<Blowup>(&result)) return *b;

  std::reverse(profile.radii.begin(), profile.radii.end());
  std::reverse(profile.w.begin(), profile.w.end());
  std::reverse(profile.wp.begin(), profile.wp.end());
  profile.spec_hash = spec.hash();
  return profile;
}

std::variant<OdeState, Blowup> integrate_endpoint(const ProblemSpec& spec, double s) {
  spec.validate();
  const auto grid = backward_grid(spec.epsilon, spec.step);
  return march(spec, s, grid, [](const OdeState&) {});
}

}  // namespace epitaxy
