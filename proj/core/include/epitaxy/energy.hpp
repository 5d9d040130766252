#pragma once

// Height reconstruction from w = r u' and quadrature of the radial energy
// functionals
//
//   J(u) = 1/2 int (u''^2 + u'^2 / r^2) r dr + 1/6 int u'^3 dr - lambda int f u r dr
//   I(u) = 1/2 int (u'' + u'/r)^2 r dr     + 1/6 int u'^3 dr - lambda int f u r dr
//
// Integrals run over the stored grid only; [0, radii.front()) is dropped.

#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "epitaxy/integrate.hpp"
#include "epitaxy/model.hpp"

namespace epitaxy {

class GridTooCoarse : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class FunctionalKind { J, I };

std::string_view to_string(FunctionalKind kind);

// Dirichlet problems are critical points of J, Navier problems of I.
FunctionalKind functional_for(BoundaryKind bc);

struct HeightProfile {
  std::vector<double> radii;
  std::vector<double> u;
  std::vector<double> up;
  std::vector<double> upp;

  std::size_t size() const { return radii.size(); }

  // Equal lengths >= 2, strictly increasing radii in [0,1] ending at 1,
  // u(1) == 0, all values finite. Throws ConfigError.
  void validate() const;
};

struct EnergyReport {
  FunctionalKind kind = FunctionalKind::J;
  double quadratic = 0.0;
  double cubic = 0.0;
  double forcing_term = 0.0;  // lambda * int f u r dr
  double total = 0.0;         // quadratic + cubic - forcing_term
};

HeightProfile reconstruct_height(const WProfile& profile);

// |u'(eps)| <= 1e-3 * max(1, max |u'|): the origin extremum condition.
bool origin_slope_consistent(const HeightProfile& height);

// Composite Simpson on a possibly nonuniform grid; an odd trailing interval
// is closed with the three-point quadratic rule. Requires x.size() >= 2.
double simpson(std::span<const double> x, std::span<const double> y);

// Throws GridTooCoarse if the full-grid and every-other-node evaluations
// differ by more than 1e-4 relative to |quadratic| + |cubic| + |forcing|.
EnergyReport evaluate_functional(FunctionalKind kind, const HeightProfile& height,
                                 double lambda, const Forcing& forcing);

}  // namespace epitaxy
