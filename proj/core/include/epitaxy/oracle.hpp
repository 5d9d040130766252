#pragma once

// Finite-volume discretization of J / I on a uniform radial grid, with its
// exact gradient. Used as a shooting-independent check: its minimizer
// should reproduce the minimum branch, and shooting solutions should make
// its gradient small.
//
// Grid: r_i = i * dr, dr = 1/(n+1), i = 0..n+1. The unknowns are u at the n
// interior nodes r_1..r_n; u(1) = 0 and u(0) = (4 u_1 - u_2) / 3 (even
// quadratic through r_1, r_2).
//
// The quadratic part of I is (1/2) sum A_i L_i^2, where L_i is the radial
// Laplacian written as a flux balance over the cell [r_{i-1/2}, r_{i+1/2}]
// and A_i is that cell's exact area (int r dr). The origin cell has no inner
// face. Dirichlet keeps the half cell at r = 1 with zero outer flux, which is
// the clamp u'(1) = 0; Navier drops it, which makes L(1) = 0 the natural
// condition. J = I - u'(1)^2 / 2, with a one-sided u'(1) for Navier and zero
// for Dirichlet. The cubic term uses the midpoint rule on cell faces and the
// forcing term the trapezoid rule.

#include <span>
#include <vector>

#include "epitaxy/energy.hpp"
#include "epitaxy/model.hpp"

namespace epitaxy {

struct DiscreteFunctional {
  FunctionalKind kind = FunctionalKind::J;
  BoundaryKind bc = BoundaryKind::Dirichlet;
  int n = 0;
  double spacing = 0.0;
  double lambda = 0.0;
  std::vector<double> forcing;  // f(r_i), i = 0..n+1

  // Throws ConfigError for n < 4 or lambda < 0.
  static DiscreteFunctional make(FunctionalKind kind, BoundaryKind bc, int n, double lambda,
                                 const Forcing& forcing = Forcing());

  double radius(int i) const { return i * spacing; }
  // r_1..r_n.
  std::vector<double> nodes() const;
};

double evaluate_discrete(const DiscreteFunctional& df, std::span<const double> u);

std::vector<double> discrete_gradient(const DiscreteFunctional& df, std::span<const double> u);

// Gradient of the quadratic (lambda-free, cubic-free) part only.
std::vector<double> quadratic_gradient(const DiscreteFunctional& df, std::span<const double> u);

struct MinimizeOptions {
  double gradient_tolerance = 1e-8;  // max-norm
  int max_iterations = 100000;
  double armijo = 1e-4;
};

struct MinimizeResult {
  std::vector<double> u;  // best (= last accepted) iterate
  double value = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;  // false: NotConverged, u/value/gradient_norm are the last iterate
  std::vector<double> values;  // functional value of every accepted iterate
};

// Descent with Armijo backtracking (halving). The search direction is the
// gradient preconditioned by the constant Hessian of the Laplacian energy.
// Stops without convergence once the value stops decreasing.
MinimizeResult minimize(const DiscreteFunctional& df, std::span<const double> u_init,
                        const MinimizeOptions& options = {});

// Fritsch-Carlson monotone cubic interpolation of height.u at the given radii.
// Radii below the first sample take the first value.
std::vector<double> resample_height(const HeightProfile& height, std::span<const double> radii);

// Gradient at the resampled profile, normalized by the quadratic-part
// gradient at the unit probe (1 - r^2)^2. Both are measured as max|H^-1 g|
// with H the Laplacian-energy Hessian, i.e. as the node correction the
// discrete equations ask for; the raw max-norm is dominated by the O(1)
// truncation of the rim cell, which does not shrink with n.
double el_residual(const DiscreteFunctional& df, const HeightProfile& height);

// One-sided u''(1) + u'(1); the natural boundary condition of I.
double natural_boundary_defect(const DiscreteFunctional& df, std::span<const double> u);

}  // namespace epitaxy
