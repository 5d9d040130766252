#pragma once

// Helpers shared by the unit tests and the acceptance gate.

#include <algorithm>
#include <cmath>
#include <random>
#include <span>
#include <vector>

#include "epitaxy/energy.hpp"
#include "epitaxy/integrate.hpp"
#include "epitaxy/oracle.hpp"

namespace checks {

using namespace epitaxy;

inline double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Height profile of u = sum_k c_k (1 - r^2)^k on a uniform grid of m
// intervals over [0, 1], with exact derivatives.
inline HeightProfile polynomial_profile(std::span<const double> c, int m) {
  HeightProfile h;
  for (int i = 0; i <= m; ++i) {
    const double r = i == m ? 1.0 : static_cast<double>(i) / m;
    const double q = 1.0 - r * r;
    double u = 0.0, up = 0.0, upp = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
      const double p = static_cast<double>(k + 1);
      // d/dr q^p = -2 p r q^(p-1);  d2/dr2 = -2 p q^(p-1) + 4 p (p-1) r^2 q^(p-2)
      u += c[k] * std::pow(q, p);
      up += c[k] * (-2.0 * p * r * std::pow(q, p - 1));
      upp += c[k] * (-2.0 * p * std::pow(q, p - 1) +
                     (p > 1 ? 4.0 * p * (p - 1) * r * r * std::pow(q, p - 2) : 0.0));
    }
    h.radii.push_back(r);
    h.u.push_back(i == m ? 0.0 : u);
    h.up.push_back(up);
    h.upp.push_back(upp);
  }
  return h;
}

// Random admissible profile: u'(0) = 0 and u(1) = 0 by construction.
inline HeightProfile random_profile(std::mt19937_64& rng, int m = 512) {
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  std::vector<double> c(4);
  for (double& x : c) x = coef(rng);
  return polynomial_profile(c, m);
}

// Linear comparison problem with f = 1, lambda = 16, w(1) = 0, w'(1) = 2:
// exact solution w = r^4 - r^2. Returns the max-norm error of
// integrate_backward over its grid.
inline double linear_problem_error(double step) {
  ProblemSpec spec = ProblemSpec::make(BoundaryKind::Dirichlet, 16.0);
  spec.nonlinearity = Nonlinearity::LinearComparison;
  spec.step = step;
  const auto traj = integrate_backward(spec, 2.0);
  const auto& p = std::get<WProfile>(traj);
  double err = 0.0;
  for (std::size_t i = 0; i < p.radii.size(); ++i) {
    const double r = p.radii[i];
    err = std::max(err, std::abs(p.w[i] - (r * r * r * r - r * r)));
  }
  return err;
}

// Orders log2(e_k / e_{k+1}) for successive halvings starting at h0.
inline std::vector<double> observed_orders(double h0, int halvings) {
  std::vector<double> errors;
  for (int k = 0; k <= halvings; ++k) errors.push_back(linear_problem_error(h0 / std::pow(2.0, k)));
  std::vector<double> orders;
  for (int k = 0; k < halvings; ++k) orders.push_back(std::log2(errors[k] / errors[k + 1]));
  return orders;
}

// Max |central FD - analytic| over all nodes, relative to max |analytic|.
inline double gradient_mismatch(const DiscreteFunctional& df, std::span<const double> u) {
  const std::vector<double> g = discrete_gradient(df, u);
  const double step = 1e-6 * std::max(1.0, max_abs(u));
  std::vector<double> probe(u.begin(), u.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < probe.size(); ++i) {
    const double keep = probe[i];
    probe[i] = keep + step;
    const double fp = evaluate_discrete(df, probe);
    probe[i] = keep - step;
    const double fm = evaluate_discrete(df, probe);
    probe[i] = keep;
    worst = std::max(worst, std::abs((fp - fm) / (2.0 * step) - g[i]));
  }
  return worst / std::max(max_abs(g), 1e-300);
}

// Smooth random state plus node noise.
inline std::vector<double> random_state(const DiscreteFunctional& df, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  std::uniform_real_distribution<double> noise(-0.1, 0.1);
  const double a = coef(rng), b = coef(rng), c = coef(rng);
  std::vector<double> u(df.n);
  const auto r = df.nodes();
  for (int i = 0; i < df.n; ++i) {
    const double q = 1.0 - r[i] * r[i];
    u[i] = a * q + b * q * q + c * q * q * q + noise(rng);
  }
  return u;
}

}  // namespace checks
