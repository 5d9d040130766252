#include "epitaxy/oracle.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace epitaxy {

namespace {

enum Terms : unsigned { kQuadratic = 1u, kCubic = 2u, kForcing = 4u, kAll = 7u };

// Linear combination of node values U[index].
struct LinearForm {
  std::array<int, 4> index{};
  std::array<double, 4> coef{};
  int len = 0;

  void add(int i, double c) {
    index[len] = i;
    coef[len] = c;
    ++len;
  }
  double apply(const std::vector<double>& U) const {
    double v = 0.0;
    for (int k = 0; k < len; ++k) v += coef[k] * U[index[k]];
    return v;
  }
};

int last_index(const DiscreteFunctional& df) { return df.n + 1; }

// Radial Laplacian (1/r)(r u')' as a finite-volume balance over the cell
// around node i. The origin cell closes by symmetry; the rim cell (Dirichlet
// only) has zero flux through r = 1.
LinearForm laplacian(int i, int last, double dr) {
  LinearForm f;
  if (i == 0) {
    const double c = 4.0 / (dr * dr);
    f.add(0, -c);
    f.add(1, c);
    return f;
  }
  const double r_in = (i - 0.5) * dr;
  if (i == last) {
    const double volume = 0.5 * dr - 0.125 * dr * dr;
    const double c = r_in / (dr * volume);
    f.add(last - 1, c);
    f.add(last, -c);
    return f;
  }
  const double r = i * dr;
  const double r_out = (i + 0.5) * dr;
  const double s = 1.0 / (dr * dr * r);
  f.add(i - 1, r_in * s);
  f.add(i, -(r_in + r_out) * s);
  f.add(i + 1, r_out * s);
  return f;
}

// Area weight of the cell around node i: int r dr over it.
double cell_area(int i, int last, double dr) {
  if (i == 0) return 0.125 * dr * dr;
  if (i == last) return 0.5 * dr - 0.125 * dr * dr;
  return i * dr * dr;
}

// Second-order one-sided u'(1).
LinearForm rim_slope(int last, double dr) {
  LinearForm f;
  f.add(last - 2, 0.5 / dr);
  f.add(last - 1, -2.0 / dr);
  f.add(last, 1.5 / dr);
  return f;
}

// Laplacian cells carrying energy: Dirichlet closes the rim cell with the
// clamp; Navier leaves it out, which imposes (1/r)(r u')' = 0 at r = 1.
int last_energy_cell(const DiscreteFunctional& df) {
  return df.bc == BoundaryKind::Dirichlet ? last_index(df) : last_index(df) - 1;
}

// J differs from I by the rim term u'(1)^2 / 2, which the clamp removes.
bool has_rim_term(const DiscreteFunctional& df) {
  return df.kind == FunctionalKind::J && df.bc == BoundaryKind::Navier;
}

void check_size(const DiscreteFunctional& df, std::span<const double> u) {
  if (static_cast<int>(u.size()) != df.n) {
    std::ostringstream msg;
    msg << "discrete functional expects " << df.n << " node values, got " << u.size();
    throw ConfigError(msg.str());
  }
}

// Full node vector U_0..U_{n+1} from the free values.
std::vector<double> extend(const DiscreteFunctional& df, std::span<const double> u) {
  const int N = last_index(df);
  std::vector<double> U(N + 1, 0.0);
  for (int i = 1; i <= df.n; ++i) U[i] = u[i - 1];
  U[0] = (4.0 * U[1] - U[2]) / 3.0;
  U[N] = 0.0;
  return U;
}

// Pulls a gradient over U_0..U_{n+1} back to the free values.
std::vector<double> pull_back(const DiscreteFunctional& df, std::vector<double> gU) {
  gU[1] += 4.0 / 3.0 * gU[0];
  gU[2] -= 1.0 / 3.0 * gU[0];
  return std::vector<double>(gU.begin() + 1, gU.begin() + 1 + df.n);
}

double accumulate(const DiscreteFunctional& df, std::span<const double> u, unsigned terms,
                  std::vector<double>* grad) {
  check_size(df, u);
  const int N = last_index(df);
  const double dr = df.spacing;
  const std::vector<double> U = extend(df, u);
  std::vector<double> gU;
  if (grad) gU.assign(N + 1, 0.0);

  auto spread = [&](const LinearForm& f, double factor) {
    for (int k = 0; k < f.len; ++k) gU[f.index[k]] += factor * f.coef[k];
  };

  double value = 0.0;
  if (terms & kQuadratic) {
    for (int i = 0; i <= last_energy_cell(df); ++i) {
      const LinearForm lap = laplacian(i, N, dr);
      const double area = cell_area(i, N, dr);
      const double l = lap.apply(U);
      value += 0.5 * area * l * l;
      if (grad) spread(lap, area * l);
    }
    if (has_rim_term(df)) {
      const LinearForm slope = rim_slope(N, dr);
      const double d = slope.apply(U);
      value -= 0.5 * d * d;
      if (grad) spread(slope, -d);
    }
  }
  if (terms & kCubic) {
    // Midpoint rule on the cell faces, where (U_{i+1} - U_i)/dr is centred.
    for (int i = 0; i < N; ++i) {
      const double d = (U[i + 1] - U[i]) / dr;
      value += dr * d * d * d / 6.0;
      if (grad) {
        const double g = 0.5 * d * d;
        gU[i + 1] += g;
        gU[i] -= g;
      }
    }
  }
  if (terms & kForcing) {
    // Trapezoid on f u r: the r = 0 node carries no weight.
    for (int i = 1; i <= N; ++i) {
      const double weight = (i == N ? 0.5 : 1.0) * dr * df.radius(i);
      value -= df.lambda * weight * df.forcing[i] * U[i];
      if (grad) gU[i] -= df.lambda * weight * df.forcing[i];
    }
  }
  if (grad) *grad = pull_back(df, std::move(gU));
  return value;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

constexpr double kStallDecrease = 1e-14;
constexpr int kStallIterations = 50;

using SparseMatrix = Eigen::SparseMatrix<double>;

// Hessian of the Laplacian energy with respect to the free values. This is
// the quadratic part of I (and of J whenever the rim term is absent); it is
// SPD and serves as the descent metric.
SparseMatrix laplacian_hessian(const DiscreteFunctional& df) {
  const int N = last_index(df);
  const int n = df.n;
  const double dr = df.spacing;

  std::vector<Eigen::Triplet<double>> h_entries;
  for (int i = 0; i <= last_energy_cell(df); ++i) {
    const LinearForm lap = laplacian(i, N, dr);
    const double area = cell_area(i, N, dr);
    for (int a = 0; a < lap.len; ++a)
      for (int b = 0; b < lap.len; ++b)
        h_entries.emplace_back(lap.index[a], lap.index[b], area * lap.coef[a] * lap.coef[b]);
  }
  SparseMatrix hU(N + 1, N + 1);
  hU.setFromTriplets(h_entries.begin(), h_entries.end());

  std::vector<Eigen::Triplet<double>> e_entries;
  e_entries.emplace_back(0, 0, 4.0 / 3.0);
  e_entries.emplace_back(0, 1, -1.0 / 3.0);
  for (int i = 1; i <= n; ++i) e_entries.emplace_back(i, i - 1, 1.0);
  SparseMatrix E(N + 1, n);
  E.setFromTriplets(e_entries.begin(), e_entries.end());

  SparseMatrix hx = SparseMatrix(E.transpose()) * hU * E;
  hx.makeCompressed();
  return hx;
}

}  // namespace

DiscreteFunctional DiscreteFunctional::make(FunctionalKind kind, BoundaryKind bc, int n,
                                            double lambda, const Forcing& forcing) {
  if (n < 4) throw ConfigError("discrete functional needs n >= 4 interior nodes");
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw ConfigError("discrete functional needs finite lambda >= 0");
  DiscreteFunctional df;
  df.kind = kind;
  df.bc = bc;
  df.n = n;
  df.spacing = 1.0 / (n + 1);
  df.lambda = lambda;
  df.forcing.resize(n + 2);
  for (int i = 0; i <= n + 1; ++i) df.forcing[i] = forcing(df.radius(i));
  return df;
}

std::vector<double> DiscreteFunctional::nodes() const {
  std::vector<double> r(n);
  for (int i = 1; i <= n; ++i) r[i - 1] = radius(i);
  return r;
}

double evaluate_discrete(const DiscreteFunctional& df, std::span<const double> u) {
  return accumulate(df, u, kAll, nullptr);
}

std::vector<double> discrete_gradient(const DiscreteFunctional& df, std::span<const double> u) {
  std::vector<double> g;
  accumulate(df, u, kAll, &g);
  return g;
}

std::vector<double> quadratic_gradient(const DiscreteFunctional& df,
                                       std::span<const double> u) {
  std::vector<double> g;
  accumulate(df, u, kQuadratic, &g);
  return g;
}

MinimizeResult minimize(const DiscreteFunctional& df, std::span<const double> u_init,
                        const MinimizeOptions& options) {
  check_size(df, u_init);
  const int n = df.n;

  Eigen::SimplicialLDLT<SparseMatrix> precond(laplacian_hessian(df));
  if (precond.info() != Eigen::Success)
    throw std::runtime_error("minimize: quadratic Hessian factorization failed");

  MinimizeResult res;
  res.u.assign(u_init.begin(), u_init.end());
  std::vector<double> grad;
  res.value = accumulate(df, res.u, kAll, &grad);
  res.gradient_norm = max_abs(grad);
  res.values.push_back(res.value);

  Eigen::VectorXd g(n), d(n);
  std::vector<double> trial(n);
  int stalled = 0;
  for (res.iterations = 0; res.iterations < options.max_iterations; ++res.iterations) {
    if (res.gradient_norm <= options.gradient_tolerance) {
      res.converged = true;
      break;
    }
    for (int i = 0; i < n; ++i) g[i] = grad[i];
    d = -precond.solve(g);
    const double slope = g.dot(d);
    if (!(slope < 0.0)) break;

    double t = 1.0;
    double trial_value = 0.0;
    bool accepted = false;
    for (int halvings = 0; halvings < 60; ++halvings, t *= 0.5) {
      for (int i = 0; i < n; ++i) trial[i] = res.u[i] + t * d[i];
      trial_value = accumulate(df, trial, kAll, nullptr);
      if (trial_value <= res.value + options.armijo * t * slope) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;  // no representable decrease left

    stalled = res.value - trial_value <= kStallDecrease * std::max(1.0, std::abs(res.value))
                  ? stalled + 1
                  : 0;
    res.u = trial;
    res.value = accumulate(df, res.u, kAll, &grad);
    res.gradient_norm = max_abs(grad);
    res.values.push_back(res.value);
    if (stalled >= kStallIterations) break;  // gradient floor set by roundoff
  }
  if (!res.converged && res.gradient_norm <= options.gradient_tolerance) res.converged = true;
  return res;
}

std::vector<double> resample_height(const HeightProfile& height,
                                    std::span<const double> radii) {
  height.validate();
  const auto& x = height.radii;
  const auto& y = height.u;
  const std::size_t m = x.size();

  std::vector<double> h(m - 1), delta(m - 1);
  for (std::size_t k = 0; k + 1 < m; ++k) {
    h[k] = x[k + 1] - x[k];
    delta[k] = (y[k + 1] - y[k]) / h[k];
  }

  std::vector<double> d(m, 0.0);
  if (m == 2) {
    d[0] = d[1] = delta[0];
  } else {
    for (std::size_t k = 1; k + 1 < m; ++k) {
      if (delta[k - 1] * delta[k] <= 0.0) continue;
      const double w1 = 2.0 * h[k] + h[k - 1];
      const double w2 = h[k] + 2.0 * h[k - 1];
      d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
    }
    auto end_slope = [](double h0, double h1, double m0, double m1) {
      double s = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
      if (s * m0 <= 0.0) return 0.0;
      if (m0 * m1 <= 0.0 && std::abs(s) > std::abs(3.0 * m0)) return 3.0 * m0;
      return s;
    };
    d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    d[m - 1] = end_slope(h[m - 2], h[m - 3], delta[m - 2], delta[m - 3]);
  }

  std::vector<double> out(radii.size());
  for (std::size_t j = 0; j < radii.size(); ++j) {
    const double r = radii[j];
    if (r <= x.front()) {
      out[j] = y.front();
      continue;
    }
    if (r >= x.back()) {
      out[j] = y.back();
      continue;
    }
    const auto it = std::upper_bound(x.begin(), x.end(), r);
    const std::size_t k = static_cast<std::size_t>(it - x.begin()) - 1;
    const double t = (r - x[k]) / h[k];
    const double t2 = t * t, t3 = t2 * t;
    out[j] = (2 * t3 - 3 * t2 + 1) * y[k] + (t3 - 2 * t2 + t) * h[k] * d[k] +
             (-2 * t3 + 3 * t2) * y[k + 1] + (t3 - t2) * h[k] * d[k + 1];
  }
  return out;
}

double el_residual(const DiscreteFunctional& df, const HeightProfile& height) {
  Eigen::SimplicialLDLT<SparseMatrix> metric(laplacian_hessian(df));
  if (metric.info() != Eigen::Success)
    throw std::runtime_error("el_residual: quadratic Hessian factorization failed");
  auto dual_norm = [&](const std::vector<double>& g) {
    const Eigen::VectorXd v = metric.solve(Eigen::Map<const Eigen::VectorXd>(g.data(), df.n));
    return v.lpNorm<Eigen::Infinity>();
  };

  const auto r = df.nodes();
  const std::vector<double> u = resample_height(height, r);
  std::vector<double> probe(df.n);
  for (int i = 0; i < df.n; ++i) probe[i] = (1.0 - r[i] * r[i]) * (1.0 - r[i] * r[i]);
  const double unit = max_abs(probe);
  for (double& p : probe) p /= unit;
  return dual_norm(discrete_gradient(df, u)) / dual_norm(quadratic_gradient(df, probe));
}

double natural_boundary_defect(const DiscreteFunctional& df, std::span<const double> u) {
  check_size(df, u);
  const int N = last_index(df);
  const std::vector<double> U = extend(df, u);
  const double dr = df.spacing;
  const double upp = (2.0 * U[N] - 5.0 * U[N - 1] + 4.0 * U[N - 2] - U[N - 3]) / (dr * dr);
  return upp + rim_slope(N, dr).apply(U);
}

}  // namespace epitaxy
