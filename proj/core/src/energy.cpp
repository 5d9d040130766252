#include "epitaxy/energy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace epitaxy {

namespace {

struct Integrands {
  std::vector<double> quadratic;
  std::vector<double> cubic;
  std::vector<double> forcing;  // f u r, without lambda
};

Integrands integrands(FunctionalKind kind, const HeightProfile& h, const Forcing& forcing) {
  const std::size_t n = h.size();
  Integrands out{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const double r = h.radii[i];
    const double up = h.up[i];
    const double upp = h.upp[i];
    if (r > 0.0) {
      if (kind == FunctionalKind::J) {
        out.quadratic[i] = 0.5 * (upp * upp * r + up * up / r);
      } else {
        const double lap = upp + up / r;
        out.quadratic[i] = 0.5 * lap * lap * r;
      }
    }
    out.cubic[i] = up * up * up / 6.0;
    out.forcing[i] = forcing(r) * h.u[i] * r;
  }
  return out;
}

EnergyReport integrate_report(FunctionalKind kind, std::span<const double> x,
                              const Integrands& in, double lambda) {
  EnergyReport rep;
  rep.kind = kind;
  rep.quadratic = simpson(x, in.quadratic);
  rep.cubic = simpson(x, in.cubic);
  rep.forcing_term = lambda * simpson(x, in.forcing);
  rep.total = rep.quadratic + rep.cubic - rep.forcing_term;
  return rep;
}

std::vector<double> every_other(std::span<const double> v) {
  std::vector<double> out;
  out.reserve(v.size() / 2 + 2);
  for (std::size_t i = 0; i < v.size(); i += 2) out.push_back(v[i]);
  if ((v.size() - 1) % 2 != 0) out.push_back(v.back());
  return out;
}

}  // namespace

std::string_view to_string(FunctionalKind kind) {
  return kind == FunctionalKind::J ? "J" : "I";
}

FunctionalKind functional_for(BoundaryKind bc) {
  return bc == BoundaryKind::Dirichlet ? FunctionalKind::J : FunctionalKind::I;
}

void HeightProfile::validate() const {
  const std::size_t n = radii.size();
  auto fail = [](const std::string& what) { throw ConfigError("height profile: " + what); };
  if (n < 2) fail("needs at least two nodes");
  if (u.size() != n || up.size() != n || upp.size() != n) fail("column lengths differ");
  if (radii.front() < 0.0 || radii.back() != 1.0) fail("radii must span [r0 >= 0, 1]");
  for (std::size_t i = 1; i < n; ++i)
    if (!(radii[i] > radii[i - 1])) fail("radii must be strictly increasing");
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(u[i]) || !std::isfinite(up[i]) || !std::isfinite(upp[i]))
      fail("non-finite value");
  if (u.back() != 0.0) fail("u(1) must be 0");
}

HeightProfile reconstruct_height(const WProfile& profile) {
  const std::size_t n = profile.size();
  HeightProfile h;
  h.radii = profile.radii;
  h.u.assign(n, 0.0);
  h.up.resize(n);
  h.upp.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = profile.radii[i];
    h.up[i] = profile.w[i] / r;
    h.upp[i] = profile.wp[i] / r - profile.w[i] / (r * r);
  }
  // u(r) = -int_r^1 u'(rho) drho, accumulated from the rim inward.
  for (std::size_t i = n - 1; i-- > 0;) {
    const double dr = h.radii[i + 1] - h.radii[i];
    h.u[i] = h.u[i + 1] - 0.5 * dr * (h.up[i] + h.up[i + 1]);
  }
  return h;
}

bool origin_slope_consistent(const HeightProfile& height) {
  double scale = 1.0;
  for (double v : height.up) scale = std::max(scale, std::abs(v));
  return std::abs(height.up.front()) <= 1e-3 * scale;
}

double simpson(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw ConfigError("simpson: need >= 2 matching samples");
  if (n == 2) return 0.5 * (x[1] - x[0]) * (y[0] + y[1]);

  const std::size_t intervals = n - 1;
  const std::size_t paired = intervals - intervals % 2;
  double sum = 0.0;
  for (std::size_t i = 0; i < paired; i += 2) {
    const double h0 = x[i + 1] - x[i];
    const double h1 = x[i + 2] - x[i + 1];
    const double hs = h0 + h1;
    sum += hs / 6.0 *
           ((2.0 - h1 / h0) * y[i] + hs * hs / (h0 * h1) * y[i + 1] + (2.0 - h0 / h1) * y[i + 2]);
  }
  if (paired != intervals) {
    // Quadratic through the last three nodes, integrated over the last interval.
    const double h0 = x[n - 2] - x[n - 3];
    const double h1 = x[n - 1] - x[n - 2];
    const double a = (2.0 * h1 * h1 + 3.0 * h0 * h1) / (6.0 * (h0 + h1));
    const double b = (h1 * h1 + 3.0 * h0 * h1) / (6.0 * h0);
    const double c = h1 * h1 * h1 / (6.0 * h0 * (h0 + h1));
    sum += a * y[n - 1] + b * y[n - 2] - c * y[n - 3];
  }
  return sum;
}

EnergyReport evaluate_functional(FunctionalKind kind, const HeightProfile& height,
                                 double lambda, const Forcing& forcing) {
  height.validate();
  const Integrands full = integrands(kind, height, forcing);
  const EnergyReport rep = integrate_report(kind, height.radii, full, lambda);

  if (height.size() >= 5) {
    const Integrands half{every_other(full.quadratic), every_other(full.cubic),
                          every_other(full.forcing)};
    const auto coarse_x = every_other(height.radii);
    const EnergyReport coarse = integrate_report(kind, coarse_x, half, lambda);
    const double scale =
        std::abs(rep.quadratic) + std::abs(rep.cubic) + std::abs(rep.forcing_term);
    const double diff = std::abs(rep.total - coarse.total);
    if (scale > 0.0 && diff > 1e-4 * scale) {
      std::ostringstream msg;
      msg << "energy quadrature not resolved: full " << rep.total << " vs half-grid "
          << coarse.total << " (" << height.size() << " nodes)";
      throw GridTooCoarse(msg.str());
    }
  }
  return rep;
}

}  // namespace epitaxy
