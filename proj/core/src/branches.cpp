#include "epitaxy/branches.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace epitaxy {

namespace {

constexpr int kMaxDoublings = 6;
constexpr double kMinCellsApart = 4.0;

std::optional<RootPair> closest_pair(const std::vector<double>& roots) {
  if (roots.size() < 2) return std::nullopt;
  RootPair best{roots[0], roots[1]};
  for (std::size_t i = 1; i + 1 < roots.size(); ++i) {
    if (roots[i + 1] - roots[i] < best.separation()) best = {roots[i], roots[i + 1]};
  }
  return best;
}

// Scans [lo, hi], doubling the density while the closest pair sits within
// kMinCellsApart cells.
FoldProbe densified_scan(const ProblemSpec& spec, double lo, double hi) {
  int points = spec.scan_points;
  RootScan scan = find_roots_in(spec, lo, hi, points);
  for (int d = 0; d < kMaxDoublings; ++d) {
    const auto pair = closest_pair(scan.roots);
    if (!pair || pair->separation() >= kMinCellsApart * scan.cell) break;
    points = 2 * points - 1;
    scan = find_roots_in(spec, lo, hi, points);
  }
  FoldProbe probe;
  probe.pair = closest_pair(scan.roots);
  probe.two_roots = probe.pair.has_value();
  probe.cell = scan.cell;
  return probe;
}

}  // namespace

BifurcationDiagram sweep_lambda(BoundaryKind bc, std::span<const double> lambdas,
                                const ProblemSpec& base) {
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (!(lambdas[i] >= 0.0)) throw ConfigError("sweep_lambda: lambdas must be >= 0");
    if (i > 0 && lambdas[i] < lambdas[i - 1])
      throw ConfigError("sweep_lambda: lambdas must be ascending");
  }
  BifurcationDiagram diagram;
  diagram.bc = bc;
  diagram.kind = functional_for(bc);

  ProblemSpec spec = base;
  spec.bc = bc;
  for (double lambda : lambdas) {
    spec.lambda = lambda;
    const SolveOutcome outcome = solve_branches(spec);
    DiagramPoint point;
    point.lambda = lambda;
    point.status = outcome.status;
    if (outcome.pair) {
      point.s_min = outcome.pair->minimum.shot.s;
      point.s_mp = outcome.pair->mountain_pass.shot.s;
      point.energy_min = outcome.pair->minimum.energy.total;
      point.energy_mp = outcome.pair->mountain_pass.energy.total;
    }
    diagram.points.push_back(point);
  }
  return diagram;
}

FoldProbe probe_fold(const ProblemSpec& spec, const std::optional<RootPair>& hint) {
  if (hint) {
    const double margin =
        std::max(hint->separation(), 1e-6 * std::max(1.0, std::abs(hint->lower)));
    const double lo = std::max(hint->lower - margin, -spec.scan_half_width);
    const double hi = std::min(hint->upper + margin, spec.scan_half_width);
    if (hi > lo) {
      FoldProbe local = densified_scan(spec, lo, hi);
      if (local.two_roots) return local;
    }
  }
  return densified_scan(spec, -spec.scan_half_width, spec.scan_half_width);
}

double default_critical_tolerance(BoundaryKind bc) {
  return bc == BoundaryKind::Dirichlet ? 1e-2 : 1e-3;
}

CriticalEstimate find_lambda_critical(BoundaryKind bc, const ProblemSpec& base,
                                      double lambda_lo, double lambda_hi,
                                      std::optional<double> tolerance) {
  if (!(lambda_lo >= 0.0 && lambda_hi > lambda_lo))
    throw InvalidBracket("critical bracket needs 0 <= lo < hi");
  const double tol = tolerance.value_or(default_critical_tolerance(bc));
  if (!(tol > 0.0)) throw ConfigError("critical tolerance must be > 0");

  ProblemSpec spec = base;
  spec.bc = bc;
  spec.validate();

  CriticalEstimate est;
  const FoldProbe at_lo = probe_fold(spec.with_lambda(lambda_lo));
  const FoldProbe at_hi = probe_fold(spec.with_lambda(lambda_hi), at_lo.pair);
  est.probes = 2;
  if (at_lo.two_roots == at_hi.two_roots || !at_lo.two_roots) {
    std::ostringstream msg;
    msg << "invalid bracket [" << lambda_lo << ", " << lambda_hi
        << "]: two-root predicate is " << (at_lo.two_roots ? "true" : "false") << " at lo and "
        << (at_hi.two_roots ? "true" : "false") << " at hi";
    throw InvalidBracket(msg.str());
  }

  struct Solvable {
    double lambda;
    double separation;
    double cell;
  };
  std::vector<Solvable> history{{lambda_lo, at_lo.pair->separation(), at_lo.cell}};
  std::optional<RootPair> hint = at_lo.pair;

  double lo = lambda_lo;
  double hi = lambda_hi;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const FoldProbe p = probe_fold(spec.with_lambda(mid), hint);
    ++est.probes;
    if (p.two_roots) {
      lo = mid;
      hint = p.pair;
      history.push_back({mid, p.pair->separation(), p.cell});
    } else {
      hi = mid;
    }
  }

  est.bracket_lo = lo;
  est.bracket_hi = hi;
  est.lambda = 0.5 * (lo + hi);
  est.uncertainty = 0.5 * (hi - lo);
  if (history.size() >= 2) {
    const Solvable& a = history[history.size() - 2];
    const Solvable& b = history.back();
    const double slope = (b.separation - a.separation) / (b.lambda - a.lambda);
    if (slope != 0.0 && std::isfinite(slope)) est.uncertainty += b.cell / std::abs(slope);
  }
  return est;
}

}  // namespace epitaxy
