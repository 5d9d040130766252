#include "epitaxy/shoot.hpp"

#include <algorithm>
#include <cmath>

namespace epitaxy {

namespace {

struct Sample {
  double s;
  Residual value;
};

bool finite_value(const Residual& r) { return std::holds_alternative<double>(r); }
double value_of(const Residual& r) { return std::get<double>(r); }

struct Refined {
  std::optional<double> root;
  bool non_monotone = false;
};

Refined bisect(const ProblemSpec& spec, double a, double ra, double b, double rb) {
  Refined out;
  double best_s = std::abs(ra) <= std::abs(rb) ? a : b;
  double best_r = std::min(std::abs(ra), std::abs(rb));

  for (int iter = 0; iter < 200; ++iter) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    const Residual rm_v = residual(spec, m);
    if (!finite_value(rm_v)) return out;  // escape inside the bracket
    const double rm = value_of(rm_v);

    if ((rm - ra) * (rb - rm) < 0.0) out.non_monotone = true;
    if (std::abs(rm) < best_r) {
      best_r = std::abs(rm);
      best_s = m;
    }
    if (rm == 0.0) break;
    if ((rm < 0.0) == (ra < 0.0)) {
      a = m;
      ra = rm;
    } else {
      b = m;
      rb = rm;
    }
    const bool narrow = (b - a) <= kRootStepTolerance * std::max(1.0, std::abs(m));
    if (narrow && best_r <= kRootResidualTolerance) break;
  }
  if (best_r <= kRootResidualTolerance) out.root = best_s;
  return out;
}

// At lambda = 0, w = 0 solves the problem exactly; a refined root within
// kTrivialSnap of zero is that solution and is replaced by s = 0.
constexpr double kTrivialSnap = 1e-6;

void add_trivial_root(const ProblemSpec& spec, double lo, double hi,
                      std::vector<double>& roots) {
  if (spec.lambda != 0.0 || lo > 0.0 || hi < 0.0) return;
  std::erase_if(roots, [](double r) { return std::abs(r) <= kTrivialSnap; });
  roots.push_back(0.0);
}

}  // namespace

Residual residual(const ProblemSpec& spec, double s) {
  const auto end = integrate_endpoint(spec, s);
  if (const auto* b = std::get_if<Blowup>(&end)) return *b;
  return std::get<OdeState>(end).w / spec.epsilon;
}

ShotResult shoot(const ProblemSpec& spec, double s) {
  ShotResult out;
  out.s = s;
  auto traj = integrate_backward(spec, s);
  if (auto* p = std::get_if<WProfile>(&traj)) {
    out.residual = p->w.front() / spec.epsilon;
    out.profile = std::move(*p);
  }
  return out;
}

RootScan find_roots_in(const ProblemSpec& spec, double lo, double hi, int points) {
  spec.validate();
  if (!(hi > lo) || points < 2) throw ConfigError("find_roots_in: need lo < hi and points >= 2");

  RootScan scan;
  scan.cell = (hi - lo) / (points - 1);

  std::vector<Sample> samples;
  samples.reserve(points);
  for (int i = 0; i < points; ++i) {
    const double s = i + 1 == points ? hi : lo + i * scan.cell;
    samples.push_back({s, residual(spec, s)});
  }

  for (int i = 0; i + 1 < points; ++i) {
    const Sample& left = samples[i];
    const Sample& right = samples[i + 1];
    if (!finite_value(left.value) || !finite_value(right.value)) continue;
    const double rl = value_of(left.value);
    const double rr = value_of(right.value);
    if (rl == 0.0) {
      scan.roots.push_back(left.s);
      continue;
    }
    if (rr == 0.0 || (rl < 0.0) == (rr < 0.0)) continue;
    const Refined refined = bisect(spec, left.s, rl, right.s, rr);
    scan.scan_too_coarse = scan.scan_too_coarse || refined.non_monotone;
    if (refined.root) scan.roots.push_back(*refined.root);
  }
  // An exact zero on the last sample has no right neighbour.
  if (finite_value(samples.back().value) && value_of(samples.back().value) == 0.0)
    scan.roots.push_back(samples.back().s);

  add_trivial_root(spec, lo, hi, scan.roots);
  std::sort(scan.roots.begin(), scan.roots.end());
  scan.roots.erase(std::unique(scan.roots.begin(), scan.roots.end()), scan.roots.end());
  return scan;
}

RootScan find_roots(const ProblemSpec& spec) {
  return find_roots_in(spec, -spec.scan_half_width, spec.scan_half_width, spec.scan_points);
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Solved:
      return "solved";
    case SolveStatus::NoSolutions:
      return "no solutions";
    case SolveStatus::SingleRoot:
      return "single solution";
    case SolveStatus::AmbiguousClassification:
      return "ambiguous classification";
  }
  return "unknown";
}

bool strictly_ordered(const HeightProfile& lower, const HeightProfile& upper) {
  if (lower.size() != upper.size()) throw ConfigError("strictly_ordered: grids differ");
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (lower.radii[i] >= 1.0) continue;
    if (!(lower.u[i] < upper.u[i])) return false;
  }
  return true;
}

SolveOutcome solve_branches(const ProblemSpec& spec) {
  SolveOutcome out;
  const RootScan scan = find_roots(spec);
  out.roots = scan.roots;
  out.scan_too_coarse = scan.scan_too_coarse;
  if (scan.roots.empty()) return out;

  const FunctionalKind kind = functional_for(spec.bc);
  std::vector<Branch> branches;
  for (double s : scan.roots) {
    Branch b;
    b.shot = shoot(spec, s);
    if (!b.shot.profile) continue;
    b.height = reconstruct_height(*b.shot.profile);
    b.energy = evaluate_functional(kind, b.height, spec.lambda, spec.forcing);
    branches.push_back(std::move(b));
  }
  if (branches.empty()) return out;
  if (branches.size() == 1) {
    out.status = SolveStatus::SingleRoot;
    return out;
  }

  std::sort(branches.begin(), branches.end(), [](const Branch& a, const Branch& b) {
    return a.energy.total < b.energy.total;
  });
  // Partner: lowest-energy remaining branch lying above the minimum, falling
  // back to the second-lowest energy when none is ordered.
  std::size_t partner = 1;
  for (std::size_t j = 1; j < branches.size(); ++j) {
    if (strictly_ordered(branches[0].height, branches[j].height)) {
      partner = j;
      break;
    }
  }

  const double s_min = branches[0].shot.s;
  const double ds = std::abs(branches[partner].shot.s - s_min);
  const double gap = branches[partner].energy.total - branches[0].energy.total;
  out.status = gap < kAmbiguousEnergyGap ? SolveStatus::AmbiguousClassification
                                         : SolveStatus::Solved;
  out.pair.emplace(BranchPair{std::move(branches[0]), std::move(branches[partner]), spec.lambda,
                              spec.bc, ds <= kRootStepTolerance * std::max(1.0, std::abs(s_min))});
  return out;
}

}  // namespace epitaxy
