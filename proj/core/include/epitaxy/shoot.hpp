#pragma once

// Shooting residual w(eps)/eps, root scanning, and branch classification.

#include <optional>
#include <variant>
#include <vector>

#include "epitaxy/energy.hpp"
#include "epitaxy/integrate.hpp"
#include "epitaxy/model.hpp"

namespace epitaxy {

inline constexpr double kRootResidualTolerance = 1e-6;
inline constexpr double kRootStepTolerance = 1e-10;  // relative to max(1, |s|)
inline constexpr double kAmbiguousEnergyGap = 1e-8;

using Residual = std::variant<double, Blowup>;

Residual residual(const ProblemSpec& spec, double s);

struct ShotResult {
  double s = 0.0;
  std::optional<double> residual;  // engaged iff profile is
  std::optional<WProfile> profile;
};

ShotResult shoot(const ProblemSpec& spec, double s);

struct RootScan {
  std::vector<double> roots;  // ascending
  // Set when bisection met a midpoint residual outside its bracket's
  // endpoint values, i.e. a scan cell may hide more than one root.
  bool scan_too_coarse = false;
  double cell = 0.0;  // scan spacing used
};

// Uniform scan of [-S, S] with spec.scan_points samples, then bisection of
// every sign change between consecutive finite residuals. At lambda = 0 the
// exact trivial root s = 0 is always included.
RootScan find_roots(const ProblemSpec& spec);

// Same procedure on an explicit window [lo, hi].
RootScan find_roots_in(const ProblemSpec& spec, double lo, double hi, int points);

struct Branch {
  ShotResult shot;
  HeightProfile height;
  EnergyReport energy;
};

struct BranchPair {
  Branch minimum;
  Branch mountain_pass;
  double lambda = 0.0;
  BoundaryKind bc = BoundaryKind::Dirichlet;
  bool fold_coincident = false;
};

enum class SolveStatus {
  Solved,
  NoSolutions,
  // Exactly one admissible shot; no pair can be formed.
  SingleRoot,
  // Both branches found but their energies differ by < kAmbiguousEnergyGap.
  AmbiguousClassification,
};

std::string_view to_string(SolveStatus status);

struct SolveOutcome {
  SolveStatus status = SolveStatus::NoSolutions;
  std::optional<BranchPair> pair;
  std::vector<double> roots;
  bool scan_too_coarse = false;
};

// The lower-energy root is the minimum branch, the other the mountain pass.
// Energies use J for Dirichlet and I for Navier.
SolveOutcome solve_branches(const ProblemSpec& spec);

// lower.u < upper.u at every node with r < 1. Profiles must share a grid.
bool strictly_ordered(const HeightProfile& lower, const HeightProfile& upper);

}  // namespace epitaxy
