#pragma once

// Lambda sweeps and location of the fold where the two branches merge.

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "epitaxy/energy.hpp"
#include "epitaxy/model.hpp"
#include "epitaxy/shoot.hpp"

namespace epitaxy {

class InvalidBracket : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct DiagramPoint {
  double lambda = 0.0;
  SolveStatus status = SolveStatus::NoSolutions;
  std::optional<double> s_min;
  std::optional<double> s_mp;
  std::optional<double> energy_min;
  std::optional<double> energy_mp;

  bool has_branches() const { return s_min.has_value() && s_mp.has_value(); }
};

struct CriticalEstimate {
  double lambda = 0.0;
  double uncertainty = 0.0;  // bracket half-width + one scan cell in lambda
  double bracket_lo = 0.0;   // last lambda with two roots
  double bracket_hi = 0.0;   // first lambda without
  int probes = 0;
};

struct BifurcationDiagram {
  BoundaryKind bc = BoundaryKind::Dirichlet;
  FunctionalKind kind = FunctionalKind::J;
  std::vector<DiagramPoint> points;  // ascending lambda
  std::optional<CriticalEstimate> lambda_critical;
};

// solve_branches at every lambda (nonnegative, ascending). Per-lambda
// failures are recorded in the point's status.
BifurcationDiagram sweep_lambda(BoundaryKind bc, std::span<const double> lambdas,
                                const ProblemSpec& base);

struct RootPair {
  double lower = 0.0;
  double upper = 0.0;
  double separation() const { return upper - lower; }
};

struct FoldProbe {
  bool two_roots = false;
  std::optional<RootPair> pair;  // closest adjacent pair when two_roots
  double cell = 0.0;             // scan spacing that resolved the pair
};

// Two-root predicate at spec.lambda. Each scan is doubled in density while
// the closest pair is under four cells apart. With a pair known from a
// smaller lambda, a window around it is scanned first; the full range is
// scanned when that window holds fewer than two roots.
FoldProbe probe_fold(const ProblemSpec& spec, const std::optional<RootPair>& hint = {});

// Default termination width of the lambda bracket.
double default_critical_tolerance(BoundaryKind bc);

// Bisection on lambda between a solvable lo and an unsolvable hi. Throws
// InvalidBracket when the predicate agrees at both ends.
CriticalEstimate find_lambda_critical(BoundaryKind bc, const ProblemSpec& base,
                                      double lambda_lo, double lambda_hi,
                                      std::optional<double> tolerance = {});

}  // namespace epitaxy
