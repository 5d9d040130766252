#pragma once

// Problem data and the reduced radial ODE.
//
// The stationary radial equation is integrated once against r dr and
// rewritten for w = r u'(r):
//
//     w'' = w'/r + w^2 / (2 r^2) + lambda * F(r),   F(r) = int_0^r f(rho) rho drho
//
// For the constant profile f = 1, F(r) = r^2 / 2.

#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace epitaxy {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class BoundaryKind { Dirichlet, Navier };

std::string_view to_string(BoundaryKind bc);
// Accepts "dirichlet" / "navier" (case-insensitive). Throws ConfigError.
BoundaryKind parse_boundary(std::string_view text);

// How the free final slope is tied to the shooting parameter for Navier
// problems. SlopeEqualsValue sets w(1) = w'(1) = s, which is u''(1) = 0.
// ZeroSlope sets w(1) = s, w'(1) = 0, which is u''(1) + u'(1) = 0.
enum class NavierShooting { SlopeEqualsValue, ZeroSlope };

std::string_view to_string(NavierShooting mode);
NavierShooting parse_navier_shooting(std::string_view text);

// Full equation, or the linear comparison problem with the w^2/(2r^2) term
// removed (closed-form solvable; used for convergence and fold checks).
enum class Nonlinearity { Full, LinearComparison };

// Nonnegative radial forcing profile f(r) on [0,1] and its cumulative
// integral F(r) = int_0^r f(rho) rho drho.
class Forcing {
 public:
  // f = 1.
  Forcing();

  // Validates the profile on a fine sample grid: every sample must be
  // finite and nonnegative, otherwise ConfigError.
  Forcing(std::function<double(double)> profile, std::string name);

  static Forcing constant_one() { return Forcing(); }
  // f(r) = r^p, p >= 0.
  static Forcing power(double exponent);

  double operator()(double r) const;
  double cumulative(double r) const;

  bool is_constant_one() const { return !profile_; }
  const std::string& name() const { return name_; }

 private:
  static constexpr int kCells = 4096;

  std::function<double(double)> profile_;
  std::string name_;
  // F at r_k = k / kCells.
  std::shared_ptr<const std::vector<double>> table_;
};

// Defaults for the shooting scan half-width S.
inline constexpr double kDefaultScanDirichlet = 400.0;
inline constexpr double kDefaultScanNavier = 40.0;

struct ProblemSpec {
  BoundaryKind bc = BoundaryKind::Dirichlet;
  double lambda = 0.0;
  Forcing forcing;
  double epsilon = 1e-6;
  double step = 1e-4;
  double scan_half_width = kDefaultScanDirichlet;
  int scan_points = 2000;
  NavierShooting navier_shooting = NavierShooting::SlopeEqualsValue;
  Nonlinearity nonlinearity = Nonlinearity::Full;

  // Default numerical parameters for the given boundary kind.
  static ProblemSpec make(BoundaryKind bc, double lambda);

  // Throws ConfigError when an invariant is violated.
  void validate() const;

  ProblemSpec with_lambda(double new_lambda) const;

  // Stable fingerprint of every field; identical specs hash identically
  // across runs and platforms.
  std::uint64_t hash() const;
};

// w'' for the full equation. Throws DomainError if r <= 0.
double rhs_w(double r, double w, double wp, double lambda, const Forcing& forcing);

// w'' for the linear comparison problem (no w^2 term).
double rhs_w_linear(double r, double w, double wp, double lambda,
                    const Forcing& forcing);

struct FinalValues {
  double w = 0.0;
  double wp = 0.0;
};

FinalValues final_conditions(BoundaryKind bc, double s,
                             NavierShooting mode = NavierShooting::SlopeEqualsValue);

// int_0^r f(rho) rho drho. Throws DomainError if r is outside [0,1].
double cumulative_forcing(const Forcing& forcing, double r);

}  // namespace epitaxy
