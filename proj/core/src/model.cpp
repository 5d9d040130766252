#include "epitaxy/model.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <sstream>

namespace epitaxy {

namespace {

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

double simpson_cell(const std::function<double(double)>& f, double a, double b) {
  const double m = 0.5 * (a + b);
  return (b - a) / 6.0 * (f(a) * a + 4.0 * f(m) * m + f(b) * b);
}

class Fnv1a {
 public:
  void add_bytes(const void* data, std::size_t size) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
      state_ ^= p[i];
      state_ *= 0x100000001b3ULL;
    }
  }
  void add(double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    add_bytes(&bits, sizeof bits);
  }
  void add(std::int64_t v) { add_bytes(&v, sizeof v); }
  void add(std::string_view s) {
    add(static_cast<std::int64_t>(s.size()));
    add_bytes(s.data(), s.size());
  }
  std::uint64_t value() const { return state_; }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

}  // namespace

std::string_view to_string(BoundaryKind bc) {
  return bc == BoundaryKind::Dirichlet ? "dirichlet" : "navier";
}

BoundaryKind parse_boundary(std::string_view text) {
  const auto key = lower(text);
  if (key == "dirichlet") return BoundaryKind::Dirichlet;
  if (key == "navier") return BoundaryKind::Navier;
  throw ConfigError("unknown boundary condition '" + std::string(text) +
                    "' (expected dirichlet or navier)");
}

std::string_view to_string(NavierShooting mode) {
  return mode == NavierShooting::SlopeEqualsValue ? "slope-equals-value" : "zero-slope";
}

NavierShooting parse_navier_shooting(std::string_view text) {
  const auto key = lower(text);
  if (key == "slope-equals-value") return NavierShooting::SlopeEqualsValue;
  if (key == "zero-slope") return NavierShooting::ZeroSlope;
  throw ConfigError("unknown navier shooting mode '" + std::string(text) +
                    "' (expected slope-equals-value or zero-slope)");
}

Forcing::Forcing() : name_("one") {}

Forcing::Forcing(std::function<double(double)> profile, std::string name)
    : profile_(std::move(profile)), name_(std::move(name)) {
  if (!profile_) throw ConfigError("forcing profile is empty");
  auto table = std::make_shared<std::vector<double>>(kCells + 1, 0.0);
  for (int k = 0; k <= 2 * kCells; ++k) {
    const double r = static_cast<double>(k) / (2.0 * kCells);
    const double v = profile_(r);
    if (!std::isfinite(v) || v < 0.0) {
      std::ostringstream msg;
      msg << "forcing '" << name_ << "' must be finite and nonnegative on [0,1]; f("
          << r << ") = " << v;
      throw ConfigError(msg.str());
    }
  }
  for (int k = 0; k < kCells; ++k) {
    const double a = static_cast<double>(k) / kCells;
    const double b = static_cast<double>(k + 1) / kCells;
    (*table)[k + 1] = (*table)[k] + simpson_cell(profile_, a, b);
  }
  table_ = std::move(table);
}

Forcing Forcing::power(double exponent) {
  if (!(exponent >= 0.0) || !std::isfinite(exponent))
    throw ConfigError("forcing exponent must be finite and >= 0");
  if (exponent == 0.0) return Forcing();
  std::ostringstream name;
  name.precision(17);
  name << "power:" << exponent;
  return Forcing([exponent](double r) { return std::pow(r, exponent); }, name.str());
}

double Forcing::operator()(double r) const { return profile_ ? profile_(r) : 1.0; }

double Forcing::cumulative(double r) const {
  if (!profile_) return 0.5 * r * r;
  const double scaled = r * kCells;
  const int k = std::clamp(static_cast<int>(scaled), 0, kCells - 1);
  const double a = static_cast<double>(k) / kCells;
  if (r == a) return (*table_)[k];
  return (*table_)[k] + simpson_cell(profile_, a, r);
}

ProblemSpec ProblemSpec::make(BoundaryKind bc, double lambda) {
  ProblemSpec spec;
  spec.bc = bc;
  spec.lambda = lambda;
  spec.scan_half_width =
      bc == BoundaryKind::Dirichlet ? kDefaultScanDirichlet : kDefaultScanNavier;
  return spec;
}

void ProblemSpec::validate() const {
  std::ostringstream msg;
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    msg << "lambda must be finite and >= 0 (got " << lambda << ")";
  else if (!(epsilon > 0.0 && epsilon < 1.0))
    msg << "epsilon must lie in (0,1) (got " << epsilon << ")";
  else if (!(step > 0.0 && step < 1.0 - epsilon))
    msg << "step must lie in (0, 1 - epsilon) (got " << step << ")";
  else if (!(scan_half_width > 0.0) || !std::isfinite(scan_half_width))
    msg << "scan range half-width must be finite and > 0 (got " << scan_half_width
        << ")";
  else if (scan_points < 2)
    msg << "scan_points must be >= 2 (got " << scan_points << ")";
  else
    return;
  throw ConfigError(msg.str());
}

ProblemSpec ProblemSpec::with_lambda(double new_lambda) const {
  ProblemSpec copy = *this;
  copy.lambda = new_lambda;
  return copy;
}

std::uint64_t ProblemSpec::hash() const {
  Fnv1a h;
  h.add(static_cast<std::int64_t>(bc));
  h.add(lambda);
  h.add(std::string_view(forcing.name()));
  h.add(epsilon);
  h.add(step);
  h.add(scan_half_width);
  h.add(static_cast<std::int64_t>(scan_points));
  h.add(static_cast<std::int64_t>(navier_shooting));
  h.add(static_cast<std::int64_t>(nonlinearity));
  return h.value();
}

double rhs_w(double r, double w, double wp, double lambda, const Forcing& forcing) {
  if (!(r > 0.0)) throw DomainError("rhs_w requires r > 0");
  return wp / r + w * w / (2.0 * r * r) + lambda * forcing.cumulative(r);
}

double rhs_w_linear(double r, double /*w*/, double wp, double lambda,
                    const Forcing& forcing) {
  if (!(r > 0.0)) throw DomainError("rhs_w_linear requires r > 0");
  return wp / r + lambda * forcing.cumulative(r);
}

FinalValues final_conditions(BoundaryKind bc, double s, NavierShooting mode) {
  if (bc == BoundaryKind::Dirichlet) return {0.0, s};
  if (mode == NavierShooting::SlopeEqualsValue) return {s, s};
  return {s, 0.0};
}

double cumulative_forcing(const Forcing& forcing, double r) {
  if (!(r >= 0.0 && r <= 1.0)) throw DomainError("cumulative_forcing requires 0 <= r <= 1");
  return forcing.cumulative(r);
}

}  // namespace epitaxy
