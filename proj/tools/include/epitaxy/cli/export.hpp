#pragma once

// CSV and SVG writers for branch profiles and bifurcation diagrams.

#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "epitaxy/branches.hpp"
#include "epitaxy/energy.hpp"
#include "epitaxy/integrate.hpp"

namespace epitaxy::cli {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kProfileHeader = "r,w,u,up,upp";
inline constexpr const char* kDiagramHeader = "lambda,s_min,s_mp,J_min,J_mp";

// %.17g: 17 significant digits.
std::string format_double(double v);

// w defaults to r * u' when not supplied.
std::string profile_csv(const HeightProfile& height, std::span<const double> w = {});
std::string diagram_csv(const BifurcationDiagram& diagram);

// Parses text written by profile_csv. Throws ConfigError on a bad header or
// malformed row.
HeightProfile parse_profile_csv(const std::string& text);
HeightProfile read_profile_csv(const std::filesystem::path& path);

// Writes text to path, creating parent directories. Throws IoError.
void write_text(const std::filesystem::path& path, const std::string& text);

struct Series {
  std::vector<double> x;
  std::vector<double> y;  // NaN breaks the line
  std::string color;
  std::string label;
};

struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  std::optional<std::string> annotation;  // centred text, e.g. "no solutions"
};

std::string render_svg(const Plot& plot);

// u(r) of both branches: minimum red, mountain pass green. An absent pair
// gives empty axes annotated "no solutions".
Plot solution_plot(const std::optional<BranchPair>& pair, BoundaryKind bc, double lambda);

// s_min and s_mp versus lambda, same colours.
Plot diagram_plot(const BifurcationDiagram& diagram);

}  // namespace epitaxy::cli
