#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "eegsz/spectral.hpp"
#include "eegsz/types.hpp"

namespace eegsz {

/// Delay-coordinate embedding of a sequence: point k is
/// (v[k], v[k+tau], ..., v[k+(dim-1)tau]). Coordinates are stored row-major.
struct PhasePortrait {
  int tau = 1;
  int dim = 2;
  std::vector<double> coords;

  std::size_t size() const noexcept { return coords.size() / static_cast<std::size_t>(dim); }
  std::span<const double> point(std::size_t i) const noexcept {
    return std::span<const double>(coords).subspan(i * static_cast<std::size_t>(dim),
                                                   static_cast<std::size_t>(dim));
  }
  double x(std::size_t i) const noexcept { return coords[i * static_cast<std::size_t>(dim)]; }
  double y(std::size_t i) const noexcept { return coords[i * static_cast<std::size_t>(dim) + 1]; }
};

/// Throws InvalidArgument if tau < 1, dim < 2, or the sequence has no more
/// than (dim-1)·tau samples.
PhasePortrait reconstruct_phase_space(std::span<const double> v, int tau = 1, int dim = 2);

/// 95% confidence ellipse of a 2-D point cloud.
///
/// Moments are taken about the cloud mean with divisor (points - 1). The
/// semi-axes are a = sqrt(3·(s_x2 + s_y2 + c)) and b = sqrt(3·(s_x2 + s_y2 - c)),
/// c = sqrt((s_x2 + s_y2)^2 - 4(s_x2·s_y2 - s_xy^2)); area = pi·a·b, which
/// equals 6·pi·sqrt(det of the sample covariance).
struct EllipseStats {
  double s_x2 = 0.0;
  double s_y2 = 0.0;
  double s_xy = 0.0;
  double c = 0.0;
  double a = 0.0;
  double b = 0.0;
  double area = 0.0;
  // For plotting: cloud mean and orientation of the major axis (radians).
  double center_x = 0.0;
  double center_y = 0.0;
  double angle = 0.0;
};

/// Throws InvalidArgument for fewer than 3 points, dim != 2 or non-finite
/// coordinates.
EllipseStats ellipse_area(const PhasePortrait& portrait);

using FeatureAreas = std::array<double, kRhythmCount>;

/// Ellipse area of each rhythm's portrait, in delta..gamma order.
FeatureAreas extract_features(const RhythmSet& rhythms, int tau = 1, int dim = 2);

struct FeatureRow {
  std::string id;
  FeatureAreas areas{};
  Label label = Label::seizure_free;

  double area(Rhythm r) const noexcept { return areas[index_of(r)]; }
};

using FeatureTable = std::vector<FeatureRow>;

/// Header "id,label,area_delta,...,area_gamma"; lines starting with '#' are
/// comments when reading back.
std::string features_csv(const FeatureTable& table);
FeatureTable parse_features_csv(std::istream& in, const std::string& source = "<features>");

/// "x,y" rows of a 2-D portrait.
std::string portrait_csv(const PhasePortrait& portrait);

}  // namespace eegsz
