#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eegsz/phasespace.hpp"
#include "eegsz/spectral.hpp"

namespace eegsz::cli {

/// Minimal SVG writer. Coordinates are pixels; numbers are printed with two
/// decimals so output is byte-stable.
class SvgDocument {
 public:
  SvgDocument(double width, double height);

  void comment(std::string_view text);
  void rect(double x, double y, double w, double h, std::string_view fill,
            std::string_view stroke = "none");
  void line(double x1, double y1, double x2, double y2, std::string_view stroke,
            double width = 1.0);
  void polyline(std::span<const std::pair<double, double>> points, std::string_view stroke,
                double width = 1.0);
  void circle(double cx, double cy, double r, std::string_view fill);
  void text(double x, double y, std::string_view content, double size = 12.0,
            std::string_view anchor = "start");

  std::string str() const;

 private:
  double width_;
  double height_;
  std::string body_;
};

std::string xml_escape(std::string_view text);

/// Magnitude responses of the five filters against frequency.
std::string filter_bank_svg(const FilterBank& bank, std::string_view provenance);

/// Five stacked time-domain panels, delta on top.
std::string rhythms_svg(const RhythmSet& rhythms, double fs, std::string_view title,
                        std::string_view provenance);

/// Scatter of a 2-D portrait with its 95% ellipse overlaid.
std::string portrait_svg(const PhasePortrait& portrait, const EllipseStats& ellipse,
                         std::string_view title, std::string_view provenance);

}  // namespace eegsz::cli
