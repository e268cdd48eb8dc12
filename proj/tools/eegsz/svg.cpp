#include "eegsz/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace eegsz::cli {

namespace {

constexpr std::array<std::string_view, kRhythmCount> kBandColors{"#1f77b4", "#ff7f0e", "#2ca02c",
                                                                 "#d62728", "#9467bd"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  if (std::string_view(buf) == "-0.00") return "0.00";
  return buf;
}

// Linear map from a data interval onto a pixel interval.
struct Scale {
  double d0, d1, p0, p1;
  double operator()(double v) const {
    if (d1 == d0) return (p0 + p1) / 2.0;
    return p0 + (v - d0) * (p1 - p0) / (d1 - d0);
  }
};

}  // namespace

std::string xml_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

SvgDocument::SvgDocument(double width, double height) : width_(width), height_(height) {}

void SvgDocument::comment(std::string_view text) {
  std::string safe(text);
  // "--" is not allowed inside XML comments.
  for (std::size_t pos; (pos = safe.find("--")) != std::string::npos;) safe.replace(pos, 2, "- -");
  body_ += "<!-- " + safe + " -->\n";
}

void SvgDocument::rect(double x, double y, double w, double h, std::string_view fill,
                       std::string_view stroke) {
  body_ += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) + "\" height=\"" +
           num(h) + "\" fill=\"" + std::string(fill) + "\" stroke=\"" + std::string(stroke) +
           "\"/>\n";
}

void SvgDocument::line(double x1, double y1, double x2, double y2, std::string_view stroke,
                       double width) {
  body_ += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" +
           num(y2) + "\" stroke=\"" + std::string(stroke) + "\" stroke-width=\"" + num(width) +
           "\"/>\n";
}

void SvgDocument::polyline(std::span<const std::pair<double, double>> points,
                           std::string_view stroke, double width) {
  body_ += "<polyline fill=\"none\" stroke=\"" + std::string(stroke) + "\" stroke-width=\"" +
           num(width) + "\" points=\"";
  bool first = true;
  for (const auto& [x, y] : points) {
    if (!first) body_ += ' ';
    body_ += num(x) + "," + num(y);
    first = false;
  }
  body_ += "\"/>\n";
}

void SvgDocument::circle(double cx, double cy, double r, std::string_view fill) {
  body_ += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(r) + "\" fill=\"" +
           std::string(fill) + "\"/>\n";
}

void SvgDocument::text(double x, double y, std::string_view content, double size,
                       std::string_view anchor) {
  body_ += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-size=\"" + num(size) +
           "\" font-family=\"sans-serif\" text-anchor=\"" + std::string(anchor) + "\">" +
           xml_escape(content) + "</text>\n";
}

std::string SvgDocument::str() const {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         num(width_) + "\" height=\"" + num(height_) + "\" viewBox=\"0 0 " + num(width_) + " " +
         num(height_) + "\">\n" + body_ + "</svg>\n";
}

std::string filter_bank_svg(const FilterBank& bank, std::string_view provenance) {
  constexpr double kW = 800, kH = 400, kLeft = 60, kRight = 20, kTop = 40, kBottom = 50;
  SvgDocument svg(kW, kH);
  svg.comment(provenance);
  svg.rect(0, 0, kW, kH, "white");
  const double nyquist = bank.fs() / 2.0;
  const Scale x{0.0, nyquist, kLeft, kW - kRight};
  const Scale y{0.0, 1.05, kH - kBottom, kTop};

  svg.line(kLeft, kH - kBottom, kW - kRight, kH - kBottom, "black");
  svg.line(kLeft, kH - kBottom, kLeft, kTop, "black");
  for (double f = 0.0; f <= nyquist; f += 10.0) {
    svg.line(x(f), kH - kBottom, x(f), kH - kBottom + 5, "black");
    char tick[16];
    std::snprintf(tick, sizeof(tick), "%.0f", f);
    svg.text(x(f), kH - kBottom + 18, tick, 10, "middle");
  }
  svg.text(kW / 2, kH - 10, "Frequency (Hz)", 12, "middle");
  svg.text(kLeft - 8, y(1.0) + 4, "1", 10, "end");
  svg.text(kLeft - 8, y(0.0) + 4, "0", 10, "end");
  svg.text(kW / 2, 22, "Filter bank", 14, "middle");

  for (Rhythm r : kAllRhythms) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t k = 0; k <= bank.n_fft() / 2; ++k) {
      pts.emplace_back(x(bank.bin_frequency(k)), y(bank.response(r)[k]));
    }
    svg.polyline(pts, kBandColors[index_of(r)], 1.5);
    const double lx = kW - kRight - 90;
    const double ly = kTop + 14 + 16 * static_cast<double>(index_of(r));
    svg.line(lx, ly - 4, lx + 20, ly - 4, kBandColors[index_of(r)], 2);
    svg.text(lx + 26, ly, rhythm_name(r), 11);
  }
  return svg.str();
}

std::string rhythms_svg(const RhythmSet& rhythms, double fs, std::string_view title,
                        std::string_view provenance) {
  constexpr double kW = 900, kPanel = 110, kLeft = 70, kRight = 20, kTop = 40;
  const double height = kTop + kPanel * kRhythmCount + 40;
  SvgDocument svg(kW, height);
  svg.comment(provenance);
  svg.rect(0, 0, kW, height, "white");
  svg.text(kW / 2, 22, title, 14, "middle");

  const double duration = static_cast<double>(rhythms.length()) / fs;
  const Scale x{0.0, duration, kLeft, kW - kRight};
  for (Rhythm r : kAllRhythms) {
    const auto& band = rhythms[r];
    double peak = 0.0;
    for (double v : band) peak = std::max(peak, std::abs(v));
    const double top = kTop + kPanel * static_cast<double>(index_of(r));
    const Scale y{-peak, peak, top + kPanel - 10, top + 10};
    svg.line(kLeft, y(0.0), kW - kRight, y(0.0), "#cccccc");
    std::vector<std::pair<double, double>> pts;
    pts.reserve(band.size());
    for (std::size_t i = 0; i < band.size(); ++i) {
      pts.emplace_back(x(static_cast<double>(i) / fs), y(band[i]));
    }
    svg.polyline(pts, kBandColors[index_of(r)], 0.8);
    svg.text(kLeft - 8, top + kPanel / 2, rhythm_name(r), 12, "end");
  }
  svg.text(kW / 2, height - 10, "Time (s)", 12, "middle");
  return svg.str();
}

std::string portrait_svg(const PhasePortrait& portrait, const EllipseStats& ellipse,
                         std::string_view title, std::string_view provenance) {
  constexpr double kSize = 500, kMargin = 50;
  SvgDocument svg(kSize, kSize);
  svg.comment(provenance);
  svg.rect(0, 0, kSize, kSize, "white");
  svg.text(kSize / 2, 22, title, 14, "middle");

  // Equal scales on both axes so the ellipse keeps its true orientation.
  double lo = std::min(ellipse.center_x, ellipse.center_y) - ellipse.a;
  double hi = std::max(ellipse.center_x, ellipse.center_y) + ellipse.a;
  for (std::size_t i = 0; i < portrait.size(); ++i) {
    lo = std::min({lo, portrait.x(i), portrait.y(i)});
    hi = std::max({hi, portrait.x(i), portrait.y(i)});
  }
  const Scale x{lo, hi, kMargin, kSize - kMargin};
  const Scale y{lo, hi, kSize - kMargin, kMargin};

  svg.rect(kMargin, kMargin, kSize - 2 * kMargin, kSize - 2 * kMargin, "none", "black");
  for (std::size_t i = 0; i < portrait.size(); ++i) {
    svg.circle(x(portrait.x(i)), y(portrait.y(i)), 1.2, "#1f77b4");
  }

  std::vector<std::pair<double, double>> outline;
  const double ca = std::cos(ellipse.angle);
  const double sa = std::sin(ellipse.angle);
  for (int i = 0; i <= 128; ++i) {
    const double t = 2.0 * std::numbers::pi * i / 128.0;
    const double u = ellipse.a * std::cos(t);
    const double w = ellipse.b * std::sin(t);
    outline.emplace_back(x(ellipse.center_x + u * ca - w * sa),
                         y(ellipse.center_y + u * sa + w * ca));
  }
  svg.polyline(outline, "#d62728", 2.0);
  svg.text(kSize / 2, kSize - 15, "V(k)", 12, "middle");
  svg.text(15, kSize / 2, "V(k+tau)", 12, "start");
  char area[64];
  std::snprintf(area, sizeof(area), "area = %.6g", ellipse.area);
  svg.text(kSize - kMargin, kMargin - 8, area, 11, "end");
  return svg.str();
}

}  // namespace eegsz::cli
