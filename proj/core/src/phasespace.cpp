#include "eegsz/phasespace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numbers>
#include <sstream>

#include "eegsz/error.hpp"
#include "eegsz/format.hpp"

namespace eegsz {

PhasePortrait reconstruct_phase_space(std::span<const double> v, int tau, int dim) {
  if (tau < 1) throw InvalidArgument("phase space: tau must be at least 1");
  if (dim < 2) throw InvalidArgument("phase space: dim must be at least 2");
  const std::size_t span_len = static_cast<std::size_t>(dim - 1) * static_cast<std::size_t>(tau);
  if (v.size() <= span_len) {
    throw InvalidArgument("phase space: sequence of length " + std::to_string(v.size()) +
                          " is too short for tau=" + std::to_string(tau) +
                          ", dim=" + std::to_string(dim));
  }

  PhasePortrait portrait;
  portrait.tau = tau;
  portrait.dim = dim;
  const std::size_t count = v.size() - span_len;
  portrait.coords.reserve(count * static_cast<std::size_t>(dim));
  for (std::size_t k = 0; k < count; ++k) {
    for (int j = 0; j < dim; ++j) {
      portrait.coords.push_back(v[k + static_cast<std::size_t>(j) * static_cast<std::size_t>(tau)]);
    }
  }
  return portrait;
}

EllipseStats ellipse_area(const PhasePortrait& portrait) {
  if (portrait.dim != 2) throw InvalidArgument("ellipse_area: portrait must be two-dimensional");
  const std::size_t n = portrait.size();
  if (n < 3) throw InvalidArgument("ellipse_area: need at least 3 points");

  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(portrait.x(i)) || !std::isfinite(portrait.y(i))) {
      throw InvalidArgument("ellipse_area: non-finite coordinate at point " + std::to_string(i));
    }
    mean_x += portrait.x(i);
    mean_y += portrait.y(i);
  }
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);

  const double denom = static_cast<double>(n - 1);
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = portrait.x(i) - mean_x;
    const double dy = portrait.y(i) - mean_y;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }

  EllipseStats st;
  st.center_x = mean_x;
  st.center_y = mean_y;
  st.s_x2 = sxx / denom;
  st.s_y2 = syy / denom;
  st.s_xy = sxy / denom;
  // (T^2 - 4 det) rewritten as (s_x2 - s_y2)^2 + 4 s_xy^2, which cannot go negative.
  const double diff = st.s_x2 - st.s_y2;
  st.c = std::sqrt(diff * diff + 4.0 * st.s_xy * st.s_xy);
  st.angle = 0.5 * std::atan2(2.0 * st.s_xy, diff);

  // The minor axis, 3·(T - c), loses every digit to cancellation for thin
  // clouds. Re-measure the variances in the principal frame instead: there
  // a^2 = 6·var_major and b^2 = 6·var_minor (Schur complement of the residual
  // cross term), and a·b = 6·sqrt(det) still holds.
  const double cos_t = std::cos(st.angle);
  const double sin_t = std::sin(st.angle);
  double suu = 0.0;
  double sww = 0.0;
  double suw = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = portrait.x(i) - mean_x;
    const double dy = portrait.y(i) - mean_y;
    const double u = dx * cos_t + dy * sin_t;
    const double w = -dx * sin_t + dy * cos_t;
    suu += u * u;
    sww += w * w;
    suw += u * w;
  }
  const double major = suu / denom;
  double minor = sww / denom;
  if (major > 0.0) minor -= (suw / denom) * (suw / denom) / major;
  minor = std::max(minor, 0.0);

  st.a = std::sqrt(6.0 * std::max(major, minor));
  st.b = std::sqrt(6.0 * std::min(major, minor));
  st.area = std::numbers::pi * st.a * st.b;
  return st;
}

FeatureAreas extract_features(const RhythmSet& rhythms, int tau, int dim) {
  FeatureAreas areas{};
  for (Rhythm r : kAllRhythms) {
    areas[index_of(r)] = ellipse_area(reconstruct_phase_space(rhythms[r], tau, dim)).area;
  }
  return areas;
}

std::string features_csv(const FeatureTable& table) {
  std::ostringstream out;
  out << "id,label";
  for (Rhythm r : kAllRhythms) out << ",area_" << rhythm_name(r);
  out << '\n';
  for (const auto& row : table) {
    out << row.id << ',' << label_name(row.label);
    for (double a : row.areas) out << ',' << format_double(a);
    out << '\n';
  }
  return out.str();
}

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

}  // namespace

FeatureTable parse_features_csv(std::istream& in, const std::string& source) {
  FeatureTable table;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split_commas(line);
    if (fields.size() != 2 + kRhythmCount) {
      throw ParseError(source, line_no, "expected " + std::to_string(2 + kRhythmCount) + " columns");
    }
    if (!header_seen) {
      if (fields[0] != "id" || fields[1] != "label") {
        throw ParseError(source, line_no, "missing 'id,label,...' header");
      }
      header_seen = true;
      continue;
    }
    FeatureRow row;
    row.id = std::string(fields[0]);
    const auto label = parse_label(fields[1]);
    if (!label) throw ParseError(source, line_no, "unknown label '" + std::string(fields[1]) + "'");
    row.label = *label;
    for (std::size_t j = 0; j < kRhythmCount; ++j) {
      const auto f = fields[2 + j];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), row.areas[j]);
      if (ec != std::errc{} || ptr != f.data() + f.size() || !std::isfinite(row.areas[j])) {
        throw ParseError(source, line_no, "bad area value '" + std::string(f) + "'");
      }
    }
    table.push_back(std::move(row));
  }
  if (!header_seen) throw ParseError(source, 0, "empty feature table");
  return table;
}

std::string portrait_csv(const PhasePortrait& portrait) {
  std::ostringstream out;
  out << "x,y\n";
  for (std::size_t i = 0; i < portrait.size(); ++i) {
    out << format_double(portrait.x(i)) << ',' << format_double(portrait.y(i)) << '\n';
  }
  return out.str();
}

}  // namespace eegsz
