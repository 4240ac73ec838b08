#include "blockdyn/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace blockdyn::svg {

namespace {

constexpr int kW = 720, kH = 480;
constexpr int kMarginL = 70, kMarginR = 20, kMarginT = 40, kMarginB = 50;

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

struct Mapper {
  double x0, x1, y0, y1;
  bool logy;
  double px(double x) const {
    return kMarginL + (x - x0) / (x1 - x0) * (kW - kMarginL - kMarginR);
  }
  double py(double y) const {
    const double v = logy ? std::log10(y) : y;
    return kH - kMarginB - (v - y0) / (y1 - y0) * (kH - kMarginT - kMarginB);
  }
};

void axes(std::ostringstream& os, const Mapper& m, const std::string& x_label,
          const std::string& y_label) {
  os << "<rect x='" << kMarginL << "' y='" << kMarginT << "' width='"
     << kW - kMarginL - kMarginR << "' height='" << kH - kMarginT - kMarginB
     << "' fill='none' stroke='black'/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double fx = m.x0 + (m.x1 - m.x0) * i / 5.0;
    const double px = m.px(fx);
    os << "<line x1='" << num(px) << "' y1='" << kH - kMarginB << "' x2='" << num(px)
       << "' y2='" << kH - kMarginB + 5 << "' stroke='black'/>\n";
    os << "<text x='" << num(px) << "' y='" << kH - kMarginB + 18
       << "' font-size='11' text-anchor='middle'>" << num(fx) << "</text>\n";
    const double fy = m.y0 + (m.y1 - m.y0) * i / 5.0;
    const double py = kH - kMarginB - (kH - kMarginT - kMarginB) * i / 5.0;
    os << "<line x1='" << kMarginL - 5 << "' y1='" << num(py) << "' x2='" << kMarginL
       << "' y2='" << num(py) << "' stroke='black'/>\n";
    os << "<text x='" << kMarginL - 8 << "' y='" << num(py + 4)
       << "' font-size='11' text-anchor='end'>"
       << (m.logy ? "1e" + num(fy) : num(fy)) << "</text>\n";
  }
  os << "<text x='" << (kMarginL + kW - kMarginR) / 2 << "' y='" << kH - 12
     << "' font-size='13' text-anchor='middle'>" << x_label << "</text>\n";
  os << "<text x='16' y='" << (kMarginT + kH - kMarginB) / 2
     << "' font-size='13' text-anchor='middle' transform='rotate(-90 16 "
     << (kMarginT + kH - kMarginB) / 2 << ")'>" << y_label << "</text>\n";
}

}  // namespace

std::string line_chart(const std::string& title, const std::string& x_label,
                       const std::string& y_label, const std::vector<Series>& series,
                       bool log_y) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
  double y0 = x0, y1 = -x0;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (log_y && s.y[i] <= 0) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      const double v = log_y ? std::log10(s.y[i]) : s.y[i];
      y0 = std::min(y0, v);
      y1 = std::max(y1, v);
    }
  if (!(x0 < x1)) {
    x0 -= 1;
    x1 += 1;
  }
  if (!(y0 < y1)) {
    y0 -= 1;
    y1 += 1;
  }
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  Mapper m{x0, x1, y0, y1, log_y};

  std::ostringstream os;
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kW << "' height='" << kH
     << "' viewBox='0 0 " << kW << " " << kH << "'>\n";
  os << "<text x='" << kW / 2 << "' y='24' font-size='15' text-anchor='middle'>" << title
     << "</text>\n";
  axes(os, m, x_label, y_label);
  int li = 0;
  for (const auto& s : series) {
    os << "<polyline fill='none' stroke='" << s.color << "' stroke-width='1.5' points='";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (log_y && s.y[i] <= 0) continue;
      os << num(m.px(s.x[i])) << "," << num(m.py(s.y[i])) << " ";
    }
    os << "'/>\n";
    os << "<text x='" << kW - kMarginR - 120 << "' y='" << kMarginT + 16 + 16 * li
       << "' font-size='12' fill='" << s.color << "'>" << s.label << "</text>\n";
    ++li;
  }
  os << "</svg>\n";
  return os.str();
}

namespace {

void diagonal_rays(std::ostringstream& os, double cx, double cy, double scale) {
  const double r = scale / std::sqrt(2.0);
  for (int sx : {-1, 1})
    for (int sy : {-1, 1})
      os << "<line x1='" << num(cx) << "' y1='" << num(cy) << "' x2='"
         << num(cx + sx * r) << "' y2='" << num(cy - sy * r)
         << "' stroke='green' stroke-dasharray='4,3'/>\n";
}

}  // namespace

std::string scatter_plane(const std::string& title, const std::vector<Point>& points,
                          double half_extent) {
  const int size = 560;
  const double cx = size / 2.0, cy = size / 2.0 + 14;
  const double scale = (size / 2.0 - 30);
  std::ostringstream os;
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << size << "' height='"
     << size + 28 << "' viewBox='0 0 " << size << " " << size + 28 << "'>\n";
  os << "<text x='" << size / 2 << "' y='20' font-size='14' text-anchor='middle'>"
     << title << "</text>\n";
  os << "<rect x='" << cx - scale << "' y='" << cy - scale << "' width='" << 2 * scale
     << "' height='" << 2 * scale << "' fill='none' stroke='black'/>\n";
  os << "<line x1='" << num(cx - scale) << "' y1='" << num(cy) << "' x2='"
     << num(cx + scale) << "' y2='" << num(cy) << "' stroke='#bbbbbb'/>\n";
  os << "<line x1='" << num(cx) << "' y1='" << num(cy - scale) << "' x2='" << num(cx)
     << "' y2='" << num(cy + scale) << "' stroke='#bbbbbb'/>\n";
  diagonal_rays(os, cx, cy, scale);
  for (const auto& p : points) {
    const double px = cx + p.x / half_extent * scale;
    const double py = cy - p.y / half_extent * scale;
    if (std::abs(p.x) > half_extent || std::abs(p.y) > half_extent) continue;
    os << "<circle cx='" << num(px) << "' cy='" << num(py) << "' r='3' fill='" << p.color
       << "'/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string sign_heatmap(const std::string& title, const std::vector<int>& cells,
                         int rows, int cols, double extent) {
  const int size = 560;
  const double cx = size / 2.0, cy = size / 2.0 + 14;
  const double scale = (size / 2.0 - 30);
  const double cw = 2.0 * scale / cols, ch = 2.0 * scale / rows;
  std::ostringstream os;
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << size << "' height='"
     << size + 28 << "' viewBox='0 0 " << size << " " << size + 28 << "'>\n";
  os << "<text x='" << size / 2 << "' y='20' font-size='14' text-anchor='middle'>"
     << title << " (extent " << num(extent) << ")</text>\n";
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      const int v = cells[static_cast<std::size_t>(r * cols + c)];
      os << "<rect x='" << num(cx - scale + c * cw) << "' y='" << num(cy - scale + r * ch)
         << "' width='" << num(cw + 0.5) << "' height='" << num(ch + 0.5) << "' fill='"
         << (v > 0 ? "#f4b183" : "#9dc3e6") << "'/>\n";
    }
  diagonal_rays(os, cx, cy, scale);
  os << "<rect x='" << cx - scale << "' y='" << cy - scale << "' width='" << 2 * scale
     << "' height='" << 2 * scale << "' fill='none' stroke='black'/>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace blockdyn::svg
