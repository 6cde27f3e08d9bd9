#include "hdbwdm/figures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <vector>

namespace hdbwdm {

namespace {

constexpr double kWidth = 640, kHeight = 400;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 60;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string label_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

struct Frame {
  double y_max;
  double y(double v) const { return kTop + (kHeight - kTop - kBottom) * (1.0 - v / y_max); }
};

std::string open_svg(const std::string& title) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
         "<text x=\"" + num(kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" + title + "</text>\n";
}

std::string y_axis(const Frame& f, const std::string& label) {
  std::string s = "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(kLeft) + "\" y2=\"" +
                  num(kHeight - kBottom) + "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kHeight - kBottom) + "\" x2=\"" + num(kWidth - kRight) +
       "\" y2=\"" + num(kHeight - kBottom) + "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double v = f.y_max * t / 4.0;
    s += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(f.y(v) + 4) + "\" text-anchor=\"end\">" + label_num(v) +
         "</text>\n";
  }
  s += "<text transform=\"translate(16," + num(kHeight / 2) + ") rotate(-90)\" text-anchor=\"middle\">" + label +
       "</text>\n";
  return s;
}

double nice_max(double v) {
  if (!(v > 0.0) || !std::isfinite(v)) return 1.0;
  const double mag = std::pow(10.0, std::floor(std::log10(v)));
  for (double step : {1.0, 2.0, 2.5, 5.0, 10.0})
    if (step * mag >= v) return step * mag;
  return 10.0 * mag;
}

}  // namespace

std::string diagnostic_svg(const DiagnosticReport& rep) {
  const IndexReport* rows[] = {&rep.truth, &rep.kmeans, &rep.trimmed};
  double top = 0.0;
  for (const auto* r : rows) top = std::max({top, r->abdm, r->awdm});
  const Frame f{nice_max(top * 1.05)};
  std::string s = open_svg("ABDM and AWDM by partition (p = " + std::to_string(rep.p) + ")");
  s += y_axis(f, "medoid distance");
  const double group = (kWidth - kLeft - kRight) / 3.0;
  const double bar = group * 0.3;
  for (int g = 0; g < 3; ++g) {
    const double x0 = kLeft + group * g + group * 0.15;
    const double vals[] = {rows[g]->abdm, rows[g]->awdm};
    const char* colors[] = {"#1f77b4", "#ff7f0e"};
    for (int b = 0; b < 2; ++b) {
      const double x = x0 + b * (bar + 4);
      const double y = f.y(vals[b]);
      s += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(bar) + "\" height=\"" +
           num(kHeight - kBottom - y) + "\" fill=\"" + colors[b] + "\"/>\n";
    }
    s += "<text x=\"" + num(x0 + bar + 2) + "\" y=\"" + num(kHeight - kBottom + 18) + "\" text-anchor=\"middle\">" +
         to_string(rows[g]->partition) + "</text>\n";
    s += "<text x=\"" + num(x0 + bar + 2) + "\" y=\"" + num(kHeight - kBottom + 34) +
         "\" text-anchor=\"middle\">BWDM " + label_num(rows[g]->bwdm) + "</text>\n";
  }
  s += "<rect x=\"" + num(kWidth - 150) + "\" y=\"34\" width=\"12\" height=\"12\" fill=\"#1f77b4\"/>"
       "<text x=\"" + num(kWidth - 132) + "\" y=\"44\">ABDM</text>\n";
  s += "<rect x=\"" + num(kWidth - 90) + "\" y=\"34\" width=\"12\" height=\"12\" fill=\"#ff7f0e\"/>"
       "<text x=\"" + num(kWidth - 72) + "\" y=\"44\">AWDM</text>\n";
  s += "</svg>\n";
  return s;
}

std::string sweep_svg(std::span<const SweepCell> cells) {
  std::map<ProjectionKind, std::vector<const SweepCell*>> series;
  double top = 0.0, p_min = INFINITY, p_max = -INFINITY;
  for (const auto& c : cells) {
    series[c.method].push_back(&c);
    if (std::isfinite(c.mean_bwdm)) top = std::max(top, c.mean_bwdm + (std::isfinite(c.sd_bwdm) ? c.sd_bwdm : 0.0));
    p_min = std::min(p_min, static_cast<double>(c.p));
    p_max = std::max(p_max, static_cast<double>(c.p));
  }
  const Frame f{nice_max(top * 1.05)};
  if (!(p_max > p_min)) {
    p_min -= 1.0;
    p_max += 1.0;
  }
  const double pad = 0.08 * (p_max - p_min);
  auto x_of = [&](double p) {
    return kLeft + (kWidth - kLeft - kRight) * (p - p_min + pad) / (p_max - p_min + 2 * pad);
  };

  std::string s = open_svg("HD-BWDM mean +- SD by projection dimension");
  s += y_axis(f, "HD-BWDM");
  std::vector<std::size_t> ps;
  for (const auto& c : cells) ps.push_back(c.p);
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  for (std::size_t p : ps)
    s += "<text x=\"" + num(x_of(static_cast<double>(p))) + "\" y=\"" + num(kHeight - kBottom + 18) +
         "\" text-anchor=\"middle\">" + std::to_string(p) + "</text>\n";
  s += "<text x=\"" + num((kLeft + kWidth - kRight) / 2) + "\" y=\"" + num(kHeight - 16) +
       "\" text-anchor=\"middle\">projection dimension p</text>\n";

  int idx = 0;
  for (auto& [method, pts] : series) {
    const char* color = method == ProjectionKind::random ? "#1f77b4" : "#d62728";
    std::sort(pts.begin(), pts.end(), [](const SweepCell* a, const SweepCell* b) { return a->p < b->p; });
    std::string path;
    for (const auto* c : pts) {
      if (!std::isfinite(c->mean_bwdm)) continue;
      const double x = x_of(static_cast<double>(c->p)) + (idx == 0 ? -4.0 : 4.0);
      path += (path.empty() ? "M" : " L") + num(x) + "," + num(f.y(c->mean_bwdm));
      if (std::isfinite(c->sd_bwdm)) {
        const double lo = f.y(std::max(0.0, c->mean_bwdm - c->sd_bwdm)), hi = f.y(c->mean_bwdm + c->sd_bwdm);
        s += "<line x1=\"" + num(x) + "\" y1=\"" + num(lo) + "\" x2=\"" + num(x) + "\" y2=\"" + num(hi) +
             "\" stroke=\"" + color + "\"/>\n";
      }
      s += "<circle cx=\"" + num(x) + "\" cy=\"" + num(f.y(c->mean_bwdm)) + "\" r=\"3.5\" fill=\"" + color + "\"/>\n";
    }
    s += "<path d=\"" + path + "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    s += "<text x=\"" + num(kWidth - 80) + "\" y=\"" + num(48 + 16 * idx) + "\" fill=\"" + color + "\">" +
         to_string(method) + "</text>\n";
    ++idx;
  }
  s += "</svg>\n";
  return s;
}

}  // namespace hdbwdm
