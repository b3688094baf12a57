#include "vrpdi/svg.hpp"

#include <algorithm>
#include <array>
#include <limits>

#include <fmt/format.h>

namespace vrpdi {

namespace {

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                                 "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

class Projection {
 public:
  Projection(const Instance& instance, double width) : width_(width) {
    double min_x = std::numeric_limits<double>::max();
    double min_y = min_x;
    double max_x = std::numeric_limits<double>::lowest();
    double max_y = max_x;
    for (const Node& n : instance.nodes()) {
      min_x = std::min(min_x, n.pos.x);
      max_x = std::max(max_x, n.pos.x);
      min_y = std::min(min_y, n.pos.y);
      max_y = std::max(max_y, n.pos.y);
    }
    const double span = std::max({max_x - min_x, max_y - min_y, 1e-9});
    scale_ = (width_ - 2 * kMargin) / span;
    min_x_ = min_x;
    max_y_ = max_y;
    height_ = (max_y - min_y) * scale_ + 2 * kMargin;
  }

  // SVG y grows downwards.
  Point2 operator()(Point2 p) const { return {kMargin + (p.x - min_x_) * scale_, kMargin + (max_y_ - p.y) * scale_}; }
  double width() const { return width_; }
  double height() const { return height_; }

 private:
  static constexpr double kMargin = 20.0;
  double width_;
  double height_ = 0.0;
  double scale_ = 1.0;
  double min_x_ = 0.0;
  double max_y_ = 0.0;
};

std::string escape_xml(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string points_attr(const Projection& proj, const std::vector<Point2>& pts) {
  std::string out;
  for (const Point2& p : pts) {
    const Point2 q = proj(p);
    if (!out.empty()) out += ' ';
    out += fmt::format("{:.2f},{:.2f}", q.x, q.y);
  }
  return out;
}

}  // namespace

std::string render_svg(const Schedule& schedule, const Instance& instance, double width) {
  const Projection proj(instance, width);
  std::string svg;
  svg += R"(<?xml version="1.0" encoding="UTF-8"?>)" "\n";
  svg += fmt::format(
      R"(<svg xmlns="http://www.w3.org/2000/svg" width="{0:.0f}" height="{1:.0f}" viewBox="0 0 {0:.2f} {1:.2f}">)"
      "\n",
      proj.width(), proj.height());
  svg += fmt::format(R"(<title>{} system time {:.4f}</title>)" "\n", escape_xml(instance.name().empty() ? "tour" : instance.name()),
                     schedule.system_time);
  svg += R"(<rect width="100%" height="100%" fill="white"/>)" "\n";

  for (std::size_t k = 0; k < schedule.pairs.size(); ++k) {
    const PairSchedule& pair = schedule.pairs[k];
    const char* colour = kPalette[k % kPalette.size()];
    if (!pair.truck_legs.empty()) {
      std::vector<Point2> route{pair.truck_legs.front().from};
      for (const Leg& leg : pair.truck_legs) route.push_back(leg.to);
      svg += fmt::format(R"(<polyline class="truck" data-pair="{}" fill="none" stroke="{}" stroke-width="2" points="{}"/>)"
                         "\n",
                         k, colour, points_attr(proj, route));
    }
    svg += fmt::format(R"(<g class="drone" data-pair="{}" fill="none" stroke="{}" stroke-width="1.2" stroke-dasharray="4 3">)"
                       "\n",
                       k, colour);
    // A sortie is a delivery leg followed by its interception leg.
    for (std::size_t i = 0; i + 1 < pair.drone_legs.size(); ++i) {
      const Leg& out = pair.drone_legs[i];
      const Leg& back = pair.drone_legs[i + 1];
      if (out.purpose != LegPurpose::Delivery || back.purpose != LegPurpose::Interception) continue;
      svg += fmt::format(R"(  <polyline points="{}"/>)" "\n", points_attr(proj, {out.from, out.to, back.to}));
    }
    svg += "</g>\n";
    for (const InterceptionResult& r : pair.rendezvous) {
      const Point2 q = proj(r.point);
      svg += fmt::format(R"(<rect class="interception" data-pair="{}" x="{:.2f}" y="{:.2f}" width="6" height="6" fill="black"/>)"
                         "\n",
                         k, q.x - 3.0, q.y - 3.0);
    }
  }

  const auto nodes = instance.nodes();
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const Point2 q = proj(nodes[i].pos);
    svg += fmt::format(R"(<circle class="customer" data-node="{}" cx="{:.2f}" cy="{:.2f}" r="3" fill="none" stroke="black"/>)"
                       "\n",
                       i, q.x, q.y);
  }
  const Point2 depot = proj(nodes[0].pos);
  svg += fmt::format(R"(<rect class="depot" x="{:.2f}" y="{:.2f}" width="10" height="10" fill="gray" stroke="black"/>)"
                     "\n",
                     depot.x - 5.0, depot.y - 5.0);
  svg += "</svg>\n";
  return svg;
}

}  // namespace vrpdi
