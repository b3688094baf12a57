#pragma once

#include <string>

#include "vrpdi/evaluator.hpp"
#include "vrpdi/instance.hpp"

namespace vrpdi {

// Tour plot: one solid polyline per truck, one dashed group per drone holding
// a polyline per sortie, a square per rendezvous, circles for customers.
std::string render_svg(const Schedule& schedule, const Instance& instance, double width = 800.0);

}  // namespace vrpdi
