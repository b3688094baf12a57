#include "vrpdi/genotype.hpp"

#include <nlohmann/json.hpp>

#include "vrpdi/errors.hpp"

namespace vrpdi {

std::vector<std::size_t> balanced_bounds(std::size_t n, std::size_t pairs) {
  if (pairs == 0) throw ValidationError("at least one truck-drone pair is required");
  std::vector<std::size_t> bounds(pairs + 1, 0);
  const std::size_t base = n / pairs;
  const std::size_t extra = n % pairs;
  for (std::size_t k = 0; k < pairs; ++k) bounds[k + 1] = bounds[k] + base + (k < extra ? 1 : 0);
  return bounds;
}

Genotype make_genotype(std::vector<Gene> genes, std::size_t pairs) {
  Genotype g;
  g.bounds = balanced_bounds(genes.size(), pairs);
  g.genes = std::move(genes);
  return g;
}

std::string to_string(Delivery d) { return d == Delivery::Truck ? "truck" : "drone"; }

std::string to_string(const Genotype& g) {
  std::string out;
  for (std::size_t k = 0; k < g.segment_count(); ++k) {
    if (k) out += " | ";
    bool first = true;
    for (const Gene& gene : g.segment(k)) {
      if (!first) out += ' ';
      first = false;
      out += std::to_string(gene.node);
      out += gene.delivery == Delivery::Truck ? 'T' : 'D';
    }
  }
  return out;
}

void to_json(nlohmann::json& j, const Genotype& g) {
  nlohmann::json segments = nlohmann::json::array();
  for (std::size_t k = 0; k < g.segment_count(); ++k) {
    nlohmann::json seg = nlohmann::json::array();
    for (const Gene& gene : g.segment(k)) seg.push_back({{"node", gene.node}, {"delivery", to_string(gene.delivery)}});
    segments.push_back(std::move(seg));
  }
  j = {{"segments", std::move(segments)}};
}

Genotype genotype_from_json(const nlohmann::json& j) {
  Genotype g;
  g.bounds.push_back(0);
  try {
    for (const auto& seg : j.at("segments")) {
      for (const auto& gene : seg) {
        const auto kind = gene.at("delivery").get<std::string>();
        if (kind != "truck" && kind != "drone") throw ValidationError("unknown delivery type '" + kind + "'");
        g.genes.push_back({gene.at("node").get<int>(), kind == "truck" ? Delivery::Truck : Delivery::Drone});
      }
      g.bounds.push_back(g.genes.size());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("invalid genotype JSON: ") + e.what());
  }
  return g;
}

}  // namespace vrpdi
