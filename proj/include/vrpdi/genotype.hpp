#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace vrpdi {

enum class Delivery : std::uint8_t { Truck = 0, Drone = 1 };

struct Gene {
  int node = 0;
  Delivery delivery = Delivery::Truck;

  friend auto operator<=>(const Gene&, const Gene&) = default;
};

// Metameric chromosome. `bounds` holds segment_count() + 1 offsets,
// 0 = bounds.front() <= ... <= bounds.back() = genes.size(); segment k is
// [bounds[k], bounds[k + 1]) and belongs to truck-drone pair k.
struct Genotype {
  std::vector<Gene> genes;
  std::vector<std::size_t> bounds;

  std::size_t size() const { return genes.size(); }
  std::size_t segment_count() const { return bounds.empty() ? 0 : bounds.size() - 1; }
  std::span<const Gene> segment(std::size_t k) const {
    return std::span<const Gene>(genes).subspan(bounds[k], bounds[k + 1] - bounds[k]);
  }

  friend auto operator<=>(const Genotype&, const Genotype&) = default;
};

// Splits n genes over `pairs` segments whose sizes differ by at most one.
std::vector<std::size_t> balanced_bounds(std::size_t n, std::size_t pairs);

// Genotype over `nodes` in the given order with balanced bounds.
Genotype make_genotype(std::vector<Gene> genes, std::size_t pairs);

std::string to_string(Delivery d);
std::string to_string(const Genotype& g);

void to_json(nlohmann::json& j, const Genotype& g);
Genotype genotype_from_json(const nlohmann::json& j);

}  // namespace vrpdi
