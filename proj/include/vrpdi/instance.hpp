#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "vrpdi/geometry.hpp"

namespace vrpdi {

struct Node {
  int id = 0;
  Point2 pos;
  int demand = 0;

  friend bool operator==(const Node&, const Node&) = default;
};

// Immutable problem description. Node 0 is the depot.
class Instance {
 public:
  struct Params {
    double truck_speed = 1.0;
    double drone_speed = 1.0;
    double truck_delivery_time = 0.0;
    double drone_delivery_time = 0.0;
    int capacity = 40;
    std::optional<double> max_drone_distance;

    friend bool operator==(const Params&, const Params&) = default;
  };

  // Throws ValidationError when the invariants do not hold.
  Instance(std::string name, std::vector<Node> nodes, Params params);

  const std::string& name() const { return name_; }
  std::span<const Node> nodes() const { return nodes_; }
  const Node& node(int id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  const Node& depot() const { return nodes_.front(); }
  int customer_count() const { return static_cast<int>(nodes_.size()) - 1; }
  int total_demand() const;

  double truck_speed() const { return params_.truck_speed; }
  double drone_speed() const { return params_.drone_speed; }
  double truck_delivery_time() const { return params_.truck_delivery_time; }
  double drone_delivery_time() const { return params_.drone_delivery_time; }
  int capacity() const { return params_.capacity; }
  const std::optional<double>& max_drone_distance() const { return params_.max_drone_distance; }
  const Params& params() const { return params_; }

  // Copy with some parameters replaced, re-validated.
  Instance with_params(Params params) const { return Instance(name_, nodes_, params); }

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  std::string name_;
  std::vector<Node> nodes_;
  Params params_;
};

class DistanceMatrix {
 public:
  explicit DistanceMatrix(const Instance& instance);

  double operator()(int i, int j) const {
    return d_[static_cast<std::size_t>(i) * n_ + static_cast<std::size_t>(j)];
  }
  std::size_t size() const { return n_; }
  double max_entry() const { return max_; }

 private:
  std::size_t n_;
  std::vector<double> d_;
  double max_ = 0.0;
};

inline DistanceMatrix distance_matrix(const Instance& instance) { return DistanceMatrix(instance); }

struct InstanceOverrides {
  std::optional<int> capacity;
  std::optional<double> truck_delivery_time;
  std::optional<double> drone_delivery_time;
  std::optional<double> max_drone_distance_fraction;
  // When false, a numeric third column on coordinate lines is read as demand.
  bool unit_demand = true;
};

// Capacity used when none is configured: 40 up to 100 customers, 100 above.
int default_capacity(int customers);

// Reads the TSP-D text layout: `/* ... */` comments around the truck speed,
// drone speed, location count and one `x y [name]` line per location.
Instance parse_instance(std::istream& in, const InstanceOverrides& overrides = {},
                        std::string name = {});
Instance load_instance(const std::filesystem::path& path, const InstanceOverrides& overrides = {});

// Writes the same layout back; coordinates keep full double precision.
void write_instance(std::ostream& out, const Instance& instance);

// ⌈total demand / capacity⌉.
int fleet_size(const Instance& instance);

void to_json(nlohmann::json& j, const Instance& instance);
Instance instance_from_json(const nlohmann::json& j);

}  // namespace vrpdi
