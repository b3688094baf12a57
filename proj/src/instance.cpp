#include "vrpdi/instance.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "vrpdi/errors.hpp"

namespace vrpdi {

namespace {

bool finite_point(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

struct Record {
  std::size_t line;
  std::vector<std::string> tokens;
};

// Splits the stream into non-empty lines with comments removed. Comments may
// span lines.
std::vector<Record> tokenize(std::istream& in) {
  std::vector<Record> records;
  std::string raw;
  std::size_t line_no = 0;
  bool in_comment = false;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string text;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (in_comment) {
        if (raw.compare(i, 2, "*/") == 0) {
          in_comment = false;
          ++i;
        }
      } else if (raw.compare(i, 2, "/*") == 0) {
        in_comment = true;
        ++i;
        text.push_back(' ');
      } else {
        text.push_back(raw[i]);
      }
    }
    std::istringstream ss(text);
    Record rec{line_no, {}};
    for (std::string tok; ss >> tok;) rec.tokens.push_back(std::move(tok));
    if (!rec.tokens.empty()) records.push_back(std::move(rec));
  }
  return records;
}

std::optional<double> to_number(const std::string& tok) {
  double value = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (!tok.empty() && tok.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) return std::nullopt;
  return value;
}

double require_number(const std::string& tok, std::size_t line, const char* what) {
  auto v = to_number(tok);
  if (!v) throw ParseError(ParseError::Kind::Malformed, line, fmt::format("malformed {} '{}'", what, tok));
  return *v;
}

}  // namespace

Instance::Instance(std::string name, std::vector<Node> nodes, Params params)
    : name_(std::move(name)), nodes_(std::move(nodes)), params_(params) {
  if (nodes_.size() < 2) throw ValidationError("instance needs a depot and at least one customer");
  if (!(params_.truck_speed > 0.0) || !std::isfinite(params_.truck_speed))
    throw ValidationError("truck speed must be positive");
  if (!(params_.drone_speed > 0.0) || !std::isfinite(params_.drone_speed))
    throw ValidationError("drone speed must be positive");
  if (!(params_.truck_delivery_time >= 0.0) || !(params_.drone_delivery_time >= 0.0))
    throw ValidationError("delivery times must be non-negative");
  if (params_.capacity <= 0) throw ValidationError("capacity must be positive");
  if (params_.max_drone_distance && !(*params_.max_drone_distance > 0.0))
    throw ValidationError("max drone distance must be positive");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    if (n.id != static_cast<int>(i)) throw ValidationError(fmt::format("node {} has id {}", i, n.id));
    if (!finite_point(n.pos)) throw ValidationError(fmt::format("node {} has non-finite coordinates", i));
    if (n.demand < 0) throw ValidationError(fmt::format("node {} has negative demand", i));
  }
  if (nodes_.front().demand != 0) throw ValidationError("depot demand must be 0");
}

int Instance::total_demand() const {
  int total = 0;
  for (const Node& n : nodes_) total += n.demand;
  return total;
}

DistanceMatrix::DistanceMatrix(const Instance& instance)
    : n_(instance.nodes().size()), d_(n_ * n_, 0.0) {
  auto nodes = instance.nodes();
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      double d = euclidean_distance(nodes[i].pos, nodes[j].pos);
      d_[i * n_ + j] = d;
      d_[j * n_ + i] = d;
      if (d > max_) max_ = d;
    }
  }
}

int default_capacity(int customers) { return customers <= 100 ? 40 : 100; }

Instance parse_instance(std::istream& in, const InstanceOverrides& overrides, std::string name) {
  const auto records = tokenize(in);
  if (records.empty()) throw ParseError(ParseError::Kind::Empty, 0, "no numeric data");

  // Scalars are read as a token stream; locations start on the next line.
  std::size_t rec = 0;
  std::size_t tok = 0;
  auto next_scalar = [&](const char* what) {
    if (rec >= records.size())
      throw ParseError(ParseError::Kind::Truncated, records.back().line, fmt::format("missing {}", what));
    const Record& r = records[rec];
    double v = require_number(r.tokens[tok], r.line, what);
    if (++tok == r.tokens.size()) {
      ++rec;
      tok = 0;
    }
    return std::pair{v, r.line};
  };

  auto [truck_speed, truck_line] = next_scalar("truck speed");
  auto [drone_speed, drone_line] = next_scalar("drone speed");
  auto [count_value, count_line] = next_scalar("location count");
  if (tok != 0) {
    throw ParseError(ParseError::Kind::Malformed, records[rec].line,
                     fmt::format("unexpected token '{}' after location count", records[rec].tokens[tok]));
  }
  if (count_value != std::floor(count_value) || count_value < 2)
    throw ParseError(ParseError::Kind::Malformed, count_line, "location count must be an integer >= 2");
  if (!(truck_speed > 0.0)) throw ValidationError(fmt::format("line {}: truck speed must be positive", truck_line));
  if (!(drone_speed > 0.0)) throw ValidationError(fmt::format("line {}: drone speed must be positive", drone_line));

  const auto count = static_cast<std::size_t>(count_value);
  std::vector<Node> nodes;
  nodes.reserve(count);
  for (std::size_t i = 0; i < count; ++i, ++rec) {
    if (rec >= records.size()) {
      throw ParseError(ParseError::Kind::Truncated, records.back().line,
                       fmt::format("expected {} locations, found {}", count, i));
    }
    const Record& r = records[rec];
    if (r.tokens.size() < 2)
      throw ParseError(ParseError::Kind::Malformed, r.line, "location line needs x and y");
    Node node;
    node.id = static_cast<int>(i);
    node.pos = {require_number(r.tokens[0], r.line, "x coordinate"),
                require_number(r.tokens[1], r.line, "y coordinate")};
    if (i == 0) {
      node.demand = 0;
    } else if (overrides.unit_demand) {
      node.demand = 1;
    } else {
      node.demand = 1;
      if (r.tokens.size() >= 3) {
        if (auto d = to_number(r.tokens[2]); d && *d >= 0 && *d == std::floor(*d)) node.demand = static_cast<int>(*d);
      }
    }
    nodes.push_back(node);
  }

  const int customers = static_cast<int>(count) - 1;
  Instance::Params params;
  params.truck_speed = truck_speed;
  params.drone_speed = drone_speed;
  params.capacity = overrides.capacity.value_or(default_capacity(customers));
  params.truck_delivery_time = overrides.truck_delivery_time.value_or(0.0);
  params.drone_delivery_time = overrides.drone_delivery_time.value_or(0.0);

  Instance instance(std::move(name), std::move(nodes), params);
  if (overrides.max_drone_distance_fraction) {
    double fraction = *overrides.max_drone_distance_fraction;
    if (!(fraction > 0.0)) throw ValidationError("max drone distance fraction must be positive");
    params.max_drone_distance = fraction * DistanceMatrix(instance).max_entry();
    instance = instance.with_params(params);
  }
  return instance;
}

Instance load_instance(const std::filesystem::path& path, const InstanceOverrides& overrides) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("cannot open instance file '{}'", path.string()));
  return parse_instance(in, overrides, path.stem().string());
}

void write_instance(std::ostream& out, const Instance& instance) {
  out << "/*The speed of the Truck*/\n" << fmt::format("{}\n", instance.truck_speed());
  out << "/*The speed of the Drone*/\n" << fmt::format("{}\n", instance.drone_speed());
  out << "/*Number of Nodes*/\n" << instance.nodes().size() << '\n';
  out << "/*The Depot*/\n";
  auto nodes = instance.nodes();
  out << fmt::format("{} {} depot\n", nodes[0].pos.x, nodes[0].pos.y);
  out << "/*The Locations (x_coor y_coor name)*/\n";
  for (std::size_t i = 1; i < nodes.size(); ++i)
    out << fmt::format("{} {} loc{}\n", nodes[i].pos.x, nodes[i].pos.y, i);
}

int fleet_size(const Instance& instance) {
  const int demand = instance.total_demand();
  if (demand <= 0) throw ValidationError("total demand must be positive to size the fleet");
  return (demand + instance.capacity() - 1) / instance.capacity();
}

void to_json(nlohmann::json& j, const Instance& instance) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const Node& n : instance.nodes()) nodes.push_back({{"id", n.id}, {"x", n.pos.x}, {"y", n.pos.y}, {"demand", n.demand}});
  const auto& p = instance.params();
  j = {{"name", instance.name()},
       {"truck_speed", p.truck_speed},
       {"drone_speed", p.drone_speed},
       {"truck_delivery_time", p.truck_delivery_time},
       {"drone_delivery_time", p.drone_delivery_time},
       {"capacity", p.capacity},
       {"max_drone_distance", p.max_drone_distance ? nlohmann::json(*p.max_drone_distance) : nlohmann::json()},
       {"nodes", std::move(nodes)}};
}

Instance instance_from_json(const nlohmann::json& j) {
  try {
    std::vector<Node> nodes;
    for (const auto& n : j.at("nodes")) {
      nodes.push_back({n.at("id").get<int>(), {n.at("x").get<double>(), n.at("y").get<double>()},
                       n.at("demand").get<int>()});
    }
    Instance::Params p;
    p.truck_speed = j.at("truck_speed").get<double>();
    p.drone_speed = j.at("drone_speed").get<double>();
    p.truck_delivery_time = j.at("truck_delivery_time").get<double>();
    p.drone_delivery_time = j.at("drone_delivery_time").get<double>();
    p.capacity = j.at("capacity").get<int>();
    if (j.contains("max_drone_distance") && !j.at("max_drone_distance").is_null())
      p.max_drone_distance = j.at("max_drone_distance").get<double>();
    return Instance(j.value("name", std::string{}), std::move(nodes), p);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(fmt::format("invalid instance JSON: {}", e.what()));
  }
}

}  // namespace vrpdi
