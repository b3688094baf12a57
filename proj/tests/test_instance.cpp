#include <doctest.h>

#include <random>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "vrpdi/errors.hpp"
#include "vrpdi/instance.hpp"

using namespace vrpdi;

namespace {

std::string tspd_text(double vt, double vd, const std::vector<Point2>& pts) {
  std::string s = fmt::format("/*The speed of the Truck*/\n{}\n/*The speed of the Drone*/\n{}\n", vt, vd);
  s += fmt::format("/*Number of Nodes*/\n{}\n/*The Locations (x_coor y_coor name)*/\n", pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i)
    s += fmt::format("{} {} {}\n", pts[i].x, pts[i].y, i == 0 ? "depot" : fmt::format("loc{}", i));
  return s;
}

Instance parse_text(const std::string& text, const InstanceOverrides& o = {}) {
  std::istringstream in(text);
  return parse_instance(in, o, "t");
}

}  // namespace

TEST_CASE("parses speeds, nodes and unit demand") {
  std::vector<Point2> pts;
  for (int i = 0; i < 51; ++i) pts.push_back({double(i), double(2 * i)});
  const Instance inst = parse_text(tspd_text(1, 2, pts));
  CHECK(inst.customer_count() == 50);
  CHECK(inst.capacity() == 40);
  CHECK(inst.truck_speed() == 1.0);
  CHECK(inst.drone_speed() == 2.0);
  CHECK(inst.depot().demand == 0);
  CHECK(inst.node(7).pos == Point2{7, 14});
  CHECK(inst.node(50).demand == 1);
  CHECK(inst.total_demand() == 50);
  CHECK(inst.truck_delivery_time() == 0.0);
  CHECK(inst.drone_delivery_time() == 0.0);
  CHECK_FALSE(inst.max_drone_distance().has_value());
}

TEST_CASE("default capacity follows customer count") {
  CHECK(default_capacity(50) == 40);
  CHECK(default_capacity(100) == 40);
  CHECK(default_capacity(249) == 100);
  std::vector<Point2> pts(102, Point2{1, 1});
  pts[0] = {0, 0};
  CHECK(parse_text(tspd_text(1, 2, pts)).capacity() == 100);
}

TEST_CASE("overrides") {
  std::vector<Point2> pts{{0, 0}, {249.41, 0}, {10, 20}, {100, -30}};
  InstanceOverrides o;
  o.max_drone_distance_fraction = 0.75;
  o.capacity = 7;
  o.truck_delivery_time = 0.5;
  o.drone_delivery_time = 0.25;
  const Instance inst = parse_text(tspd_text(1, 2, pts), o);
  REQUIRE(inst.max_drone_distance().has_value());
  CHECK(std::abs(*inst.max_drone_distance() - 187.06) < 5e-3);
  CHECK(inst.capacity() == 7);
  CHECK(inst.truck_delivery_time() == 0.5);
  CHECK(inst.drone_delivery_time() == 0.25);
}

TEST_CASE("comments may appear anywhere and span lines") {
  const std::string text =
      "/* header\n spanning lines */\n1 /* inline */\n2\n/*n*/ 3\n0 0\n/* between */\n1 1 a\n2 2\n";
  const Instance inst = parse_text(text);
  CHECK(inst.customer_count() == 2);
  CHECK(inst.node(2).pos == Point2{2, 2});
}

TEST_CASE("parse errors") {
  SUBCASE("empty stream") {
    try {
      parse_text("");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.kind() == ParseError::Kind::Empty);
    }
    CHECK_THROWS_AS(parse_text("/* only a comment */\n\n"), ParseError);
  }
  SUBCASE("malformed number carries its line") {
    try {
      parse_text("1\n2\n3\n0 0\n1 x\n2 2\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.kind() == ParseError::Kind::Malformed);
      CHECK(e.line() == 5);
    }
    CHECK_THROWS_AS(parse_text("fast\n2\n3\n0 0\n1 1\n2 2\n"), ParseError);
  }
  SUBCASE("truncated location list") {
    try {
      parse_text("1\n2\n5\n0 0\n1 1\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.kind() == ParseError::Kind::Truncated);
    }
  }
  SUBCASE("non-positive speed") {
    CHECK_THROWS_AS(parse_text("0\n2\n2\n0 0\n1 1\n"), ValidationError);
    CHECK_THROWS_AS(parse_text("1\n-2\n2\n0 0\n1 1\n"), ValidationError);
  }
  SUBCASE("no customers") { CHECK_THROWS_AS(parse_text("1\n2\n1\n0 0\n"), Error); }
}

TEST_CASE("instance invariants are validated") {
  Instance::Params p;
  CHECK_THROWS_AS(Instance("x", {{0, {0, 0}, 0}}, p), ValidationError);
  p.max_drone_distance = 0.0;
  CHECK_THROWS_AS(Instance("x", {{0, {0, 0}, 0}, {1, {1, 1}, 1}}, p), ValidationError);
  p.max_drone_distance.reset();
  p.capacity = 0;
  CHECK_THROWS_AS(Instance("x", {{0, {0, 0}, 0}, {1, {1, 1}, 1}}, p), ValidationError);
}

TEST_CASE("fleet size") {
  auto with_customers = [](int n, int cap) {
    std::vector<Node> nodes{{0, {0, 0}, 0}};
    for (int i = 1; i <= n; ++i) nodes.push_back({i, {double(i), 0}, 1});
    Instance::Params p;
    p.capacity = cap;
    return Instance("f", nodes, p);
  };
  CHECK(fleet_size(with_customers(50, 40)) == 2);
  CHECK(fleet_size(with_customers(100, 40)) == 3);
  CHECK(fleet_size(with_customers(40, 40)) == 1);
  CHECK(fleet_size(with_customers(41, 40)) == 2);

  std::vector<Node> zero{{0, {0, 0}, 0}, {1, {1, 1}, 0}};
  CHECK_THROWS(fleet_size(Instance("z", zero, {})));

  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    const int n = 1 + static_cast<int>(rng() % 300);
    const int cap = 1 + static_cast<int>(rng() % 120);
    const Instance inst = with_customers(n, cap);
    CHECK(fleet_size(inst) * inst.capacity() >= inst.total_demand());
    CHECK((fleet_size(inst) - 1) * inst.capacity() < inst.total_demand());
  }
}

TEST_CASE("text round trip") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coord(-1000.0, 1000.0);
  for (int t = 0; t < 25; ++t) {
    std::vector<Point2> pts;
    const int n = 2 + t;
    for (int i = 0; i < n; ++i) pts.push_back({coord(rng), coord(rng)});
    const Instance a = parse_text(tspd_text(1.5, 3.25, pts));
    std::ostringstream out;
    write_instance(out, a);
    const Instance b = parse_text(out.str());
    CHECK(a == b);
  }
}

TEST_CASE("json round trip") {
  std::vector<Point2> pts{{0, 0}, {1.25, -3}, {7, 7}};
  InstanceOverrides o;
  o.max_drone_distance_fraction = 0.5;
  const Instance a = parse_text(tspd_text(1, 2, pts), o);
  nlohmann::json j;
  to_json(j, a);
  CHECK(instance_from_json(j) == a);
  CHECK(instance_from_json(nlohmann::json::parse(j.dump())) == a);
}
