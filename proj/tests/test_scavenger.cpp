#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "explane/error.hpp"
#include "explane/scavenger/bench.hpp"

using namespace explane;
using namespace explane::scavenger;

namespace {

DomainCatalog& catalog() {
  static auto c = load_catalog();
  return c;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("catalog counts and labels") {
  const auto& c = catalog();
  CHECK(c.changes.size() == 10);
  CHECK(c.unit_count() == 13);
  CHECK(c.options.size() == 5);
  CHECK(std::is_sorted(c.options.begin(), c.options.end(),
                       [](const OptionInfo& a, const OptionInfo& b) { return a.id < b.id; }));
  const auto& power = c.change("power-out");
  CHECK(power.option == "power-out");
  CHECK(power.units.size() == 2);
  CHECK(power.labels.at("+pre (exit-door room2) (pin-entered room2)") == "activate_pin");
  CHECK(power.labels.at("+pre (ride-elevator room5) (elevator-powered)") == "elevator_out_of_service");
  CHECK_THROWS_AS(c.change("meteor"), ModelError);
  CHECK_THROWS_AS(load_catalog(bundled_dir(), {10, 12, 5}), ModelError);
  CHECK(c.human_mindset().options.empty());
  CHECK(c.robot_mindset({"power-out"}).options.size() == 1);
}

TEST_CASE("nominal scenario needs no explanation") {
  Scenario s{"N", {}, {0}, 3};
  for (Method m : kMethods) {
    auto row = run_scenario(catalog(), s, m, {}, 1);
    CHECK(row.size == 0);
    CHECK(row.sound);
    CHECK(row.flags == s.inject.size());
  }
}

TEST_CASE("differences that never matter are counted only in E_all") {
  Scenario s{"Z", {"zipline-down"}, {}, 1};
  for (Method m : kMethods) {
    auto row = run_scenario(catalog(), s, m, {}, 1);
    CHECK(row.size == 0);
    CHECK(row.size_all == 1);
    CHECK(row.sound);
  }
}

TEST_CASE("power outage scenario") {
  const auto s = Scenario::load(bundled_dir() + "/power_out.json");
  CHECK(s.changes == std::vector<std::string>{"power-out"});
  CHECK(run_scenario(catalog(), s, Method::Hrl, {}, 1).size == 1);
  CHECK(run_scenario(catalog(), s, Method::Oeg, {}, 1).size == 2);
  CHECK(run_scenario(catalog(), s, Method::Peg, {}, 1).size == 2);
}

TEST_CASE("scenario JSON round trip and validation") {
  Scenario s{"X1", {"power-out", "fire"}, {1}, 7};
  auto back = Scenario::from_json(s.to_json());
  CHECK(back.id == s.id);
  CHECK(back.changes == s.changes);
  CHECK(back.inject == s.inject);
  CHECK(back.seed == s.seed);
  CHECK_NOTHROW(validate(catalog(), s));
  CHECK_THROWS_AS(validate(catalog(), {"X2", {"meteor"}, {}, 0}), ModelError);
  CHECK_THROWS_AS(validate(catalog(), {"X3", {"fire", "fire"}, {}, 0}), ModelError);
  CHECK_THROWS_AS(validate(catalog(), {"X4", {"power-out"}, {99}, 0}), ModelError);
  CHECK_THROWS_AS(Scenario::from_json("{\"id\": 3"), ParseError);
}

TEST_CASE("bundled scenarios load in numeric order") {
  const auto all = load_scenarios(bundled_dir() + "/scenarios");
  REQUIRE(all.size() == 10);
  CHECK(all.front().id == "P1");
  CHECK(all[1].id == "P2");
  CHECK(all.back().id == "P10");
  for (const auto& s : all) CHECK_NOTHROW(validate(catalog(), s));
}

TEST_CASE("generated scenarios") {
  const auto a = generate_scenarios(catalog(), 12, 5);
  const auto b = generate_scenarios(catalog(), 12, 5);
  REQUIRE(a.size() == 12);
  CHECK(a.front().id == "G1");
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].to_json() == b[i].to_json());
    CHECK(a[i].changes.size() >= 2);
    CHECK(a[i].changes.size() <= 5);
    CHECK_NOTHROW(validate(catalog(), a[i]));
  }
  const auto c = generate_scenarios(catalog(), 12, 6);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) differs |= a[i].changes != c[i].changes;
  CHECK(differs);
  CHECK_THROWS_AS(generate_scenarios(catalog(), 0, 1), ModelError);
}

TEST_CASE("cell seeds separate scenarios and methods") {
  CHECK(cell_seed(1, "P1", Method::Hrl) == cell_seed(1, "P1", Method::Hrl));
  CHECK(cell_seed(1, "P1", Method::Hrl) != cell_seed(1, "P1", Method::Oeg));
  CHECK(cell_seed(1, "P1", Method::Hrl) != cell_seed(1, "P2", Method::Hrl));
  CHECK(cell_seed(1, "P1", Method::Hrl) != cell_seed(2, "P1", Method::Hrl));
  CHECK(method_from_string(to_string(Method::Peg)) == Method::Peg);
  CHECK_THROWS_AS(method_from_string("llm"), ModelError);
}

TEST_CASE("bench over the bundled scenarios") {
  const auto scenarios = load_scenarios(bundled_dir() + "/scenarios");
  const auto rows = run_bench(catalog(), scenarios, {}, 1);
  REQUIRE(rows.size() == 30);
  double hrl = 0, flat = 0;
  for (std::size_t i = 0; i < rows.size(); i += 3) {
    CAPTURE(rows[i].scenario);
    CHECK(rows[i].method == Method::Hrl);
    CHECK(rows[i + 1].method == Method::Oeg);
    CHECK(rows[i + 2].method == Method::Peg);
    CHECK(rows[i].size <= rows[i + 1].size);
    CHECK(rows[i].size <= rows[i + 2].size);
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(rows[i + k].sound);
      CHECK(rows[i + k].size_all >= rows[i + k].size);
    }
    hrl += static_cast<double>(rows[i].size);
    flat += static_cast<double>(std::min(rows[i + 1].size, rows[i + 2].size));
  }
  CHECK(flat > hrl);

  // deterministic up to timings
  const auto again = run_bench(catalog(), scenarios, {}, 1);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].size == again[i].size);
    CHECK(rows[i].flags == again[i].flags);
    CHECK(rows[i].trace == again[i].trace);
  }

  const auto report = lines(write_report(rows));
  REQUIRE(report.size() == 34);
  CHECK(report[0] == "scenario,method,E,seconds,flags,sound,E_all");
  CHECK(report[1].rfind("P1,hrl,5,", 0) == 0);
  CHECK(report[31].rfind("mean,hrl,", 0) == 0);
  CHECK(report[32].rfind("mean,oeg,", 0) == 0);
  CHECK(report[33].rfind("mean,peg,", 0) == 0);
}

TEST_CASE("report edge cases") {
  CHECK_THROWS_AS(write_report({}), ModelError);
  ReportRow row;
  row.scenario = "S";
  row.method = Method::Oeg;
  row.size = 4;
  row.sound = true;
  const auto report = lines(write_report({row}));
  REQUIRE(report.size() == 3);
  CHECK(report[1].rfind("S,oeg,4,", 0) == 0);
  CHECK(report[2].rfind("mean,oeg,4.000,", 0) == 0);
}
