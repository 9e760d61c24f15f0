#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string& args) {
  const std::string cmd = std::string(EXPLANE_CLI) + " " + args + " 2>&1";
  Result r;
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
  REQUIRE(pipe);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe.get())) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe.release());
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const std::string& rel) { return std::string(EXPLANE_DATA_DIR) + "/scavenger/" + rel; }
std::string fixture(const std::string& rel) { return std::string(EXPLANE_FIXTURE_DIR) + "/" + rel; }

fs::path scratch() {
  auto dir = fs::temp_directory_path() / "explane_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string write(const std::string& name, const std::string& text) {
  const auto p = scratch() / name;
  std::ofstream(p) << text;
  return p.string();
}

}  // namespace

TEST_CASE("usage errors exit with 1") {
  CHECK(run("").code == 1);
  CHECK(run("nonsense").code == 1);
  CHECK(run("plan").code == 1);
  CHECK(run("explain --scenario " + data("power_out.json") + " --method magic").code == 1);
}

TEST_CASE("parse") {
  auto r = run("parse " + data("domain.pddl"));
  CHECK(r.code == 0);
  CHECK(r.out.find("(define (domain scavenger)") != std::string::npos);
  CHECK(r.out.find("14 actions") != std::string::npos);
  const auto bad = write("bad.pddl", "(define (domain d)\n (:predicates (p");
  r = run("parse " + bad);
  CHECK(r.code == 2);
  CHECK(r.out.find("line 2") != std::string::npos);
  CHECK(run("parse " + (scratch() / "missing.pddl").string()).code != 0);
}

TEST_CASE("plan") {
  auto r = run("plan " + data("domain.pddl") + " " + data("problem.pddl"));
  CHECK(r.code == 0);
  CHECK(r.out.rfind("0: (move room1 room5)\n1: (ride-elevator room5)\n", 0) == 0);
  r = run("plan " + fixture("listing.pddl") + " " + fixture("listing_problem.pddl") + " --kernel serial");
  CHECK(r.code == 0);
  CHECK(r.out.find("0: (putout_fire fourth)") != std::string::npos);

  const auto csv = (scratch() / "values.csv").string();
  CHECK(run("plan " + fixture("listing.pddl") + " " + fixture("listing_problem.pddl") + " --values " + csv).code == 0);
  CHECK(fs::file_size(csv) > 0);

  const auto stuck = write("stuck.pddl",
                           "(define (problem stuck) (:domain scavenger-listing)"
                           " (:objects second - roomTWO fifth - roomFive fourth - roomFour)"
                           " (:init (at fourth)) (:goal (and (no_fire))))");
  CHECK(run("plan " + fixture("listing.pddl") + " " + stuck).code == 3);
}

TEST_CASE("diff") {
  auto r = run("diff --domain " + data("domain.pddl") + " " + data("problem.pddl") + " " + data("problem.pddl"));
  CHECK(r.code == 0);
  CHECK(r.out.find("distance 0") != std::string::npos);
}

TEST_CASE("explain") {
  auto r = run("explain --scenario " + data("power_out.json") + " --format json");
  REQUIRE(r.code == 0);
  const auto start = r.out.find('[');
  REQUIRE(start != std::string::npos);
  const auto end = r.out.rfind(']');
  auto j = nlohmann::json::parse(r.out.substr(start, end - start + 1));
  REQUIRE(j.size() == 1);
  CHECK(j[0]["option"] == "power-out");
  CHECK(j[0]["level"] == "intent-only");

  r = run("explain --scenario " + data("power_out.json") + " --format english");
  CHECK(r.code == 0);
  CHECK(r.out.find("power outage") != std::string::npos);

  r = run("explain --scenario " + data("scenarios/P2.json") + " --method oeg --trace");
  CHECK(r.code == 0);
  CHECK(r.out.find(" | questionable | ") != std::string::npos);

  const auto unknown = write("unknown.json", R"({"id": "U", "changes": ["meteor"], "inject": [], "seed": 1})");
  CHECK(run("explain --scenario " + unknown).code == 2);
  const auto broken = write("broken.json", "{\"id\": ");
  CHECK(run("explain --scenario " + broken).code == 2);
}

TEST_CASE("bench writes the CSV report") {
  const auto dir = scratch() / "scenarios";
  fs::remove_all(dir);
  fs::create_directories(dir);
  fs::copy_file(data("power_out.json"), dir / "power_out.json", fs::copy_options::overwrite_existing);
  const auto out = (scratch() / "report.csv").string();
  auto r = run("bench --scenarios " + dir.string() + " --out " + out + " --seed 2");
  CHECK(r.code == 0);
  std::ifstream in(out);
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  CHECK(header == "scenario,method,E,seconds,flags,sound,E_all");
  CHECK(first.rfind("power-out,hrl,1,", 0) == 0);
}
