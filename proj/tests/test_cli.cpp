#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "support.hpp"

using namespace drtest;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
  Json json() const { return Json::parse(out); }
};

Run cli_run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string write_case(const std::string& name, const std::string& case_name, const std::string& file) {
  fs::path dir = fs::temp_directory_path() / "drclosure_test_cli";
  fs::create_directories(dir);
  fs::path p = dir / file;
  std::ofstream(p) << case_json(fixture(name), case_name).dump(2);
  return p.string();
}

}  // namespace

TEST_CASE("validate and levels") {
  auto path = write_case("unmarked_zeros", "", "uz.json");
  auto r = cli_run({"validate", path});
  CHECK(r.code == 0);
  auto j = r.json();
  CHECK(j.begin().key() == "version");
  CHECK(j["graph"]["ok"] == true);
  CHECK(j["twr"]["ok"] == true);
  CHECK(j["twdr"]["ok"] == false);

  auto l = cli_run({"levels", path});
  CHECK(l.code == 0);
  CHECK(l.json()["count"] == 3);
  CHECK(cli_run({"levels", path, "--max-levels", "1"}).json()["count"] == 1);
}

TEST_CASE("ev and constraints") {
  auto path = write_case("unmarked_zeros", "", "uz.json");
  auto r = cli_run({"ev", path, "--all"});
  CHECK(r.code == 0);
  auto j = r.json();
  CHECK(j["0"]["vanishes"] == "conditional");
  CHECK(j["-1"]["vanishes"] == true);
  auto one = cli_run({"ev", path, "--level", "-1"}).json();
  CHECK_FALSE(one.contains("0"));
  auto c = cli_run({"constraints", path});
  CHECK(c.code == 0);
  CHECK(c.json()["dimension"] == 1);
}

TEST_CASE("twist then stabilize through the CLI") {
  auto path = write_case("horizontal_nodes", "twr", "hn.json");
  auto t = cli_run({"twist", path});
  REQUIRE(t.code == 0);
  fs::path twdr = fs::temp_directory_path() / "drclosure_test_cli" / "hn_twdr.json";
  std::ofstream(twdr) << t.json()["twdr"].dump();
  auto s = cli_run({"stabilize", twdr.string()});
  REQUIRE(s.code == 0);
  auto back = s.json()["twr"];
  auto orig = case_json(fixture("horizontal_nodes"), "twr");
  CHECK(back["levels"] == orig["levels"]);
  CHECK(back["decoration"]["orders"].size() == orig["decoration"]["orders"].size());
}

TEST_CASE("hurwitz exit codes") {
  auto yes = cli_run({"hurwitz", "--degree", "3", "--genus", "1", "--profile", "3", "--profile", "1,1,1", "--profile",
                      "2,1", "--count", "4"});
  CHECK(yes.code == 0);
  CHECK(yes.json()["exists"] == true);
  auto no = cli_run({"hurwitz", "--degree", "4", "--profile", "2,2", "--profile", "2,2", "--profile", "3,1"});
  CHECK(no.code == 1);
  CHECK(no.json()["rh"] == true);
  auto bad = cli_run({"hurwitz", "--degree", "2", "--profile", "2,0"});
  CHECK(bad.code == 2);
  CHECK(bad.json()["error"]["pointer"] == "--profile");
}

TEST_CASE("cover and check-closure") {
  auto graph = write_case("dollar", "G1", "dollar_g1.json");
  auto full = case_json(fixture("dollar"), "G1");
  fs::path cover = fs::temp_directory_path() / "drclosure_test_cli" / "dollar_cover.json";
  Json cj = full["cover"];
  cj["version"] = 1;
  std::ofstream(cover) << cj.dump();
  auto c = cli_run({"cover", cover.string(), "--graph", graph});
  CHECK(c.code == 0);
  CHECK(c.json()["accepted"] == true);

  auto s = cli_run({"check-closure", "--graph", graph});
  CHECK(s.code == 0);
  auto sj = s.json();
  CHECK(sj["member"] == "yes");
  REQUIRE(sj["certificates"].size() >= 1);

  fs::path cert = fs::temp_directory_path() / "drclosure_test_cli" / "dollar_cert.json";
  Json certj = sj["certificates"][0];
  certj["version"] = 1;
  std::ofstream(cert) << certj.dump();
  auto v = cli_run({"check-closure", "--graph", graph, "--certificate", cert.string()});
  CHECK(v.code == 0);

  auto tight = cli_run({"check-closure", "--graph", graph, "--bounds", "mult=1,certificates=1"});
  CHECK(tight.json()["certificates"].size() == 1);
  auto broken = cli_run({"check-closure", "--graph", graph, "--bounds", "mult=x"});
  CHECK(broken.code == 2);
}

TEST_CASE("errors carry a pointer into the document") {
  fs::path p = fs::temp_directory_path() / "drclosure_test_cli" / "broken.json";
  std::ofstream(p) << R"({"version": 1, "vertices": [{"id": "A", "genus": 0}], "edges": [{"id": "e", "ends": ["A", "B"]}], "legs": []})";
  auto r = cli_run({"validate", p.string()});
  CHECK(r.code == 2);
  CHECK(r.json()["error"]["pointer"] == "/edges/0/ends/1");
  fs::path v = fs::temp_directory_path() / "drclosure_test_cli" / "version.json";
  std::ofstream(v) << R"({"version": 2, "vertices": [], "edges": [], "legs": []})";
  CHECK(cli_run({"validate", v.string()}).code == 2);
  CHECK(cli_run({"validate", "/nonexistent/file.json"}).code == 2);
  CHECK(cli_run({}).code == 2);
}

TEST_CASE("pretty output and determinism") {
  auto path = write_case("dollar", "G2", "dollar_g2.json");
  auto a = cli_run({"check-closure", "--graph", path});
  auto b = cli_run({"check-closure", "--graph", path});
  CHECK(a.out == b.out);
  auto pretty = cli_run({"levels", path, "--pretty"});
  CHECK(pretty.code == 0);
  CHECK(pretty.out.find("count: 3") != std::string::npos);
}

TEST_CASE("fixture corpus") {
  auto files = cli::fixture_files(DRCLOSURE_FIXTURE_DIR);
  CHECK(files.size() >= 6);
  for (const auto& f : files) {
    auto check = cli::check_fixture(cli::load_json(f));
    CHECK_MESSAGE(check.passed, f.string());
  }
  auto r = cli_run({"fixtures", "--check"});
  CHECK(r.code == 0);
  auto tampered = fixture("unmarked_zeros");
  tampered["expected"]["level_structures"] = 4;
  auto bad = cli::check_fixture(tampered);
  CHECK_FALSE(bad.passed);
  CHECK(bad.mismatches == std::vector<std::string>{"/expected/level_structures"});
}
