#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "charvar/cli.hpp"
#include "charvar/json_io.hpp"
#include "fixtures.hpp"

using namespace charvar;

namespace {

const char* kSphere = R"({"points":[0,1,[0.3,0.4]],"orders":[3,0,0],"order_infinity":0,"accessory":[[0.1,0.2]]})";

Json report_of(const CliOutcome& o) {
  REQUIRE_FALSE(o.report.empty());
  return parse_json_text(o.report);
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << content;
  return p;
}

int exit_status(const std::string& cmd) {
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_CASE("identities") {
  const CliOutcome o = run_cli({"identities", "--sig", R"({"g":2,"elliptic":[],"cusps":0})"});
  CHECK(o.exit_code == 0);
  const Json r = report_of(o);
  CHECK(r.at("status") == "ok");
  CHECK(r.at("command") == "identities");
  CHECK(r.at("version") == CHARVAR_VERSION);
  for (const auto& c : r.at("checks"))
    if (c.at("required").get<bool>()) CHECK(c.at("status") == "pass");
}

TEST_CASE("fox") {
  const CliOutcome o = run_cli({"fox", "--sig", R"({"g":1,"elliptic":[],"cusps":0})", "--word", "R", "--gen", "a1"});
  CHECK(o.exit_code == 0);
  const Json r = report_of(o);
  std::map<std::string, long long> terms;
  for (const auto& t : r.at("derivative")) terms[t.at("word")] = t.at("coefficient");
  CHECK(terms == std::map<std::string, long long>{{"1", 1}, {"a1 b1 a1^-1", -1}});
  CHECK(run_cli({"fox", "--sig", R"({"g":1,"elliptic":[],"cusps":0})", "--word", "a3", "--gen", "a1"}).exit_code == 1);
}

TEST_CASE("input errors exit with 1") {
  CHECK(run_cli({"kawai", "--config", "/nonexistent/missing.json"}).exit_code == 1);
  CHECK(run_cli({"monodromy", "--json", "{not json"}).exit_code == 1);
  CHECK(run_cli({"monodromy", "--json", R"({"points":[0,1],"orders":[0]})"}).exit_code == 1);
  CHECK(run_cli({"identities", "--sig", R"({"g":-1})"}).exit_code == 1);
  CHECK(run_cli({"nosuchcommand"}).exit_code == 1);
  CHECK(run_cli({"monodromy", "--json", kSphere, "--tol", "relation"}).exit_code == 1);
}

TEST_CASE("tolerance failures exit with 2 and still report") {
  const CliOutcome o = run_cli({"monodromy", "--json", kSphere, "--tol", "relation=1e-30"});
  CHECK(o.exit_code == 2);
  const Json r = report_of(o);
  CHECK(r.at("status") == "tolerance_failure");
  CHECK_FALSE(r.at("failures").empty());
  CHECK(r.at("tolerances").at("relation").get<double>() == 1e-30);
}

TEST_CASE("monodromy report") {
  const CliOutcome o = run_cli({"monodromy", "--json", kSphere});
  CHECK(o.exit_code == 0);
  const Json r = report_of(o);
  CHECK(r.at("relation_residual").get<double>() <= 1e-6);
  CHECK(r.at("tolerances").at("trace").get<double>() == 1e-6);
  const Representation rep = representation_from_json(r.at("representation"));
  CHECK(rep.signature().marked_orders() == std::vector<int>{0, 0, 3, 0});
  CHECK(rep.check().ok());
}

TEST_CASE("reports are deterministic") {
  const std::vector<std::string> args{"monodromy", "--json", kSphere};
  CHECK(run_cli(args).report == run_cli(args).report);
  const std::vector<std::string> lam{"lambda-check"};
  const CliOutcome a = run_cli(lam);
  CHECK(a.exit_code == 0);
  CHECK(a.report == run_cli(lam).report);
}

TEST_CASE("goldman bundle matches the library") {
  const SphereData d = charvar::testing::four_point_sphere({0.3, 0.4}, 3, 0, 0, 0, {0.1, 0.2});
  auto rho = std::make_shared<const Representation>(monodromy_representation(d).rep);
  const auto basis = charvar::testing::parabolic_cocycle_basis(rho);
  charvar::testing::Rng rng(3);
  const Cocycle x = charvar::testing::random_parabolic_cocycle(basis, rng);
  const Cocycle y = charvar::testing::random_parabolic_cocycle(basis, rng);
  const Json bundle{{"representation", to_json(*rho)}, {"cocycle1", to_json(x)}, {"cocycle2", to_json(y)}};
  const auto path = temp_file("charvar_goldman_bundle.json", dump_json(bundle));
  const CliOutcome o = run_cli({"goldman", "-i", path.string()});
  CHECK(o.exit_code == 0);
  const Json r = report_of(o);
  const Complex v = complex_from_json(r.at("value"));
  const PairingReport lib = goldman_orbifold(*rho, x, y);
  CHECK(std::abs(v - lib.value) <= 1e-12 * std::max(1.0, lib.scale));
  CHECK(r.at("p2_list").size() == 4);
}

TEST_CASE("kawai config") {
  const std::string cfg = std::string(R"({"sphere":)") + kSphere +
                          R"(,"t_directions":[[0,0,1]],"grid":[{"dc":[0]},{"dc":[0.05]}]})";
  const auto path = temp_file("charvar_kawai.json", cfg);
  const CliOutcome o = run_cli({"kawai", "-c", path.string()});
  CHECK(o.exit_code == 0);
  const Json r = report_of(o);
  CHECK(r.at("grid").size() == 2);
  CHECK(r.at("tolerances").contains("fiber_isotropy"));
}

TEST_CASE("executable exit codes and output file") {
  const std::string exe = CHARVAR_CLI_PATH;
  const auto out = std::filesystem::temp_directory_path() / "charvar_ident.json";
  std::filesystem::remove(out);
  CHECK(exit_status(exe + R"( identities --sig '{"g":1,"elliptic":[2],"cusps":1}' -o )" + out.string()) == 0);
  CHECK(std::filesystem::exists(out));
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(parse_json_text(ss.str()).at("status") == "ok");
  CHECK(exit_status(exe + " kawai --config /nonexistent/missing.json 2>/dev/null") == 1);
  CHECK(exit_status(exe + " monodromy --json '" + kSphere + "' --tol relation=1e-30 >/dev/null") == 2);
  CHECK(exit_status(exe + " --version >/dev/null") == 0);
}
