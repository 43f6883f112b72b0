// Drives the installed binary end to end: exit codes, report schema,
// byte-stable output, DOT export. The binary path arrives via MATNET_CLI.

#include <nlohmann/json.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "matnet/corpus.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  const char* cli = std::getenv("MATNET_CLI");
  REQUIRE_MESSAGE(cli != nullptr, "MATNET_CLI must point at the binary");
  RunResult result;
  const std::string command = std::string(cli) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buffer;
  size_t got;
  while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0)
    result.out.append(buffer.data(), got);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

fs::path write_example(const std::string& id) {
  for (const matnet::CorpusExample& ex : matnet::corpus()) {
    if (ex.id != id) continue;
    const fs::path path = fs::temp_directory_path() / ("matnet_" + id + ".json");
    std::ofstream out(path);
    out << ex.spec_json;
    return path;
  }
  FAIL("unknown corpus id ", id);
  return {};
}

}  // namespace

TEST_CASE("ctrb fixed: verdict and schema") {
  const fs::path spec = write_example("example1");
  const RunResult r = run("ctrb " + spec.string() + " --mode fixed");
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["schema"] == "matnet-report/1");
  CHECK(doc["backend"] == "exact");
  CHECK(doc["command"] == "ctrb");
  CHECK(doc["controllability"]["subspace_dim"] == 6);
  CHECK(doc["controllability"]["ambient_dim"] == 8);
  CHECK(doc["controllability"]["controllable"] == false);
  CHECK(doc["partition_bound"]["bound"] == 6);
  CHECK(doc["partition_bound"]["containment_verified"] == true);
  CHECK(doc["certificate"]["exists"] == true);
  CHECK(doc["warnings"].size() > 0);  // indefinite example weights
}

TEST_CASE("reports are byte-stable across runs") {
  const fs::path spec = write_example("example1");
  for (const std::string& cmd :
       {std::string("laplacian "), std::string("ctrb "), std::string("ep ")}) {
    const RunResult first = run(cmd + spec.string());
    const RunResult second = run(cmd + spec.string());
    CHECK(first.exit_code == 0);
    CHECK(first.out == second.out);
  }
}

TEST_CASE("float backend flag and env variable") {
  const fs::path spec = write_example("example1");
  const RunResult flagged = run("ctrb " + spec.string() + " --backend float");
  REQUIRE(flagged.exit_code == 0);
  CHECK(json::parse(flagged.out)["backend"] == "float");
  CHECK(json::parse(flagged.out)["controllability"]["subspace_dim"] == 6);

  const char* cli = std::getenv("MATNET_CLI");
  const RunResult via_env = [&] {
    RunResult result;
    const std::string command = std::string("MATNET_BACKEND=float ") + cli +
                                " ctrb " + spec.string() + " 2>/dev/null";
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buffer;
    size_t got;
    while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0)
      result.out.append(buffer.data(), got);
    result.exit_code = WEXITSTATUS(pclose(pipe));
    return result;
  }();
  REQUIRE(via_env.exit_code == 0);
  CHECK(json::parse(via_env.out)["backend"] == "float");
}

TEST_CASE("ep command with explicit partition and DOT export") {
  const fs::path spec = write_example("example1");
  const fs::path dot = fs::temp_directory_path() / "matnet_quotient.dot";
  fs::remove(dot);
  const RunResult r = run("ep " + spec.string() + " --partition \"1|2,3|4\"" +
                          " --dot " + dot.string());
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["equitable"] == true);
  CHECK(doc["partition_source"] == "given");
  CHECK(doc["partition"].size() == 3);
  REQUIRE(fs::exists(dot));
  std::ifstream in(dot);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  CHECK(text.find("graph quotient") != std::string::npos);
  CHECK(text.find("V2") != std::string::npos);

  const RunResult bad =
      run("ep " + spec.string() + " --partition \"1|2,3\"");
  CHECK(bad.exit_code == 2);

  // A valid but non-equitable partition is a verdict, not an error.
  const RunResult refused =
      run("ep " + spec.string() + " --partition \"1|2|3,4\"");
  REQUIRE(refused.exit_code == 0);
  const json refused_doc = json::parse(refused.out);
  CHECK(refused_doc["equitable"] == false);
  CHECK(refused_doc.contains("violation"));
  CHECK_FALSE(refused_doc.contains("quotient_laplacian"));
}

TEST_CASE("laplacian override round trip") {
  const fs::path spec = write_example("example1");
  const RunResult r = run("laplacian " + spec.string());
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["override_used"] == true);
  CHECK(doc["laplacian"][0][0] == 2);
  CHECK(doc["laplacian"][0][1] == 4);
  CHECK(doc["laplacian"][2][2] == -1);
}

TEST_CASE("laplacian of a unit triangle matches the hand value") {
  const fs::path spec = fs::temp_directory_path() / "matnet_triangle.json";
  std::ofstream(spec) << R"({"schema": "matnet/1", "n": 3, "d": 1,
    "leaders": [1],
    "edges": [
      {"i": 1, "j": 2, "weight": [[1]]},
      {"i": 1, "j": 3, "weight": [[1]]},
      {"i": 2, "j": 3, "weight": [[1]]}
    ]})";
  const RunResult r = run("laplacian " + spec.string());
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["override_used"] == false);
  const json expected = json::parse("[[2,-1,-1],[-1,2,-1],[-1,-1,2]]");
  CHECK(doc["laplacian"] == expected);
}

TEST_CASE("obsv command") {
  const fs::path spec = write_example("example6");
  const RunResult r = run("obsv " + spec.string());
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["observability"]["observable"] == false);
  CHECK(doc["observability"]["dual"]["subspace_dim"] == 6);
}

TEST_CASE("union mode with the a-factor flag") {
  const fs::path spec = write_example("example4");
  const RunResult r = run("ctrb " + spec.string() + " --mode union");
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["indeterminate_by_rules"] == true);
  CHECK(doc["union"]["subspace_dim"] == 4);
  CHECK(doc["switched"]["subspace_dim"] == 6);

  const RunResult alt =
      run("ctrb " + spec.string() + " --mode union --union-a-factor 1");
  REQUIRE(alt.exit_code == 0);
  CHECK(json::parse(alt.out)["union_a_factor"] == "1");
}

TEST_CASE("validation failures exit with code 2") {
  CHECK(run("ctrb /nonexistent.json").exit_code == 2);
  const fs::path bad = fs::temp_directory_path() / "matnet_bad.json";
  std::ofstream(bad) << "{\"schema\": \"matnet/1\"";
  CHECK(run("ctrb " + bad.string()).exit_code == 2);
  const fs::path wrong_mode = write_example("example1");
  CHECK(run("ctrb " + wrong_mode.string() + " --mode switching").exit_code ==
        2);
  CHECK(run("ctrb " + wrong_mode.string() + " --mode bogus").exit_code == 2);
}

TEST_CASE("corpus command passes and exports") {
  const RunResult r = run("corpus");
  CHECK(r.exit_code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["all_passed"] == true);
  CHECK(doc["results"].size() == 6);

  const fs::path dir = fs::temp_directory_path() / "matnet_corpus_export";
  fs::create_directories(dir);
  const RunResult exported = run("corpus --export " + dir.string());
  CHECK(exported.exit_code == 0);
  CHECK(fs::exists(dir / "example1.json"));
  CHECK(fs::exists(dir / "example6.json"));
}
