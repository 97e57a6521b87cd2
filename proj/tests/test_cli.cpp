#include "qcorr/serialize.hpp"

#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

// Drives the installed command-line binary as a subprocess. The test runner
// exports QCORR_CLI with the binary's path.

namespace {

namespace fs = std::filesystem;

using qcorr::Json;

const std::string& cli() {
  static const std::string path = [] {
    const char* p = std::getenv("QCORR_CLI");
    return std::string(p ? p : "");
  }();
  return path;
}

const fs::path& scratch() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "qcorr_cli_suite";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(const std::string& args) {
  const int rc = std::system((cli() + " " + args).c_str());
  REQUIRE(rc != -1);
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::string path(const char* name) { return (scratch() / name).string(); }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("the binary is reachable") {
  REQUIRE_FALSE(cli().empty());
  REQUIRE(fs::exists(cli()));
}

TEST_CASE("generate, validate, trace, check, realize, analyze") {
  qcorr::write_text_file(path("spec.json"),
                         "{\"P\": {\"blocks\": [2, 1]}, \"O\": {\"blocks\": [2, 1]}, \"d\": 4}\n");

  CHECK(run("random-family " + path("spec.json") + " --seed 7 --out " + path("fam.json")) == 0);
  CHECK(run("validate-family " + path("fam.json") + " --out " + path("vrep.json")) == 0);
  const Json vrep = qcorr::load_json_file(path("vrep.json"));
  CHECK(vrep["pass"].get<bool>());
  CHECK(vrep["product_residual"].get<double>() <= 1e-10);

  CHECK(run("validate-povm " + path("fam.json") + " --out " + path("prep.json")) == 0);
  CHECK(qcorr::load_json_file(path("prep.json"))["pass"].get<bool>());

  CHECK(run("from-trace " + path("fam.json") + " --out " + path("ten.json")) == 0);
  CHECK(run("check-correlation " + path("ten.json") + " --out " + path("crep.json")) == 0);
  const Json crep = qcorr::load_json_file(path("crep.json"));
  CHECK(crep["pass"].get<bool>());
  CHECK(crep["synchronous"].get<bool>());
  CHECK(crep["sync_sum"].get<double>() == doctest::Approx(2.0));
  CHECK(crep["entangled_sync_value"][0].get<double>() == doctest::Approx(1.0));

  CHECK(run("gns-realize " + path("fam.json") + " --out " + path("real.json")) == 0);
  CHECK(run("analyze-sync " + path("real.json") + " --out " + path("srep.json")) == 0);
  const Json srep = qcorr::load_json_file(path("srep.json"));
  CHECK(srep["pass"].get<bool>());
  CHECK(srep["checks_run"].get<bool>());
  CHECK(srep["wu_residual"].get<double>() <= 1e-12);

  // The realization rebuilds the same tensor the trace construction gave.
  CHECK(run("build-correlation " + path("real.json") + " --out " + path("ten2.json")) == 0);
  const qcorr::CorrelationTensor a =
      qcorr::correlation_from_json(qcorr::load_json_file(path("ten.json")));
  const qcorr::CorrelationTensor b =
      qcorr::correlation_from_json(qcorr::load_json_file(path("ten2.json")));
  REQUIRE(a.size() == b.size());
  double diff = 0.0;
  for (std::size_t w = 0; w < a.size(); ++w) {
    diff = std::max(diff, std::abs(a.raw()[w] - b.raw()[w]));
  }
  CHECK(diff <= 1e-12);
}

TEST_CASE("generation is deterministic in the seed") {
  qcorr::write_text_file(path("dspec.json"),
                         "{\"P\": {\"blocks\": [2]}, \"O\": {\"blocks\": [2]}, \"d\": 2}\n");
  CHECK(run("random-family " + path("dspec.json") + " --seed 5 --out " + path("da.json")) == 0);
  CHECK(run("random-family " + path("dspec.json") + " --seed 5 --out " + path("db.json")) == 0);
  CHECK(run("random-family " + path("dspec.json") + " --seed 6 --out " + path("dc.json")) == 0);
  CHECK(slurp(path("da.json")) == slurp(path("db.json")));
  CHECK(slurp(path("da.json")) != slurp(path("dc.json")));
}

TEST_CASE("verdict failures exit 1 and name the defect") {
  qcorr::write_text_file(path("bspec.json"),
                         "{\"P\": {\"blocks\": [1]}, \"O\": {\"blocks\": [2]}, \"d\": 2}\n");
  CHECK(run("random-family " + path("bspec.json") + " --seed 1 --out " + path("bfam.json")) == 0);

  Json j = qcorr::load_json_file(path("bfam.json"));
  j["gens"][0][0][0][1][0][0][0][0][0] = 10.0;
  qcorr::write_text_file(path("bfam.json"), qcorr::dump_json(j));

  CHECK(run("validate-family " + path("bfam.json") + " --out " + path("brep.json")) == 1);
  const Json rep = qcorr::load_json_file(path("brep.json"));
  CHECK_FALSE(rep["pass"].get<bool>());
  CHECK(rep["adjoint_worst"][3].get<int>() == 1);  // the perturbed column index
}

TEST_CASE("malformed input exits 2 and cites the byte offset") {
  qcorr::write_text_file(path("trunc.json"), "{\"P\": {\"blocks\": [2, ");
  CHECK(run("validate-family " + path("trunc.json") + " 2> " + path("trunc.err")) == 2);
  const std::string err = slurp(path("trunc.err"));
  CHECK(err.find("error:") != std::string::npos);
  CHECK(err.find("byte") != std::string::npos);
}

TEST_CASE("unsatisfiable generation parameters exit 2") {
  qcorr::write_text_file(path("uspec.json"),
                         "{\"P\": {\"blocks\": [1]}, \"O\": {\"blocks\": [2]}, \"d\": 3}\n");
  CHECK(run("random-family " + path("uspec.json") + " 2> " + path("uspec.err")) == 2);
  CHECK(slurp(path("uspec.err")).find("question block") != std::string::npos);
}

TEST_CASE("classical tables render to csv or nested json") {
  qcorr::write_text_file(path("cspec.json"),
                         "{\"P\": {\"blocks\": [1, 1]}, \"O\": {\"blocks\": [1, 1]}, \"d\": 1}\n");
  CHECK(run("random-family " + path("cspec.json") + " --seed 3 --out " + path("cfam.json")) == 0);
  CHECK(run("from-trace " + path("cfam.json") + " --out " + path("cten.json")) == 0);

  CHECK(run("classical-table " + path("cten.json") + " --out " + path("table.csv") + " > " +
            path("csv.report")) == 0);
  const std::string csv = slurp(path("table.csv"));
  CHECK(csv.rfind("k,k',l,l',p\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 17);  // header plus 2*2*2*2 rows
  // The verdict report still lands on standard output.
  CHECK(qcorr::load_json_file(path("csv.report"))["pass"].get<bool>());

  CHECK(run("classical-table " + path("cten.json") + " --out " + path("table.json")) == 0);
  const Json doc = qcorr::load_json_file(path("table.json"));
  CHECK(doc["pass"].get<bool>());
  CHECK(doc["p"].size() == 2);
  CHECK(doc["p"][0][0][0].size() == 2);
}

TEST_CASE("reports render as aligned text with --table") {
  qcorr::write_text_file(path("tspec.json"),
                         "{\"P\": {\"blocks\": [1]}, \"O\": {\"blocks\": [2]}, \"d\": 2}\n");
  CHECK(run("random-family " + path("tspec.json") + " --seed 2 --out " + path("tfam.json")) == 0);
  CHECK(run("validate-family " + path("tfam.json") + " --table --out " + path("tout.txt")) == 0);
  const std::string text = slurp(path("tout.txt"));
  CHECK(text.rfind("pass", 0) == 0);
  CHECK(text.find("true") != std::string::npos);
  CHECK(text.find("{") == std::string::npos);  // not JSON
}

TEST_CASE("pisier runs from a serialized embedding") {
  const qcorr::QuantumSpace s({2});
  const qcorr::BlockLinearMap em = qcorr::BlockLinearMap::identity(s);
  qcorr::write_text_file(path("embed.json"), qcorr::dump_json(qcorr::to_json(em)));
  CHECK(run("pisier " + path("embed.json") + " --out " + path("pis.json")) == 0);
  const Json rep = qcorr::load_json_file(path("pis.json"));
  CHECK(rep["pass"].get<bool>());
  CHECK(rep["n"].get<int>() == 2);
  CHECK(rep["commutant_dim"].get<int>() == 1);
  CHECK(rep["gamma_min_singular"].get<double>() == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("usage errors exit 2") {
  CHECK(run("2> /dev/null") == 2);                        // no command
  CHECK(run("no-such-command 2> /dev/null") == 2);        // unknown command
  CHECK(run("validate-family 2> /dev/null") == 2);        // missing input
  CHECK(run("validate-family /tmp/qcorr_definitely_missing.json 2> /dev/null") == 2);
}

}  // TEST_SUITE
