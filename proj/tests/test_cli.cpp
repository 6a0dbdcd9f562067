#include <doctest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const fs::path& scratch_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("curvlab_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

// Runs the CLI with the given argument string; returns the exit code and
// captures combined stdout/stderr.
int run_cli(const std::string& args, std::string* output = nullptr) {
  static int counter = 0;
  const fs::path cap = scratch_dir() / ("out" + std::to_string(counter++));
  const std::string cmd = std::string(CURVLAB_CLI_PATH) + " " + args + " > " +
                          cap.string() + " 2>&1";
  const int raw = std::system(cmd.c_str());
  if (output) *output = slurp(cap);
  if (raw == -1 || !WIFEXITED(raw)) return -1;
  return WEXITSTATUS(raw);
}

}  // namespace

TEST_CASE("cli: emit then check with required conditions") {
  const fs::path scen = scratch_dir() / "product.json";
  CHECK(run_cli("families emit product --out " + scen.string()) == 0);
  CHECK(fs::exists(scen));

  // default product balances the isotropy condition without being Einstein
  CHECK(run_cli("check " + scen.string() + " --require weakly-einstein") == 0);

  std::string out;
  CHECK(run_cli("check " + scen.string() + " --require einstein", &out) == 1);
  CHECK(out.find("require einstein: FAIL") != std::string::npos);

  // a condition that needs shape data is a clean failure here, not an error
  CHECK(run_cli("check " + scen.string() + " --require chen-equality", &out) ==
        1);
  CHECK(out.find("not applicable") != std::string::npos);

  CHECK(run_cli("check " + scen.string() + " --require nonsense", &out) == 2);
  CHECK(out.find("unknown condition") != std::string::npos);
}

TEST_CASE("cli: chen equality holds for the emitted extremal instance") {
  const fs::path scen = scratch_dir() / "chen.json";
  const double c2 = std::sqrt(5.0) / 2.0;
  std::ostringstream cmd;
  // the equality locus is sharp: parameters must carry full precision
  cmd.precision(17);
  cmd << "families emit chen n=4 p=2 c=0 a=0.5 b=0.5 c2=" << c2
      << " d2=0 --out " << scen.string();
  CHECK(run_cli(cmd.str()) == 0);
  CHECK(run_cli("check " + scen.string() +
                " --require weakly-einstein,chen-equality") == 0);

  std::string out;
  CHECK(run_cli("check " + scen.string() + " --json", &out) == 0);
  const nlohmann::json j = nlohmann::json::parse(out);
  CHECK(j.at("report").at("chen").at("equality").get<bool>());
  // emitted scenarios carry shape data, not family identity: no branch
  CHECK_FALSE(j.at("report").contains("branch"));

  // a family-payload scenario keeps the identity and gets the verdict
  const fs::path fam = scratch_dir() / "chen_family.json";
  std::ostringstream ftext;
  ftext.precision(17);
  ftext << "{\"family\": {\"family_id\": \"chen\", \"params\":"
        << " {\"n\": 4, \"p\": 2, \"c\": 0, \"a\": 0.5, \"b\": 0.5,"
        << " \"c2\": " << c2 << ", \"d2\": 0}}}";
  spit(fam, ftext.str());
  CHECK(run_cli("check " + fam.string() + " --json", &out) == 0);
  const nlohmann::json fj = nlohmann::json::parse(out);
  CHECK(fj.at("report").at("branch").at("branch").get<std::string>() ==
        "(ii)");
  CHECK(fj.at("report").at("branch").at("consistent").get<bool>());
}

TEST_CASE("cli: malformed input exits with the schema code") {
  const fs::path bad = scratch_dir() / "bad.json";
  spit(bad, "{\"intrinsic\": {\"dim\": 3}}");
  std::string out;
  CHECK(run_cli("check " + bad.string(), &out) == 2);
  CHECK(out.find("error") != std::string::npos);

  spit(bad, "this is not json");
  CHECK(run_cli("check " + bad.string(), &out) == 2);

  CHECK(run_cli("families emit product alpha", &out) == 2);
  CHECK(run_cli("families emit moebius", &out) == 2);
}

TEST_CASE("cli: directory batches keep path order") {
  const fs::path dir = scratch_dir() / "batch";
  fs::create_directories(dir);
  CHECK(run_cli("families emit product --out " +
                (dir / "a_product.json").string()) == 0);
  CHECK(run_cli("families emit warped --out " +
                (dir / "b_warped.json").string()) == 0);

  std::string out;
  CHECK(run_cli("check " + dir.string(), &out) == 0);
  const auto pa = out.find("a_product.json");
  const auto pb = out.find("b_warped.json");
  CHECK(pa != std::string::npos);
  CHECK(pb != std::string::npos);
  CHECK(pa < pb);

  // one broken file poisons the batch exit code but not the other reports
  spit(dir / "c_bad.json", "{}");
  CHECK(run_cli("check " + dir.string(), &out) == 2);
  CHECK(out.find("a_product.json") != std::string::npos);
  CHECK(out.find("error") != std::string::npos);
}

TEST_CASE("cli: verify runs suites and reports unknown ids") {
  std::string out;
  CHECK(run_cli("verify product --json --seed 1", &out) == 0);
  const nlohmann::json j = nlohmann::json::parse(out);
  CHECK(j.at("pass").get<bool>());
  CHECK(j.at("criterion").get<int>() == 2);

  CHECK(run_cli("verify bogus-suite", &out) == 2);
  CHECK(out.find("known suites:") != std::string::npos);
  CHECK(out.find("berger") != std::string::npos);
}

TEST_CASE("cli: plane minimum of a constant curvature scenario") {
  const fs::path scen = scratch_dir() / "cc3.json";
  spit(scen,
       "{\"intrinsic\": {\"dim\": 3, \"components\":"
       " [[0,1,0,1,-2.0],[0,2,0,2,-2.0],[1,2,1,2,-2.0]]}}");
  std::string out;
  CHECK(run_cli("infk " + scen.string() + " --json --restarts 8", &out) == 0);
  const nlohmann::json j = nlohmann::json::parse(out);
  CHECK(j.at("converged").get<bool>());
  CHECK(std::abs(j.at("value").get<double>() - 2.0) <= 1e-9);
  CHECK(j.at("spread").is_null());
  CHECK(j.at("u").size() == 3);
}

TEST_CASE("cli: search resolves free parameters") {
  const fs::path spec = scratch_dir() / "search_product.json";
  const fs::path solved = scratch_dir() / "solved_product.json";
  spit(spec,
       "{\"family\": \"product\","
       " \"params\": {\"n1\": 2, \"c1\": 1.0, \"n2\": 3}}");
  std::string out;
  CHECK(run_cli("search " + spec.string() + " --json --out " + solved.string(),
                &out) == 0);
  const nlohmann::json j = nlohmann::json::parse(out);
  CHECK(j.at("certified_weakly_einstein").get<bool>());
  // c2^2 (n2 - 1) = c1^2 (n1 - 1) forces c2 = 1/sqrt(2)
  CHECK(std::abs(j.at("params").at("c2").get<double>() -
                 1.0 / std::sqrt(2.0)) <= 1e-12);
  CHECK(fs::exists(solved));
  CHECK(run_cli("check " + solved.string() + " --require weakly-einstein") ==
        0);

  // a line cannot balance a sphere
  spit(spec,
       "{\"family\": \"product\","
       " \"params\": {\"n1\": 2, \"c1\": 1.0, \"n2\": 1}}");
  CHECK(run_cli("search " + spec.string(), &out) == 1);
  CHECK(out.find("no solution") != std::string::npos);

  // missing family field is a schema error
  spit(spec, "{\"params\": {}}");
  CHECK(run_cli("search " + spec.string(), &out) == 2);
}

TEST_CASE("cli: search solves the curved chen slice numerically") {
  const fs::path spec = scratch_dir() / "search_chen.json";
  const fs::path solved = scratch_dir() / "solved_chen.json";
  const double w = std::sqrt(2.0 / 3.0);
  std::ostringstream text;
  // the isotropy system is overdetermined in b, so a must sit on the
  // solution locus to full precision for an exact root to exist
  text.precision(17);
  text << "{\"family\": \"chen\", \"params\":"
       << " {\"n\": 3, \"p\": 1, \"c\": -1.0, \"a\": " << w
       << ", \"b0\": " << 0.9 * w << "}}";
  spit(spec, text.str());
  std::string out;
  CHECK(run_cli("search " + spec.string() + " --json --out " + solved.string(),
                &out) == 0);
  const nlohmann::json j = nlohmann::json::parse(out);
  CHECK(j.at("certified_weakly_einstein").get<bool>());
  CHECK(std::abs(j.at("params").at("b").get<double>() - w) <= 1e-6);
  CHECK(run_cli("check " + solved.string() + " --require weakly-einstein") ==
        0);
}

TEST_CASE("cli: emitted diagonal family instances certify in one pipeline") {
  const fs::path scen = scratch_dir() / "r6.json";
  CHECK(run_cli("families emit r6_24 alpha=1 beta=1 gamma=2 --out " +
                scen.string()) == 0);
  std::string out;
  CHECK(run_cli("check " + scen.string() + " --require weakly-einstein --json",
                &out) == 0);
  const nlohmann::json j = nlohmann::json::parse(out);
  CHECK(j.at("require").at("weakly_einstein").get<bool>());
  // isotropic without being Einstein, so the stronger flag stays off
  const auto& flags = j.at("report").at("conditions").at("flags");
  CHECK(flags.at("weakly_einstein").get<bool>());
  CHECK_FALSE(flags.at("einstein").get<bool>());
  CHECK_FALSE(flags.at("two_stein").get<bool>());
}

TEST_CASE("cli: umbilical extrinsic scenario satisfies every condition") {
  const fs::path scen = scratch_dir() / "round.json";
  spit(scen,
       "{\"extrinsic\": {\"ambient\": {\"dim\": 5, \"curvature\": 0},"
       " \"submanifold_dim\": 4, \"shape_operators\":"
       " [[[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]]}}");
  CHECK(run_cli("check " + scen.string() +
                " --require einstein,weakly-einstein,two-stein,"
                "semisymmetric") == 0);
}
