// curvlab: scenario-driven checks, verification suites, family generation.
//
// Exit codes: 0 success; 1 a requested condition fails or a parameter
// search is infeasible; 2 input/schema error; 3 solver non-convergence.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "curvlab/scenario.hpp"
#include "curvlab/solver.hpp"
#include "curvlab/suites.hpp"

namespace fs = std::filesystem;
using curvlab::Error;
using curvlab::FamilyId;
using curvlab::FamilyInstance;
using curvlab::NonConvergence;
using curvlab::NoSolution;
using curvlab::Report;
using curvlab::Scenario;
using curvlab::SchemaError;
using curvlab::UnknownSuite;
using json = nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kConditionFail = 1;
constexpr int kInputError = 2;
constexpr int kNonConvergence = 3;

std::string normalize(std::string s) {
  std::replace(s.begin(), s.end(), '-', '_');
  return s;
}

std::vector<std::string> split_csv(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(normalize(item));
  }
  return out;
}

const std::vector<std::string> kRequirable = {
    "einstein", "weakly_einstein", "two_stein", "semisymmetric",
    "chen_equality"};

// nullopt when the condition is not applicable to this report
std::optional<bool> condition_value(const Report& r, const std::string& name) {
  const auto& f = r.conditions.flags;
  if (name == "einstein") return f.einstein;
  if (name == "weakly_einstein") return f.weakly_einstein;
  if (name == "two_stein") return f.two_stein;
  if (name == "semisymmetric") return f.semisymmetric;
  if (name == "chen_equality") {
    if (!r.chen) return std::nullopt;
    return r.chen->equality;
  }
  return std::nullopt;
}

std::map<std::string, double> params_from_kv(
    const std::vector<std::string>& kvs) {
  std::map<std::string, double> out;
  for (const std::string& kv : kvs) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw SchemaError("parameter '" + kv + "' is not of the form key=value");
    }
    try {
      std::size_t used = 0;
      const double v = std::stod(kv.substr(eq + 1), &used);
      if (used != kv.size() - eq - 1) throw std::invalid_argument(kv);
      out[kv.substr(0, eq)] = v;
    } catch (const std::exception&) {
      throw SchemaError("parameter '" + kv + "' has a non-numeric value");
    }
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw SchemaError("cannot write '" + path + "'");
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

// ---------------------------------------------------------------------------
// check

struct CheckedItem {
  std::string path;
  int err = kOk;
  std::string msg;
  std::optional<Report> rep;
};

int do_check(const std::string& path, const std::string& require_csv,
             bool as_json, bool want_infk, int restarts, double tol,
             bool tol_set, std::uint64_t seed, bool seed_set) {
  const std::vector<std::string> required = split_csv(require_csv);
  for (const std::string& r : required) {
    if (std::find(kRequirable.begin(), kRequirable.end(), r) ==
        kRequirable.end()) {
      std::cerr << "unknown condition '" << r << "'; choose from:";
      for (const auto& k : kRequirable) std::cerr << ' ' << k;
      std::cerr << '\n';
      return kInputError;
    }
  }

  std::vector<fs::path> files;
  std::error_code ec;
  if (fs::is_directory(path, ec)) {
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
      std::cerr << "no .json scenario files in '" << path << "'\n";
      return kInputError;
    }
  } else {
    files.emplace_back(path);
  }

  auto eval_one = [&](const fs::path& p) {
    CheckedItem item;
    item.path = p.string();
    try {
      Scenario s = curvlab::load_scenario(p.string());
      if (tol_set) s.tolerance = tol;
      if (seed_set) s.seed = seed;
      curvlab::EvalOptions eo;
      eo.restarts = restarts;
      eo.want_infk = want_infk;
      item.rep = curvlab::evaluate(s, eo);
    } catch (const SchemaError& e) {
      item.err = kInputError;
      item.msg = e.what();
    } catch (const NonConvergence& e) {
      item.err = kNonConvergence;
      item.msg = e.what();
    } catch (const Error& e) {
      item.err = kInputError;
      item.msg = e.what();
    }
    return item;
  };

  std::vector<std::future<CheckedItem>> futures;
  futures.reserve(files.size());
  for (const fs::path& p : files) {
    futures.push_back(std::async(std::launch::async, eval_one, p));
  }

  bool any_required_failed = false;
  int worst_err = kOk;
  json out_all = json::array();
  for (auto& fut : futures) {
    const CheckedItem item = fut.get();
    json entry;
    entry["path"] = item.path;
    if (item.err != kOk) {
      worst_err = (worst_err == kInputError || item.err == kInputError)
                      ? kInputError
                      : std::max(worst_err, item.err);
      entry["error"] = item.msg;
      if (!as_json) {
        if (files.size() > 1) std::cout << "== " << item.path << " ==\n";
        std::cout << "error: " << item.msg << '\n';
      }
      out_all.push_back(entry);
      continue;
    }
    json req;
    std::vector<std::string> req_lines;
    for (const std::string& name : required) {
      const std::optional<bool> v = condition_value(*item.rep, name);
      const bool ok = v.value_or(false);
      if (!ok) any_required_failed = true;
      req[name] = ok;
      req_lines.push_back("require " + name + ": " +
                          (v.has_value() ? (ok ? "ok" : "FAIL")
                                         : "FAIL (not applicable)"));
    }
    if (as_json) {
      entry["report"] = json::parse(curvlab::report_to_json(*item.rep));
      if (!required.empty()) entry["require"] = req;
      out_all.push_back(entry);
    } else {
      if (files.size() > 1) std::cout << "== " << item.path << " ==\n";
      std::cout << curvlab::report_to_text(*item.rep);
      for (const std::string& line : req_lines) std::cout << line << '\n';
    }
  }
  if (as_json) {
    std::cout << (files.size() == 1 && out_all.size() == 1
                      ? out_all.front().dump(2)
                      : out_all.dump(2))
              << '\n';
  }
  if (worst_err != kOk) return worst_err;
  return any_required_failed ? kConditionFail : kOk;
}

// ---------------------------------------------------------------------------
// infk

int do_infk(const std::string& path, bool as_json, int restarts, double tol,
            bool tol_set, std::uint64_t seed, bool seed_set) {
  Scenario s = curvlab::load_scenario(path);
  if (tol_set) s.tolerance = tol;
  if (seed_set) s.seed = seed;
  curvlab::EvalOptions eo;
  eo.restarts = restarts;
  eo.want_infk = true;
  const Report rep = curvlab::evaluate(s, eo);
  if (!rep.plane) {
    std::cerr << "scenario produced no plane minimum\n";
    return kInputError;
  }
  const curvlab::PlaneMin& pm = *rep.plane;
  if (as_json) {
    json j;
    j["value"] = pm.value;
    j["converged"] = pm.converged;
    j["restarts_used"] = pm.restarts_used;
    if (std::isfinite(pm.spread)) {
      j["spread"] = pm.spread;
    } else {
      j["spread"] = nullptr;
    }
    j["u"] = std::vector<double>(pm.u.data(), pm.u.data() + pm.u.size());
    j["v"] = std::vector<double>(pm.v.data(), pm.v.data() + pm.v.size());
    if (rep.chen) {
      j["tau"] = rep.chen->tau;
      j["bound_rhs"] = rep.chen->rhs;
      j["gap"] = rep.chen->gap;
    }
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout.precision(12);
    std::cout << "inf K = " << pm.value
              << (pm.converged ? "" : "  (NOT converged)") << '\n';
    std::cout << "restarts used: " << pm.restarts_used << ", spread to next "
              << "local value: ";
    if (std::isfinite(pm.spread)) {
      std::cout << pm.spread << '\n';
    } else {
      std::cout << "none\n";
    }
    std::cout << "plane u = [" << pm.u.transpose() << "]\n";
    std::cout << "plane v = [" << pm.v.transpose() << "]\n";
    if (rep.chen) {
      std::cout << "extremality gap (bound - attained) = " << rep.chen->gap
                << '\n';
    }
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// verify

int do_verify(const std::string& suite, bool as_json, std::uint64_t seed) {
  const curvlab::SuiteResult res = curvlab::run_suite(suite, seed);
  if (as_json) {
    json j;
    j["suite"] = suite;
    j["criterion"] = res.criterion;
    j["name"] = res.name;
    j["pass"] = res.pass;
    j["seconds"] = res.seconds;
    j["summary"] = res.summary;
    j["lines"] = res.lines;
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "suite " << suite << " (" << res.name << ")\n";
    for (const std::string& line : res.lines) std::cout << "  " << line << '\n';
    std::ostringstream secs;
    secs.precision(2);
    secs << std::fixed << res.seconds;
    std::cout << (res.pass ? "PASS" : "FAIL") << "  " << res.summary << "  ["
              << secs.str() << " s]\n";
  }
  return res.pass ? kOk : kConditionFail;
}

// ---------------------------------------------------------------------------
// search

double take(const std::map<std::string, double>& prm, const std::string& key,
            double fallback) {
  const auto it = prm.find(key);
  return it == prm.end() ? fallback : it->second;
}

FamilyInstance solve_chen(const std::map<std::string, double>& prm,
                          double tol) {
  const int n = static_cast<int>(take(prm, "n", 4));
  const int p = static_cast<int>(take(prm, "p", 2));
  const double c = take(prm, "c", 0.0);
  const double a = take(prm, "a", 0.5);

  std::vector<double> cs, ds;
  for (int t = 2; t <= p; ++t) {
    cs.push_back(take(prm, "c" + std::to_string(t), 0.0));
    ds.push_back(take(prm, "d" + std::to_string(t), 0.0));
  }

  if (prm.count("b") > 0) {
    return curvlab::chen_family(n, p, c, a, prm.at("b"), cs, ds);
  }

  if (c == 0.0) {
    // pinned extremal branch: b = a, one off-diagonal block carries the
    // whole norm a^2 (1 + 2 sqrt(3n - 8))
    if (p < 2) {
      throw NoSolution("flat pinned branch needs codimension at least 2");
    }
    const double s = a * a * (1.0 + 2.0 * std::sqrt(3.0 * n - 8.0));
    std::fill(cs.begin(), cs.end(), 0.0);
    std::fill(ds.begin(), ds.end(), 0.0);
    cs[0] = std::sqrt(s);
    return curvlab::chen_family(n, p, c, a, a, cs, ds);
  }

  // curved ambient: solve the remaining free value b numerically on the
  // isotropy deviations, then rebuild
  auto residual = [&](const curvlab::Vec& x) {
    const FamilyInstance tmp = curvlab::chen_family(n, p, c, a, x[0], cs, ds);
    const curvlab::DerivedCurvature der = curvlab::derive(tmp.intrinsic);
    const double mean = der.normR2 / n;
    curvlab::Vec r(n);
    for (int i = 0; i < n; ++i) r[i] = der.checkR(i, i) - mean;
    return r;
  };
  curvlab::Vec x0(1);
  x0 << take(prm, "b0", -a);
  curvlab::LMOptions lm;
  lm.tol = std::min(1e-10, tol);
  const curvlab::Vec x = curvlab::refine_family_params(residual, x0, lm);
  return curvlab::chen_family(n, p, c, a, x[0], cs, ds);
}

FamilyInstance solve_family(FamilyId id,
                            const std::map<std::string, double>& prm,
                            std::uint64_t seed, double tol) {
  switch (id) {
    case FamilyId::product: {
      const int n1 = static_cast<int>(take(prm, "n1", 2));
      const double c1 = take(prm, "c1", 1.0);
      const int n2 = static_cast<int>(take(prm, "n2", 3));
      double c2 = 0.0;
      if (prm.count("c2") > 0) {
        c2 = prm.at("c2");
      } else if (n2 >= 2) {
        c2 = std::sqrt(c1 * c1 * (n1 - 1) / (n2 - 1));
        if (take(prm, "sign2", 1.0) < 0.0) c2 = -c2;
      } else if (c1 * c1 * (n1 - 1) > 0.0) {
        throw NoSolution(
            "a one-dimensional second factor cannot balance the first");
      }
      return curvlab::product_space_form(n1, c1, n2, c2);
    }
    case FamilyId::isoparametric_sphere:
    case FamilyId::isoparametric_hyperbolic: {
      const bool sphere = id == FamilyId::isoparametric_sphere;
      const int p = static_cast<int>(take(prm, "p", 2));
      const int q = static_cast<int>(take(prm, "q", 5));
      double theta = 0.0;
      if (prm.count("theta") > 0) {
        theta = prm.at("theta");
      } else {
        if (p < 2 || q < 2) {
          throw NoSolution("balance needs two curvature groups of size >= 2");
        }
        const double ratio = (p - 1.0) / (q - 1.0);
        if (sphere) {
          theta = std::atan(std::pow(ratio, 0.25));
        } else {
          if (ratio >= 1.0) {
            throw NoSolution("hyperbolic balance needs p < q");
          }
          theta = std::atanh(std::pow(ratio, 0.25));
        }
      }
      return curvlab::isoparametric_product_hypersurface(p, q, theta,
                                                         sphere ? 1 : -1);
    }
    case FamilyId::chen:
      return solve_chen(prm, tol);
    default:
      // warped and the diagonal kinds resolve their own dependents
      return curvlab::make_family(id, prm, seed, tol);
  }
}

int do_search(const std::string& path, const std::string& out_path,
              bool as_json, double tol, bool tol_set, std::uint64_t seed,
              bool seed_set) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "cannot read search spec '" << path << "'\n";
    return kInputError;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  json j;
  try {
    j = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("invalid search spec: ") + e.what());
  }
  if (!j.is_object() || !j.contains("family") ||
      !j["family"].is_string()) {
    throw SchemaError("search spec needs a string field 'family'");
  }
  const FamilyId id =
      curvlab::family_from_string(j["family"].get<std::string>());
  std::map<std::string, double> prm;
  if (j.contains("params")) {
    if (!j["params"].is_object()) {
      throw SchemaError("'params' must be an object of numbers");
    }
    for (const auto& [k, v] : j["params"].items()) {
      if (!v.is_number()) {
        throw SchemaError("parameter '" + k + "' is not a number");
      }
      prm[k] = v.get<double>();
    }
  }
  const std::string target =
      normalize(j.contains("target") ? j["target"].get<std::string>()
                                     : std::string("weakly_einstein"));
  if (target != "weakly_einstein") {
    throw SchemaError("unsupported search target '" + target + "'");
  }
  if (!seed_set && j.contains("seed")) {
    seed = j["seed"].get<std::uint64_t>();
  }
  if (!tol_set && j.contains("tolerance")) {
    tol = j["tolerance"].get<double>();
  }

  const FamilyInstance inst = solve_family(id, prm, seed, tol);
  const Scenario sc = curvlab::instance_scenario(inst, tol, seed);
  const Report rep = curvlab::evaluate(sc);
  const bool certified = rep.conditions.flags.weakly_einstein;

  const std::string scenario_text = curvlab::scenario_to_json(sc);
  if (!out_path.empty()) write_text_file(out_path, scenario_text);

  if (as_json) {
    json out;
    out["family"] = curvlab::to_string(inst.family_id);
    out["params"] = inst.params;
    out["expected"] = inst.expected;
    out["certified_weakly_einstein"] = certified;
    out["scenario"] = json::parse(scenario_text);
    out["report"] = json::parse(curvlab::report_to_json(rep));
    std::cout << out.dump(2) << '\n';
  } else {
    std::cout << "family " << curvlab::to_string(inst.family_id) << '\n';
    std::cout.precision(17);
    for (const auto& [k, v] : inst.params) {
      std::cout << "  " << k << " = " << v << '\n';
    }
    if (!out_path.empty()) {
      std::cout << "scenario written to " << out_path << '\n';
    }
    std::cout << curvlab::report_to_text(rep);
    std::cout << "certified weakly einstein: " << (certified ? "yes" : "NO")
              << '\n';
  }
  return certified ? kOk : kConditionFail;
}

// ---------------------------------------------------------------------------
// families emit

int do_emit(const std::string& family, const std::vector<std::string>& kvs,
            const std::string& out_path, double tol, std::uint64_t seed) {
  const FamilyId id = curvlab::family_from_string(family);
  const std::map<std::string, double> prm = params_from_kv(kvs);
  const FamilyInstance inst = curvlab::make_family(id, prm, seed, tol);
  const Scenario sc = curvlab::instance_scenario(inst, tol, seed);
  const std::string text = curvlab::scenario_to_json(sc);
  if (out_path.empty()) {
    std::cout << text << '\n';
  } else {
    write_text_file(out_path, text);
    std::cout << "scenario written to " << out_path << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pointwise curvature laboratory"};
  app.require_subcommand(1);

  double tol = 1e-9;
  std::uint64_t seed = 0;
  int restarts = 64;
  bool as_json = false;

  std::string check_path, require_csv;
  bool want_infk = false;
  CLI::App* check = app.add_subcommand(
      "check", "evaluate a scenario file (or every .json in a directory)");
  check->add_option("path", check_path, "scenario file or directory")
      ->required();
  check->add_option("--require", require_csv,
                    "comma-separated conditions that must hold");
  check->add_flag("--infk", want_infk,
                  "run the plane search even without shape data");

  std::string infk_path;
  CLI::App* infk = app.add_subcommand(
      "infk", "minimum sectional value of a scenario's tangent planes");
  infk->add_option("path", infk_path, "scenario file")->required();

  std::string suite;
  CLI::App* verify =
      app.add_subcommand("verify", "run a named verification suite");
  verify->add_option("suite", suite, "suite id")->required();

  std::string search_path, out_path;
  CLI::App* search = app.add_subcommand(
      "search", "resolve free family parameters and certify the instance");
  search->add_option("path", search_path, "search spec file")->required();
  search->add_option("--out", out_path, "write the solved scenario here");

  std::string emit_family, emit_out;
  std::vector<std::string> emit_params;
  CLI::App* families =
      app.add_subcommand("families", "named family instances");
  CLI::App* emit =
      families->add_subcommand("emit", "emit a family instance scenario");
  emit->add_option("family", emit_family, "family id")->required();
  emit->add_option("params", emit_params, "key=value parameters");
  emit->add_option("--out", emit_out, "write the scenario here");
  families->require_subcommand(1);

  for (CLI::App* cmd : {check, infk, verify, search}) {
    cmd->add_flag("--json", as_json, "machine-readable output");
    cmd->add_option("--seed", seed, "override the scenario seed");
  }
  for (CLI::App* cmd : {check, infk, search}) {
    cmd->add_option("--tol", tol, "override the scenario tolerance");
  }
  emit->add_option("--tol", tol, "construction tolerance");
  emit->add_option("--seed", seed, "construction seed");
  for (CLI::App* cmd : {check, infk}) {
    cmd->add_option("--restarts", restarts, "plane-search restarts");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (check->parsed()) {
      return do_check(check_path, require_csv, as_json, want_infk, restarts,
                      tol, check->count("--tol") > 0, seed,
                      check->count("--seed") > 0);
    }
    if (infk->parsed()) {
      return do_infk(infk_path, as_json, restarts, tol,
                     infk->count("--tol") > 0, seed,
                     infk->count("--seed") > 0);
    }
    if (verify->parsed()) {
      return do_verify(suite, as_json, seed);
    }
    if (search->parsed()) {
      return do_search(search_path, out_path, as_json, tol,
                       search->count("--tol") > 0, seed,
                       search->count("--seed") > 0);
    }
    if (families->parsed()) {
      return do_emit(emit_family, emit_params, emit_out, tol, seed);
    }
  } catch (const UnknownSuite& e) {
    std::cerr << "error: " << e.what() << "\nknown suites:";
    for (const std::string& id : curvlab::suite_ids()) std::cerr << ' ' << id;
    std::cerr << '\n';
    return kInputError;
  } catch (const SchemaError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const NoSolution& e) {
    std::cerr << "no solution: " << e.what() << '\n';
    return kConditionFail;
  } catch (const NonConvergence& e) {
    std::cerr << "non-convergence: " << e.what() << '\n';
    return kNonConvergence;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}
