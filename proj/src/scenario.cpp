#include "curvlab/scenario.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "curvlab/solver.hpp"

namespace curvlab {

namespace {

using nlohmann::json;

// +-inf and NaN have no JSON literal; they travel as null.
json num(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

double num_back(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::infinity();
  return j.get<double>();
}

const json& field(const json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) {
    throw SchemaError(std::string("missing field '") + name + "'");
  }
  return *it;
}

double number_field(const json& j, const char* name) {
  const json& f = field(j, name);
  if (!f.is_number()) {
    throw SchemaError(std::string("field '") + name + "' must be a number");
  }
  return f.get<double>();
}

int int_field(const json& j, const char* name) {
  double v = number_field(j, name);
  int i = static_cast<int>(std::llround(v));
  if (std::abs(v - i) > 0) {
    throw SchemaError(std::string("field '") + name + "' must be an integer");
  }
  return i;
}

json mat_to_json(const Mat& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat mat_from_json(const json& j, int n) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) {
    throw SchemaError("shape operator must be an n x n array");
  }
  Mat m(n, n);
  for (int i = 0; i < n; ++i) {
    const json& row = j[i];
    if (!row.is_array() || static_cast<int>(row.size()) != n) {
      throw SchemaError("shape operator must be an n x n array");
    }
    for (int k = 0; k < n; ++k) {
      if (!row[k].is_number()) {
        throw SchemaError("shape operator entries must be numbers");
      }
      m(i, k) = row[k].get<double>();
    }
  }
  return m;
}

json vec_to_json(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Vec vec_from_json(const json& j) {
  Vec v(static_cast<int>(j.size()));
  for (int i = 0; i < v.size(); ++i) v(i) = j[i].get<double>();
  return v;
}

json plane_to_json(const PlaneMin& p) {
  return json{{"u", vec_to_json(p.u)},
              {"v", vec_to_json(p.v)},
              {"value", p.value},
              {"restarts_used", p.restarts_used},
              {"converged", p.converged},
              {"spread", num(p.spread)}};
}

PlaneMin plane_from_json(const json& j) {
  PlaneMin p;
  p.u = vec_from_json(field(j, "u"));
  p.v = vec_from_json(field(j, "v"));
  p.value = number_field(j, "value");
  p.restarts_used = int_field(j, "restarts_used");
  p.converged = field(j, "converged").get<bool>();
  p.spread = num_back(field(j, "spread"));
  return p;
}

json two_stein_to_json(const TwoSteinReport& t) {
  return json{{"f1", t.f1},
              {"f2", t.f2},
              {"trace_residual", t.trace_residual},
              {"quartic_residual", t.quartic_residual},
              {"basis_h1", t.basis_h1},
              {"basis_h2", t.basis_h2},
              {"basis_h1_spread", t.basis_h1_spread},
              {"basis_h2_spread", t.basis_h2_spread},
              {"h1", t.h1},
              {"h2", t.h2},
              {"checkR_consistency", t.checkR_consistency},
              {"h2_from_h1_residual", t.h2_from_h1_residual},
              {"h1_from_h2_residual", t.h1_from_h2_residual}};
}

TwoSteinReport two_stein_from_json(const json& j) {
  TwoSteinReport t;
  t.f1 = number_field(j, "f1");
  t.f2 = number_field(j, "f2");
  t.trace_residual = number_field(j, "trace_residual");
  t.quartic_residual = number_field(j, "quartic_residual");
  t.basis_h1 = field(j, "basis_h1").get<std::vector<double>>();
  t.basis_h2 = field(j, "basis_h2").get<std::vector<double>>();
  t.basis_h1_spread = number_field(j, "basis_h1_spread");
  t.basis_h2_spread = number_field(j, "basis_h2_spread");
  t.h1 = number_field(j, "h1");
  t.h2 = number_field(j, "h2");
  t.checkR_consistency = number_field(j, "checkR_consistency");
  t.h2_from_h1_residual = number_field(j, "h2_from_h1_residual");
  t.h1_from_h2_residual = number_field(j, "h1_from_h2_residual");
  return t;
}

json conditions_to_json(const ConditionReport& c) {
  return json{{"einstein_residual", c.einstein_residual},
              {"weakly_einstein_residual", c.weakly_einstein_residual},
              {"semisym_residual", c.semisym_residual},
              {"tol", c.tol},
              {"scale", c.scale},
              {"flags",
               {{"einstein", c.flags.einstein},
                {"weakly_einstein", c.flags.weakly_einstein},
                {"two_stein", c.flags.two_stein},
                {"semisymmetric", c.flags.semisymmetric}}}};
}

ConditionReport conditions_from_json(const json& j, const TwoSteinReport& ts) {
  ConditionReport c;
  c.einstein_residual = number_field(j, "einstein_residual");
  c.weakly_einstein_residual = number_field(j, "weakly_einstein_residual");
  c.semisym_residual = number_field(j, "semisym_residual");
  c.tol = number_field(j, "tol");
  c.scale = number_field(j, "scale");
  const json& f = field(j, "flags");
  c.flags.einstein = field(f, "einstein").get<bool>();
  c.flags.weakly_einstein = field(f, "weakly_einstein").get<bool>();
  c.flags.two_stein = field(f, "two_stein").get<bool>();
  c.flags.semisymmetric = field(f, "semisymmetric").get<bool>();
  c.two_stein = ts;
  return c;
}

json chen_to_json(const ChenReport& c) {
  return json{{"tau", c.tau},
              {"inf_k", c.inf_k},
              {"mean_norm", c.mean_norm},
              {"lhs", c.lhs},
              {"rhs", c.rhs},
              {"gap", c.gap},
              {"equality", c.equality},
              {"inf_plane", plane_to_json(c.inf_plane)}};
}

ChenReport chen_from_json(const json& j) {
  ChenReport c;
  c.tau = number_field(j, "tau");
  c.inf_k = number_field(j, "inf_k");
  c.mean_norm = number_field(j, "mean_norm");
  c.lhs = number_field(j, "lhs");
  c.rhs = number_field(j, "rhs");
  c.gap = number_field(j, "gap");
  c.equality = field(j, "equality").get<bool>();
  c.inf_plane = plane_from_json(field(j, "inf_plane"));
  return c;
}

json branch_to_json(const BranchVerdict& b) {
  return json{{"theorem", b.theorem},
              {"branch", b.branch},
              {"residuals", b.residuals},
              {"consistent", b.consistent}};
}

BranchVerdict branch_from_json(const json& j) {
  BranchVerdict b;
  b.theorem = field(j, "theorem").get<std::string>();
  b.branch = field(j, "branch").get<std::string>();
  b.residuals =
      field(j, "residuals").get<std::map<std::string, double>>();
  b.consistent = field(j, "consistent").get<bool>();
  return b;
}

json scenario_to_json_obj(const Scenario& s) {
  json j;
  j["tolerance"] = s.tolerance;
  j["seed"] = s.seed;
  int payloads = 0;
  if (s.extrinsic) {
    ++payloads;
    json ops = json::array();
    for (const Mat& m : s.extrinsic->shape_operators) {
      ops.push_back(mat_to_json(m));
    }
    j["extrinsic"] = {{"ambient",
                       {{"dim", s.extrinsic->ambient.N},
                        {"curvature", s.extrinsic->ambient.c}}},
                      {"submanifold_dim", s.extrinsic->submanifold_dim},
                      {"shape_operators", std::move(ops)}};
  }
  if (s.intrinsic) {
    ++payloads;
    json comps = json::array();
    for (const CurvEntry& e : s.intrinsic->components) {
      comps.push_back(json::array({e.i, e.j, e.k, e.l, e.value}));
    }
    j["intrinsic"] = {{"dim", s.intrinsic->dim},
                      {"components", std::move(comps)}};
  }
  if (s.family) {
    ++payloads;
    j["family"] = {{"family_id", to_string(s.family->family_id)},
                   {"params", s.family->params},
                   {"seed", s.family->seed}};
  }
  if (payloads != 1) {
    throw SchemaError("scenario must carry exactly one payload");
  }
  return j;
}

Scenario scenario_from_json_obj(const json& j) {
  if (!j.is_object()) throw SchemaError("scenario must be an object");
  Scenario s;
  if (j.contains("tolerance")) s.tolerance = number_field(j, "tolerance");
  if (j.contains("seed")) s.seed = field(j, "seed").get<std::uint64_t>();

  int payloads = 0;
  if (j.contains("extrinsic")) {
    ++payloads;
    const json& e = field(j, "extrinsic");
    Scenario::Extrinsic ext;
    const json& amb = field(e, "ambient");
    ext.ambient.N = int_field(amb, "dim");
    ext.ambient.c = number_field(amb, "curvature");
    ext.submanifold_dim = int_field(e, "submanifold_dim");
    const json& ops = field(e, "shape_operators");
    if (!ops.is_array() || ops.empty()) {
      throw SchemaError("shape_operators must be a nonempty array");
    }
    for (const json& op : ops) {
      ext.shape_operators.push_back(mat_from_json(op, ext.submanifold_dim));
    }
    s.extrinsic = std::move(ext);
  }
  if (j.contains("intrinsic")) {
    ++payloads;
    const json& e = field(j, "intrinsic");
    Scenario::Intrinsic in;
    in.dim = int_field(e, "dim");
    const json& comps = field(e, "components");
    if (!comps.is_array()) throw SchemaError("components must be an array");
    for (const json& c : comps) {
      if (!c.is_array() || c.size() != 5) {
        throw SchemaError("each component must be [i, j, k, l, value]");
      }
      CurvEntry entry;
      entry.i = c[0].get<int>();
      entry.j = c[1].get<int>();
      entry.k = c[2].get<int>();
      entry.l = c[3].get<int>();
      entry.value = c[4].get<double>();
      in.components.push_back(entry);
    }
    s.intrinsic = std::move(in);
  }
  if (j.contains("family")) {
    ++payloads;
    const json& e = field(j, "family");
    Scenario::Family fam;
    fam.family_id =
        family_from_string(field(e, "family_id").get<std::string>());
    if (e.contains("params")) {
      fam.params = field(e, "params").get<std::map<std::string, double>>();
    }
    if (e.contains("seed")) fam.seed = field(e, "seed").get<std::uint64_t>();
    s.family = std::move(fam);
  }
  if (payloads != 1) {
    throw SchemaError(
        "scenario must carry exactly one of extrinsic / intrinsic / family");
  }
  return s;
}

}  // namespace

Scenario scenario_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("invalid scenario text: ") + e.what());
  }
  try {
    return scenario_from_json_obj(j);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("invalid scenario value: ") + e.what());
  }
}

std::string scenario_to_json(const Scenario& s) {
  return scenario_to_json_obj(s).dump(2);
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot read scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return scenario_from_json(buf.str());
}

Scenario instance_scenario(const FamilyInstance& inst, double tolerance,
                           std::uint64_t seed) {
  Scenario s;
  s.tolerance = tolerance;
  s.seed = seed;
  if (inst.shape) {
    Scenario::Extrinsic ext;
    ext.ambient = inst.ambient;
    if (ext.ambient.N == 0) ext.ambient.N = inst.shape->n() + inst.shape->p();
    ext.submanifold_dim = inst.shape->n();
    ext.shape_operators = inst.shape->all();
    s.extrinsic = std::move(ext);
  } else {
    Scenario::Intrinsic in;
    const int n = inst.intrinsic.dim();
    in.dim = n;
    // one representative per orbit: i<j, k<l, (i,j) <= (k,l)
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          for (int l = k + 1; l < n; ++l) {
            if (k < i || (k == i && l < j)) continue;
            double v = inst.intrinsic(i, j, k, l);
            if (v != 0.0) {
              in.components.push_back(CurvEntry{i, j, k, l, v});
            }
          }
        }
      }
    }
    s.intrinsic = std::move(in);
  }
  return s;
}

Report evaluate(const Scenario& s, const EvalOptions& opts) {
  using clock = std::chrono::steady_clock;
  auto stamp = [start = clock::now()]() mutable {
    auto now = clock::now();
    double sec = std::chrono::duration<double>(now - start).count();
    start = now;
    return sec;
  };

  Report rep;
  rep.scenario = s;

  CurvTensor R;
  std::optional<ShapeOperatorSet> shape;
  AmbientSpace amb;
  std::optional<FamilyInstance> fam;

  if (s.extrinsic) {
    shape.emplace(s.extrinsic->submanifold_dim, s.extrinsic->shape_operators,
                  s.tolerance);
    amb = s.extrinsic->ambient;
    R = gauss_curvature(amb, *shape);
  } else if (s.intrinsic) {
    R = make_curvature(s.intrinsic->dim, s.intrinsic->components, s.tolerance);
  } else if (s.family) {
    fam = make_family(s.family->family_id, s.family->params, s.family->seed,
                      s.tolerance);
    R = fam->intrinsic;
    amb = fam->ambient;
    if (fam->shape) shape = fam->shape;
  } else {
    throw SchemaError("scenario carries no payload");
  }
  rep.timings["build"] = stamp();

  rep.conditions = condition_report(R, s.tolerance);
  rep.two_stein = rep.conditions.two_stein;
  rep.timings["conditions"] = stamp();

  if (shape && normal_flatness(*shape, s.tolerance).flat) {
    rep.two_stein = two_stein_basis_report(amb, *shape, s.tolerance);
    rep.timings["basis"] = stamp();
  }

  if (shape) {
    InfKOptions io;
    io.restarts = opts.restarts;
    io.seed = s.seed;
    rep.chen = chen_report(amb, *shape, io, s.tolerance);
    rep.plane = rep.chen->inf_plane;
    rep.timings["chen"] = stamp();
  } else if (opts.want_infk) {
    rep.plane = inf_sectional(R, opts.restarts, s.seed, 1e-7);
    rep.timings["infk"] = stamp();
  }

  if (fam && fam->family_id == FamilyId::chen) {
    const auto& p = fam->params;
    const int n = static_cast<int>(p.at("n"));
    const int pp = static_cast<int>(p.at("p"));
    std::vector<double> cs, ds;
    for (int t = 2; t <= pp; ++t) {
      cs.push_back(p.at("c" + std::to_string(t)));
      ds.push_back(p.at("d" + std::to_string(t)));
    }
    try {
      rep.branch = chen_branch(n, pp, p.at("c"), p.at("a"), p.at("b"), cs, ds,
                               s.tolerance);
    } catch (const NotWeaklyEinstein& e) {
      rep.branch_note = e.what();
    }
    rep.timings["branch"] = stamp();
  }
  return rep;
}

std::string report_to_json(const Report& r) {
  json j;
  j["scenario"] = scenario_to_json_obj(r.scenario);
  j["conditions"] = conditions_to_json(r.conditions);
  j["two_stein"] = two_stein_to_json(r.two_stein);
  if (r.chen) j["chen"] = chen_to_json(*r.chen);
  if (r.branch) j["branch"] = branch_to_json(*r.branch);
  if (!r.branch_note.empty()) j["branch_note"] = r.branch_note;
  if (r.plane) j["plane"] = plane_to_json(*r.plane);
  j["timings"] = r.timings;
  return j.dump(2);
}

Report report_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("invalid report text: ") + e.what());
  }
  Report r;
  r.scenario = scenario_from_json_obj(field(j, "scenario"));
  r.two_stein = two_stein_from_json(field(j, "two_stein"));
  r.conditions = conditions_from_json(field(j, "conditions"), r.two_stein);
  if (j.contains("chen")) r.chen = chen_from_json(field(j, "chen"));
  if (j.contains("branch")) r.branch = branch_from_json(field(j, "branch"));
  if (j.contains("branch_note")) {
    r.branch_note = field(j, "branch_note").get<std::string>();
  }
  if (j.contains("plane")) r.plane = plane_from_json(field(j, "plane"));
  r.timings = field(j, "timings").get<std::map<std::string, double>>();
  return r;
}

std::string report_to_text(const Report& r) {
  std::ostringstream os;
  os.precision(12);
  const auto& c = r.conditions;
  os << "conditions (tol " << c.tol << ", scale " << c.scale << ")\n"
     << "  einstein          " << (c.flags.einstein ? "yes" : "no ")
     << "  residual " << c.einstein_residual << "\n"
     << "  weakly einstein   " << (c.flags.weakly_einstein ? "yes" : "no ")
     << "  residual " << c.weakly_einstein_residual << "\n"
     << "  2-stein           " << (c.flags.two_stein ? "yes" : "no ")
     << "  quartic residual " << r.two_stein.quartic_residual << "\n"
     << "  semisymmetric     " << (c.flags.semisymmetric ? "yes" : "no ")
     << "  residual " << c.semisym_residual << "\n";
  if (!r.two_stein.basis_h1.empty()) {
    os << "  basis h1 spread " << r.two_stein.basis_h1_spread
       << ",  h2 spread " << r.two_stein.basis_h2_spread << "\n";
  }
  if (r.chen) {
    os << "chen bound: lhs " << r.chen->lhs << "  rhs " << r.chen->rhs
       << "  gap " << r.chen->gap
       << (r.chen->equality ? "  (equality)" : "") << "\n";
  }
  if (r.plane) {
    os << "inf K " << r.plane->value
       << (r.plane->converged ? "" : "  (not converged)") << "\n";
  }
  if (r.branch) {
    os << "branch " << r.branch->theorem << " " << r.branch->branch
       << (r.branch->consistent ? "  consistent" : "  INCONSISTENT") << "\n";
    for (const auto& [k, v] : r.branch->residuals) {
      os << "    " << k << " = " << v << "\n";
    }
  } else if (!r.branch_note.empty()) {
    os << "branch: skipped (" << r.branch_note << ")\n";
  }
  return os.str();
}

}  // namespace curvlab
