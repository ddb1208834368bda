#include "lamopt/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lamopt/version.hpp"

namespace lamopt::io {

namespace {

using ojson = nlohmann::ordered_json;

[[noreturn]] void schemaFail(const std::string& what) {
  throw Error(errc::schema_error, what);
}

std::pair<int, int> lineColumnAt(const std::string& text, size_t byte) {
  int line = 1, col = 1;
  for (size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

ojson parseText(const std::string& text) {
  try {
    return ojson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = lineColumnAt(text, e.byte > 0 ? e.byte - 1 : 0);
    std::ostringstream os;
    os << "JSON parse error at line " << line << ", column " << col;
    schemaFail(os.str());
  }
}

void requireObject(const ojson& node, const std::string& where,
                   std::initializer_list<const char*> required,
                   std::initializer_list<const char*> optional) {
  if (!node.is_object()) schemaFail(where + ": expected an object");
  std::set<std::string> allowed;
  for (const char* k : required) allowed.insert(k);
  for (const char* k : optional) allowed.insert(k);
  for (const auto& [key, value] : node.items()) {
    if (!allowed.count(key)) schemaFail(where + ": unknown key \"" + key + "\"");
  }
  for (const char* k : required) {
    if (!node.contains(k)) schemaFail(where + ": missing required key \"" + std::string(k) + "\"");
  }
}

double getNumber(const ojson& obj, const std::string& where, const char* key) {
  const ojson& v = obj.at(key);
  if (!v.is_number()) schemaFail(where + "." + key + ": expected a number");
  return v.get<double>();
}

double getNumberOr(const ojson& obj, const std::string& where, const char* key, double dflt) {
  if (!obj.contains(key)) return dflt;
  return getNumber(obj, where, key);
}

int getInt(const ojson& obj, const std::string& where, const char* key) {
  const ojson& v = obj.at(key);
  if (!v.is_number_integer() && !v.is_number_unsigned()) {
    schemaFail(where + "." + key + ": expected an integer");
  }
  return v.get<int>();
}

int getIntOr(const ojson& obj, const std::string& where, const char* key, int dflt) {
  if (!obj.contains(key)) return dflt;
  return getInt(obj, where, key);
}

std::vector<double> getNumberArray(const ojson& obj, const std::string& where, const char* key) {
  const ojson& v = obj.at(key);
  if (!v.is_array()) schemaFail(where + "." + key + ": expected an array");
  std::vector<double> out;
  for (const ojson& e : v) {
    if (!e.is_number()) schemaFail(where + "." + key + ": expected numeric entries");
    out.push_back(e.get<double>());
  }
  return out;
}

Material parseMaterial(const ojson& node, const std::string& where) {
  requireObject(node, where,
                {"E1", "E2", "G12", "nu12", "ply_thickness", "allowables"}, {});
  Material mat;
  mat.E1 = getNumber(node, where, "E1");
  mat.E2 = getNumber(node, where, "E2");
  mat.G12 = getNumber(node, where, "G12");
  mat.nu12 = getNumber(node, where, "nu12");
  mat.ply_thickness = getNumber(node, where, "ply_thickness");
  const ojson& allow = node.at("allowables");
  const std::string aw = where + ".allowables";
  requireObject(allow, aw, {"tension", "compression", "shear"}, {});
  mat.allowables.tension = getNumber(allow, aw, "tension");
  mat.allowables.compression = getNumber(allow, aw, "compression");
  mat.allowables.shear = getNumber(allow, aw, "shear");
  return mat;
}

// ---------------------------------------------------------------------------
// Deterministic writer: insertion-ordered keys, floats at %.17g.
// ---------------------------------------------------------------------------

void writeNumber(std::string& out, double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  out += buf;
}

void writeJson(std::string& out, const ojson& node, int indent) {
  const std::string pad(static_cast<size_t>(indent) * 2, ' ');
  const std::string pad_in(static_cast<size_t>(indent + 1) * 2, ' ');
  switch (node.type()) {
    case ojson::value_t::object: {
      if (node.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : node.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        out += ojson(key).dump();
        out += ": ";
        writeJson(out, value, indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case ojson::value_t::array: {
      if (node.empty()) {
        out += "[]";
        return;
      }
      bool scalars = true;
      for (const ojson& e : node) {
        if (e.is_object() || e.is_array()) {
          scalars = false;
          break;
        }
      }
      out += "[";
      bool first = true;
      for (const ojson& e : node) {
        if (!first) out += scalars ? ", " : ",";
        if (!scalars) out += "\n" + pad_in;
        first = false;
        writeJson(out, e, indent + 1);
      }
      if (!scalars) out += "\n" + pad;
      out += "]";
      return;
    }
    case ojson::value_t::number_float:
      writeNumber(out, node.get<double>());
      return;
    default:
      out += node.dump();
      return;
  }
}

std::string dumpDeterministic(const ojson& node) {
  std::string out;
  writeJson(out, node, 0);
  out += "\n";
  return out;
}

ojson vecToJson(const Vec4& v) {
  ojson arr = ojson::array();
  for (int i = 0; i < 4; ++i) arr.push_back(v(i));
  return arr;
}

ojson vec3ToJson(const Vec3& v) {
  ojson arr = ojson::array();
  for (int i = 0; i < 3; ++i) arr.push_back(v(i));
  return arr;
}

ojson mat3ToJson(const Mat3& m) {
  ojson rows = ojson::array();
  for (int i = 0; i < 3; ++i) {
    ojson row = ojson::array();
    for (int j = 0; j < 3; ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

ojson marginsToJson(const OuterMargins& m) {
  ojson out = ojson::object();
  out["percentage_min"] = m.pct_min;
  out["percentage_max"] = m.pct_max;
  out["strain"] = vec3ToJson(m.strain);
  if (m.buckling.has_value()) {
    out["buckling"] = *m.buckling;
  } else {
    out["buckling"] = nullptr;
  }
  return out;
}

const char* methodName(RetrievalMethod m) {
  switch (m) {
    case RetrievalMethod::exhaustive:
      return "exhaustive";
    case RetrievalMethod::branch_and_bound:
      return "branch-and-bound";
    case RetrievalMethod::local_search:
      return "local-search";
    case RetrievalMethod::automatic:
      break;
  }
  return "automatic";
}

}  // namespace

XiMode parseXiMode(const std::string& name) {
  if (name == "midpoint") return XiMode::midpoint;
  if (name == "exact") return XiMode::exact;
  schemaFail("mode must be \"midpoint\" or \"exact\", got \"" + name + "\"");
}

const char* xiModeName(XiMode mode) {
  return mode == XiMode::midpoint ? "midpoint" : "exact";
}

DesignProblem parseProblem(const std::string& text) {
  const ojson root = parseText(text);
  requireObject(root, "problem",
                {"schema_version", "material", "angles", "loads", "outer_rules"},
                {"inner_rules", "options"});
  if (getInt(root, "problem", "schema_version") != kSchemaVersion) {
    schemaFail("problem.schema_version: unsupported version");
  }

  DesignProblem p;
  p.material = parseMaterial(root.at("material"), "problem.material");
  p.angles = getNumberArray(root, "problem", "angles");

  const ojson& loads = root.at("loads");
  requireObject(loads, "problem.loads", {"Nx", "Ny", "Nxy", "plate_a", "plate_b"}, {"max_mode"});
  p.loads.Nx = getNumber(loads, "problem.loads", "Nx");
  p.loads.Ny = getNumber(loads, "problem.loads", "Ny");
  p.loads.Nxy = getNumber(loads, "problem.loads", "Nxy");
  p.loads.plate_a = getNumber(loads, "problem.loads", "plate_a");
  p.loads.plate_b = getNumber(loads, "problem.loads", "plate_b");
  p.loads.max_mode = getIntOr(loads, "problem.loads", "max_mode", 4);

  const ojson& outer = root.at("outer_rules");
  requireObject(outer, "problem.outer_rules", {"max_total_plies"}, {"min_pct", "max_pct"});
  p.outer_rules.max_total_plies = getInt(outer, "problem.outer_rules", "max_total_plies");
  if (outer.contains("min_pct")) {
    p.outer_rules.min_pct = getNumberArray(outer, "problem.outer_rules", "min_pct");
  }
  if (outer.contains("max_pct")) {
    p.outer_rules.max_pct = getNumberArray(outer, "problem.outer_rules", "max_pct");
  }

  if (root.contains("inner_rules")) {
    const ojson& inner = root.at("inner_rules");
    requireObject(inner, "problem.inner_rules", {},
                  {"max_contiguous", "outer_ply_angles", "max_disorientation"});
    p.inner_rules.max_contiguous = getIntOr(inner, "problem.inner_rules", "max_contiguous", 0);
    if (inner.contains("outer_ply_angles")) {
      p.inner_rules.outer_ply_angles =
          getNumberArray(inner, "problem.inner_rules", "outer_ply_angles");
    }
    p.inner_rules.max_disorientation =
        getNumberOr(inner, "problem.inner_rules", "max_disorientation", 0.0);
  }

  if (root.contains("options")) {
    const ojson& opt = root.at("options");
    requireObject(opt, "problem.options", {}, {"mode", "tol", "seed", "threads"});
    if (opt.contains("mode")) {
      const ojson& m = opt.at("mode");
      if (!m.is_string()) schemaFail("problem.options.mode: expected a string");
      p.options.mode = parseXiMode(m.get<std::string>());
    }
    p.options.tol = getNumberOr(opt, "problem.options", "tol", 1e-9);
    if (opt.contains("seed")) {
      const ojson& s = opt.at("seed");
      if (!s.is_number_integer() && !s.is_number_unsigned()) {
        schemaFail("problem.options.seed: expected an integer");
      }
      p.options.seed = s.get<std::uint64_t>();
    }
    p.options.threads = getIntOr(opt, "problem.options", "threads", 1);
  }

  try {
    p.validate();
  } catch (const Error& e) {
    schemaFail(std::string("problem validation: ") + e.what());
  }
  return p;
}

StackFile parseStackFile(const std::string& text) {
  const ojson root = parseText(text);
  requireObject(root, "stack", {"schema_version", "material", "angles", "stack"}, {});
  if (getInt(root, "stack", "schema_version") != kSchemaVersion) {
    schemaFail("stack.schema_version: unsupported version");
  }
  StackFile out;
  out.material = parseMaterial(root.at("material"), "stack.material");
  out.angles = getNumberArray(root, "stack", "angles");
  out.stack_degrees = getNumberArray(root, "stack", "stack");
  if (out.stack_degrees.empty()) schemaFail("stack.stack: empty stacking sequence");
  try {
    out.material.validate();
    AngleSet check(out.angles);
    (void)check;
  } catch (const Error& e) {
    schemaFail(std::string("stack validation: ") + e.what());
  }
  return out;
}

StackingSequence resolveStack(const StackFile& file, const AngleSet& angles) {
  StackingSequence seq;
  for (double a : file.stack_degrees) {
    const double norm = normalizeAngle(a);
    int idx = -1;
    for (int k = 0; k < angles.size(); ++k) {
      if (std::abs(angles.angle(k) - norm) <= 1e-9) {
        idx = k;
        break;
      }
    }
    if (idx < 0) {
      std::ostringstream os;
      os << "stack.stack: ply angle " << a << " is not in the angle set";
      schemaFail(os.str());
    }
    seq.plies.push_back(idx);
  }
  return seq;
}

std::string problemDigest(const std::string& bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016" PRIx64, hash);
  return buf;
}

std::string resultToJson(const DesignResult& result, const DesignProblem& problem,
                         const std::string& input_digest, bool with_timings) {
  ojson root = ojson::object();
  root["schema_version"] = kSchemaVersion;
  root["tool_version"] = kToolVersion;
  root["input_digest"] = input_digest;
  root["seed"] = problem.options.seed;
  root["mode"] = xiModeName(problem.options.mode);
  root["status"] = result.status;
  root["counts"] = result.counts.counts;

  if (result.has_design) {
    const AngleSet angles = problem.angleSet();
    root["total_plies_half"] = result.counts.total();
    root["xiA"] = vecToJson(result.xi_a);
    root["xiD_target"] = vecToJson(result.xi_d_target);
    root["xiD_achieved"] = vecToJson(result.xi_d_achieved);
    root["inner_residual"] = result.inner_residual;
    root["retrieval_method"] = methodName(result.method);

    ojson half = ojson::array();
    for (int k : result.half.plies) half.push_back(angles.angle(k));
    ojson full = ojson::array();
    for (int i = result.half.size() - 1; i >= 0; --i) {
      full.push_back(angles.angle(result.half.plies[static_cast<size_t>(i)]));
    }
    for (int i = 0; i < result.half.size(); ++i) {
      full.push_back(angles.angle(result.half.plies[static_cast<size_t>(i)]));
    }
    root["stacking"] = ojson::object();
    root["stacking"]["half_mid_to_skin"] = half;
    root["stacking"]["full_bottom_to_top"] = full;

    root["margins"] = marginsToJson(result.design_margins);
    if (result.buckling_factor.has_value()) {
      root["margins"]["buckling_factor"] = *result.buckling_factor;
      root["margins"]["buckling_mode"] = ojson::array({result.buckling_m, result.buckling_p});
    } else {
      root["margins"]["buckling_factor"] = nullptr;
      root["margins"]["buckling_mode"] = nullptr;
    }
    root["outer"] = ojson::object();
    root["outer"]["margins"] = marginsToJson(result.outer_margins);
  }

  ojson violations = ojson::array();
  for (const RuleViolation& v : result.violations) {
    ojson item = ojson::object();
    item["rule"] = v.rule;
    item["from"] = v.from;
    item["to"] = v.to;
    item["observed"] = v.observed;
    violations.push_back(item);
  }
  root["violations"] = violations;

  if (with_timings) {
    root["timings_ms"] = ojson::object();
    root["timings_ms"]["outer"] = result.outer_ms;
    root["timings_ms"]["inner"] = result.inner_ms;
  }
  return dumpDeterministic(root);
}

std::string regionToJson(const PlyCounts& counts, const std::vector<double>& angles,
                         XiMode mode, const FeasiblePolytope& poly) {
  ojson root = ojson::object();
  root["schema_version"] = kSchemaVersion;
  root["tool_version"] = kToolVersion;
  root["counts"] = counts.counts;
  root["angles"] = angles;
  root["mode"] = xiModeName(mode);
  root["affine_dim"] = poly.affine_dim;

  ojson verts = ojson::array();
  for (const Vec4& v : poly.vertices) verts.push_back(vecToJson(v));
  root["vertices"] = verts;

  ojson facets = ojson::object();
  ojson a_rows = ojson::array();
  ojson b_vals = ojson::array();
  for (int i = 0; i < poly.facet_normals.rows(); ++i) {
    ojson row = ojson::array();
    for (int j = 0; j < 4; ++j) row.push_back(poly.facet_normals(i, j));
    a_rows.push_back(row);
    b_vals.push_back(poly.facet_offsets(i));
  }
  facets["A"] = a_rows;
  facets["b"] = b_vals;
  root["facets"] = facets;

  ojson eqs = ojson::object();
  ojson c_rows = ojson::array();
  ojson d_vals = ojson::array();
  for (int i = 0; i < poly.eq_normals.rows(); ++i) {
    ojson row = ojson::array();
    for (int j = 0; j < 4; ++j) row.push_back(poly.eq_normals(i, j));
    c_rows.push_back(row);
    d_vals.push_back(poly.eq_offsets(i));
  }
  eqs["C"] = c_rows;
  eqs["d"] = d_vals;
  root["equalities"] = eqs;
  return dumpDeterministic(root);
}

std::string regionVerticesCsv(const FeasiblePolytope& poly) {
  std::string out = "xi1,xi2,xi3,xi4\n";
  for (const Vec4& v : poly.vertices) {
    for (int j = 0; j < 4; ++j) {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", v(j));
      out += buf;
      out += j == 3 ? '\n' : ',';
    }
  }
  return out;
}

std::string paramsReportJson(const StackFile& file) {
  const AngleSet angles(file.angles);
  const StackingSequence seq = resolveStack(file, angles);
  const PlyCounts counts = countsOf(seq, angles.size());
  const int n_total = counts.total();

  const LamParams mid = lamParams(seq, angles, XiMode::midpoint);
  const Vec4& xi_a = mid.xiA;
  const Vec4& xi_d_mid = mid.xiD;
  const Vec4 xi_d_exact = xiD(seq, angles, XiMode::exact);

  ojson root = ojson::object();
  root["schema_version"] = kSchemaVersion;
  root["tool_version"] = kToolVersion;
  root["plies_half"] = n_total;
  root["counts"] = counts.counts;
  root["xiA"] = vecToJson(xi_a);
  root["xiD_midpoint"] = vecToJson(xi_d_mid);
  root["xiD_exact"] = vecToJson(xi_d_exact);
  root["A"] = mat3ToJson(aMatrix(xi_a, n_total, file.material));
  root["D_midpoint"] = mat3ToJson(dMatrix(xi_d_mid, n_total, file.material));
  root["D_exact"] = mat3ToJson(dMatrix(xi_d_exact, n_total, file.material));
  return dumpDeterministic(root);
}

}  // namespace lamopt::io
