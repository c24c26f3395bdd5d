#include "qtori/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "qtori/autgroup.hpp"
#include "qtori/errors.hpp"
#include "qtori/qexpr.hpp"

namespace qtori::cli {
namespace {

using Json = nlohmann::ordered_json;

class InputError : public Error {
 public:
  using Error::Error;
};

struct Document {
  std::optional<std::string> label;
  std::optional<double> tolerance;
  std::array<std::string, 4> texts;
  std::array<Quaternion, 4> values;
};

struct Options {
  std::optional<double> tol;
  std::uint64_t max_cells = kDefaultMaxCells;
  std::string format = "text";
  double radius = 1.0;
  bool normalize_orientation = false;
  std::vector<std::string> files;
};

// 12 significant digits, with -0 printed as 0.
double rounded(double x) {
  if (!std::isfinite(x)) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  const double y = std::strtod(buf, nullptr);
  return y == 0.0 ? 0.0 : y;
}

Json num(double x) { return rounded(x); }

Json quat(const Quaternion& q) { return Json::array({num(q.x0), num(q.x1), num(q.x2), num(q.x3)}); }

Json ints(const IntVec4& n) { return Json::array({n[0], n[1], n[2], n[3]}); }

Json matrix(const Mat4& m) {
  Json rows = Json::array();
  for (const auto& row : m) rows.push_back(Json::array({num(row[0]), num(row[1]), num(row[2]), num(row[3])}));
  return rows;
}

Json int_matrix(const IntMat4& m) {
  Json rows = Json::array();
  for (const auto& row : m) rows.push_back(ints(row));
  return rows;
}

Json quats(const Basis4& b) {
  Json out = Json::array();
  for (const auto& q : b.vectors()) out.push_back(quat(q));
  return out;
}

Json check(const Basis4& b, const CheckReport& r) {
  Json j;
  j["holds"] = r.verdict;
  j["failure"] = to_string(r.failure);
  j["step"] = r.step ? Json(*r.step) : Json();
  j["pair"] = r.pair ? Json::array({r.pair->first, r.pair->second}) : Json();
  if (r.witness) {
    j["witness"] = ints(*r.witness);
    j["witness_point"] = quat(b.combine(*r.witness));
    j["witness_value"] = num(r.witness_value);
    j["threshold"] = num(r.threshold);
  } else {
    j["witness"] = Json();
  }
  j["explanation"] = r.explanation;
  return j;
}

Document load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  Json j;
  try {
    j = Json::parse(buffer.str());
  } catch (const Json::exception& e) {
    throw InputError(path + ": invalid JSON: " + e.what());
  }
  if (!j.is_object()) throw InputError(path + ": document must be a JSON object");
  Document d;
  if (j.contains("label")) {
    if (!j["label"].is_string()) throw InputError(path + ": label must be a string");
    d.label = j["label"].get<std::string>();
  }
  if (j.contains("tolerance")) {
    const Json& t = j["tolerance"];
    if (!t.is_number() || !(t.get<double>() > 0.0) || !std::isfinite(t.get<double>())) {
      throw InputError(path + ": tolerance must be a positive number");
    }
    d.tolerance = t.get<double>();
  }
  if (!j.contains("basis") || !j["basis"].is_array() || j["basis"].size() != 4) {
    throw InputError(path + ": basis must be a list of exactly 4 expressions");
  }
  for (std::size_t k = 0; k < 4; ++k) {
    const Json& e = j["basis"][k];
    if (!e.is_string()) throw InputError(path + ": basis[" + std::to_string(k) + "] must be a string");
    d.texts[k] = e.get<std::string>();
    try {
      d.values[k] = qexpr::evaluate(d.texts[k]);
    } catch (const Error& err) {
      throw InputError(path + ": basis[" + std::to_string(k) + "]: " + err.what());
    }
  }
  return d;
}

Settings settings_for(const Options& opt, const std::vector<Document>& docs) {
  Settings s;
  s.max_cells = opt.max_cells;
  if (opt.tol) {
    s.tol = *opt.tol;
  } else {
    // several documents: the loosest tolerance any of them asks for
    std::optional<double> t;
    for (const auto& d : docs)
      if (d.tolerance) t = t ? std::max(*t, *d.tolerance) : *d.tolerance;
    if (t) s.tol = *t;
  }
  return s;
}

Json header(const std::string& command, const std::vector<Document>& docs, const Settings& s) {
  Json j;
  j["command"] = command;
  if (docs.size() == 1) {
    j["label"] = docs[0].label ? Json(*docs[0].label) : Json();
  } else {
    Json labels = Json::array();
    for (const auto& d : docs) labels.push_back(d.label ? Json(*d.label) : Json());
    j["labels"] = labels;
  }
  j["settings"] = {{"tolerance", num(s.tol)}, {"max_cells", s.max_cells}};
  return j;
}

Json cmd_parse(const Document& d, const Basis4&) {
  Json entries = Json::array();
  for (std::size_t k = 0; k < 4; ++k) {
    entries.push_back({{"text", d.texts[k]},
                       {"canonical", qexpr::to_string(qexpr::parse(d.texts[k]))},
                       {"value", quat(d.values[k])}});
  }
  return {{"entries", entries}};
}

Json cmd_gram(const Basis4& b, const Settings& s) {
  const Lattice l(b, s.tol);
  Json j;
  j["gram"] = matrix(l.gram().r);
  j["eigenvalues"] = Json::array();
  for (double v : l.eigen().values) j["eigenvalues"].push_back(num(v));
  j["determinant"] = num(determinant(l.gram().r));
  j["necessary_conditions"] = check(b, necessary_conditions(l.gram(), s.tol));
  return j;
}

Json cmd_check_reduced(const Basis4& b, const Settings& s) {
  const CheckReport r = check_reduced(b, s);
  Json j;
  j["verdict"] = r.verdict ? "reduced" : "not_reduced";
  j["necessary_conditions"] = check(b, necessary_conditions(gram(b), s.tol));
  j["check"] = check(b, r);
  return j;
}

Json cmd_check_tame(const Basis4& b, const Settings& s) {
  const CheckReport r = check_reduced(b, s);
  Json j;
  if (!r.verdict) {
    j["verdict"] = "not_reduced";
    j["reduced"] = check(b, r);
    j["tame"] = Json();
    return j;
  }
  const CheckReport t = check_tame(b, s);
  j["verdict"] = t.verdict ? "tame" : "not_tame";
  j["reduced"] = check(b, r);
  j["tame"] = check(b, t);
  return j;
}

Json cmd_reduce(const Basis4& b, const Settings& s) {
  const ReductionResult r = reduce(b, s);
  Json j;
  j["basis"] = quats(r.basis);
  j["u"] = int_matrix(r.u.rows());
  j["det_u"] = r.u.determinant();
  j["gram"] = matrix(r.gram.r);
  j["stage_minima"] = Json::array();
  for (double v : r.stage_minima) j["stage_minima"].push_back(num(v));
  return j;
}

Json cmd_modulus(const Basis4& b, const Settings& s, bool orient) {
  const SpecialBasis sb = special_basis(b, s);
  Modulus m{{sb.basis[1], sb.basis[2], sb.basis[3]}};
  Json j;
  j["first_vector"] = quat(sb.first);
  j["scale"] = num(sb.scale);
  j["rotation"] = quat(sb.rotation);
  j["u"] = int_matrix(sb.u.rows());
  j["special_basis"] = quats(sb.basis);
  if (orient) {
    const OrientedModulus om = normalize_orientation(m, s.tol);
    m = om.modulus;
    j["orientation"] = {{"rotation", matrix(om.rotation)}, {"degenerate", om.degenerate}};
  } else {
    j["orientation"] = Json();
  }
  j["modulus"] = Json::array({quat(m[0]), quat(m[1]), quat(m[2])});
  j["invariant_violations"] = modulus_invariant_violations(m, s.tol);
  const SetMembership f = in_fundamental_set(m, s);
  const SetMembership t = in_tame_set(m, s);
  j["fundamental_set"] = {{"member", f.member}, {"reason", f.reason}};
  j["tame_set"] = {{"member", t.member}, {"reason", t.reason}};
  return j;
}

Json cmd_aut(const Basis4& b, const Settings& s, bool orient) {
  Basis4 target = b;
  if (orient) target = normalize_orientation(modulus(b, s), s.tol).modulus.basis(s.tol);
  const AutGroup g = aut_group(target, s);
  Json j;
  j["kind"] = to_string(g.kind);
  j["order"] = g.elements.size();
  j["renormalized"] = g.renormalized || orient;
  j["basis"] = quats(g.basis);
  j["elements"] = Json::array();
  for (const auto& a : g.elements) j["elements"].push_back(quat(a));
  return j;
}

Json cmd_equivalent(const Basis4& b1, const Basis4& b2, const Settings& s) {
  const auto w = equivalent(b1, b2, s);
  Json j;
  j["verdict"] = w ? "equivalent" : "not_equivalent";
  if (w) {
    j["witness"] = {{"a_matrix", int_matrix(w->a_matrix.rows())},
                    {"a", quat(w->a)},
                    {"multiplier", quat(w->multiplier)},
                    {"scale_ratio", num(w->scale_ratio)},
                    {"special_basis_1", quats(w->special1)},
                    {"special_basis_2", quats(w->special2)}};
  } else {
    j["witness"] = Json();
  }
  return j;
}

Json cmd_sphere(const Basis4& b, const Settings& s, double radius) {
  const auto pts = points_with_norm(Lattice(b, s.tol), radius, s);
  Json j;
  j["radius"] = num(radius);
  j["count"] = pts.size();
  j["points"] = Json::array();
  for (const auto& p : pts) j["points"].push_back({{"coords", ints(p.coords)}, {"point", quat(p.point)}});
  return j;
}

std::string scalar_text(const Json& v) {
  if (v.is_null()) return "none";
  if (v.is_boolean()) return v.get<bool>() ? "yes" : "no";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v.get<double>());
    return buf;
  }
  return v.dump();
}

bool flat(const Json& v) {
  if (!v.is_array()) return !v.is_object();
  return std::all_of(v.begin(), v.end(), [](const Json& x) { return !x.is_array() && !x.is_object(); });
}

std::string inline_text(const Json& v) {
  if (!v.is_array()) return scalar_text(v);
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + scalar_text(v[i]);
  return s + "]";
}

void render_text(const Json& v, int indent, std::ostream& out) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  if (v.is_object()) {
    for (const auto& [key, item] : v.items()) {
      if (flat(item)) {
        out << pad << key << ": " << inline_text(item) << '\n';
      } else {
        out << pad << key << ":\n";
        render_text(item, indent + 2, out);
      }
    }
  } else if (v.is_array()) {
    for (const auto& item : v) {
      if (flat(item)) {
        out << pad << "- " << inline_text(item) << '\n';
      } else {
        out << pad << "-\n";
        render_text(item, indent + 2, out);
      }
    }
  } else {
    out << pad << scalar_text(v) << '\n';
  }
}

int execute(const std::string& command, const Options& opt, std::ostream& out) {
  std::vector<Document> docs;
  for (const auto& f : opt.files) docs.push_back(load(f));
  const Settings s = settings_for(opt, docs);
  std::vector<Basis4> bases;
  for (const auto& d : docs) bases.emplace_back(d.values, s.tol);
  for (const auto& b : bases) (void)Lattice(b, s.tol);  // rejects non positive definite Gram matrices

  Json report = header(command, docs, s);
  Json body;
  if (command == "parse") body = cmd_parse(docs[0], bases[0]);
  else if (command == "gram") body = cmd_gram(bases[0], s);
  else if (command == "check-reduced") body = cmd_check_reduced(bases[0], s);
  else if (command == "check-tame") body = cmd_check_tame(bases[0], s);
  else if (command == "reduce") body = cmd_reduce(bases[0], s);
  else if (command == "modulus") body = cmd_modulus(bases[0], s, opt.normalize_orientation);
  else if (command == "aut") body = cmd_aut(bases[0], s, opt.normalize_orientation);
  else if (command == "equivalent") body = cmd_equivalent(bases[0], bases[1], s);
  else if (command == "sphere") body = cmd_sphere(bases[0], s, opt.radius);
  for (auto& [key, value] : body.items()) report[key] = value;

  if (opt.format == "json") {
    out << report.dump(2) << '\n';
  } else {
    render_text(report, 0, out);
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quaternionic tori: lattice reduction, moduli and automorphism groups", "qtori"};
  app.require_subcommand(1);
  Options opt;
  double tol = 0.0;
  auto* tol_opt = app.add_option("--tol", tol, "Numerical tolerance (default 1e-9, or the document's)")
                      ->check(CLI::PositiveNumber);
  app.add_option("--max-cells", opt.max_cells, "Cap on enumerated cells")->check(CLI::PositiveNumber);
  app.add_option("--format", opt.format, "Report format")->check(CLI::IsMember({"json", "text"}));

  struct Command {
    const char* name;
    const char* help;
    int files;
  };
  const Command commands[] = {
      {"parse", "Parse and evaluate the basis expressions", 1},
      {"gram", "Gram matrix, eigenvalues and necessary conditions", 1},
      {"check-reduced", "Decide whether the basis is reduced", 1},
      {"check-tame", "Decide whether a reduced basis is tame", 1},
      {"reduce", "Minkowski-Siegel reduction", 1},
      {"modulus", "Special basis and modulus", 1},
      {"aut", "Automorphism group of the torus", 1},
      {"equivalent", "Decide whether two lattices give equivalent tori", 2},
      {"sphere", "Lattice points of a given norm", 1},
  };
  for (const auto& command : commands) {
    auto* sub = app.add_subcommand(command.name, command.help);
    sub->fallthrough();
    sub->add_option("files", opt.files, command.files == 2 ? "Two lattice documents" : "Lattice document")
        ->required()
        ->expected(command.files);
    if (std::string(command.name) == "sphere") {
      sub->add_option("--radius", opt.radius, "Norm of the points")->check(CLI::NonNegativeNumber);
    }
    if (std::string(command.name) == "modulus" || std::string(command.name) == "aut") {
      sub->add_flag("--normalize-orientation", opt.normalize_orientation, "Rotate the modulus into its standard frame");
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (tol_opt->count() > 0) opt.tol = tol;
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    return execute(command, opt, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const InvalidBasis& e) {
    err << "error: invalid basis: " << e.what() << '\n';
    return kExitInvalidBasis;
  } catch (const BoxTooLarge& e) {
    err << "error: " << e.what() << "; raise --max-cells to proceed\n";
    return kExitResourceCap;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace qtori::cli
