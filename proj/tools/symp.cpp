// symp: command-line front end over the library
#include "symp/acoords.hpp"
#include "symp/pairforms.hpp"
#include "symp/proptest.hpp"
#include "symp/xcoords.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using json = nlohmann::json;
using namespace symp;

namespace {

const char *kVersion = "symp 1.0.0";

// malformed or incomplete input
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  double tol = 1e-9, cluster_tol = 1e-6;
  std::uint64_t seed = 1;
  std::string in, out;
  std::string surface;
  int n = 0;
  std::string mode = "transverse";
  int edge = -1;
  int xg = 1;
  std::string suite;
  int count = 100;
  Ctx ctx() const { return Ctx{tol, cluster_tol}; }
};

// ---- JSON helpers

json mat_json(const Mat &m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (int j = 0; j < m.cols(); ++j)
      r.push_back(m(i, j));
    rows.push_back(r);
  }
  return rows;
}

Mat json_mat(const json &j, const std::string &what) {
  if (j.is_number())
    return Mat::Constant(1, 1, j.get<double>());
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw ParseError(what + ": expected a matrix (array of rows)");
  int r = int(j.size()), c = int(j[0].size());
  Mat m(r, c);
  for (int i = 0; i < r; ++i) {
    if (!j[i].is_array() || int(j[i].size()) != c)
      throw ParseError(what + ": ragged matrix");
    for (int k = 0; k < c; ++k) {
      if (!j[i][k].is_number())
        throw ParseError(what + ": non-numeric entry");
      m(i, k) = j[i][k].get<double>();
    }
  }
  return m;
}

Mat json_square(const json &j, int n, const std::string &what) {
  Mat m = json_mat(j, what);
  if (m.rows() != n || m.cols() != n)
    throw PreconditionError(what + ": expected " + std::to_string(n) + "x" + std::to_string(n));
  return m;
}

json en_json(const ENData &e) {
  static const char *names[4] = {"1,1", "1,-1", "-1,1", "-1,-1"};
  json fam = json::object();
  for (int x = 0; x < 4; ++x) {
    json blocks = json::array();
    for (size_t i = 0; i < e.dn.fam[x].size(); ++i)
      blocks.push_back({{"size", e.dn.fam[x][i]}, {"lambda", e.lam[x][i]}});
    fam[names[x]] = blocks;
  }
  json cx = json::array();
  for (size_t i = 0; i < e.dn.m2.size(); ++i)
    cx.push_back({{"size", e.dn.m2[i]}, {"lambda", {e.lamC[i].real(), e.lamC[i].imag()}}});
  return {{"families", fam}, {"complex", cx}, {"n", e.dn.n()}, {"text", to_string(e)}};
}

json read_input(const RunConfig &cfg) {
  std::string text;
  if (cfg.in.empty() || cfg.in == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    text = ss.str();
  } else {
    std::ifstream f(cfg.in);
    if (!f)
      throw ParseError("cannot read " + cfg.in);
    std::stringstream ss;
    ss << f.rdbuf();
    text = ss.str();
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error &e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

void write_output(const RunConfig &cfg, json j) {
  j["version"] = kVersion;
  std::string s = j.dump(2) + "\n";
  if (cfg.out.empty() || cfg.out == "-") {
    std::cout << s;
  } else {
    std::ofstream f(cfg.out);
    if (!f)
      throw PreconditionError("cannot write " + cfg.out);
    f << s;
  }
}

template <class T> T field(const json &j, const char *key) {
  if (!j.is_object() || !j.contains(key))
    throw ParseError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception &) {
    throw ParseError(std::string("bad field '") + key + "'");
  }
}

// ---- triangulations

json tri_json(const Triangulation &T) {
  json corner = json::array();
  for (auto &c : T.corner)
    corner.push_back({c[0], c[1], c[2]});
  return {{"g", T.surf.g}, {"k", T.surf.k}, {"marks", T.surf.marks},
          {"partner", T.partner}, {"corner", corner}};
}

Triangulation json_tri(const json &j) {
  Triangulation T;
  T.surf.g = field<int>(j, "g");
  T.surf.k = field<int>(j, "k");
  T.surf.marks = field<std::vector<int>>(j, "marks");
  T.partner = field<std::vector<int>>(j, "partner");
  auto c = field<std::vector<std::vector<int>>>(j, "corner");
  for (auto &row : c) {
    if (row.size() != 3)
      throw ParseError("corner rows need three labels");
    T.corner.push_back({row[0], row[1], row[2]});
  }
  validate(T);
  return T;
}

// --surface overrides the input; "triangulation" is the explicit form
Triangulation input_tri(const RunConfig &cfg, const json &in) {
  if (!cfg.surface.empty())
    return build_surface(cfg.surface);
  if (in.is_object() && in.contains("triangulation"))
    return json_tri(in["triangulation"]);
  return build_surface(field<std::string>(in, "surface"));
}

int input_n(const RunConfig &cfg, const json &in) {
  int n = cfg.n > 0 ? cfg.n : field<int>(in, "n");
  if (n < 1)
    throw PreconditionError("n must be positive");
  return n;
}

// edge-keyed matrices {"0": M, ...} by index into T.edges()
std::map<int, Mat> edge_values(const json &j, int n_edges, int n, const char *what) {
  std::map<int, Mat> out;
  if (!j.is_object())
    throw ParseError(std::string(what) + " must be an object keyed by edge id");
  for (auto it = j.begin(); it != j.end(); ++it) {
    int id;
    try {
      size_t pos;
      id = std::stoi(it.key(), &pos);
      if (pos != it.key().size())
        throw std::invalid_argument("");
    } catch (const std::exception &) {
      throw ParseError(std::string(what) + ": bad id '" + it.key() + "'");
    }
    if (id < 0 || id >= n_edges)
      throw PreconditionError(std::string(what) + ": id " + it.key() + " out of range");
    out[id] = json_square(it.value(), n, std::string(what) + "[" + it.key() + "]");
  }
  return out;
}

ACoords json_acoords(const Triangulation &T, const json &in, int n) {
  auto vals = edge_values(field<json>(in, "edges"), T.n_edges(), n, "edges");
  auto reps = T.edges();
  ACoords A;
  A.n = n;
  A.H.assign(T.slots(), Mat());
  for (int id = 0; id < int(reps.size()); ++id) {
    if (!vals.count(id))
      throw PreconditionError("edges: missing value for edge " + std::to_string(id));
    int s = reps[id];
    A.H[s] = vals[id];
    if (!T.external(s))
      A.H[T.partner[s]] = vals[id].transpose();
  }
  return A;
}

// the flip output nests {n, edges} under "acoords"; accept that form as input
void lift_acoords(json &in) {
  if (!in.is_object() || !in.contains("acoords") || !in["acoords"].is_object())
    return;
  for (auto key : {"n", "edges"})
    if (in["acoords"].contains(key) && !in.contains(key))
      in[key] = in["acoords"][key];
}

json acoords_json(const Triangulation &T, const ACoords &A) {
  json e = json::object();
  auto reps = T.edges();
  for (int id = 0; id < int(reps.size()); ++id)
    e[std::to_string(id)] = mat_json(A.H[reps[id]]);
  return {{"n", A.n}, {"edges", e}};
}

json system_json(const FramedSystem &s) {
  json arrows = json::array();
  for (size_t a = 0; a < s.q.arrows.size(); ++a) {
    auto &ar = s.q.arrows[a];
    arrows.push_back({{"id", a},
                      {"from", ar.from},
                      {"to", ar.to},
                      {"kind", ar.kind == ArrowKind::A2 ? "A2" : "A3"},
                      {"G", mat_json(s.G[a])}});
  }
  return {{"n", s.n}, {"arrows", arrows}};
}

// ---- commands

json cmd_classify_pair(const RunConfig &cfg) {
  json in = read_input(cfg);
  Mat b0 = json_mat(field<json>(in, "b0"), "b0");
  Mat b1 = json_mat(field<json>(in, "b1"), "b1");
  if (b0.rows() != b0.cols() || b1.rows() != b1.cols() || b0.rows() != b1.rows())
    throw PreconditionError("b0 and b1 must be square of equal size");
  auto ctx = cfg.ctx();
  auto nf = classify_pair(b0, b1, ctx);
  double dual = dual_pair_check(b0, b1, nf, ctx);
  return {{"command", "classify-pair"},
          {"en", en_json(nf.en)},
          {"P", mat_json(nf.P)},
          {"residuals", {{"b0", nf.res0}, {"b1", nf.res1}, {"dual_pair", dual}}},
          {"cluster_margin", nf.margin}};
}

FramedSystem holonomy_from_chart(const RunConfig &cfg, const Quiver &q, const json &in,
                                 int n, std::string &chart) {
  auto ctx = cfg.ctx();
  chart = in.is_object() && in.contains("chart") ? field<std::string>(in, "chart") : "xplus";
  if (chart == "xplus") {
    XPlus x;
    x.n = n;
    x.x.assign(q.arrows.size(), Mat::Identity(n, n));
    if (in.contains("edges")) {
      auto reps = q.T.edges();
      for (auto &[id, m] : edge_values(in["edges"], q.T.n_edges(), n, "edges")) {
        int s = reps[id];
        if (q.external(s))
          throw PreconditionError("edges: edge " + std::to_string(id) + " is external");
        int a = q.a2_out(s);
        x.x[a] = m;
        x.x[q.partner_arrow(a)] = m;
      }
    }
    if (in.contains("corners"))
      for (auto &[id, m] : edge_values(in["corners"], q.T.slots(), n, "corners"))
        x.x[id] = m;
    return hol_xplus(q, x, ctx);
  }
  if (chart == "xE-random" || chart == "xplus-random") {
    Rng rng(cfg.seed);
    if (chart == "xplus-random")
      return hol_xplus(q, rand_xplus_delta(q, n, rng), ctx);
    XEOptions opt;
    if (in.contains("face_sig")) {
      opt.face_sig = field<std::vector<int>>(in, "face_sig");
      if (int(opt.face_sig.size()) != q.T.faces())
        throw PreconditionError("face_sig needs one entry per face");
      for (int s : opt.face_sig)
        if (std::abs(s) > n || (s + n) % 2)
          throw PreconditionError("face_sig entries must be signatures of n×n forms");
    }
    return hol_xE(q, rand_xe(q, n, rng, opt), ctx);
  }
  if (chart == "acoords")
    return reconstruct_system(q.T, json_acoords(q.T, in, n), ctx).sys;
  throw PreconditionError("unknown chart '" + chart + "'");
}

json cmd_holonomy(const RunConfig &cfg) {
  json in = read_input(cfg);
  lift_acoords(in);
  auto T = input_tri(cfg, in);
  int n = input_n(cfg, in);
  auto q = build_quiver(T);
  auto ctx = cfg.ctx();
  std::string chart;
  auto sys = holonomy_from_chart(cfg, q, in, n, chart);
  json out = {{"command", "holonomy"}, {"chart", chart}, {"triangulation", tri_json(T)}};
  out["system"] = system_json(sys);
  out["residual"] = validate(sys, ctx).max();
  json mu = json::array();
  for (int f = 0; f < T.faces(); ++f)
    mu.push_back(mu_T(sys, f, ctx));
  out["mu_T"] = mu;
  json notices = json::array();
  if (T.surf.r() > 0 || T.surf.chibar() >= 0) {
    notices.push_back("Toledo number omitted: defined only for surfaces without framed boundary arcs and with negative Euler characteristic");
  } else {
    out["toledo"] = toledo(sys, ctx) + 0.0; // no negative zero
    out["milnor_wood_bound"] = n * std::abs(T.surf.chibar());
  }
  out["maximal"] = is_maximal(sys, ctx);
  try {
    auto ex = extract_xE(sys, ctx);
    auto zc = pi_components(q, over_from_xe(q, ex.x), ctx);
    out["component_class"] = {{"signatures", zc.s}, {"det_signs", zc.h}};
  } catch (const std::exception &e) {
    notices.push_back(std::string("component class omitted: ") + e.what());
  }
  if (!notices.empty())
    out["notices"] = notices;
  return out;
}

json cmd_flip(const RunConfig &cfg) {
  json in = read_input(cfg);
  lift_acoords(in);
  auto T = input_tri(cfg, in);
  int n = input_n(cfg, in);
  int edge = cfg.edge >= 0 ? cfg.edge : field<int>(in, "edge");
  if (edge < 0 || edge >= T.n_edges())
    throw PreconditionError("edge id out of range");
  int slot = T.edges()[edge];
  if (T.external(slot))
    throw PreconditionError("cannot flip an external edge");
  if (T.partner[slot] / 3 == slot / 3)
    throw PreconditionError("both sides of the edge lie in one face");
  auto ctx = cfg.ctx();
  auto A = json_acoords(T, in, n);
  auto res = check_acoords(T, A);
  if (!(res.max() <= std::sqrt(ctx.tol)))
    throw PreconditionError("A-coordinates violate their relations (residual " +
                            std::to_string(res.max()) + ")");
  auto A2 = flip_acoords(T, A, slot, ctx);
  auto T2 = flip(T, slot);
  int new_slot = flip_slot_map(T, slot)[slot];
  int new_edge = T2.edge_of(new_slot);
  return {{"command", "flip"},
          {"edge", edge},
          {"before", {{"triangulation", tri_json(T)}, {"acoords", acoords_json(T, A)}}},
          {"after",
           {{"triangulation", tri_json(T2)},
            {"acoords", acoords_json(T2, A2)},
            {"new_edge", new_edge},
            {"new_value", mat_json(A2.H[T2.edges()[new_edge]])},
            {"residual", check_acoords(T2, A2).max()}}}};
}

CountMode parse_mode(const std::string &m) {
  if (m == "transverse")
    return CountMode::Transverse;
  if (m == "maximal")
    return CountMode::Maximal;
  if (m == "isogenic")
    return CountMode::Isogenic;
  if (m == "isogenic-maximal")
    return CountMode::IsogenicMaximal;
  throw PreconditionError("unknown mode '" + m + "'");
}

json cmd_components(const RunConfig &cfg) {
  if (cfg.surface.empty())
    throw ParseError("--surface is required");
  if (cfg.n < 1)
    throw PreconditionError("--n must be positive");
  auto T = build_surface(cfg.surface);
  auto mode = parse_mode(cfg.mode);
  if (cfg.xg < 1)
    throw PreconditionError("--xg must be positive");
  json out = {{"command", "components"}, {"surface", cfg.surface}, {"n", cfg.n},
              {"mode", cfg.mode}, {"count", count_components(T, cfg.n, mode, cfg.xg)}};
  if (mode == CountMode::Isogenic || mode == CountMode::IsogenicMaximal)
    out["xG"] = cfg.xg;
  return out;
}

json cmd_proptest(const RunConfig &cfg, bool &ok) {
  auto rep = run_suite(cfg.suite, cfg.count, cfg.seed, cfg.ctx());
  ok = rep.ok();
  // timing is left out so that equal seeds give identical output
  return {{"command", "proptest"}, {"suite", rep.suite},   {"seed", cfg.seed},
          {"count", rep.count},     {"passed", rep.passed}, {"skipped", rep.skipped},
          {"worst_residual", rep.worst}, {"failures", rep.failures},
          {"result", ok ? "pass" : "fail"}};
}

int fail(int code, const std::string &kind, const std::string &msg) {
  json e = {{"version", kVersion}, {"error", kind}, {"message", msg}, {"exit", code}};
  std::cerr << e.dump() << "\n";
  return code;
}

} // namespace

int main(int argc, char **argv) {
  RunConfig cfg;
  CLI::App app{"Symplectic local systems toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--tol", cfg.tol, "numerical tolerance")->check(CLI::PositiveNumber);
  app.add_option("--cluster-tol", cfg.cluster_tol, "eigenvalue cluster tolerance")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--in", cfg.in, "input JSON file (default stdin)");
  app.add_option("--out", cfg.out, "output file (default stdout)");

  auto *cp = app.add_subcommand("classify-pair", "normal form of a pair of symmetric forms");
  auto *ho = app.add_subcommand("holonomy", "local system and invariants from a chart");
  ho->add_option("--surface", cfg.surface, "preset surface, e.g. torus, pants, polygon:5");
  ho->add_option("--n", cfg.n, "rank");
  auto *fl = app.add_subcommand("flip", "flip an edge of an A-coordinate chart");
  fl->add_option("--surface", cfg.surface, "preset surface");
  fl->add_option("--n", cfg.n, "rank");
  fl->add_option("--edge", cfg.edge, "edge id to flip");
  auto *co = app.add_subcommand("components", "number of connected components");
  co->add_option("--surface", cfg.surface, "preset surface")->required();
  co->add_option("--n", cfg.n, "rank")->required();
  co->add_option("--mode", cfg.mode, "transverse | maximal | isogenic | isogenic-maximal");
  co->add_option("--xg", cfg.xg, "order of the centre for the isogenic modes");
  auto *pt = app.add_subcommand("proptest", "batch property tests");
  pt->add_option("--suite", cfg.suite, "ptolemy | cocycle | roundtrip-xE | roundtrip-xplus")
      ->required();
  pt->add_option("--count", cfg.count, "number of cases");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    return fail(2, "parse", e.what());
  }

  try {
    json out;
    bool ok = true;
    if (*cp)
      out = cmd_classify_pair(cfg);
    else if (*ho)
      out = cmd_holonomy(cfg);
    else if (*fl)
      out = cmd_flip(cfg);
    else if (*co)
      out = cmd_components(cfg);
    else
      out = cmd_proptest(cfg, ok);
    write_output(cfg, out);
    return ok ? 0 : 4;
  } catch (const ParseError &e) {
    return fail(2, "parse", e.what());
  } catch (const PreconditionError &e) {
    return fail(3, "precondition", e.what());
  } catch (const NumericalError &e) {
    return fail(4, "numerical", e.what());
  } catch (const std::exception &e) {
    return fail(4, "numerical", e.what());
  }
}
