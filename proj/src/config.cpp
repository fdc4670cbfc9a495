#include "cloak/config.hpp"

#include <fstream>
#include <set>

#include "cloak/errors.hpp"

namespace cloak {

using nlohmann::json;

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::Auto: return "auto";
    case Strategy::Physical: return "physical";
    case Strategy::Virtual: return "virtual";
  }
  return "?";
}

Strategy parse_strategy(const std::string& s) {
  for (auto v : {Strategy::Auto, Strategy::Physical, Strategy::Virtual})
    if (to_string(v) == s) return v;
  throw InvalidInput("unknown strategy '" + s + "'");
}

ShapePtr ShapeConfig::build() const {
  if (type == "ball") return std::make_shared<BallShape>(center, radius);
  if (type == "box") return std::make_shared<BoxShape>(lo, hi);
  if (type == "segment") return std::make_shared<SegmentShape>(p0, p1);
  throw InvalidInput("unknown shape type '" + type + "'");
}

ScenarioConfig ScenarioConfig::with_eps(double eps) const {
  ScenarioConfig c = *this;
  c.cloak.eps = eps;
  if (a_equals_eps) c.cloak.a = eps;
  return c;
}

LossyLayerSpec ScenarioConfig::layer_spec() const {
  LossyLayerSpec s;
  s.variant = layer;
  s.eps = cloak.eps;
  s.c = LossyLayerSpec::constants({});
  for (double v : c) s.c.push_back([v](const Vec&) { return v; });
  s.lambda0 = lambda0;
  s.Lambda0 = Lambda0;
  return s;
}

CloakedContents ScenarioConfig::contents() const {
  CloakedContents cc;
  cc.medium = {medium_sigma, medium_q};
  for (const auto& inc : inclusions) cc.inclusions.push_back({inc.shape.build(), {inc.sigma, inc.q}});
  for (const auto& ob : obstacles) cc.obstacles.push_back({ob.kind, ob.shape.build(), std::nullopt});
  if (source) {
    SourceSpec s;
    s.dim = 2;
    s.support = source->shape.build();
    ShapePtr sup = s.support;
    if (source->h) {
      Complex h = *source->h;
      s.h = [h, sup](const Vec& x) { return sup->contains(x) ? h : Complex(0); };
    }
    if (source->H) {
      auto H = *source->H;
      s.H = [H, sup](const Vec& x) {
        CVec v(2);
        if (sup->contains(x)) v << H[0], H[1];
        else v.setZero();
        return v;
      };
    }
    cc.source = s;
  }
  return cc;
}

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw InvalidInput(where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw InvalidInput("unknown key '" + it.key() + "' in " + where);
}

Vec to_vec(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty() || j.size() > 3) throw InvalidInput(what + " must be an array of 1-3 numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) v(i) = j[i].get<double>();
  return v;
}

json from_vec(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Complex to_complex(const json& j, const std::string& what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  throw InvalidInput(what + " must be a number or [re, im]");
}

json from_complex(Complex z) { return json::array({z.real(), z.imag()}); }

Mat to_mat(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2) throw InvalidInput(what + " must be a 2x2 array");
  Mat m(2, 2);
  for (int r = 0; r < 2; ++r) {
    if (!j[r].is_array() || j[r].size() != 2) throw InvalidInput(what + " must be a 2x2 array");
    for (int c = 0; c < 2; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

json from_mat(const Mat& m) {
  return json::array({json::array({m(0, 0), m(0, 1)}), json::array({m(1, 0), m(1, 1)})});
}

ShapeConfig parse_shape(const json& j) {
  check_keys(j, {"type", "center", "radius", "lo", "hi", "p0", "p1"}, "shape");
  ShapeConfig s;
  s.type = j.value("type", "ball");
  if (s.type == "ball") {
    s.center = to_vec(j.at("center"), "shape.center");
    s.radius = j.at("radius").get<double>();
  } else if (s.type == "box") {
    s.lo = to_vec(j.at("lo"), "shape.lo");
    s.hi = to_vec(j.at("hi"), "shape.hi");
  } else if (s.type == "segment") {
    s.p0 = to_vec(j.at("p0"), "shape.p0");
    s.p1 = to_vec(j.at("p1"), "shape.p1");
  } else {
    throw InvalidInput("unknown shape type '" + s.type + "'");
  }
  s.build();  // validates
  return s;
}

json shape_json(const ShapeConfig& s) {
  if (s.type == "ball") return {{"type", s.type}, {"center", from_vec(s.center)}, {"radius", s.radius}};
  if (s.type == "box") return {{"type", s.type}, {"lo", from_vec(s.lo)}, {"hi", from_vec(s.hi)}};
  return {{"type", s.type}, {"p0", from_vec(s.p0)}, {"p1", from_vec(s.p1)}};
}

HardTreatment parse_hard(const std::string& s) {
  if (s == "cut_cell") return HardTreatment::CutCell;
  if (s == "staircase") return HardTreatment::Staircase;
  throw InvalidInput("unknown hard-boundary treatment '" + s + "'");
}

}  // namespace

ScenarioConfig parse_config(const json& j) {
  try {
    check_keys(j, {"name", "cloak", "layer", "k", "wavelength", "incidence_deg", "contents", "grid", "solve", "output"},
               "config");
    ScenarioConfig c;
    c.name = j.value("name", c.name);
    if (j.contains("k") && j.contains("wavelength")) throw InvalidInput("give either k or wavelength, not both");
    if (j.contains("k")) c.k = j["k"].get<double>();
    if (j.contains("wavelength")) c.k = 2 * kPi / j["wavelength"].get<double>();
    if (!(c.k > 0)) throw InvalidInput("wavenumber must be positive");
    if (j.contains("incidence_deg")) c.incidence_deg = j["incidence_deg"].get<std::vector<double>>();
    if (c.incidence_deg.empty()) throw InvalidInput("at least one incident direction is needed");

    if (j.contains("cloak")) {
      const json& k = j["cloak"];
      check_keys(k, {"kind", "r1", "r2", "eps", "a", "b", "p", "p_right", "w"}, "cloak");
      c.cloak.kind = parse_cloak_kind(k.value("kind", "none"));
      c.cloak.dim = (c.cloak.kind == CloakKind::D || c.cloak.kind == CloakKind::E) ? 3 : 2;
      c.cloak.r1 = k.value("r1", c.cloak.r1);
      c.cloak.r2 = k.value("r2", c.cloak.r2);
      c.cloak.eps = k.value("eps", c.cloak.eps);
      if (k.contains("a") && k["a"].is_string()) {
        if (k["a"].get<std::string>() != "eps") throw InvalidInput("cloak.a must be a number or \"eps\"");
        c.a_equals_eps = true;
        c.cloak.a = c.cloak.eps;
      } else {
        c.cloak.a = k.value("a", c.cloak.a);
      }
      c.cloak.b = k.value("b", c.cloak.b);
      c.cloak.p = parse_norm(k.value("p", std::string("2")));
      c.cloak.p_right = parse_norm(k.value("p_right", to_string(c.cloak.p)));
      if (k.contains("w")) c.cloak.w = WeightVector(to_vec(k["w"], "cloak.w"));
      c.cloak.validate();
    }
    if (j.contains("layer")) {
      const json& l = j["layer"];
      check_keys(l, {"variant", "c", "lambda0", "Lambda0"}, "layer");
      c.layer = parse_layer_variant(l.value("variant", to_string(c.layer)));
      if (l.contains("c")) c.c = l["c"].get<std::vector<double>>();
      c.lambda0 = l.value("lambda0", c.lambda0);
      c.Lambda0 = l.value("Lambda0", c.Lambda0);
    } else {
      switch (c.cloak.kind) {
        case CloakKind::Full: c.layer = LayerVariant::FullCloak; break;
        case CloakKind::C: c.layer = LayerVariant::CLayer; break;
        case CloakKind::D: c.layer = LayerVariant::DLayer; break;
        case CloakKind::E: c.layer = LayerVariant::ELayer; break;
        case CloakKind::None: break;
      }
    }
    if (j.contains("contents")) {
      const json& t = j["contents"];
      check_keys(t, {"sigma", "q", "inclusions", "obstacles", "source"}, "contents");
      if (t.contains("sigma")) c.medium_sigma = to_mat(t["sigma"], "contents.sigma");
      if (t.contains("q")) c.medium_q = to_complex(t["q"], "contents.q");
      for (const auto& e : t.value("inclusions", json::array())) {
        check_keys(e, {"shape", "sigma", "q"}, "inclusion");
        InclusionConfig inc;
        inc.shape = parse_shape(e.at("shape"));
        if (e.contains("sigma")) inc.sigma = to_mat(e["sigma"], "inclusion.sigma");
        if (e.contains("q")) inc.q = to_complex(e["q"], "inclusion.q");
        c.inclusions.push_back(inc);
      }
      for (const auto& e : t.value("obstacles", json::array())) {
        check_keys(e, {"kind", "shape"}, "obstacle");
        ObstacleConfig ob;
        ob.kind = parse_obstacle_kind(e.value("kind", "sound_hard"));
        if (ob.kind == ObstacleKind::Impedance) throw UnsupportedFeature("impedance obstacles cannot be solved");
        ob.shape = parse_shape(e.at("shape"));
        c.obstacles.push_back(ob);
      }
      if (t.contains("source") && !t["source"].is_null()) {
        const json& s = t["source"];
        check_keys(s, {"shape", "h", "H"}, "source");
        SourceConfig sc;
        sc.shape = parse_shape(s.at("shape"));
        if (s.contains("h") && !s["h"].is_null()) sc.h = to_complex(s["h"], "source.h");
        if (s.contains("H") && !s["H"].is_null()) {
          if (!s["H"].is_array() || s["H"].size() != 2) throw InvalidInput("source.H must have two components");
          sc.H = std::array<Complex, 2>{to_complex(s["H"][0], "source.H"), to_complex(s["H"][1], "source.H")};
        }
        c.source = sc;
      }
    }
    if (j.contains("grid")) {
      const json& g = j["grid"];
      check_keys(g, {"ppw", "pml_cells", "margin", "refine", "cells_per_eps", "growth"}, "grid");
      c.grid.ppw = g.value("ppw", c.grid.ppw);
      c.grid.pml_cells = g.value("pml_cells", c.grid.pml_cells);
      c.grid.margin = g.value("margin", c.grid.margin);
      c.grid.refine = g.value("refine", c.grid.refine);
      c.grid.cells_per_eps = g.value("cells_per_eps", c.grid.cells_per_eps);
      c.grid.growth = g.value("growth", c.grid.growth);
      if (!(c.grid.ppw > 0 && c.grid.margin > 0 && c.grid.refine >= 1 && c.grid.cells_per_eps > 0 &&
            c.grid.growth > 1 && c.grid.pml_cells >= 0))
        throw InvalidInput("grid settings out of range");
    }
    if (j.contains("solve")) {
      const json& s = j["solve"];
      check_keys(s, {"strategy", "subsamples", "hard_boundary", "residual_tol"}, "solve");
      c.strategy = parse_strategy(s.value("strategy", "auto"));
      c.solve.subsamples = s.value("subsamples", c.solve.subsamples);
      c.solve.hard = parse_hard(s.value("hard_boundary", std::string("cut_cell")));
      c.solve.residual_tol = s.value("residual_tol", c.solve.residual_tol);
      if (c.solve.subsamples < 1) throw InvalidInput("subsamples must be positive");
    }
    if (j.contains("output")) {
      const json& o = j["output"];
      check_keys(o, {"n_dirs", "dump_fields"}, "output");
      c.n_dirs = o.value("n_dirs", c.n_dirs);
      c.dump_fields = o.value("dump_fields", c.dump_fields);
      if (c.n_dirs < 4) throw InvalidInput("need at least 4 far-field directions");
    }
    return c;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("config: ") + e.what());
  }
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw InvalidInput("cannot open config " + path);
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw InvalidInput(path + ": " + e.what());
  }
  return parse_config(j);
}

json to_json(const ScenarioConfig& c) {
  json j;
  j["name"] = c.name;
  j["k"] = c.k;
  j["incidence_deg"] = c.incidence_deg;
  Vec w = c.cloak.w.dim() == c.cloak.dim ? c.cloak.w.entries() : Vec::Ones(c.cloak.dim);
  j["cloak"] = {{"kind", to_string(c.cloak.kind)}, {"r1", c.cloak.r1},         {"r2", c.cloak.r2},
                {"eps", c.cloak.eps},                {"a", c.a_equals_eps ? json("eps") : json(c.cloak.a)},           {"b", c.cloak.b},
                {"p", to_string(c.cloak.p)},         {"p_right", to_string(c.cloak.p_right)}, {"w", from_vec(w)}};
  j["layer"] = {{"variant", to_string(c.layer)}, {"c", c.c}, {"lambda0", c.lambda0}, {"Lambda0", c.Lambda0}};
  json t;
  t["sigma"] = from_mat(c.medium_sigma);
  t["q"] = from_complex(c.medium_q);
  t["inclusions"] = json::array();
  for (const auto& inc : c.inclusions)
    t["inclusions"].push_back({{"shape", shape_json(inc.shape)}, {"sigma", from_mat(inc.sigma)}, {"q", from_complex(inc.q)}});
  t["obstacles"] = json::array();
  for (const auto& ob : c.obstacles) t["obstacles"].push_back({{"kind", to_string(ob.kind)}, {"shape", shape_json(ob.shape)}});
  if (c.source) {
    json s{{"shape", shape_json(c.source->shape)}};
    s["h"] = c.source->h ? from_complex(*c.source->h) : json(nullptr);
    s["H"] = c.source->H ? json::array({from_complex((*c.source->H)[0]), from_complex((*c.source->H)[1])}) : json(nullptr);
    t["source"] = s;
  } else {
    t["source"] = nullptr;
  }
  j["contents"] = t;
  j["grid"] = {{"ppw", c.grid.ppw},       {"pml_cells", c.grid.pml_cells},         {"margin", c.grid.margin},
               {"refine", c.grid.refine}, {"cells_per_eps", c.grid.cells_per_eps}, {"growth", c.grid.growth}};
  j["solve"] = {{"strategy", to_string(c.strategy)},
                {"subsamples", c.solve.subsamples},
                {"hard_boundary", c.solve.hard == HardTreatment::CutCell ? "cut_cell" : "staircase"},
                {"residual_tol", c.solve.residual_tol}};
  j["output"] = {{"n_dirs", c.n_dirs}, {"dump_fields", c.dump_fields}};
  return j;
}

std::string emit_config(const ScenarioConfig& c) { return to_json(c).dump(2) + "\n"; }

}  // namespace cloak
