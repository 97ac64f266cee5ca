#include "coupledrd/scenario_io.hpp"

#include <cmath>
#include <fstream>

namespace crd {

namespace {

const char* kFlatLinear = R"json({
  "name": "flat_linear",
  "geometry": {"template": "flat_symmetric"},
  "resolution": 16,
  "model": {
    "n_species": 1,
    "transmission_variant": "linear",
    "k_i": [1.0]
  },
  "diffusion": {"a_plus": 0.05, "a_minus": 0.08},
  "initial": {
    "plus":  [{"type": "constant", "value": 1.0}],
    "minus": [{"type": "bump", "base": 0.5, "amplitude": 1.5, "center": [-0.5, 0.5], "width": 0.2}]
  },
  "solver": {"epsilon": 0.5, "dt_init": 0.002, "dt_min": 1e-12, "t_end": 1.0,
             "output_every": 0.05, "cg_tol": 1e-10}
})json";

const char* kFlatPolynomial = R"json({
  "name": "flat_polynomial",
  "geometry": {"template": "flat_symmetric"},
  "resolution": 16,
  "model": {
    "n_species": 2,
    "alpha": [1, 0], "beta": [0, 1], "k_plus": 0.5, "k_minus": 0.5,
    "transmission_variant": "polynomial",
    "gamma": [1, 0], "delta": [0, 1], "k_gamma": 1.0
  },
  "diffusion": {"a_plus": 0.05, "a_minus": 0.05},
  "initial": {
    "plus":  [{"type": "bump", "base": 0.8, "amplitude": 1.6, "center": [0.5, 0.5], "width": 0.2},
              {"type": "constant", "value": 0.6}],
    "minus": [{"type": "constant", "value": 0.7},
              {"type": "bump", "base": 0.5, "amplitude": 1.2, "center": [-0.5, 0.5], "width": 0.25}]
  },
  "solver": {"epsilon": 0.5, "dt_init": 0.002, "dt_min": 1e-12, "t_end": 1.0,
             "output_every": 0.05, "cg_tol": 1e-10}
})json";

const char* kTripleJunctionLinear = R"json({
  "name": "triple_junction_linear",
  "geometry": {"template": "triple_junction"},
  "resolution": 16,
  "model": {
    "n_species": 1,
    "transmission_variant": "linear",
    "k_i": [1.0]
  },
  "diffusion": {"a_plus": 0.06, "a_minus": 0.06},
  "initial": {
    "plus":  [{"type": "constant", "value": 0.8}],
    "minus": [{"type": "bump", "base": 0.4, "amplitude": 1.4, "center": [-0.4, 0.3], "width": 0.2}]
  },
  "solver": {"epsilon": 0.5, "dt_init": 0.002, "dt_min": 1e-12, "t_end": 1.0,
             "output_every": 0.05, "cg_tol": 1e-10}
})json";

const char* kCoshGradientConsistency = R"json({
  "name": "cosh_gradient_consistency",
  "geometry": {"template": "flat_symmetric"},
  "resolution": 16,
  "model": {
    "n_species": 2,
    "alpha": [1, 0], "beta": [0, 1], "k_plus": 1.0, "k_minus": 1.0,
    "transmission_variant": "polynomial",
    "gamma": [1, 0], "delta": [0, 1], "k_gamma": 0.7
  },
  "diffusion": {"a_plus": 0.05, "a_minus": 0.05},
  "initial": {
    "plus":  [{"type": "bump", "base": 0.9, "amplitude": 1.1, "center": [0.4, 0.6], "width": 0.25},
              {"type": "constant", "value": 1.1}],
    "minus": [{"type": "constant", "value": 0.9},
              {"type": "bump", "base": 0.6, "amplitude": 0.9, "center": [-0.6, 0.4], "width": 0.25}]
  },
  "solver": {"epsilon": 0.5, "dt_init": 0.002, "dt_min": 1e-12, "t_end": 1.0,
             "output_every": 0.05, "cg_tol": 1e-10}
})json";

}  // namespace

std::vector<std::string> builtin_scenario_names() {
  return {"flat_linear", "flat_polynomial", "triple_junction_linear", "cosh_gradient_consistency"};
}

nlohmann::json builtin_scenario(const std::string& name) {
  if (name == "flat_linear") return nlohmann::json::parse(kFlatLinear);
  if (name == "flat_polynomial") return nlohmann::json::parse(kFlatPolynomial);
  if (name == "triple_junction_linear") return nlohmann::json::parse(kTripleJunctionLinear);
  if (name == "cosh_gradient_consistency") return nlohmann::json::parse(kCoshGradientConsistency);
  throw ConfigError("unknown built-in scenario '" + name + "'");
}

namespace {

InitialFn initial_from_json(const nlohmann::json& j, int n_species) {
  struct Shape {
    std::string type;
    double value = 0.0, base = 0.0, amplitude = 0.0, width = 1.0, gx = 0.0, gy = 0.0;
    Vec2 center{0.0, 0.0};
  };
  auto parse_side = [&](const nlohmann::json& arr) {
    std::vector<Shape> shapes;
    if (static_cast<int>(arr.size()) != n_species)
      throw ConfigError("initial data: one shape per species required");
    for (const auto& e : arr) {
      Shape s;
      s.type = e.at("type").get<std::string>();
      if (s.type == "constant") {
        s.value = e.at("value").get<double>();
      } else if (s.type == "bump") {
        s.base = e.at("base").get<double>();
        s.amplitude = e.at("amplitude").get<double>();
        s.width = e.at("width").get<double>();
        s.center = {e.at("center").at(0).get<double>(), e.at("center").at(1).get<double>()};
      } else if (s.type == "linear") {
        s.base = e.at("base").get<double>();
        s.gx = e.value("gx", 0.0);
        s.gy = e.value("gy", 0.0);
      } else {
        throw ConfigError("initial data: unknown shape type '" + s.type + "'");
      }
      shapes.push_back(s);
    }
    return shapes;
  };
  auto shapes_plus = parse_side(j.at("plus"));
  auto shapes_minus = parse_side(j.at("minus"));

  return [shapes_plus, shapes_minus](Side side, Vec2 x, std::span<double> out) {
    const auto& shapes = side == Side::Plus ? shapes_plus : shapes_minus;
    for (std::size_t i = 0; i < shapes.size(); ++i) {
      const auto& s = shapes[i];
      double v = 0.0;
      if (s.type == "constant") {
        v = s.value;
      } else if (s.type == "bump") {
        double r2 = dot(x - s.center, x - s.center);
        v = s.base + s.amplitude * std::exp(-r2 / (2.0 * s.width * s.width));
      } else {
        v = std::max(0.0, s.base + s.gx * x[0] + s.gy * x[1]);
      }
      out[i] = v;
    }
  };
}

}  // namespace

Scenario scenario_from_json(const nlohmann::json& j) {
  Scenario sc;
  sc.name = j.value("name", std::string("scenario"));
  sc.geometry = build_geometry(j.at("geometry"));
  sc.resolution = j.value("resolution", 8);

  const nlohmann::json& model = j.at("model");
  sc.n_species = model.at("n_species").get<int>();
  if (model.contains("alpha")) sc.network = reaction_from_json(model);
  sc.transmission = transmission_from_json(model);
  sc.rates = make_rates(sc.network, sc.transmission, sc.n_species);

  sc.entropy.n = sc.n_species;
  sc.entropy.shifted = j.value("entropy_shifted", true);
  if (model.contains("u_ref_plus"))
    for (const auto& v : model.at("u_ref_plus")) sc.entropy.ref_plus.push_back(v.get<double>());
  if (model.contains("u_ref_minus"))
    for (const auto& v : model.at("u_ref_minus")) sc.entropy.ref_minus.push_back(v.get<double>());

  const nlohmann::json& diff = j.at("diffusion");
  if (diff.contains("per_species")) {
    DiffusionSpec d;
    for (const auto& e : diff.at("per_species")) {
      std::array<std::array<double, 2>, 2> c;
      c[static_cast<int>(Side::Plus)] = {e.at("plus").at(0).get<double>(),
                                         e.at("plus").at(1).get<double>()};
      c[static_cast<int>(Side::Minus)] = {e.at("minus").at(0).get<double>(),
                                          e.at("minus").at(1).get<double>()};
      d.coeff.push_back(c);
    }
    sc.diffusion = d;
  } else {
    sc.diffusion = DiffusionSpec::isotropic(sc.n_species, diff.at("a_plus").get<double>(),
                                            diff.at("a_minus").get<double>());
  }

  sc.initial = initial_from_json(j.at("initial"), sc.n_species);

  const nlohmann::json& sol = j.at("solver");
  sc.epsilon = sol.value("epsilon", 1.0);
  sc.dt_init = sol.value("dt_init", 1e-3);
  sc.dt_min = sol.value("dt_min", 1e-12);
  sc.t_end = sol.value("t_end", 1.0);
  sc.output_every = sol.value("output_every", 0.05);
  sc.cg_tol = sol.value("cg_tol", 1e-10);
  sc.log_floor = sol.value("log_floor", 1e-30);
  sc.seed = j.value("seed", 1ull);
  sc.validate();
  return sc;
}

nlohmann::json load_scenario_json(const std::string& path_or_name) {
  for (const std::string& name : builtin_scenario_names())
    if (name == path_or_name) return builtin_scenario(name);
  std::ifstream in(path_or_name);
  if (!in) throw ConfigError("cannot open scenario file '" + path_or_name + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("scenario file '" + path_or_name + "' is not valid JSON: " + e.what());
  }
  return j;
}

Scenario load_scenario(const std::string& path_or_name) {
  return scenario_from_json(load_scenario_json(path_or_name));
}

void apply_override(nlohmann::json& j, const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("override must have the form key.path=value: '" + assignment + "'");
  std::string path = assignment.substr(0, eq);
  std::string value = assignment.substr(eq + 1);

  nlohmann::json* node = &j;
  std::size_t pos = 0;
  while (true) {
    std::size_t dotp = path.find('.', pos);
    std::string key = path.substr(pos, dotp == std::string::npos ? std::string::npos : dotp - pos);
    if (key.empty()) throw ConfigError("override has an empty key segment: '" + assignment + "'");
    if (dotp == std::string::npos) {
      nlohmann::json parsed;
      try {
        parsed = nlohmann::json::parse(value);
      } catch (const nlohmann::json::exception&) {
        parsed = value;  // plain string
      }
      (*node)[key] = parsed;
      return;
    }
    node = &(*node)[key];
    pos = dotp + 1;
  }
}

void default_anchors(const Geometry& g, std::vector<Vec2>& anchors, std::vector<double>& radii) {
  anchors.clear();
  radii.clear();
  double len = g.interface.length();
  if (g.template_name == "triple_junction") {
    // Tighter neighbourhoods: the hypograph frame at the junction anchor must
    // clip before the domain corner.
    for (double s : {0.2, 0.5, 0.8}) anchors.push_back(g.interface.point(s));
    radii.assign(anchors.size(), 0.24 * len);
    return;
  }
  for (double s : {0.25, 0.5, 0.75}) anchors.push_back(g.interface.point(s));
  radii.assign(anchors.size(), 0.35 * len);
}

}  // namespace crd
