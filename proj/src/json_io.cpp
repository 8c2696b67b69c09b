#include "treeshift/json_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "treeshift/errors.hpp"

namespace treeshift {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) { throw SpecFormatError(what); }

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const std::exception& e) {
    bad(path + ": " + e.what());
  }
}

double parse_real(const json& j, const char* what) {
  if (!j.is_number()) bad(std::string(what) + ": expected a number");
  return j.get<double>();
}

Complex parse_complex(const json& j, const char* what) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  bad(std::string(what) + ": expected a number or [re, im]");
}

VertexId parse_vertex_key(const std::string& key, std::size_t n) {
  std::size_t pos = 0;
  unsigned long id = 0;
  try {
    id = std::stoul(key, &pos);
  } catch (const std::exception&) {
    bad("per_vertex: bad id '" + key + "'");
  }
  if (pos != key.size() || id >= n) bad("per_vertex: id out of range: " + key);
  return static_cast<VertexId>(id);
}

bool t20_second_branch(VertexId v) { return v != 0 && v % 2 == 0; }

std::vector<double> beta_from_spec(const DirectedTree& tree, const json& spec) {
  const std::size_t n = tree.vertex_count();
  std::vector<double> beta(n, 1.0);
  const json* family = nullptr;
  if (spec.is_number()) {
    std::fill(beta.begin(), beta.end(), spec.get<double>());
  } else if (spec.is_object()) {
    family = &spec;
    const std::string name = spec.value("family", "const");
    if (name == "const") {
      const double value = spec.contains("value") ? parse_real(spec["value"], "beta.value") : 1.0;
      std::fill(beta.begin(), beta.end(), value);
    } else if (name == "kappa_pow") {
      if (!spec.contains("kappa")) bad("beta family kappa_pow needs kappa");
      const double kappa = parse_real(spec["kappa"], "beta.kappa");
      for (VertexId v = 0; v < n; ++v) {
        beta[v] = std::pow(kappa, -tree.depth(v));
      }
    } else if (name == "t20") {
      for (VertexId v = 0; v < n; ++v) {
        beta[v] = t20_second_branch(v) ? std::pow(0.25, tree.depth(v)) : 1.0;
      }
    } else {
      bad("unknown beta family: " + name);
    }
  } else {
    bad("beta: expected a number or an object");
  }
  if (family != nullptr && family->contains("per_vertex")) {
    for (const auto& [key, value] : (*family)["per_vertex"].items()) {
      beta[parse_vertex_key(key, n)] = parse_real(value, "beta.per_vertex");
    }
  }
  return beta;
}

std::vector<Complex> lambda_from_spec(const DirectedTree& tree, const json& spec) {
  const std::size_t n = tree.vertex_count();
  std::vector<Complex> lambda(n, 1.0);
  const json* family = nullptr;
  if (spec.is_number()) {
    std::fill(lambda.begin(), lambda.end(), Complex(spec.get<double>(), 0.0));
  } else if (spec.is_object()) {
    family = &spec;
    const std::string name = spec.value("family", "const");
    if (name == "const") {
      const Complex value =
          spec.contains("value") ? parse_complex(spec["value"], "lambda.value") : Complex(1.0);
      std::fill(lambda.begin(), lambda.end(), value);
    } else if (name == "kappa_inv") {
      if (!spec.contains("kappa")) bad("lambda family kappa_inv needs kappa");
      const double kappa = parse_real(spec["kappa"], "lambda.kappa");
      std::fill(lambda.begin(), lambda.end(), Complex(1.0 / kappa, 0.0));
    } else if (name == "t20") {
      for (VertexId v = 1; v < n; ++v) {
        lambda[v] = tree.depth(v) == 1 ? 0.5 : 1.0;
      }
    } else if (name == "t20_mu") {
      for (VertexId v = 1; v < n; ++v) {
        if (t20_second_branch(v)) {
          lambda[v] = tree.depth(v) == 1 ? 0.25 : 0.5;
        } else {
          lambda[v] = tree.depth(v) == 1 ? 0.5 : 1.0;
        }
      }
    } else if (name == "sibling_uniform") {
      for (VertexId v = 1; v < n; ++v) {
        lambda[v] = 1.0 / static_cast<double>(tree.child_count(tree.parent(v)));
      }
    } else {
      bad("unknown lambda family: " + name);
    }
  } else {
    bad("lambda: expected a number or an object");
  }
  if (family != nullptr && family->contains("per_vertex")) {
    for (const auto& [key, value] : (*family)["per_vertex"].items()) {
      lambda[parse_vertex_key(key, n)] = parse_complex(value, "lambda.per_vertex");
    }
  }
  return lambda;
}

WeightSystem weights_from_json(const DirectedTree& tree, const json& j) {
  if (!j.is_object()) bad("weights: expected an object");
  const json beta_spec = j.contains("beta") ? j["beta"] : json(1.0);
  const json lambda_spec = j.contains("lambda") ? j["lambda"] : json(1.0);
  return WeightSystem(tree, beta_from_spec(tree, beta_spec),
                      lambda_from_spec(tree, lambda_spec));
}

struct ProfileParse {
  std::string kind;
  int kappa = 0;
  bool ok = false;
};

ProfileParse parse_profile(const std::string& arg) {
  ProfileParse p;
  if (arg == "t20" || arg == "ray") {
    p.kind = arg;
    p.ok = true;
  } else if (arg.rfind("kary:", 0) == 0) {
    const std::string tail = arg.substr(5);
    if (!tail.empty() && tail.find_first_not_of("0123456789") == std::string::npos) {
      p.kind = "kary";
      p.kappa = std::stoi(tail);
      p.ok = p.kappa >= 1;
    }
  }
  return p;
}

}  // namespace

Model load_model(const std::string& tree_arg, const std::string& weights_arg,
                 const ModelOptions& opt) {
  Model m;
  m.source = tree_arg;

  std::string kind;
  int kappa = 0;
  int file_depth = -1;
  TreeSpec espec;
  json tree_json;
  const ProfileParse prof = parse_profile(tree_arg);
  if (prof.ok) {
    kind = prof.kind;
    kappa = prof.kappa;
  } else {
    tree_json = load_json_file(tree_arg);
    if (!tree_json.is_object()) bad(tree_arg + ": expected an object");
    kind = tree_json.value("kind", "");
    if (tree_json.contains("depth")) {
      file_depth = static_cast<int>(parse_real(tree_json["depth"], "depth"));
    }
    if (kind == "kary") {
      if (!tree_json.contains("kappa")) bad(tree_arg + ": kary needs kappa");
      kappa = static_cast<int>(parse_real(tree_json["kappa"], "kappa"));
    } else if (kind == "explicit") {
      if (!tree_json.contains("edges") || !tree_json["edges"].is_array()) {
        bad(tree_arg + ": explicit tree needs an edges array");
      }
      for (const auto& e : tree_json["edges"]) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() ||
            !e[1].is_number_unsigned()) {
          bad(tree_arg + ": edges must be [parent, child] id pairs");
        }
        espec.edges.emplace_back(e[0].get<VertexId>(), e[1].get<VertexId>());
      }
    } else if (kind != "t20" && kind != "ray") {
      bad(tree_arg + ": unknown tree kind '" + kind + "'");
    }
  }

  int depth = 0;
  if (opt.depth.has_value()) {
    depth = *opt.depth;
  } else if (file_depth >= 0) {
    depth = file_depth;
  } else if (kind == "kary") {
    depth = 10;
  } else if (kind == "t20" || kind == "ray") {
    depth = 60;
  }  // explicit: 0 means infer

  if (kind == "kary") {
    m.tree = std::make_unique<DirectedTree>(
        opt.allow_thinned ? build_kary_thinned(kappa, depth, opt.budget)
                          : build_kary(kappa, depth, opt.budget));
  } else if (kind == "t20") {
    m.tree = std::make_unique<DirectedTree>(build_t20(depth, opt.budget));
  } else if (kind == "ray") {
    m.tree = std::make_unique<DirectedTree>(build_ray(depth, opt.budget));
  } else {
    espec.kind = "explicit";
    espec.depth = depth;
    m.tree = std::make_unique<DirectedTree>(build_explicit(espec, opt.budget));
  }
  m.thinned = m.tree->thinned_from().has_value();

  if (!weights_arg.empty()) {
    m.weights = std::make_unique<WeightSystem>(
        weights_from_json(*m.tree, load_json_file(weights_arg)));
  } else if (tree_json.is_object() && tree_json.contains("weights")) {
    m.weights = std::make_unique<WeightSystem>(
        weights_from_json(*m.tree, tree_json["weights"]));
  } else if (kind == "kary") {
    m.weights = std::make_unique<WeightSystem>(make_kary_weights(*m.tree, kappa));
  } else if (kind == "t20") {
    m.weights = std::make_unique<WeightSystem>(make_t20_weights(*m.tree));
  } else {
    m.weights = std::make_unique<WeightSystem>(make_unit_weights(*m.tree));
  }
  return m;
}

Symbol load_symbol(const std::string& arg) {
  if (std::filesystem::exists(arg)) {
    const json j = load_json_file(arg);
    if (!j.is_object()) bad(arg + ": expected an object");
    const std::string kind = j.value("kind", "");
    if (kind == "finite") {
      if (!j.contains("coeffs") || !j["coeffs"].is_array()) {
        bad(arg + ": finite symbol needs a coeffs array");
      }
      std::vector<Complex> coeffs;
      for (const auto& c : j["coeffs"]) coeffs.push_back(parse_complex(c, "coeffs"));
      return Symbol::finite(std::move(coeffs));
    }
    if (kind == "geometric") {
      if (!j.contains("a") || !j.contains("ratio")) {
        bad(arg + ": geometric symbol needs a and ratio");
      }
      return Symbol::geometric(parse_complex(j["a"], "a"),
                               parse_complex(j["ratio"], "ratio"));
    }
    if (kind == "indicator") {
      if (!j.contains("n")) bad(arg + ": indicator symbol needs n");
      return Symbol::indicator(static_cast<int>(parse_real(j["n"], "n")));
    }
    bad(arg + ": unknown symbol kind '" + kind + "'");
  }

  auto parse_reals = [&](const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t pos = 0;
        out.push_back(std::stod(item, &pos));
        while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
        if (pos != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        bad("symbol: cannot parse '" + item + "' in '" + text + "'");
      }
    }
    if (out.empty()) bad("symbol: empty coefficient list");
    return out;
  };

  if (arg.rfind("geom:", 0) == 0) {
    const auto v = parse_reals(arg.substr(5));
    if (v.size() != 2) bad("symbol: geom needs exactly a,ratio");
    return Symbol::geometric(v[0], v[1]);
  }
  if (arg.rfind("ind:", 0) == 0) {
    const auto v = parse_reals(arg.substr(4));
    if (v.size() != 1) bad("symbol: ind needs exactly one index");
    return Symbol::indicator(static_cast<int>(v[0]));
  }
  const auto v = parse_reals(arg);
  std::vector<Complex> coeffs(v.begin(), v.end());
  return Symbol::finite(std::move(coeffs));
}

std::string tree_to_json(const DirectedTree& tree) {
  const TreeSpec spec = serialize_tree(tree);
  nlohmann::ordered_json j;
  j["kind"] = "explicit";
  j["depth"] = tree.horizon();
  auto edges = nlohmann::ordered_json::array();
  for (const auto& [p, c] : spec.edges) {
    edges.push_back({p, c});
  }
  j["edges"] = std::move(edges);
  return j.dump(2) + "\n";
}

}  // namespace treeshift
