#include "proxgn/problem_io.hpp"

#include <fstream>
#include <limits>

namespace proxgn {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& why) {
  throw ConfigError("problem file field '" + field + "': " + why);
}

const json& require(const json& j, const std::string& field,
                    const std::string& display = {}) {
  if (!j.contains(field)) fail(display.empty() ? field : display, "missing");
  return j.at(field);
}

int require_positive_int(const json& j, const std::string& field) {
  const json& value = require(j, field);
  if (!value.is_number_integer() || value.get<int>() <= 0) {
    fail(field, "must be a positive integer");
  }
  return value.get<int>();
}

Vector parse_vector(const json& value, const std::string& field,
                    bool allow_null_as_infinite, double infinity_sign) {
  if (!value.is_array()) fail(field, "must be an array of numbers");
  Vector out(value.size());
  for (size_t i = 0; i < value.size(); ++i) {
    const json& entry = value[i];
    if (entry.is_null() && allow_null_as_infinite) {
      out(static_cast<Eigen::Index>(i)) =
          infinity_sign * std::numeric_limits<double>::infinity();
    } else if (entry.is_number()) {
      out(static_cast<Eigen::Index>(i)) = entry.get<double>();
    } else {
      fail(field + "[" + std::to_string(i) + "]", "must be a number");
    }
  }
  return out;
}

ProxSpec parse_penalty(const json& j) {
  const json& penalty = require(j, "penalty");
  const std::string kind =
      require(penalty, "kind", "penalty.kind").get<std::string>();
  if (kind == "zero") return ProxSpec::zero();
  if (kind == "weighted_l1") {
    return ProxSpec::weighted_l1(parse_vector(
        require(penalty, "weights", "penalty.weights"), "penalty.weights",
        false, 0));
  }
  if (kind == "box") {
    return ProxSpec::box(
        parse_vector(require(penalty, "lower", "penalty.lower"),
                     "penalty.lower", true, -1.0),
        parse_vector(require(penalty, "upper", "penalty.upper"),
                     "penalty.upper", true, +1.0));
  }
  fail("penalty.kind", "must be one of zero, weighted_l1, box");
}

Domain parse_domain(const json& j) {
  const json& domain = require(j, "domain");
  const std::string kind =
      require(domain, "kind", "domain.kind").get<std::string>();
  if (kind == "whole_space") {
    const json& radius = require(domain, "R", "domain.R");
    if (!radius.is_number()) fail("domain.R", "must be a number");
    return Domain::whole_space(radius.get<double>());
  }
  if (kind == "ball") {
    const json& radius = require(domain, "radius", "domain.radius");
    if (!radius.is_number()) fail("domain.radius", "must be a number");
    return Domain::ball(parse_vector(require(domain, "center", "domain.center"),
                                     "domain.center", false, 0),
                        radius.get<double>());
  }
  fail("domain.kind", "must be one of whole_space, ball");
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::isinf(v(i))) {
      out.push_back(nullptr);
    } else {
      out.push_back(v(i));
    }
  }
  return out;
}

}  // namespace

Problem problem_from_json(const json& j) {
  const int input_dim = require_positive_int(j, "input_dim");
  const int output_dim = require_positive_int(j, "output_dim");

  PolynomialMap map(input_dim, output_dim);
  const json& components = require(j, "components");
  if (!components.is_array() ||
      static_cast<int>(components.size()) != output_dim) {
    fail("components", "must be an array with one term list per output");
  }
  for (int component = 0; component < output_dim; ++component) {
    const json& terms = components[component];
    const std::string field = "components[" + std::to_string(component) + "]";
    if (!terms.is_array()) fail(field, "must be an array of [coeff, exponents]");
    for (size_t t = 0; t < terms.size(); ++t) {
      const json& term = terms[t];
      const std::string term_field = field + "[" + std::to_string(t) + "]";
      if (!term.is_array() || term.size() != 2 || !term[0].is_number() ||
          !term[1].is_array()) {
        fail(term_field, "must be [coefficient, [exponents...]]");
      }
      std::vector<int> exponents;
      for (size_t e = 0; e < term[1].size(); ++e) {
        if (!term[1][e].is_number_integer() || term[1][e].get<int>() < 0) {
          fail(term_field + "[1][" + std::to_string(e) + "]",
               "must be a nonnegative integer");
        }
        exponents.push_back(term[1][e].get<int>());
      }
      if (static_cast<int>(exponents.size()) != input_dim) {
        fail(term_field, "exponent list length must equal input_dim");
      }
      try {
        map.add_term(component, term[0].get<double>(), std::move(exponents));
      } catch (const Error& error) {
        fail(term_field, error.what());
      }
    }
  }

  Problem problem{j.value("name", std::string("from-file")),
                  std::move(map),
                  parse_penalty(j),
                  parse_domain(j),
                  std::nullopt,
                  std::nullopt,
                  std::nullopt};

  if (j.contains("ground_truth") && !j.at("ground_truth").is_null()) {
    const json& truth = j.at("ground_truth");
    if (truth.contains("x_star")) {
      Vector x_star = parse_vector(truth.at("x_star"), "ground_truth.x_star",
                                   false, 0);
      if (x_star.size() != input_dim) {
        fail("ground_truth.x_star", "length must equal input_dim");
      }
      problem.known_minimizer = std::move(x_star);
    }
    if (truth.contains("L")) {
      if (!truth.at("L").is_number()) fail("ground_truth.L", "must be a number");
      problem.known_lipschitz = truth.at("L").get<double>();
    }
    if (truth.contains("gamma")) {
      if (!truth.at("gamma").is_number()) {
        fail("ground_truth.gamma", "must be a number");
      }
      problem.known_gamma = truth.at("gamma").get<double>();
    }
  }

  const Eigen::Index penalty_dim = problem.penalty.dimension();
  if (penalty_dim >= 0 && penalty_dim != input_dim) {
    fail("penalty", "parameter length must equal input_dim");
  }
  if (problem.domain.kind() == Domain::Kind::ball &&
      problem.domain.center().size() != input_dim) {
    fail("domain.center", "length must equal input_dim");
  }
  return problem;
}

json problem_to_json(const Problem& problem) {
  json j;
  j["schema_version"] = 1;
  j["name"] = problem.name;
  j["input_dim"] = problem.map.input_dim();
  j["output_dim"] = problem.map.output_dim();

  json components = json::array();
  for (const auto& terms : problem.map.components()) {
    json list = json::array();
    for (const Monomial& term : terms) {
      list.push_back(json::array({term.coefficient, term.exponents}));
    }
    components.push_back(std::move(list));
  }
  j["components"] = std::move(components);

  switch (problem.penalty.kind()) {
    case ProxSpec::Kind::zero:
      j["penalty"] = {{"kind", "zero"}};
      break;
    case ProxSpec::Kind::weighted_l1:
      j["penalty"] = {
          {"kind", "weighted_l1"},
          {"weights", vector_to_json(problem.penalty.as_weighted_l1().weights)}};
      break;
    case ProxSpec::Kind::box:
      j["penalty"] = {{"kind", "box"},
                      {"lower", vector_to_json(problem.penalty.as_box().lower)},
                      {"upper", vector_to_json(problem.penalty.as_box().upper)}};
      break;
  }

  if (problem.domain.kind() == Domain::Kind::whole_space) {
    j["domain"] = {{"kind", "whole_space"}, {"R", problem.domain.radius()}};
  } else {
    j["domain"] = {{"kind", "ball"},
                   {"center", vector_to_json(problem.domain.center())},
                   {"radius", problem.domain.radius()}};
  }

  json truth;
  if (problem.known_minimizer) {
    truth["x_star"] = vector_to_json(*problem.known_minimizer);
  }
  if (problem.known_lipschitz) truth["L"] = *problem.known_lipschitz;
  if (problem.known_gamma) truth["gamma"] = *problem.known_gamma;
  if (!truth.is_null()) j["ground_truth"] = std::move(truth);
  return j;
}

Problem load_problem_file(const std::string& path) {
  std::ifstream stream(path);
  if (!stream) {
    throw ConfigError("cannot open problem file '" + path + "'");
  }
  json j;
  try {
    stream >> j;
  } catch (const json::parse_error& error) {
    throw ConfigError("problem file '" + path + "' is not valid JSON: " +
                      error.what());
  }
  try {
    return problem_from_json(j);
  } catch (const ConfigError& error) {
    throw ConfigError("problem file '" + path + "': " + error.what());
  }
}

}  // namespace proxgn
