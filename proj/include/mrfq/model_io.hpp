#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "mrfq/errors.hpp"
#include "mrfq/polynomial.hpp"

namespace mrfq {

// Model file schema:
//   {"n": int, "r": int, "eta": float, "lambda": float,
//    "terms": [{"indices": [sorted ints], "coeff": float}]}
// nlohmann serializes doubles at full precision, so load(save(m)) == m.

inline nlohmann::json model_to_json(const MrfModel& model) {
  nlohmann::json j;
  j["n"] = model.n;
  j["r"] = model.r;
  j["eta"] = model.eta;
  j["lambda"] = model.lambda;
  j["terms"] = nlohmann::json::array();
  for (const auto& [mono, c] : model.poly.terms()) {
    j["terms"].push_back({{"indices", mono.indices()}, {"coeff", c}});
  }
  return j;
}

inline MrfModel model_from_json(const nlohmann::json& j) {
  int n = j.at("n").get<int>();
  int r = j.at("r").get<int>();
  MultilinearPolynomial poly(n, r);
  for (const auto& term : j.at("terms")) {
    Monomial mono(term.at("indices").get<std::vector<int>>());
    poly.set_coefficient(mono, term.at("coeff").get<double>());
  }
  return MrfModel(n, r, std::move(poly), j.at("eta").get<double>(),
                  j.at("lambda").get<double>());
}

inline void save_model(const MrfModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot open model file for writing: " + path);
  out << model_to_json(model).dump(2) << '\n';
}

inline MrfModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open model file: " + path);
  nlohmann::json j;
  in >> j;
  return model_from_json(j);
}

}  // namespace mrfq
