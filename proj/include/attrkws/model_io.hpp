#pragma once

// ModelState <-> JSON. Doubles are written with round-trip precision, so a
// saved model reloads bit-exactly.

#include <string>

#include <nlohmann/json.hpp>

#include "attrkws/dat_model.hpp"
#include "attrkws/error.hpp"

namespace attrkws {

inline nlohmann::ordered_json config_to_json(const ModelConfig& c) {
  nlohmann::ordered_json j;
  j["feature_dim"] = c.feature_dim;
  j["context"] = c.context;
  j["encoder_layers"] = c.encoder_layers;
  j["encoder_width"] = c.encoder_width;
  j["vocab_size"] = c.vocab_size;
  j["classifier_layers"] = c.classifier_layers;
  j["classifier_width"] = c.classifier_width;
  j["num_languages"] = c.num_languages;
  j["lambda"] = c.lambda;
  j["learning_rate"] = c.learning_rate;
  j["optimizer"] = std::string(name_of(c.optimizer));
  j["beta1"] = c.beta1;
  j["beta2"] = c.beta2;
  j["epsilon"] = c.epsilon;
  j["weight_decay"] = c.weight_decay;
  j["freeze_classifier"] = c.freeze_classifier;
  j["batch_size"] = c.batch_size;
  j["max_epochs"] = c.max_epochs;
  j["patience"] = c.patience;
  j["seed"] = c.seed;
  return j;
}

inline ModelConfig config_from_json(const nlohmann::json& j) {
  ModelConfig c;
  c.feature_dim = j.at("feature_dim");
  c.context = j.at("context");
  c.encoder_layers = j.at("encoder_layers");
  c.encoder_width = j.at("encoder_width");
  c.vocab_size = j.at("vocab_size");
  c.classifier_layers = j.at("classifier_layers");
  c.classifier_width = j.at("classifier_width");
  c.num_languages = j.at("num_languages");
  c.lambda = j.at("lambda");
  c.learning_rate = j.at("learning_rate");
  const std::string opt = j.at("optimizer");
  if (opt != "sgd" && opt != "adamw") throw ParseError("unknown optimizer '" + opt + "'");
  c.optimizer = opt == "sgd" ? OptimizerKind::sgd : OptimizerKind::adamw;
  c.beta1 = j.at("beta1");
  c.beta2 = j.at("beta2");
  c.epsilon = j.at("epsilon");
  c.weight_decay = j.at("weight_decay");
  c.freeze_classifier = j.at("freeze_classifier");
  c.batch_size = j.at("batch_size");
  c.max_epochs = j.at("max_epochs");
  c.patience = j.at("patience");
  c.seed = j.at("seed");
  return c;
}

namespace detail {

inline nlohmann::ordered_json dense_to_json(const Dense& d) {
  nlohmann::ordered_json j;
  j["in"] = d.in;
  j["out"] = d.out;
  j["weight"] = d.weight;
  j["bias"] = d.bias;
  return j;
}

inline Dense dense_from_json(const nlohmann::json& j) {
  Dense d(j.at("in"), j.at("out"));
  d.weight = j.at("weight").get<std::vector<double>>();
  d.bias = j.at("bias").get<std::vector<double>>();
  if (d.weight.size() != d.in * d.out || d.bias.size() != d.out) throw ParseError("model: layer shape mismatch");
  return d;
}

inline nlohmann::ordered_json params_to_json(const Parameters& p) {
  nlohmann::ordered_json j;
  j["encoder"] = nlohmann::ordered_json::array();
  for (const auto& d : p.encoder) j["encoder"].push_back(dense_to_json(d));
  j["output"] = dense_to_json(p.output);
  j["classifier"] = nlohmann::ordered_json::array();
  for (const auto& d : p.classifier) j["classifier"].push_back(dense_to_json(d));
  return j;
}

inline Parameters params_from_json(const nlohmann::json& j) {
  Parameters p;
  for (const auto& d : j.at("encoder")) p.encoder.push_back(dense_from_json(d));
  p.output = dense_from_json(j.at("output"));
  for (const auto& d : j.at("classifier")) p.classifier.push_back(dense_from_json(d));
  return p;
}

}  // namespace detail

inline std::string model_to_json(const ModelState& s) {
  nlohmann::ordered_json j;
  j["format"] = "attrkws.model/1";
  j["config"] = config_to_json(s.config);
  j["languages"] = s.languages;
  j["vocab"] = s.vocab;
  j["step"] = s.step;
  j["params"] = detail::params_to_json(s.params);
  j["first_moment"] = detail::params_to_json(s.first_moment);
  j["second_moment"] = detail::params_to_json(s.second_moment);
  return j.dump() + "\n";
}

inline ModelState model_from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("format") != "attrkws.model/1") throw ParseError("model: unsupported format");
    ModelState s;
    s.config = config_from_json(j.at("config"));
    s.languages = j.at("languages").get<std::vector<std::string>>();
    s.vocab = j.at("vocab").get<std::vector<std::string>>();
    s.step = j.at("step");
    s.params = detail::params_from_json(j.at("params"));
    s.first_moment = detail::params_from_json(j.at("first_moment"));
    s.second_moment = detail::params_from_json(j.at("second_moment"));
    if (s.params.encoder.size() != s.config.encoder_layers || s.params.classifier.size() != s.config.classifier_layers ||
        s.params.output.out != s.config.vocab_size)
      throw ParseError("model: parameters do not match config");
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("model: ") + e.what());
  }
}

}  // namespace attrkws
