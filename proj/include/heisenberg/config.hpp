#pragma once

// Signature records {l, k: [...], a: [...]} and the named presets.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "heisenberg/errors.hpp"
#include "heisenberg/group_model.hpp"

namespace heisenberg {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline GroupSignature signature_from_json(const nlohmann::json& j) {
  for (const char* key : {"l", "k", "a"})
    if (!j.contains(key)) throw ConfigError(std::string("signature: missing field '") + key + "'");
  if (!j.at("l").is_number_integer()) throw ConfigError("signature: field 'l' must be an integer");
  if (!j.at("k").is_array()) throw ConfigError("signature: field 'k' must be a list");
  if (!j.at("a").is_array()) throw ConfigError("signature: field 'a' must be a list");
  const auto l = j.at("l").get<long>();
  std::vector<int> k;
  std::vector<double> a;
  for (const auto& v : j.at("k")) {
    if (!v.is_number_integer()) throw ConfigError("signature: field 'k' must hold integers");
    k.push_back(v.get<int>());
  }
  for (const auto& v : j.at("a")) {
    if (!v.is_number()) throw ConfigError("signature: field 'a' must hold numbers");
    a.push_back(v.get<double>());
  }
  if (l < 1 || static_cast<std::size_t>(l) != k.size() || k.size() != a.size())
    throw ConfigError("signature: field 'l' must equal the lengths of 'k' and 'a'");
  try {
    return GroupSignature(std::move(k), std::move(a));
  } catch (const DomainError& e) {
    throw ConfigError(std::string("signature: ") + e.what());
  }
}

inline nlohmann::json signature_to_json(const GroupSignature& sig) {
  nlohmann::json j;
  j["l"] = sig.blocks();
  j["k"] = std::vector<int>(sig.k().begin(), sig.k().end());
  j["a"] = std::vector<double>(sig.a().begin(), sig.a().end());
  return j;
}

/// h11 = H(1,1), h21 = H(2,1), h31 = H(3,1), h5 = H((1,1),(1/2,1)), h12 = H((1,2),(1/2,1)).
inline bool signature_preset(const std::string& name, GroupSignature& out) {
  if (name == "h11") out = GroupSignature::isotropic(1);
  else if (name == "h21") out = GroupSignature::isotropic(2);
  else if (name == "h31") out = GroupSignature::isotropic(3);
  else if (name == "h5") out = GroupSignature({1, 1}, {0.5, 1.0});
  else if (name == "h12") out = GroupSignature({1, 2}, {0.5, 1.0});
  else return false;
  return true;
}

/// A preset name, an inline JSON record, or a path to a JSON file.
inline GroupSignature parse_signature(const std::string& spec) {
  GroupSignature sig = GroupSignature::isotropic(1);
  if (signature_preset(spec, sig)) return sig;
  std::string text = spec;
  if (spec.empty() || spec.front() != '{') {
    std::ifstream in(spec);
    if (!in) throw ConfigError("signature: '" + spec + "' is neither a preset, inline JSON, nor a readable file");
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("signature: malformed JSON: ") + e.what());
  }
  return signature_from_json(j);
}

/// "r1,...,rl,t"
inline RadialPoint parse_point(const GroupSignature& sig, const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("point: '" + item + "' is not a number");
    }
  }
  if (v.size() != sig.blocks() + 1)
    throw ConfigError("point: expected " + std::to_string(sig.blocks() + 1) + " values r1,...,rl,t for " +
                      sig.to_string());
  const double t = v.back();
  v.pop_back();
  try {
    return make_radial(sig, v, t);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("point: ") + e.what());
  }
}

}  // namespace heisenberg
