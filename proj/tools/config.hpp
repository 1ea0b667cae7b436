#ifndef BERGMAN_TOOLS_CONFIG_HPP_
#define BERGMAN_TOOLS_CONFIG_HPP_

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bergman/bergman.hpp"

namespace bergman::cli {

/// Malformed configuration: exit code 1.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline nlohmann::json load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw config_error(path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": invalid JSON");
  }
}

/// Typed access to a JSON object with the dotted field path kept for messages.
class Node {
 public:
  Node(const nlohmann::json& j, std::string path) : j_(j), path_(std::move(path)) {}

  const nlohmann::json& raw() const { return j_; }
  const std::string& path() const { return path_; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw config_error("field '" + (path_.empty() ? std::string("<root>") : path_) + "': " + msg);
  }

  void require_object(const std::set<std::string>& allowed) const {
    if (!j_.is_object()) fail("expected an object");
    for (const auto& [key, value] : j_.items())
      if (!allowed.count(key)) child_path_fail(key, "unknown field");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  Node at(const std::string& key) const {
    if (!j_.contains(key)) child_path_fail(key, "missing required field");
    return Node(j_.at(key), join(key));
  }

  std::vector<Node> items() const {
    if (!j_.is_array()) fail("expected an array");
    std::vector<Node> out;
    for (std::size_t i = 0; i < j_.size(); ++i) out.emplace_back(j_[i], path_ + "[" + std::to_string(i) + "]");
    return out;
  }

  real number() const {
    if (j_.is_number()) return j_.get<double>();
    if (j_.is_string() && j_.get<std::string>() == "inf") return kInf;
    fail("expected a number");
  }

  long integer() const {
    if (!j_.is_number_integer()) fail("expected an integer");
    return j_.get<long>();
  }

  bool boolean() const {
    if (!j_.is_boolean()) fail("expected true or false");
    return j_.get<bool>();
  }

  std::string string() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }

  /// number, [re, im], {"re", "im"} or a constant expression such as "0.5+0.2i".
  cplx complex() const {
    if (j_.is_number()) return j_.get<double>();
    if (j_.is_array()) {
      if (j_.size() != 2 || !j_[0].is_number() || !j_[1].is_number()) fail("expected [re, im]");
      return {j_[0].get<double>(), j_[1].get<double>()};
    }
    if (j_.is_object()) {
      require_object({"re", "im"});
      return {at("re").number(), has("im") ? at("im").number() : real(0)};
    }
    if (j_.is_string()) {
      try {
        const AnalyticFn f = parse_expression(j_.get<std::string>());
        const auto* poly = std::get_if<AnalyticFn::Polynomial>(&f.node());
        if (!poly || poly->coeffs.size() != 1) fail("expected a constant");
        return poly->coeffs[0];
      } catch (const parse_error& e) {
        fail(e.what());
      }
    }
    fail("expected a complex number");
  }

  SpaceParams params() const {
    require_object({"p", "alpha"});
    try {
      return SpaceParams(has("p") ? at("p").number() : real(2), has("alpha") ? at("alpha").number() : real(0));
    } catch (const domain_error& e) {
      fail(e.what());
    }
  }

  QuadratureConfig quadrature() const {
    require_object({"radial", "angular", "max_refinements", "rel_tol"});
    QuadratureConfig c;
    if (has("radial")) c.radial = static_cast<int>(at("radial").integer());
    if (has("angular")) c.angular = static_cast<int>(at("angular").integer());
    if (has("max_refinements")) c.max_refinements = static_cast<int>(at("max_refinements").integer());
    if (has("rel_tol")) c.rel_tol = at("rel_tol").number();
    try {
      c.validate();
    } catch (const domain_error& e) {
      fail(e.what());
    }
    return c;
  }

  AnalyticFn expression(const SpaceParams& sp) const {
    try {
      return parse_expression(string(), sp);
    } catch (const parse_error& e) {
      fail(e.what());
    }
  }

 private:
  const nlohmann::json& j_;
  std::string path_;

  std::string join(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  [[noreturn]] void child_path_fail(const std::string& key, const std::string& msg) const {
    throw config_error("field '" + join(key) + "': " + msg);
  }
};

}  // namespace bergman::cli

#endif  // BERGMAN_TOOLS_CONFIG_HPP_
