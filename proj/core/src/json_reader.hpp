#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"
#include "vertiopt/network.hpp"

namespace vertiopt::detail {

using nlohmann::json;

// Field access that reports the JSON path of whatever went wrong.
class Reader {
 public:
  Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {}

  Reader at(const std::string& key) const {
    if (!node_.is_object()) fail("expected an object");
    auto it = node_.find(key);
    if (it == node_.end()) fail("missing field '" + key + "'");
    return Reader(*it, path_ + "." + key);
  }
  Reader at(std::size_t i) const { return Reader(node_.at(i), path_ + "[" + std::to_string(i) + "]"); }
  bool has(const std::string& key) const { return node_.is_object() && node_.contains(key); }
  bool is_null() const { return node_.is_null(); }

  std::size_t size() const {
    if (!node_.is_array()) fail("expected an array");
    return node_.size();
  }
  double number() const {
    if (!node_.is_number()) fail("expected a number");
    return node_.get<double>();
  }
  std::int64_t integer() const {
    if (!node_.is_number_integer()) fail("expected an integer");
    return node_.get<std::int64_t>();
  }
  std::uint64_t unsigned_integer() const {
    if (!node_.is_number_unsigned() && !(node_.is_number_integer() && node_.get<std::int64_t>() >= 0)) {
      fail("expected a non-negative integer");
    }
    return node_.get<std::uint64_t>();
  }
  bool boolean() const {
    if (!node_.is_boolean()) fail("expected a boolean");
    return node_.get<bool>();
  }
  std::string string() const {
    if (!node_.is_string()) fail("expected a string");
    return node_.get<std::string>();
  }

  template <class F>
  auto guard(F&& f) const {
    try {
      return f();
    } catch (const ValidationError& e) {
      fail(e.what());
    }
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ValidationError(path_ + ": " + what);
  }

 private:
  const json& node_;
  std::string path_;
};

}  // namespace vertiopt::detail
