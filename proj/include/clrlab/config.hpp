#pragma once

// Experiment configuration: a flat sectioned key = value text format.
//
//   # comment                      ; comment
//   command = bound-scan
//   [grid]
//   d = 3                          integers, reals, true/false
//   boundary = zero-extension      bare words or "quoted strings"
//   [scan]
//   couplings = [1, 2, 5, 10]      flat lists of scalars
//
// Keys before the first section header belong to the root section.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "clrlab/fields.hpp"
#include "clrlab/grid.hpp"

namespace clrlab::config {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, std::string key, const std::string& what);
  int line() const { return line_; }  // 0 when the problem is not tied to one line
  const std::string& key() const { return key_; }

 private:
  int line_;
  std::string key_;
};

using Scalar = std::variant<std::int64_t, double, bool, std::string>;

struct Value {
  std::variant<Scalar, std::vector<Scalar>> data;

  bool is_list() const { return data.index() == 1; }
  friend bool operator==(const Value&, const Value&) = default;
};

struct Entry {
  std::string key;
  Value value;
  int line = 0;
};

struct Section {
  std::string name;  // "" for the root section
  std::vector<Entry> entries;
  int line = 0;
};

struct Document {
  std::vector<Section> sections;

  const Section* find(const std::string& name) const;
};

Document parse_document(const std::string& text);
std::string serialize(const Document& doc);
std::string format_value(const Value& v);

struct FieldRef {
  std::string name;
  ParamMap params;
  friend bool operator==(const FieldRef&, const FieldRef&) = default;
};

struct ExperimentConfig {
  std::string command;

  int d = 1;
  int n = 64;
  double half_width = 8.0;
  Boundary boundary = Boundary::ZeroExtension;
  std::int64_t size_cap = 8192;

  std::optional<FieldRef> potential, magnetic, gauge;

  std::vector<double> couplings, alphas, times, lambdas, xi;
  std::vector<double> k_exponents = {1.0, 2.0};
  double floor = 0.0;  // lower bound applied to V_- in bs-count

  std::int64_t paths = 100000;
  int steps = 64;
  std::uint64_t seed = 1;
  double t = 1.0;
  std::vector<double> x;  // start point; empty means the origin
  double u_width = 1.0;   // initial datum u(x) = exp(-|x|^2 / (2 u_width^2))

  std::string output_directory = "out";
  std::vector<std::string> formats = {"csv", "json"};

  GridSpec grid() const;
  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

const std::vector<std::string>& commands();

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& file);
std::string serialize(const ExperimentConfig& cfg);

/// FNV-1a 64 of the canonical serialization, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace clrlab::config
