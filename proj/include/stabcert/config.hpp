#pragma once

#include <map>
#include <stdexcept>
#include <string>

namespace stabcert {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat key = value experiment configuration with [section] headers
// flattening to "section.key". Unknown keys are rejected at validation,
// naming the offending key. CLI flags override file keys.
class ExperimentConfig {
 public:
  static ExperimentConfig defaults_for(const std::string& model_id);
  static ExperimentConfig from_file(const std::string& path);
  static ExperimentConfig from_string(const std::string& text);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;
  std::string get(const std::string& key) const;  // throws ConfigError if missing
  std::string get_or(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double_or(const std::string& key, double fallback) const;
  long get_int(const std::string& key) const;
  long get_int_or(const std::string& key, long fallback) const;

  // Fills in the canonical defaults of the chosen model for absent keys,
  // then checks key names, value syntax and model invariants
  // (e.g. ||k||_1 < 1 for example2).
  void finalize();

  // Deterministic emission: sorted "key = value" lines, every key preserved.
  std::string echo() const;

  const std::map<std::string, std::string>& raw() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
};

}  // namespace stabcert
