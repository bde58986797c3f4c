#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "fmcw/types.hpp"

namespace fmcw {

// Strict key=value file: '#' comments, blank lines ignored, repeated keys
// allowed (fetched in file order). Every key must be consumed; leftovers are
// reported as a hard error so typos never fall back to defaults silently.
class KeyValueFile {
 public:
  static KeyValueFile parse_file(const std::string& path);
  static KeyValueFile parse_text(const std::string& text, const std::string& origin = "<text>");

  // Each get_* marks the key consumed. Missing key without a default throws.
  bool has(const std::string& key) const;
  std::string get_string(const std::string& key);
  std::string get_string(const std::string& key, const std::string& fallback);
  double get_double(const std::string& key);
  double get_double(const std::string& key, double fallback);
  long get_int(const std::string& key);
  long get_int(const std::string& key, long fallback);
  // All values for a repeated key, in file order; marks them consumed.
  std::vector<std::string> get_all(const std::string& key);

  // Apply "key=value" overrides (CLI layer); replaces all prior values of key.
  void override_value(const std::string& key, const std::string& value);

  // Throws listing any unconsumed keys.
  void finish() const;

  const std::string& origin() const { return origin_; }

 private:
  struct Entry {
    std::string value;
    bool consumed = false;
  };
  std::string origin_;
  std::multimap<std::string, Entry> entries_;
};

// Loaders for the domain types (field names exactly as documented, SI units).
// Radar keys: f_c, B, sweep_time, N, P, Q, d, c (d and c optional).
RadarConfig load_radar_config(KeyValueFile& kv, const std::string& prefix = "");
// Targets: target_count = K, then target<k>.a, .phi, .r, .theta for k = 1..K.
std::vector<Target> load_targets(KeyValueFile& kv);

}  // namespace fmcw
