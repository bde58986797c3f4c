#include "fmcw/config_file.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fmcw {
namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
  throw std::runtime_error(origin + ": " + what);
}

}  // namespace

KeyValueFile KeyValueFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str(), path);
}

KeyValueFile KeyValueFile::parse_text(const std::string& text, const std::string& origin) {
  KeyValueFile kv;
  kv.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      fail(origin, "line " + std::to_string(lineno) + ": expected key=value, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      fail(origin, "line " + std::to_string(lineno) + ": empty key");
    kv.entries_.emplace(key, Entry{value, false});
  }
  return kv;
}

bool KeyValueFile::has(const std::string& key) const { return entries_.count(key) > 0; }

std::string KeyValueFile::get_string(const std::string& key) {
  auto range = entries_.equal_range(key);
  if (range.first == range.second) fail(origin_, "missing required key '" + key + "'");
  // First unconsumed occurrence, in file order.
  for (auto it = range.first; it != range.second; ++it) {
    if (!it->second.consumed) {
      it->second.consumed = true;
      return it->second.value;
    }
  }
  fail(origin_, "key '" + key + "' requested more times than it appears");
}

std::string KeyValueFile::get_string(const std::string& key, const std::string& fallback) {
  if (!has(key)) return fallback;
  return get_string(key);
}

double KeyValueFile::get_double(const std::string& key) {
  const std::string raw = get_string(key);
  try {
    size_t pos = 0;
    const double v = std::stod(raw, &pos);
    if (pos != raw.size()) throw std::invalid_argument(raw);
    return v;
  } catch (const std::exception&) {
    fail(origin_, "key '" + key + "': '" + raw + "' is not a number");
  }
}

double KeyValueFile::get_double(const std::string& key, double fallback) {
  if (!has(key)) return fallback;
  return get_double(key);
}

long KeyValueFile::get_int(const std::string& key) {
  const std::string raw = get_string(key);
  try {
    size_t pos = 0;
    const long v = std::stol(raw, &pos);
    if (pos != raw.size()) throw std::invalid_argument(raw);
    return v;
  } catch (const std::exception&) {
    fail(origin_, "key '" + key + "': '" + raw + "' is not an integer");
  }
}

long KeyValueFile::get_int(const std::string& key, long fallback) {
  if (!has(key)) return fallback;
  return get_int(key);
}

std::vector<std::string> KeyValueFile::get_all(const std::string& key) {
  std::vector<std::string> out;
  auto range = entries_.equal_range(key);
  for (auto it = range.first; it != range.second; ++it) {
    it->second.consumed = true;
    out.push_back(it->second.value);
  }
  return out;
}

void KeyValueFile::override_value(const std::string& key, const std::string& value) {
  entries_.erase(key);
  entries_.emplace(key, Entry{value, false});
}

void KeyValueFile::finish() const {
  std::string leftovers;
  for (const auto& [key, entry] : entries_) {
    if (!entry.consumed) {
      if (!leftovers.empty()) leftovers += ", ";
      leftovers += key;
    }
  }
  if (!leftovers.empty()) fail(origin_, "unknown keys: " + leftovers);
}

RadarConfig load_radar_config(KeyValueFile& kv, const std::string& prefix) {
  RadarConfig cfg;
  cfg.f_c = kv.get_double(prefix + "f_c", cfg.f_c);
  cfg.B = kv.get_double(prefix + "B", cfg.B);
  cfg.sweep_time = kv.get_double(prefix + "sweep_time", cfg.sweep_time);
  cfg.N = static_cast<int>(kv.get_int(prefix + "N", cfg.N));
  cfg.P = static_cast<int>(kv.get_int(prefix + "P", cfg.P));
  cfg.Q = static_cast<int>(kv.get_int(prefix + "Q", cfg.Q));
  cfg.d = kv.get_double(prefix + "d", cfg.d);
  cfg.c = kv.get_double(prefix + "c", cfg.c);
  cfg.validate();
  return cfg;
}

std::vector<Target> load_targets(KeyValueFile& kv) {
  const long count = kv.get_int("target_count");
  if (count < 1) throw std::runtime_error(kv.origin() + ": target_count must be at least 1");
  std::vector<Target> targets;
  targets.reserve(static_cast<size_t>(count));
  for (long k = 1; k <= count; ++k) {
    const std::string p = "target" + std::to_string(k) + ".";
    Target t;
    t.a = kv.get_double(p + "a", 1.0);
    t.phi = kv.get_double(p + "phi", 0.0);
    t.r = kv.get_double(p + "r");
    t.theta = kv.get_double(p + "theta");
    if (t.a < 0.0) throw std::runtime_error(kv.origin() + ": " + p + "a must be non-negative");
    if (std::abs(t.theta) >= M_PI / 2.0)
      throw std::runtime_error(kv.origin() + ": " + p + "theta must lie in (-pi/2, pi/2)");
    targets.push_back(t);
  }
  return targets;
}

}  // namespace fmcw
