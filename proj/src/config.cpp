#include "anisoshape/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace anisoshape {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size()) throw std::invalid_argument("config: " + key + " expects a number, got '" + v + "'");
  return d;
}

int to_int(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  if (d != static_cast<int>(d) || d < 1) throw std::invalid_argument("config: " + key + " expects a positive integer");
  return static_cast<int>(d);
}

}  // namespace

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream is(text);
  std::string line;
  int number = 0;
  while (std::getline(is, line)) {
    ++number;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos || trim(t.substr(0, eq)).empty()) {
      throw std::invalid_argument("config line " + std::to_string(number) + ": expected key=value");
    }
    out[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return out;
}

HarnessConfig apply_config(HarnessConfig c, const std::map<std::string, std::string>& values) {
  for (const auto& [key, v] : values) {
    if (key == "cap") {
      c.cap = to_double(key, v);
    } else if (key == "limit_grid") {
      c.limit_grid = to_int(key, v);
    } else if (key == "levelset_grid") {
      c.levelset_grid = to_int(key, v);
    } else if (key == "metric_grid") {
      c.metric_grid = to_int(key, v);
    } else if (key == "seed") {
      std::size_t used = 0;
      try {
        c.seed = std::stoull(v, &used, 0);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != v.size()) throw std::invalid_argument("config: seed expects an integer, got '" + v + "'");
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }
  return c;
}

HarnessConfig load_config(const std::string& path, HarnessConfig base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return apply_config(base, parse_key_values(ss.str()));
}

}  // namespace anisoshape
