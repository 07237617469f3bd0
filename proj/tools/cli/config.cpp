#include "cli/config.hpp"

#include <fstream>

#include "cli/commands.hpp"

namespace lwr::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::map<std::string, std::string> entries;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    const std::string key = eq == std::string::npos ? std::string{} : trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(path.string() + ":" + std::to_string(number) + ": expected key = value");
    entries[key] = trim(line.substr(eq + 1));
  }
  return entries;
}

std::vector<std::string> config_tokens(const std::map<std::string, std::string>& entries,
                                       const std::vector<std::string>& args) {
  std::vector<std::string> tokens;
  for (const auto& [key, value] : entries) {
    const std::string flag = "--" + key;
    bool given = false;
    for (const auto& a : args) {
      if (a == flag || a.starts_with(flag + "=")) given = true;
    }
    if (!given) tokens.push_back(flag + "=" + value);
  }
  return tokens;
}

}  // namespace lwr::cli
