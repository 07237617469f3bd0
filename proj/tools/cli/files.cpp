#include <glob.h>

#include <algorithm>
#include <set>

#include "cli/commands.hpp"

namespace lwr::cli {

namespace {

constexpr std::string_view kDenoisedSuffix = ".denoised.pgm";

bool has_glob_chars(const std::string& s) { return s.find_first_of("*?[") != std::string::npos; }

}  // namespace

std::string image_id(const std::filesystem::path& path) { return path.stem().string(); }

bool is_denoised_name(const std::filesystem::path& path) {
  const std::string name = path.filename().string();
  return name.size() > kDenoisedSuffix.size() && name.ends_with(kDenoisedSuffix);
}

std::vector<std::filesystem::path> expand_inputs(const std::vector<std::string>& patterns) {
  if (patterns.empty()) throw ConfigError("no input images given");
  std::set<std::filesystem::path> found;
  for (const auto& pattern : patterns) {
    if (!has_glob_chars(pattern)) {
      found.insert(pattern);
      continue;
    }
    glob_t g{};
    const int rc = ::glob(pattern.c_str(), 0, nullptr, &g);
    if (rc == 0) {
      for (std::size_t i = 0; i < g.gl_pathc; ++i) found.insert(g.gl_pathv[i]);
    }
    globfree(&g);
    if (rc == GLOB_NOMATCH) throw ConfigError("pattern matches no files: " + pattern);
    if (rc != 0) throw ConfigError("cannot expand pattern: " + pattern);
  }
  return {found.begin(), found.end()};
}

}  // namespace lwr::cli
