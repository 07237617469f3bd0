#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace lwr::cli {

/// Flat `key = value` file. Blank lines and lines starting with '#' are
/// skipped. Throws ConfigError on unreadable files and malformed lines.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

/// `--key=value` tokens for entries whose flag does not appear in `args`,
/// so explicit flags win over the file.
std::vector<std::string> config_tokens(const std::map<std::string, std::string>& entries,
                                       const std::vector<std::string>& args);

}  // namespace lwr::cli
