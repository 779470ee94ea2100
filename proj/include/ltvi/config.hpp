#pragma once

// Flat key-value configuration with [section] headers. Values stay strings
// until a typed getter consumes them; getters throw ConfigError naming the
// offending section.key.

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ltvi/types.hpp"

namespace ltvi {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Config {
public:
    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text, const std::string& origin = "<config>");

    [[nodiscard]] bool has(const std::string& section, const std::string& key) const;

    [[nodiscard]] double get_double(const std::string& section, const std::string& key) const;
    [[nodiscard]] double get_double(const std::string& section, const std::string& key,
                                    double fallback) const;
    [[nodiscard]] long get_int(const std::string& section, const std::string& key,
                               long fallback) const;
    [[nodiscard]] bool get_bool(const std::string& section, const std::string& key,
                                bool fallback) const;
    [[nodiscard]] std::string get_string(const std::string& section, const std::string& key,
                                         const std::string& fallback) const;
    [[nodiscard]] std::vector<double> get_list(const std::string& section,
                                               const std::string& key) const;
    /// Rows separated by ';', entries by spaces or commas.
    [[nodiscard]] Matrix get_matrix(const std::string& section, const std::string& key) const;

    /// Throws ConfigError naming the first key not present in the allowlist.
    void require_known_keys(
        const std::map<std::string, std::vector<std::string>>& allowed) const;

    [[nodiscard]] std::vector<std::string> sections() const;

private:
    [[nodiscard]] const std::string& raw(const std::string& section, const std::string& key) const;

    std::map<std::string, std::map<std::string, std::string>> data_;
    std::string origin_;
};

/// Key-value report document in the same format the parser reads.
void write_kv_document(
    const std::string& path,
    const std::vector<std::pair<std::string,
                                std::vector<std::pair<std::string, std::string>>>>& sections);

}  // namespace ltvi
