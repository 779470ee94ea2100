#include "ltvi/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace ltvi {
namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) {
        ++a;
    }
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) {
        --b;
    }
    return s.substr(a, b - a);
}

double parse_double(const std::string& value, const std::string& field) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) {
            throw std::invalid_argument("trailing characters");
        }
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: field '" + field + "' is not a number: '" + value + "'");
    }
}

}  // namespace

Config Config::parse_string(const std::string& text, const std::string& origin) {
    Config cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    std::string section;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) {
                throw ConfigError(origin + ":" + std::to_string(line_no) +
                                  ": malformed section header '" + line + "'");
            }
            section = trim(line.substr(1, line.size() - 2));
            cfg.data_[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(origin + ":" + std::to_string(line_no) +
                              ": expected 'key = value', got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty key");
        }
        if (section.empty()) {
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": key '" + key +
                              "' outside any [section]");
        }
        cfg.data_[section][key] = value;
    }
    return cfg;
}

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config: cannot open '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_string(buffer.str(), path);
}

bool Config::has(const std::string& section, const std::string& key) const {
    const auto sec = data_.find(section);
    return sec != data_.end() && sec->second.count(key) > 0;
}

const std::string& Config::raw(const std::string& section, const std::string& key) const {
    const auto sec = data_.find(section);
    if (sec == data_.end() || sec->second.count(key) == 0) {
        throw ConfigError("config: missing required field '" + section + "." + key + "'");
    }
    return sec->second.at(key);
}

double Config::get_double(const std::string& section, const std::string& key) const {
    return parse_double(raw(section, key), section + "." + key);
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
}

long Config::get_int(const std::string& section, const std::string& key, long fallback) const {
    if (!has(section, key)) {
        return fallback;
    }
    const double v = get_double(section, key);
    const auto rounded = static_cast<long>(v);
    if (static_cast<double>(rounded) != v) {
        throw ConfigError("config: field '" + section + "." + key + "' must be an integer");
    }
    return rounded;
}

bool Config::get_bool(const std::string& section, const std::string& key, bool fallback) const {
    if (!has(section, key)) {
        return fallback;
    }
    const std::string& v = raw(section, key);
    if (v == "true") {
        return true;
    }
    if (v == "false") {
        return false;
    }
    throw ConfigError("config: field '" + section + "." + key + "' must be true or false, got '" +
                      v + "'");
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
    return has(section, key) ? raw(section, key) : fallback;
}

std::vector<double> Config::get_list(const std::string& section, const std::string& key) const {
    const std::string& v = raw(section, key);
    std::vector<double> out;
    std::string item;
    std::istringstream in(v);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(parse_double(item, section + "." + key));
        }
    }
    if (out.empty()) {
        throw ConfigError("config: field '" + section + "." + key + "' is an empty list");
    }
    return out;
}

Matrix Config::get_matrix(const std::string& section, const std::string& key) const {
    const std::string& v = raw(section, key);
    const std::string field = section + "." + key;
    std::vector<std::vector<double>> rows;
    std::string row_text;
    std::istringstream rows_in(v);
    while (std::getline(rows_in, row_text, ';')) {
        std::vector<double> row;
        std::istringstream row_in(row_text);
        std::string entry;
        while (row_in >> entry) {
            if (!entry.empty() && entry.back() == ',') {
                entry.pop_back();
            }
            if (!entry.empty()) {
                row.push_back(parse_double(entry, field));
            }
        }
        if (!row.empty()) {
            rows.push_back(std::move(row));
        }
    }
    if (rows.empty()) {
        throw ConfigError("config: field '" + field + "' is an empty matrix");
    }
    const std::size_t cols = rows.front().size();
    for (const auto& row : rows) {
        if (row.size() != cols) {
            throw ConfigError("config: field '" + field + "' has ragged rows");
        }
    }
    Matrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return m;
}

void Config::require_known_keys(
    const std::map<std::string, std::vector<std::string>>& allowed) const {
    for (const auto& [section, entries] : data_) {
        const auto it = allowed.find(section);
        if (it == allowed.end()) {
            throw ConfigError("config: unknown section '[" + section + "]'");
        }
        for (const auto& [key, value] : entries) {
            (void)value;
            if (std::find(it->second.begin(), it->second.end(), key) == it->second.end()) {
                throw ConfigError("config: unknown field '" + section + "." + key + "'");
            }
        }
    }
}

std::vector<std::string> Config::sections() const {
    std::vector<std::string> out;
    out.reserve(data_.size());
    for (const auto& [name, entries] : data_) {
        (void)entries;
        out.push_back(name);
    }
    return out;
}

void write_kv_document(
    const std::string& path,
    const std::vector<std::pair<std::string,
                                std::vector<std::pair<std::string, std::string>>>>& sections) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("write_kv_document: cannot open " + path);
    }
    for (const auto& [name, entries] : sections) {
        out << '[' << name << "]\n";
        for (const auto& [key, value] : entries) {
            out << key << " = " << value << '\n';
        }
        out << '\n';
    }
}

}  // namespace ltvi
