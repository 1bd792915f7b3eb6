#include "biasflip/io.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "biasflip/errors.hpp"

namespace biasflip::io {

std::string format_double(double v) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        out += c;
        if (c == '"') out += '"';
    }
    out += '"';
    return out;
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) os_ << ',';
        os_ << csv_escape(cells[i]);
    }
    os_ << "\r\n";
}

void CsvWriter::numeric_row(const std::vector<double>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) os_ << ',';
        os_ << format_double(cells[i]);
    }
    os_ << "\r\n";
}

bool ConfigMap::has(const std::string& section, const std::string& key) const {
    auto s = sections.find(section);
    return s != sections.end() && s->second.count(key) > 0;
}

const std::string& ConfigMap::get(const std::string& section, const std::string& key) const {
    auto s = sections.find(section);
    if (s == sections.end()) throw ConfigParse("missing config section [" + section + "]");
    auto k = s->second.find(key);
    if (k == s->second.end())
        throw ConfigParse("missing config key " + key + " in [" + section + "]");
    return k->second;
}

double ConfigMap::get_double(const std::string& section, const std::string& key) const {
    const std::string& raw = get(section, key);
    char* end = nullptr;
    const double v = std::strtod(raw.c_str(), &end);
    if (end == raw.c_str() || *end != '\0')
        throw ConfigParse("non-numeric value for " + key + ": '" + raw + "'");
    return v;
}

std::string ConfigMap::get_or(const std::string& section, const std::string& key,
                              const std::string& fallback) const {
    return has(section, key) ? get(section, key) : fallback;
}

double ConfigMap::get_double_or(const std::string& section, const std::string& key,
                                double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
}

namespace {

std::string trim(const std::string& s) {
    const size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

ConfigMap parse_json_config(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigParse(std::string("bad JSON config: ") + e.what());
    }
    if (!j.is_object()) throw ConfigParse("JSON config must be an object of sections");
    ConfigMap cfg;
    for (auto& [sec, body] : j.items()) {
        if (!body.is_object()) throw ConfigParse("section '" + sec + "' must be an object");
        for (auto& [key, val] : body.items()) {
            if (val.is_string())
                cfg.sections[sec][key] = val.get<std::string>();
            else if (val.is_number())
                cfg.sections[sec][key] = format_double(val.get<double>());
            else if (val.is_boolean())
                cfg.sections[sec][key] = val.get<bool>() ? "true" : "false";
            else
                throw ConfigParse("unsupported value type for " + sec + "." + key);
        }
    }
    return cfg;
}

}  // namespace

ConfigMap parse_config(const std::string& text) {
    const size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') return parse_json_config(text);

    ConfigMap cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigParse("line " + std::to_string(lineno) + ": unterminated section");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigParse("line " + std::to_string(lineno) + ": empty section name");
            cfg.sections[section];
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigParse("line " + std::to_string(lineno) + ": expected key = value");
        if (section.empty())
            throw ConfigParse("line " + std::to_string(lineno) + ": entry before any section");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigParse("line " + std::to_string(lineno) + ": empty key or value");
        cfg.sections[section][key] = value;
    }
    return cfg;
}

ConfigMap load_config(const std::string& path) { return parse_config(read_file(path)); }

std::string canonical_config(const ConfigMap& config) {
    std::string out;
    bool first = true;
    for (const auto& [section, entries] : config.sections) {
        if (!first) out += '\n';
        first = false;
        out += '[' + section + "]\n";
        for (const auto& [key, value] : entries) out += key + " = " + value + '\n';
    }
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoFailure("cannot open for writing: " + path);
    os << content;
    if (!os) throw IoFailure("write failed: " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoFailure("cannot open: " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace biasflip::io
