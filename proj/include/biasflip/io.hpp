#ifndef BIASFLIP_IO_HPP
#define BIASFLIP_IO_HPP

#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace biasflip::io {

/// Shortest decimal string that round-trips the value exactly.
std::string format_double(double v);

/// RFC 4180 quoting: fields containing comma, quote, CR or LF are quoted,
/// embedded quotes doubled.
std::string csv_escape(const std::string& field);

/// Row-oriented CSV emitter with CRLF line endings.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}
    void row(const std::vector<std::string>& cells);
    void numeric_row(const std::vector<double>& cells);

private:
    std::ostream& os_;
};

/// Flat sectioned config: `[section]` headers, `key_unit = value` entries,
/// `#` comments. Sections and keys are kept sorted.
struct ConfigMap {
    std::map<std::string, std::map<std::string, std::string>> sections;

    bool has(const std::string& section, const std::string& key) const;
    const std::string& get(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key) const;
    std::string get_or(const std::string& section, const std::string& key,
                       const std::string& fallback) const;
    double get_double_or(const std::string& section, const std::string& key,
                         double fallback) const;
};

/// Parse the sectioned text form, or a JSON object of objects when the first
/// non-space byte is '{'. Throws ConfigParse on malformed input.
ConfigMap parse_config(const std::string& text);
ConfigMap load_config(const std::string& path);

/// Deterministic canonical rendering: sorted sections and keys, one blank
/// line between sections, LF endings. parse(canonical(c)) == c byte for byte.
std::string canonical_config(const ConfigMap& config);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace biasflip::io

#endif
