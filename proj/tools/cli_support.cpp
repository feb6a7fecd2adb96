#include "cli_support.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace cli {

void fail(int code, const std::string& message) {
    throw CliError{code, message};
}

std::string fmt_full(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string fmt_rate(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

bool valid_label(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s) {
        bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                  (c >= '0' && c <= '9') || c == '_' || c == '.' || c == ':' ||
                  c == '-';
        if (!ok) return false;
    }
    return true;
}

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find('\t', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

double parse_full_double(const std::string& text, bool& ok) {
    std::string t = trim(text);
    double v = 0.0;
    auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    ok = res.ec == std::errc() && res.ptr == t.data() + t.size() && !t.empty();
    return v;
}

}  // namespace

InputTable read_battery_file(const std::string& path, wbonf_model_t model) {
    std::ifstream in(path);
    if (!in) fail(exit_parse, "cannot open input file '" + path + "'");

    InputTable table;
    std::map<std::string, int32_t> group_index;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        if (!header_seen) {
            if (line != "id\tstat\tgroup") {
                fail(exit_parse, "parse error at line " + std::to_string(line_no) +
                                     ": expected header 'id<TAB>stat<TAB>group'");
            }
            header_seen = true;
            continue;
        }
        auto fields = split_tabs(line);
        if (fields.size() != 3) {
            fail(exit_parse, "parse error at line " + std::to_string(line_no) +
                                 ": expected 3 tab-separated fields, found " +
                                 std::to_string(fields.size()));
        }
        const std::string id = trim(fields[0]);
        const std::string group = trim(fields[2]);
        if (!valid_label(id)) {
            fail(exit_parse, "parse error at line " + std::to_string(line_no) +
                                 ": malformed id '" + fields[0] + "'");
        }
        if (!valid_label(group)) {
            fail(exit_parse, "parse error at line " + std::to_string(line_no) +
                                 ": malformed group label '" + fields[2] + "'");
        }
        bool ok = false;
        double stat = parse_full_double(fields[1], ok);
        if (!ok || !std::isfinite(stat)) {
            fail(exit_parse, "parse error at line " + std::to_string(line_no) +
                                 ": bad statistic '" + fields[1] + "'");
        }
        if (model == WBONF_MODEL_CHISQ && stat < 0.0) {
            fail(exit_validation,
                 "line " + std::to_string(line_no) +
                     ": negative statistic is invalid under the chi-square model");
        }
        auto [it, inserted] = group_index.try_emplace(
            group, static_cast<int32_t>(table.group_names.size()));
        if (inserted) table.group_names.push_back(group);
        table.ids.push_back(id);
        table.stats.push_back(stat);
        table.group_of.push_back(it->second);
        table.group_of_label.push_back(group);
    }
    if (!header_seen) fail(exit_parse, "parse error: empty input, header required");
    if (table.ids.empty()) fail(exit_parse, "parse error: no data rows");
    return table;
}

ConfigFile read_config_file(const std::string& path,
                            const std::vector<std::string>& allowed_keys) {
    std::ifstream in(path);
    if (!in) fail(exit_parse, "cannot open config file '" + path + "'");
    ConfigFile cfg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            fail(exit_parse, "config parse error at line " + std::to_string(line_no) +
                                 ": expected key = value");
        }
        std::string key = trim(stripped.substr(0, eq));
        std::string value = trim(stripped.substr(eq + 1));
        if (std::find(allowed_keys.begin(), allowed_keys.end(), key) ==
            allowed_keys.end()) {
            fail(exit_parse, "config parse error at line " + std::to_string(line_no) +
                                 ": unknown key '" + key + "'");
        }
        cfg.values[key] = value;
    }
    return cfg;
}

double parse_double_field(const std::string& key, const std::string& text) {
    bool ok = false;
    double v = parse_full_double(text, ok);
    if (!ok) {
        fail(exit_validation, "invalid scenario field '" + key + "': '" + text +
                                  "' is not a number");
    }
    return v;
}

std::int64_t parse_int_field(const std::string& key, const std::string& text) {
    std::string t = text;
    std::int64_t v = 0;
    auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size() || t.empty()) {
        fail(exit_validation, "invalid scenario field '" + key + "': '" + text +
                                  "' is not an integer");
    }
    return v;
}

bool parse_bool_field(const std::string& key, const std::string& text) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    fail(exit_validation,
         "invalid scenario field '" + key + "': '" + text + "' is not a boolean");
}

wbonf_model_t parse_model_field(const std::string& key, const std::string& text) {
    if (text == "normal") return WBONF_MODEL_NORMAL;
    if (text == "chisq") return WBONF_MODEL_CHISQ;
    fail(exit_validation, "invalid scenario field '" + key + "': model must be " +
                              "'normal' or 'chisq', got '" + text + "'");
}

std::vector<double> parse_double_list_field(const std::string& key,
                                            const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(parse_double_field(key, trim(item)));
    }
    if (out.empty()) {
        fail(exit_validation, "invalid scenario field '" + key + "': empty list");
    }
    return out;
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(exit_validation, "cannot open output file '" + path + "'");
    out << text;
    if (!out) fail(exit_validation, "failed writing output file '" + path + "'");
}

void fail_status(wbonf_status_t status) {
    std::string message = wbonf_last_error_message();
    switch (status) {
        case WBONF_ERROR_PARSE:
            fail(exit_parse, message);
        case WBONF_ERROR_GROUP_TOO_SMALL:
        case WBONF_ERROR_INVALID_ARGUMENT:
        case WBONF_ERROR_DOMAIN:
        case WBONF_ERROR_NO_SIGNAL:
            fail(exit_validation, message);
        default:
            fail(exit_validation,
                 std::string(wbonf_status_name(status)) + ": " + message);
    }
}

}  // namespace cli
