#include "fnbo/toml.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fnbo/common.hpp"

namespace fnbo {

namespace {

[[noreturn]] void fail(int line, const std::string& what) {
    throw std::invalid_argument("toml line " + std::to_string(line) + ": " + what);
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// strips a trailing comment that is not inside a quoted string
std::string strip_comment(const std::string& s) {
    bool quoted = false;
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') quoted = !quoted;
        if (s[i] == '#' && !quoted) return s.substr(0, i);
    }
    return s;
}

bool valid_key(const std::string& k) {
    if (k.empty()) return false;
    for (char c : k)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' && c != '.')
            return false;
    return true;
}

TomlValue parse_scalar(const std::string& raw, int line) {
    if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"') {
        TomlValue v;
        v.kind = TomlValue::Kind::str;
        for (size_t i = 1; i + 1 < raw.size(); ++i) {
            if (raw[i] == '\\' && i + 2 < raw.size()) {
                ++i;
                v.s += raw[i] == 'n' ? '\n' : raw[i] == 't' ? '\t' : raw[i];
            } else {
                v.s += raw[i];
            }
        }
        return v;
    }
    if (raw == "true" || raw == "false") {
        TomlValue v;
        v.kind = TomlValue::Kind::boolean;
        v.b = raw == "true";
        return v;
    }
    char* end = nullptr;
    const double num = std::strtod(raw.c_str(), &end);
    if (end == raw.c_str() || *end != '\0') fail(line, "bad value '" + raw + "'");
    TomlValue v;
    v.num = num;
    return v;
}

TomlValue parse_value(const std::string& raw, int line) {
    if (!raw.empty() && raw.front() == '[') {
        if (raw.back() != ']') fail(line, "unterminated array");
        TomlValue v;
        v.kind = TomlValue::Kind::arr;
        std::string body = raw.substr(1, raw.size() - 2);
        bool quoted = false;
        std::string item;
        for (char c : body) {
            if (c == '"') quoted = !quoted;
            if (c == ',' && !quoted) {
                const std::string t = trim(item);
                if (!t.empty()) v.arr.push_back(parse_scalar(t, line));
                item.clear();
            } else {
                item += c;
            }
        }
        const std::string t = trim(item);
        if (!t.empty()) v.arr.push_back(parse_scalar(t, line));
        return v;
    }
    return parse_scalar(raw, line);
}

std::string fmt_value(const TomlValue& v) {
    switch (v.kind) {
        case TomlValue::Kind::str: {
            std::string out = "\"";
            for (char c : v.s) {
                if (c == '"' || c == '\\') out += '\\';
                out += c;
            }
            return out + "\"";
        }
        case TomlValue::Kind::boolean:
            return v.b ? "true" : "false";
        case TomlValue::Kind::num: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", v.num);
            return buf;
        }
        case TomlValue::Kind::arr: {
            std::string out = "[";
            for (size_t i = 0; i < v.arr.size(); ++i) {
                if (i) out += ", ";
                out += fmt_value(v.arr[i]);
            }
            return out + "]";
        }
    }
    return "";
}

}  // namespace

TomlValue TomlValue::of(const std::string& v) {
    TomlValue t;
    t.kind = Kind::str;
    t.s = v;
    return t;
}
TomlValue TomlValue::of(double v) {
    TomlValue t;
    t.num = v;
    return t;
}
TomlValue TomlValue::of(bool v) {
    TomlValue t;
    t.kind = Kind::boolean;
    t.b = v;
    return t;
}
TomlValue TomlValue::of(const std::vector<double>& v) {
    TomlValue t;
    t.kind = Kind::arr;
    for (double x : v) t.arr.push_back(of(x));
    return t;
}
TomlValue TomlValue::of(const std::vector<std::string>& v) {
    TomlValue t;
    t.kind = Kind::arr;
    for (const std::string& x : v) t.arr.push_back(of(x));
    return t;
}

TomlTable TomlTable::parse(const std::string& text) {
    TomlTable root;
    TomlTable* target = &root;
    std::string prefix;
    std::istringstream in(text);
    std::string raw_line;
    int line = 0;
    while (std::getline(in, raw_line)) {
        ++line;
        const std::string s = trim(strip_comment(raw_line));
        if (s.empty()) continue;
        if (s.size() >= 4 && s.substr(0, 2) == "[[" && s.substr(s.size() - 2) == "]]") {
            const std::string name = trim(s.substr(2, s.size() - 4));
            if (!valid_key(name)) fail(line, "bad table name");
            root.groups_[name].emplace_back();
            target = &root.groups_[name].back();
            prefix.clear();
            continue;
        }
        if (s.front() == '[' && s.back() == ']') {
            const std::string name = trim(s.substr(1, s.size() - 2));
            if (!valid_key(name)) fail(line, "bad section name");
            prefix = name + ".";
            target = &root;
            continue;
        }
        const size_t eq = s.find('=');
        if (eq == std::string::npos) fail(line, "expected key = value");
        const std::string key = trim(s.substr(0, eq));
        if (!valid_key(key)) fail(line, "bad key '" + key + "'");
        const std::string val = trim(s.substr(eq + 1));
        if (val.empty()) fail(line, "missing value for '" + key + "'");
        const std::string full = target == &root ? prefix + key : key;
        if (target->vals_.count(full)) fail(line, "duplicate key '" + full + "'");
        target->vals_[full] = parse_value(val, line);
    }
    return root;
}

TomlTable TomlTable::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::vector<std::string> TomlTable::keys() const {
    std::vector<std::string> out;
    out.reserve(vals_.size());
    for (const auto& [k, v] : vals_) out.push_back(k);
    return out;
}

const TomlValue& TomlTable::at(const std::string& key, const char* want) const {
    auto it = vals_.find(key);
    if (it == vals_.end())
        throw std::invalid_argument("missing config key '" + key + "' (" + want + ")");
    return it->second;
}

std::string TomlTable::get_string(const std::string& key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    const TomlValue& v = at(key, "string");
    if (v.kind != TomlValue::Kind::str)
        throw std::invalid_argument("config key '" + key + "' must be a string");
    return v.s;
}

double TomlTable::get_double(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    const TomlValue& v = at(key, "number");
    if (v.kind != TomlValue::Kind::num)
        throw std::invalid_argument("config key '" + key + "' must be a number");
    return v.num;
}

int TomlTable::get_int(const std::string& key, int fallback) const {
    if (!has(key)) return fallback;
    const double d = get_double(key, 0.0);
    const int i = static_cast<int>(d);
    if (static_cast<double>(i) != d)
        throw std::invalid_argument("config key '" + key + "' must be an integer");
    return i;
}

bool TomlTable::get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const TomlValue& v = at(key, "boolean");
    if (v.kind != TomlValue::Kind::boolean)
        throw std::invalid_argument("config key '" + key + "' must be a boolean");
    return v.b;
}

std::vector<double> TomlTable::get_doubles(const std::string& key) const {
    if (!has(key)) return {};
    const TomlValue& v = at(key, "array");
    if (v.kind != TomlValue::Kind::arr)
        throw std::invalid_argument("config key '" + key + "' must be an array");
    std::vector<double> out;
    for (const TomlValue& e : v.arr) {
        if (e.kind != TomlValue::Kind::num)
            throw std::invalid_argument("config key '" + key + "' must hold numbers");
        out.push_back(e.num);
    }
    return out;
}

std::vector<std::string> TomlTable::get_strings(const std::string& key) const {
    if (!has(key)) return {};
    const TomlValue& v = at(key, "array");
    if (v.kind != TomlValue::Kind::arr)
        throw std::invalid_argument("config key '" + key + "' must be an array");
    std::vector<std::string> out;
    for (const TomlValue& e : v.arr) {
        if (e.kind != TomlValue::Kind::str)
            throw std::invalid_argument("config key '" + key + "' must hold strings");
        out.push_back(e.s);
    }
    return out;
}

const std::vector<TomlTable>& TomlTable::groups(const std::string& name) const {
    static const std::vector<TomlTable> empty;
    auto it = groups_.find(name);
    return it == groups_.end() ? empty : it->second;
}

std::string TomlTable::dump() const {
    std::string out;
    for (const auto& [k, v] : vals_) {
        out += k;
        out += " = ";
        out += fmt_value(v);
        out += '\n';
    }
    for (const auto& [name, tables] : groups_) {
        for (const TomlTable& t : tables) {
            out += "\n[[" + name + "]]\n";
            out += t.dump();
        }
    }
    return out;
}

}  // namespace fnbo
