#pragma once

#include <map>
#include <string>
#include <vector>

namespace fnbo {

/// Minimal TOML subset: bare `key = value` pairs, [section] prefixes,
/// [[group]] tables, strings, numbers, booleans, flat arrays, # comments.
/// Enough for experiment configs and the network description files.
struct TomlValue {
    enum class Kind { str, num, boolean, arr };
    Kind kind = Kind::num;
    std::string s;
    double num = 0.0;
    bool b = false;
    std::vector<TomlValue> arr;

    static TomlValue of(const std::string& v);
    static TomlValue of(double v);
    static TomlValue of(bool v);
    static TomlValue of(const std::vector<double>& v);
    static TomlValue of(const std::vector<std::string>& v);
};

class TomlTable {
  public:
    static TomlTable parse(const std::string& text);
    static TomlTable parse_file(const std::string& path);

    bool has(const std::string& key) const { return vals_.count(key) > 0; }
    std::vector<std::string> keys() const;

    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_doubles(const std::string& key) const;       // empty when absent
    std::vector<std::string> get_strings(const std::string& key) const;  // empty when absent

    /// All [[name]] tables, in file order.
    const std::vector<TomlTable>& groups(const std::string& name) const;

    void set(const std::string& key, TomlValue v) { vals_[key] = std::move(v); }
    void add_group(const std::string& name, TomlTable t) {
        groups_[name].push_back(std::move(t));
    }
    /// Scalars in sorted key order, then groups; parses back to an equal table.
    std::string dump() const;

  private:
    const TomlValue& at(const std::string& key, const char* want) const;

    std::map<std::string, TomlValue> vals_;
    std::map<std::string, std::vector<TomlTable>> groups_;
};

}  // namespace fnbo
