#include "cliff/run_config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "cliff/error.hpp"

namespace cliff {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

int to_int(const std::string& key, const std::string& v) {
    int out = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size()) throw Error(ErrorKind::ConfigError, key + ": expected an integer, got '" + v + "'");
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos == v.size()) return d;
    } catch (const std::exception&) {
    }
    throw Error(ErrorKind::ConfigError, key + ": expected a number, got '" + v + "'");
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw Error(ErrorKind::ConfigError, key + ": expected true or false, got '" + v + "'");
}

}  // namespace

const char* variant_name(Variant v) { return v == Variant::OnePoint ? "one-point" : "three-point"; }

const std::vector<std::string>& run_config_keys() {
    static const std::vector<std::string> keys = {"a", "b", "k", "m", "variant", "alpha", "c_bar", "grid_n", "m_min_factor",
                                                  "strict", "mesh_density", "eigen_count", "output_dir"};
    return keys;
}

void apply_key(RunConfig& rc, const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    if (key == "a") rc.a = to_int(key, v);
    else if (key == "b") rc.b = to_int(key, v);
    else if (key == "k") rc.k = to_int(key, v);
    else if (key == "m") rc.m = to_int(key, v);
    else if (key == "variant") {
        if (v == "one-point") rc.variant = Variant::OnePoint;
        else if (v == "three-point") rc.variant = Variant::ThreePoint;
        else throw Error(ErrorKind::ConfigError, "variant: expected one-point or three-point, got '" + v + "'");
    } else if (key == "alpha") rc.opts.alpha = to_double(key, v);
    else if (key == "c_bar") rc.opts.c_bar = to_double(key, v);
    else if (key == "grid_n") rc.opts.grid_n = to_int(key, v);
    else if (key == "m_min_factor") rc.opts.m_min_factor = to_double(key, v);
    else if (key == "strict") rc.opts.strict = to_bool(key, v);
    else if (key == "mesh_density") rc.mesh_density = to_int(key, v);
    else if (key == "eigen_count") rc.eigen_count = to_int(key, v);
    else if (key == "output_dir") rc.output_dir = v;
    else throw Error(ErrorKind::ConfigError, "unknown key '" + key + "'");
}

RunConfig parse_config_text(const std::string& text, RunConfig base) {
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorKind::ConfigError, "line " + std::to_string(lineno) + ": expected 'key = value'");
        try {
            apply_key(base, trim(line.substr(0, eq)), line.substr(eq + 1));
        } catch (const Error& e) {
            std::string msg = e.what();
            const std::string prefix = std::string(error_name(e.kind())) + ": ";
            if (msg.rfind(prefix, 0) == 0) msg.erase(0, prefix.size());
            throw Error(e.kind(), "line " + std::to_string(lineno) + ": " + msg);
        }
    }
    return base;
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
    std::ifstream is(path);
    if (!is) throw Error(ErrorKind::IoError, "cannot open " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_config_text(ss.str(), std::move(base));
}

std::string config_text(const RunConfig& rc) {
    std::ostringstream os;
    os << "a = " << rc.a << "\nb = " << rc.b << "\nk = " << rc.k << "\nm = " << rc.m << "\nvariant = " << variant_name(rc.variant)
       << "\nalpha = " << rc.opts.alpha << "\nc_bar = " << rc.opts.c_bar << "\ngrid_n = " << rc.opts.grid_n
       << "\nm_min_factor = " << rc.opts.m_min_factor << "\nstrict = " << (rc.opts.strict ? "true" : "false")
       << "\nmesh_density = " << rc.mesh_density << "\neigen_count = " << rc.eigen_count << "\noutput_dir = " << rc.output_dir
       << '\n';
    return os.str();
}

DoublingConfig to_doubling(const RunConfig& rc) { return validate_config(rc.a, rc.b, rc.k, rc.m, rc.variant, rc.opts); }

}  // namespace cliff
