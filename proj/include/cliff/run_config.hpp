#pragma once

#include <string>
#include <vector>

#include "cliff/torus.hpp"

namespace cliff {

struct RunConfig {
    int a = 2;
    int b = 3;
    int k = 1;
    int m = 6;
    Variant variant = Variant::OnePoint;
    ConfigOptions opts;
    int mesh_density = 192;  // target grid cells per chart side
    int eigen_count = 16;
    std::string output_dir = ".";
};

// Recognized keys, in canonical order.
const std::vector<std::string>& run_config_keys();

// Sets one key from its textual value; throws ConfigError on unknown keys or malformed values.
void apply_key(RunConfig& rc, const std::string& key, const std::string& value);

// "key = value" lines, '#' starts a comment; unknown keys are rejected.
RunConfig parse_config_text(const std::string& text, RunConfig base = {});
RunConfig load_config_file(const std::string& path, RunConfig base = {});
std::string config_text(const RunConfig& rc);

const char* variant_name(Variant v);
DoublingConfig to_doubling(const RunConfig& rc);

}  // namespace cliff
