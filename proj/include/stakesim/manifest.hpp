// Copyright (c) 2026 The stakesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef STAKESIM_MANIFEST_HPP
#define STAKESIM_MANIFEST_HPP

#include <map>
#include <string>

namespace stakesim {

inline constexpr const char* STAKESIM_VERSION = "1.0.0";

// Written next to every output so a result is reproducible from the
// manifest alone: same command, config, seed and overrides give
// byte-identical primary outputs.
struct RunManifest {
    std::string command;
    std::string config_path;
    std::string config_digest; // sha256 hex of the config bytes, "" if none
    uint64_t seed = 0;
    std::map<std::string, std::string> overrides;
    std::string out_dir;
    std::string tool_version = STAKESIM_VERSION;

    std::string to_json() const;
    static RunManifest from_json(const std::string& text);
    void write(const std::string& path) const;
};

std::string sha256_hex_of_file(const std::string& path);

} // namespace stakesim

#endif // STAKESIM_MANIFEST_HPP
