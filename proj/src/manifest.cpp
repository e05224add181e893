// Copyright (c) 2026 The stakesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <stakesim/manifest.hpp>

#include <stakesim/sha256.hpp>

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace stakesim {

std::string RunManifest::to_json() const
{
    nlohmann::json j;
    j["command"] = command;
    j["config_path"] = config_path;
    j["config_digest"] = config_digest;
    j["seed"] = seed;
    j["overrides"] = overrides;
    j["out_dir"] = out_dir;
    j["tool_version"] = tool_version;
    return j.dump(2);
}

RunManifest RunManifest::from_json(const std::string& text)
{
    nlohmann::json j = nlohmann::json::parse(text);
    RunManifest m;
    m.command = j.value("command", "");
    m.config_path = j.value("config_path", "");
    m.config_digest = j.value("config_digest", "");
    m.seed = j.value("seed", uint64_t{0});
    if (j.contains("overrides"))
        m.overrides = j.at("overrides").get<std::map<std::string, std::string>>();
    m.out_dir = j.value("out_dir", "");
    m.tool_version = j.value("tool_version", "");
    return m;
}

void RunManifest::write(const std::string& path) const
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("RunManifest: cannot write " + path);
    f << to_json() << "\n";
}

std::string sha256_hex_of_file(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    const std::string bytes = ss.str();
    return sha256(reinterpret_cast<const uint8_t*>(bytes.data()), bytes.size()).to_hex();
}

} // namespace stakesim
