#include "agentclass/manifest.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "agentclass/errors.hpp"
#include "agentclass/numfmt.hpp"

namespace agentclass {

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("FileError", "cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return hex64(fnv1a64(buf.str()));
}

void add_input(RunManifest& m, const std::string& path) { m.inputs[path] = file_digest(path); }

void add_output(RunManifest& m, const std::string& path) { m.outputs[path] = file_digest(path); }

void write_manifest(const RunManifest& m, const std::string& path) {
    nlohmann::json j{{"command", m.command},
                     {"config", m.config},
                     {"tool_version", m.tool_version},
                     {"inputs", m.inputs},
                     {"outputs", m.outputs}};
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("FileError", "cannot write '" + path + "'");
    out << j.dump(2) << '\n';
    if (!out) throw DomainError("FileError", "write failed for '" + path + "'");
}

RunManifest read_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("FileError", "cannot read '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
        RunManifest m;
        m.command = j.at("command").get<std::string>();
        m.config = j.at("config").get<std::string>();
        m.tool_version = j.at("tool_version").get<std::string>();
        m.inputs = j.at("inputs").get<std::map<std::string, std::string>>();
        m.outputs = j.at("outputs").get<std::map<std::string, std::string>>();
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw DomainError("BadManifest", e.what());
    }
}

std::vector<std::string> verify_manifest(const RunManifest& m) {
    std::vector<std::string> issues;
    auto check = [&](const std::map<std::string, std::string>& files, const char* which) {
        for (const auto& [path, digest] : files) {
            std::string now;
            try {
                now = file_digest(path);
            } catch (const DomainError&) {
                issues.push_back(std::string(which) + " '" + path + "' is unreadable");
                continue;
            }
            if (now != digest)
                issues.push_back(std::string(which) + " '" + path + "' digest " + now +
                                 " != recorded " + digest);
        }
    };
    check(m.inputs, "input");
    check(m.outputs, "output");
    return issues;
}

}  // namespace agentclass
