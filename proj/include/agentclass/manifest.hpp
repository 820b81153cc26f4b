#pragma once

#include <map>
#include <string>
#include <vector>

namespace agentclass {

inline constexpr const char* kToolVersion = "agentclass 1.0.0";

// Reproducibility sidecar a command can write next to its outputs: what ran,
// with which configuration, over which exact bytes. Two runs are the same run
// iff their manifests are byte-identical.
struct RunManifest {
    std::string command;
    std::string config;  // flag echo, fixed order
    std::string tool_version = kToolVersion;
    std::map<std::string, std::string> inputs;   // path -> content digest (fnv1a64 hex)
    std::map<std::string, std::string> outputs;

    bool operator==(const RunManifest&) const = default;
};

std::string file_digest(const std::string& path);  // FileError if unreadable

void add_input(RunManifest& m, const std::string& path);
void add_output(RunManifest& m, const std::string& path);

void write_manifest(const RunManifest& m, const std::string& path);
RunManifest read_manifest(const std::string& path);

// Recomputes every digest; returns one line per mismatch, empty when clean.
std::vector<std::string> verify_manifest(const RunManifest& m);

}  // namespace agentclass
