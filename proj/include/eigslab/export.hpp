#pragma once

#include <string>

#include "eigslab/core.hpp"

namespace eigslab {

// Level-graph JSON: level, terminals, birth levels and the edge list.
std::string graph_to_json(const LevelGraph& g);

// Graphviz DOT: directed edges labelled by colour, vertices by birth
// level.
std::string graph_to_dot(const LevelGraph& g);

// FNV-1a 64 content hash, hex-encoded (used for config hashes in run
// manifests).
std::string fnv1a_hex(const std::string& content);

// Every CLI invocation that writes a result file drops a sibling
// <file>.manifest.json with the reproduction context.
struct RunManifest {
    std::string command_line;
    std::string config_hash;
    uint64_t seed = 0;
    std::string tool_version;
    double wall_time_ms = 0.0;
    std::vector<std::string> outputs;
};

std::string manifest_to_json(const RunManifest& m);

}  // namespace eigslab
