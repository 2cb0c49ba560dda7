#include "eigslab/export.hpp"

#include <cstdio>

#include "json.hpp"

namespace eigslab {

std::string graph_to_json(const LevelGraph& g) {
    nlohmann::json root;
    root["level"] = g.level;
    root["terminal_plus"] = g.terminal_plus;
    root["terminal_minus"] = g.terminal_minus;
    root["birth_level"] = g.birth_level;
    auto edges = nlohmann::json::array();
    for (const Edge& e : g.edges) edges.push_back({e.tail, e.head, e.colour});
    root["edges"] = std::move(edges);
    return root.dump() + "\n";
}

std::string graph_to_dot(const LevelGraph& g) {
    std::string out = "digraph eigs {\n";
    for (int64_t v = 0; v < g.n_vertices; ++v) {
        out += "  " + std::to_string(v) + " [birth_level=" +
               std::to_string(g.birth_level[static_cast<size_t>(v)]) + "];\n";
    }
    for (const Edge& e : g.edges) {
        out += "  " + std::to_string(e.tail) + " -> " + std::to_string(e.head) +
               " [colour=" + std::to_string(e.colour) + "];\n";
    }
    out += "}\n";
    return out;
}

std::string fnv1a_hex(const std::string& content) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : content) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string manifest_to_json(const RunManifest& m) {
    nlohmann::json root;
    root["command_line"] = m.command_line;
    root["config_hash"] = m.config_hash;
    root["seed"] = m.seed;
    root["tool_version"] = m.tool_version;
    root["wall_time_ms"] = m.wall_time_ms;
    root["outputs"] = m.outputs;
    return root.dump(2) + "\n";
}

}  // namespace eigslab
