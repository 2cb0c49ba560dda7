#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace eigslab {

// Colours are 1-based everywhere (colour 0 is never valid); vertex ids are
// 0-based and dense.
struct Edge {
    int32_t tail = 0;
    int32_t head = 0;
    int32_t colour = 1;

    bool operator==(const Edge&) const = default;
};

// One substitution rule: a directed multigraph with two distinguished
// planting vertices. Vertex ids run 0..n_vertices-1.
struct RuleGraph {
    int32_t n_vertices = 0;
    int32_t plant_plus = 0;
    int32_t plant_minus = 0;
    std::vector<Edge> edges;

    bool operator==(const RuleGraph&) const = default;
};

// The full system: K colours, one rule per colour (rules[c-1] is the rule
// for colour c), and the colour of the single starting edge.
struct EIGSystem {
    int32_t colours = 0;
    int32_t initial_colour = 1;
    std::vector<RuleGraph> rules;

    bool operator==(const EIGSystem&) const = default;

    const RuleGraph& rule(int32_t colour) const { return rules.at(colour - 1); }
};

// A level-n graph. Vertex ids are dense; ids of level n-1 are a prefix of
// the ids of level n (substitution appends interior vertices in edge-list
// order), so birth_level is monotone along the id axis.
struct LevelGraph {
    int32_t level = 0;
    int64_t n_vertices = 0;
    int32_t terminal_plus = 0;
    int32_t terminal_minus = 1;
    std::vector<int32_t> birth_level;
    std::vector<Edge> edges;
};

// Configuration / schema errors carry the JSON path of the offending field.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a build would exceed the edge cap.
struct SizeCapError : std::runtime_error {
    explicit SizeCapError(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr int64_t kDefaultEdgeCap = 50'000'000;

// Parse and structurally validate a JSON config (schema-level checks only:
// counts, ranges, distinct plants, no self-loops). Throws ConfigError with
// the JSON path of the first offending field.
EIGSystem load_system(const std::string& json_text);

// Inverse of load_system for round-tripping.
std::string system_to_json(const EIGSystem& sys);

// A validation finding, tied to a rule and (if applicable) an edge index.
struct Violation {
    int32_t colour = 0;      // 1-based rule colour
    int32_t edge_index = -1; // index into that rule's edge list, or -1
    std::string message;
};

// Canonicality: every rule edge must lie on at least one simple path
// between the planting vertices (paths traverse edges in either direction).
// Returns one violation per uncovered edge; empty means canonical.
std::vector<Violation> validate_canonical(const EIGSystem& sys);

// Distance-positivity: every matrix in the distance family must have all
// entries >= 1, and for K = 1 the plant-to-plant graph distance must be
// >= 2. Empty result means the assumption holds.
std::vector<Violation> validate_distance_positive(const EIGSystem& sys);

// The level-0 graph: a single edge of the initial colour between the two
// terminals.
LevelGraph initial_graph(const EIGSystem& sys);

// One parallel substitution round: every edge of colour c is replaced by a
// fresh copy of rule c, tail onto plant_plus and head onto plant_minus.
// Old vertex ids are preserved; interior copies are appended per edge in
// edge-list order. Throws SizeCapError if the result would exceed edge_cap.
LevelGraph substitute(const LevelGraph& g, const EIGSystem& sys,
                      int64_t edge_cap = kDefaultEdgeCap);

// Build the level-n graph from the initial edge.
LevelGraph build(const EIGSystem& sys, int32_t n,
                 int64_t edge_cap = kDefaultEdgeCap);

// Exact predicted counts per level, computed from the recursion alone
// (never from a built graph). If any count would overflow int64 the
// remaining levels are clamped and `saturated` is set.
struct CountPrediction {
    std::vector<std::vector<int64_t>> edges_by_colour; // [level][colour-1]
    std::vector<int64_t> total_edges;                  // [level]
    std::vector<int64_t> total_vertices;               // [level]
    bool saturated = false;
};

CountPrediction predict_counts(const EIGSystem& sys, int32_t n);

// Effective edge cap: environment override EIGSLAB_EDGE_CAP, else the
// default. CLI flags take precedence over both.
int64_t edge_cap_from_env();

}  // namespace eigslab
