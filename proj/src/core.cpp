#include "eigslab/core.hpp"

#include <algorithm>
#include <cstdlib>
#include <queue>
#include <set>

#include "eigslab/spectral.hpp"
#include "json.hpp"

namespace eigslab {
namespace {

using nlohmann::json;

// Shared structural sanity for systems built in code (load_system performs
// the same checks with JSON paths in the messages).
void check_structure(const EIGSystem& sys) {
    if (sys.colours < 1) throw ConfigError("colours: must be >= 1");
    if (static_cast<int32_t>(sys.rules.size()) != sys.colours)
        throw ConfigError("rules: need exactly one rule per colour");
    if (sys.initial_colour < 1 || sys.initial_colour > sys.colours)
        throw ConfigError("initial_colour: out of range");
    for (int32_t c = 1; c <= sys.colours; ++c) {
        const RuleGraph& r = sys.rule(c);
        const std::string where = "rules[" + std::to_string(c - 1) + "]";
        if (r.n_vertices < 2) throw ConfigError(where + ".vertices: must be >= 2");
        auto in_range = [&](int32_t v) { return v >= 0 && v < r.n_vertices; };
        if (!in_range(r.plant_plus))
            throw ConfigError(where + ".plant_plus: vertex id out of range");
        if (!in_range(r.plant_minus))
            throw ConfigError(where + ".plant_minus: vertex id out of range");
        if (r.plant_plus == r.plant_minus)
            throw ConfigError(where + ": planting vertices must be distinct");
        if (r.edges.empty()) throw ConfigError(where + ".edges: must be non-empty");
        for (size_t j = 0; j < r.edges.size(); ++j) {
            const Edge& e = r.edges[j];
            const std::string ew = where + ".edges[" + std::to_string(j) + "]";
            if (!in_range(e.tail)) throw ConfigError(ew + "[0]: vertex id out of range");
            if (!in_range(e.head)) throw ConfigError(ew + "[1]: vertex id out of range");
            if (e.tail == e.head) throw ConfigError(ew + ": self-loops are not allowed");
            if (e.colour < 1 || e.colour > sys.colours)
                throw ConfigError(ew + "[2]: colour " + std::to_string(e.colour) +
                                  " out of range [1.." + std::to_string(sys.colours) + "]");
        }
    }
}

int64_t get_int(const json& j, const std::string& path) {
    if (!j.is_number_integer())
        throw ConfigError(path + ": expected an integer");
    return j.get<int64_t>();
}

// Undirected adjacency over distinct vertex pairs (parallel edges merged;
// used by path enumeration, which branches over vertices).
std::vector<std::vector<int32_t>> undirected_adjacency(const RuleGraph& r) {
    std::vector<std::set<int32_t>> nb(r.n_vertices);
    for (const Edge& e : r.edges) {
        nb[e.tail].insert(e.head);
        nb[e.head].insert(e.tail);
    }
    std::vector<std::vector<int32_t>> out(r.n_vertices);
    for (int32_t v = 0; v < r.n_vertices; ++v)
        out[v].assign(nb[v].begin(), nb[v].end());
    return out;
}

// Enumerate every simple plant-to-plant vertex path and call fn on each
// (as the sequence of visited vertices). Rule graphs are small, so plain
// exhaustive DFS is fine; the guard keeps pathological configs from
// exploding.
template <typename Fn>
void for_each_terminal_path(const RuleGraph& r, Fn&& fn) {
    if (r.n_vertices > 24)
        throw ConfigError("rule graph too large for path enumeration (> 24 vertices)");
    auto adj = undirected_adjacency(r);
    std::vector<int32_t> path{r.plant_plus};
    std::vector<char> visited(r.n_vertices, 0);
    visited[r.plant_plus] = 1;
    auto dfs = [&](auto&& self, int32_t v) -> void {
        if (v == r.plant_minus) {
            fn(path);
            return;
        }
        for (int32_t w : adj[v]) {
            if (visited[w]) continue;
            visited[w] = 1;
            path.push_back(w);
            self(self, w);
            path.pop_back();
            visited[w] = 0;
        }
    };
    dfs(dfs, r.plant_plus);
}

int32_t bfs_plant_distance(const RuleGraph& r) {
    auto adj = undirected_adjacency(r);
    std::vector<int32_t> dist(r.n_vertices, -1);
    std::queue<int32_t> q;
    dist[r.plant_plus] = 0;
    q.push(r.plant_plus);
    while (!q.empty()) {
        int32_t v = q.front();
        q.pop();
        for (int32_t w : adj[v]) {
            if (dist[w] >= 0) continue;
            dist[w] = dist[v] + 1;
            q.push(w);
        }
    }
    return dist[r.plant_minus];
}

bool add_overflows(int64_t a, int64_t b, int64_t* out) {
    return __builtin_add_overflow(a, b, out);
}

bool mul_overflows(int64_t a, int64_t b, int64_t* out) {
    return __builtin_mul_overflow(a, b, out);
}

}  // namespace

EIGSystem load_system(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config root: expected an object");
    for (const std::string key : {"colours", "initial_colour", "rules"})
        if (!root.contains(key)) throw ConfigError(key + ": missing");

    EIGSystem sys;
    int64_t colours = get_int(root["colours"], "colours");
    if (colours < 1 || colours > 1024)
        throw ConfigError("colours: must be in [1..1024]");
    sys.colours = static_cast<int32_t>(colours);
    sys.initial_colour =
        static_cast<int32_t>(get_int(root["initial_colour"], "initial_colour"));

    const json& rules = root["rules"];
    if (!rules.is_array()) throw ConfigError("rules: expected an array");
    for (size_t i = 0; i < rules.size(); ++i) {
        const std::string where = "rules[" + std::to_string(i) + "]";
        const json& jr = rules[i];
        if (!jr.is_object()) throw ConfigError(where + ": expected an object");
        for (const std::string key : {"vertices", "plant_plus", "plant_minus", "edges"})
            if (!jr.contains(key)) throw ConfigError(where + "." + key + ": missing");
        RuleGraph r;
        r.n_vertices = static_cast<int32_t>(get_int(jr["vertices"], where + ".vertices"));
        r.plant_plus = static_cast<int32_t>(get_int(jr["plant_plus"], where + ".plant_plus"));
        r.plant_minus = static_cast<int32_t>(get_int(jr["plant_minus"], where + ".plant_minus"));
        const json& edges = jr["edges"];
        if (!edges.is_array()) throw ConfigError(where + ".edges: expected an array");
        for (size_t j = 0; j < edges.size(); ++j) {
            const std::string ew = where + ".edges[" + std::to_string(j) + "]";
            const json& je = edges[j];
            if (!je.is_array() || je.size() != 3)
                throw ConfigError(ew + ": expected [tail, head, colour]");
            Edge e;
            e.tail = static_cast<int32_t>(get_int(je[0], ew + "[0]"));
            e.head = static_cast<int32_t>(get_int(je[1], ew + "[1]"));
            e.colour = static_cast<int32_t>(get_int(je[2], ew + "[2]"));
            r.edges.push_back(e);
        }
        sys.rules.push_back(std::move(r));
    }
    check_structure(sys);
    return sys;
}

std::string system_to_json(const EIGSystem& sys) {
    json root;
    root["colours"] = sys.colours;
    root["initial_colour"] = sys.initial_colour;
    root["rules"] = json::array();
    for (const RuleGraph& r : sys.rules) {
        json jr;
        jr["vertices"] = r.n_vertices;
        jr["plant_plus"] = r.plant_plus;
        jr["plant_minus"] = r.plant_minus;
        jr["edges"] = json::array();
        for (const Edge& e : r.edges)
            jr["edges"].push_back({e.tail, e.head, e.colour});
        root["rules"].push_back(std::move(jr));
    }
    return root.dump(2) + "\n";
}

std::vector<Violation> validate_canonical(const EIGSystem& sys) {
    check_structure(sys);
    std::vector<Violation> out;
    for (int32_t c = 1; c <= sys.colours; ++c) {
        const RuleGraph& r = sys.rule(c);
        // Covered[j] = edge j joins a vertex pair that is adjacent on some
        // simple plant-to-plant path (any parallel edge can play that
        // path's role, whatever its direction or colour).
        std::vector<char> covered(r.edges.size(), 0);
        for_each_terminal_path(r, [&](const std::vector<int32_t>& path) {
            for (size_t k = 0; k + 1 < path.size(); ++k) {
                int32_t u = path[k], v = path[k + 1];
                for (size_t j = 0; j < r.edges.size(); ++j) {
                    const Edge& e = r.edges[j];
                    if ((e.tail == u && e.head == v) || (e.tail == v && e.head == u))
                        covered[j] = 1;
                }
            }
        });
        for (size_t j = 0; j < r.edges.size(); ++j) {
            if (covered[j]) continue;
            out.push_back({c, static_cast<int32_t>(j),
                           "rule " + std::to_string(c) + " edge " + std::to_string(j) +
                               " (" + std::to_string(r.edges[j].tail) + " -> " +
                               std::to_string(r.edges[j].head) +
                               ") lies on no simple plant-to-plant path"});
        }
    }
    return out;
}

std::vector<Violation> validate_distance_positive(const EIGSystem& sys) {
    check_structure(sys);
    std::vector<Violation> out;
    // Per-rule signatures suffice: a family matrix has a zero entry iff
    // some rule has a path signature with a zero component.
    for (int32_t c = 1; c <= sys.colours; ++c) {
        auto sigs = path_signatures(sys.rule(c), sys.colours);
        if (sigs.empty()) {
            out.push_back({c, -1,
                           "rule " + std::to_string(c) +
                               " has no simple plant-to-plant path"});
            continue;
        }
        for (const auto& sig : sigs) {
            for (int32_t j = 0; j < sys.colours; ++j) {
                if (sig[j] > 0) continue;
                out.push_back({c, -1,
                               "rule " + std::to_string(c) +
                                   " has a plant-to-plant path with no colour-" +
                                   std::to_string(j + 1) + " edge"});
            }
        }
    }
    if (sys.colours == 1) {
        int32_t d = bfs_plant_distance(sys.rule(1));
        if (d >= 0 && d < 2)
            out.push_back({1, -1,
                           "single-colour system needs plant distance >= 2, got " +
                               std::to_string(d)});
    }
    return out;
}

LevelGraph initial_graph(const EIGSystem& sys) {
    check_structure(sys);
    LevelGraph g;
    g.level = 0;
    g.n_vertices = 2;
    g.terminal_plus = 0;
    g.terminal_minus = 1;
    g.birth_level = {0, 0};
    g.edges = {{0, 1, sys.initial_colour}};
    return g;
}

LevelGraph substitute(const LevelGraph& g, const EIGSystem& sys, int64_t edge_cap) {
    check_structure(sys);
    // Predict the result size before allocating anything.
    int64_t new_edges = 0, new_interior = 0;
    for (const Edge& e : g.edges) {
        const RuleGraph& r = sys.rule(e.colour);
        if (add_overflows(new_edges, static_cast<int64_t>(r.edges.size()), &new_edges) ||
            new_edges > edge_cap)
            throw SizeCapError("substitution would exceed the edge cap of " +
                               std::to_string(edge_cap) + " edges");
        if (add_overflows(new_interior, static_cast<int64_t>(r.n_vertices) - 2,
                          &new_interior))
            throw SizeCapError("substitution would overflow the vertex count");
    }

    LevelGraph out;
    out.level = g.level + 1;
    out.terminal_plus = g.terminal_plus;
    out.terminal_minus = g.terminal_minus;
    out.n_vertices = g.n_vertices + new_interior;
    out.birth_level = g.birth_level;
    out.birth_level.resize(static_cast<size_t>(out.n_vertices), out.level);
    out.edges.reserve(static_cast<size_t>(new_edges));

    int64_t next_id = g.n_vertices;
    std::vector<int64_t> map;  // rule vertex -> global id, reused per edge
    for (const Edge& e : g.edges) {
        const RuleGraph& r = sys.rule(e.colour);
        map.assign(r.n_vertices, -1);
        map[r.plant_plus] = e.tail;
        map[r.plant_minus] = e.head;
        for (int32_t v = 0; v < r.n_vertices; ++v)
            if (map[v] < 0) map[v] = next_id++;
        for (const Edge& re : r.edges) {
            Edge ne{static_cast<int32_t>(map[re.tail]),
                    static_cast<int32_t>(map[re.head]), re.colour};
            // Plants are distinct and level edges are loop-free, so a loop
            // here can only mean broken bookkeeping.
            if (ne.tail == ne.head)
                throw std::logic_error("substitution produced a self-loop");
            out.edges.push_back(ne);
        }
    }
    return out;
}

LevelGraph build(const EIGSystem& sys, int32_t n, int64_t edge_cap) {
    LevelGraph g = initial_graph(sys);
    for (int32_t i = 0; i < n; ++i) g = substitute(g, sys, edge_cap);
    return g;
}

CountPrediction predict_counts(const EIGSystem& sys, int32_t n) {
    check_structure(sys);
    const int32_t k = sys.colours;
    CountPrediction p;
    // Interior vertices added per substituted edge of each colour.
    std::vector<int64_t> interior(k);
    CountMatrix m = mass_matrix(sys);
    for (int32_t c = 0; c < k; ++c) interior[c] = sys.rules[c].n_vertices - 2;

    std::vector<int64_t> e(k, 0);
    e[sys.initial_colour - 1] = 1;
    int64_t vertices = 2;
    p.edges_by_colour.push_back(e);
    p.total_edges.push_back(1);
    p.total_vertices.push_back(2);

    for (int32_t level = 1; level <= n; ++level) {
        if (p.saturated) {
            p.edges_by_colour.push_back(p.edges_by_colour.back());
            p.total_edges.push_back(p.total_edges.back());
            p.total_vertices.push_back(p.total_vertices.back());
            continue;
        }
        // Vertices first: old count plus interiors per substituted edge.
        bool overflow = false;
        int64_t v_next = vertices;
        for (int32_t c = 0; c < k && !overflow; ++c) {
            int64_t t = 0;
            overflow = mul_overflows(e[c], interior[c], &t) ||
                       add_overflows(v_next, t, &v_next);
        }
        std::vector<int64_t> e_next(k, 0);
        int64_t total = 0;
        for (int32_t j = 0; j < k && !overflow; ++j) {
            for (int32_t i = 0; i < k && !overflow; ++i) {
                int64_t t = 0;
                overflow = mul_overflows(e[i], m[i][j], &t) ||
                           add_overflows(e_next[j], t, &e_next[j]);
            }
            overflow = overflow || add_overflows(total, e_next[j], &total);
        }
        if (overflow) {
            p.saturated = true;
            p.edges_by_colour.push_back(p.edges_by_colour.back());
            p.total_edges.push_back(p.total_edges.back());
            p.total_vertices.push_back(p.total_vertices.back());
            continue;
        }
        e = e_next;
        vertices = v_next;
        p.edges_by_colour.push_back(e);
        p.total_edges.push_back(total);
        p.total_vertices.push_back(vertices);
    }
    return p;
}

int64_t edge_cap_from_env() {
    const char* env = std::getenv("EIGSLAB_EDGE_CAP");
    if (env == nullptr) return kDefaultEdgeCap;
    char* end = nullptr;
    long long v = std::strtoll(env, &end, 10);
    if (end == env || *end != '\0' || v <= 0) return kDefaultEdgeCap;
    return static_cast<int64_t>(v);
}

}  // namespace eigslab
