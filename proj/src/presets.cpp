#include "eigslab/presets.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace eigslab {
namespace {

RuleGraph rule(int32_t n, int32_t plus, int32_t minus, std::vector<Edge> edges) {
    RuleGraph r;
    r.n_vertices = n;
    r.plant_plus = plus;
    r.plant_minus = minus;
    r.edges = std::move(edges);
    return r;
}

EIGSystem single(RuleGraph r) {
    EIGSystem sys;
    sys.colours = 1;
    sys.initial_colour = 1;
    sys.rules = {std::move(r)};
    return sys;
}

// Diamond: 0 = plant+, 1 = plant-, both parallel 2-paths oriented forward.
EIGSystem dhl() {
    return single(rule(4, 0, 1, {{0, 2, 1}, {2, 1, 1}, {0, 3, 1}, {3, 1, 1}}));
}

// 3-path backbone 0-2-3-1 with pendant edges at both interior vertices.
EIGSystem vicsek() {
    return single(rule(6, 0, 1,
                       {{0, 2, 1}, {2, 3, 1}, {3, 1, 1}, {2, 4, 1}, {3, 5, 1}}));
}

// 4-path backbone 0-2-3-4-1 with pendant edges at the quarter points.
EIGSystem laakso() {
    return single(rule(7, 0, 1,
                       {{0, 2, 1}, {2, 3, 1}, {3, 4, 1}, {4, 1, 1}, {2, 5, 1},
                        {4, 6, 1}}));
}

// Backbone 0-2-3-4-1 of length 4 whose last edge is shunted by the 2-path
// 4-5-1; the edge at vertex 5 points out of the minus plant so terminal
// degrees grow additively.
EIGSystem xi() {
    return single(rule(6, 0, 1,
                       {{0, 2, 1}, {2, 3, 1}, {3, 4, 1}, {4, 1, 1}, {4, 5, 1},
                        {1, 5, 1}}));
}

// 2-path 0-2-1 with one branch hanging off the midpoint.
EIGSystem binary_tree() {
    return single(rule(4, 0, 1, {{0, 2, 1}, {2, 1, 1}, {2, 3, 1}}));
}

// Two-colour system. Rule 1 is a Wheatstone bridge whose bridge is a
// 2-path; rule 2 is a pair of disjoint plant-to-plant paths.
EIGSystem fig2() {
    EIGSystem sys;
    sys.colours = 2;
    sys.initial_colour = 1;
    sys.rules.push_back(rule(5, 0, 1,
                             {{0, 2, 1},    // plus side, colour 1
                              {0, 3, 2},    // plus side, colour 2
                              {2, 1, 2},    // minus side, colour 2
                              {3, 1, 1},    // minus side, colour 1
                              {2, 4, 1},    // bridge, colour 1
                              {4, 3, 2}})); // bridge, colour 2
    sys.rules.push_back(rule(5, 0, 1,
                             {{0, 2, 2},    // long path: 2, 1, 2
                              {2, 3, 1},
                              {3, 1, 2},
                              {0, 4, 2},    // short path: 2, 1
                              {4, 1, 1}}));
    return sys;
}

// u pairwise-disjoint parallel paths of length v, all oriented forward.
EIGSystem flower(int32_t u, int32_t v) {
    if (u < 1 || v < 1 || u * v < 2)
        throw ConfigError("flower: need u >= 1, v >= 1, u*v >= 2");
    RuleGraph r;
    r.n_vertices = 2 + u * (v - 1);
    r.plant_plus = 0;
    r.plant_minus = 1;
    for (int32_t p = 0; p < u; ++p) {
        int32_t prev = 0;
        for (int32_t s = 1; s < v; ++s) {
            int32_t interior = 2 + p * (v - 1) + (s - 1);
            r.edges.push_back({prev, interior, 1});
            prev = interior;
        }
        r.edges.push_back({prev, 1, 1});
    }
    return single(std::move(r));
}

bool parse_flower(const std::string& name, int32_t* u, int32_t* v) {
    // Accepted spellings: flower:U,V  flower(U,V)  flower-U-V
    if (name.rfind("flower", 0) != 0) return false;
    std::string rest = name.substr(6);
    for (char& c : rest)
        if (c == ':' || c == '(' || c == ')' || c == ',' || c == '-') c = ' ';
    std::istringstream in(rest);
    long long a = 0, b = 0;
    if (!(in >> a >> b)) return false;
    std::string trailing;
    if (in >> trailing) return false;
    if (a < 1 || b < 1 || a > 1000 || b > 1000) return false;
    *u = static_cast<int32_t>(a);
    *v = static_cast<int32_t>(b);
    return true;
}

}  // namespace

std::optional<EIGSystem> make_preset(const std::string& name) {
    if (name == "dhl") return dhl();
    if (name == "vicsek") return vicsek();
    if (name == "laakso") return laakso();
    if (name == "xi") return xi();
    if (name == "fig2") return fig2();
    if (name == "binary-tree") return binary_tree();
    int32_t u = 0, v = 0;
    if (parse_flower(name, &u, &v)) return flower(u, v);
    return std::nullopt;
}

std::vector<std::string> preset_names() {
    return {"dhl", "flower:2,3", "flower:3,2", "vicsek", "laakso", "xi",
            "fig2", "binary-tree"};
}

EIGSystem resolve_config(const std::string& arg) {
    std::error_code ec;
    if (std::filesystem::is_regular_file(arg, ec)) {
        std::ifstream in(arg);
        if (!in) throw ConfigError("cannot open config file: " + arg);
        std::stringstream buf;
        buf << in.rdbuf();
        return load_system(buf.str());
    }
    if (auto sys = make_preset(arg)) return *sys;
    throw ConfigError("config '" + arg +
                      "' is neither a readable file nor a preset name (presets: "
                      "dhl, vicsek, laakso, xi, fig2, binary-tree, flower:U,V)");
}

}  // namespace eigslab
