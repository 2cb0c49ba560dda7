#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "eigslab/core.hpp"
#include "eigslab/presets.hpp"

using namespace eigslab;

namespace {

// ctest runs in the build directory, where presets/ is copied next to the
// binaries; fall back to the source layout when run by hand from build/.
std::string read_preset_file(const std::string& filename) {
    for (const std::string dir : {"presets/", "../presets/"}) {
        std::ifstream in(dir + filename);
        if (!in) continue;
        std::stringstream buf;
        buf << in.rdbuf();
        return buf.str();
    }
    return {};
}

EIGSystem modified(const EIGSystem& base, void (*mutate)(EIGSystem&)) {
    EIGSystem copy = base;
    mutate(copy);
    return copy;
}

std::string error_message(const std::string& json_text) {
    try {
        load_system(json_text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

// Independent canonicality oracle: enumerate plant-to-plant vertex
// sequences by explicit permutation extension rather than DFS, and mark
// every edge whose endpoint pair appears consecutively on some sequence.
std::vector<char> covered_by_permutations(const RuleGraph& r) {
    std::set<std::pair<int32_t, int32_t>> adjacent;
    for (const Edge& e : r.edges) {
        adjacent.insert({e.tail, e.head});
        adjacent.insert({e.head, e.tail});
    }
    std::set<std::pair<int32_t, int32_t>> on_path;
    std::vector<std::vector<int32_t>> frontier{{r.plant_plus}};
    while (!frontier.empty()) {
        std::vector<std::vector<int32_t>> next;
        for (const auto& seq : frontier) {
            if (seq.back() == r.plant_minus) {
                for (size_t i = 0; i + 1 < seq.size(); ++i) {
                    on_path.insert({seq[i], seq[i + 1]});
                    on_path.insert({seq[i + 1], seq[i]});
                }
                continue;
            }
            for (int32_t w = 0; w < r.n_vertices; ++w) {
                if (!adjacent.count({seq.back(), w})) continue;
                if (std::find(seq.begin(), seq.end(), w) != seq.end()) continue;
                auto longer = seq;
                longer.push_back(w);
                next.push_back(std::move(longer));
            }
        }
        frontier = std::move(next);
    }
    std::vector<char> covered(r.edges.size(), 0);
    for (size_t j = 0; j < r.edges.size(); ++j)
        if (on_path.count({r.edges[j].tail, r.edges[j].head})) covered[j] = 1;
    return covered;
}

}  // namespace

TEST_CASE("preset json files load to the built-in presets") {
    const std::vector<std::pair<std::string, std::string>> files = {
        {"dhl", "dhl.json"},
        {"vicsek", "vicsek.json"},
        {"laakso", "laakso.json"},
        {"xi", "xi.json"},
        {"fig2", "fig2.json"},
        {"binary-tree", "binary-tree.json"},
        {"flower:2,3", "flower-2-3.json"},
        {"flower:3,2", "flower-3-2.json"},
    };
    for (const auto& [preset, filename] : files) {
        CAPTURE(preset);
        const std::string text = read_preset_file(filename);
        REQUIRE(!text.empty());
        CHECK(load_system(text) == *make_preset(preset));
    }
}

TEST_CASE("json round trip is the identity") {
    for (const std::string& name : preset_names()) {
        CAPTURE(name);
        EIGSystem sys = *make_preset(name);
        CHECK(load_system(system_to_json(sys)) == sys);
    }
}

TEST_CASE("schema errors carry the json path") {
    CHECK(error_message("{").find("not valid JSON") != std::string::npos);
    CHECK(error_message("[]").find("config root") != std::string::npos);
    CHECK(error_message(R"({"colours": 1, "rules": []})")
              .find("initial_colour: missing") != std::string::npos);
    CHECK(error_message(
              R"({"colours": 0, "initial_colour": 1, "rules": []})")
              .find("colours") != std::string::npos);

    EIGSystem loop = *make_preset("dhl");
    loop.rules[0].edges[0] = {2, 2, 1};
    try {
        validate_canonical(loop);
        CHECK(false);
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("self-loops") != std::string::npos);
        CHECK(std::string(e.what()).find("rules[0].edges[0]") != std::string::npos);
    }

    EIGSystem colour = *make_preset("dhl");
    colour.rules[0].edges[2].colour = 5;
    try {
        validate_canonical(colour);
        CHECK(false);
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("colour 5 out of range [1..1]") !=
              std::string::npos);
        CHECK(std::string(e.what()).find("rules[0].edges[2]") != std::string::npos);
    }

    EIGSystem plants = *make_preset("dhl");
    plants.rules[0].plant_minus = plants.rules[0].plant_plus;
    CHECK_THROWS_AS(initial_graph(plants), ConfigError);

    EIGSystem missing_rule = *make_preset("fig2");
    missing_rule.rules.pop_back();
    CHECK_THROWS_AS(initial_graph(missing_rule), ConfigError);
}

TEST_CASE("initial graph is one edge of the initial colour") {
    EIGSystem sys = *make_preset("fig2");
    LevelGraph g = initial_graph(sys);
    CHECK(g.level == 0);
    CHECK(g.n_vertices == 2);
    CHECK(g.terminal_plus == 0);
    CHECK(g.terminal_minus == 1);
    CHECK(g.edges == std::vector<Edge>{{0, 1, 1}});
    CHECK(g.birth_level == std::vector<int32_t>{0, 0});
}

TEST_CASE("dhl level counts follow the diamond recursion") {
    EIGSystem sys = *make_preset("dhl");
    LevelGraph g = build(sys, 3);
    CHECK(g.level == 3);
    CHECK(g.edges.size() == 64);
    CHECK(g.n_vertices == 44);  // 2, 4, 12, 44
    CHECK(g.terminal_plus == 0);
    CHECK(g.terminal_minus == 1);
}

TEST_CASE("substitution is deterministic and preserves earlier ids") {
    for (const std::string& name : {"dhl", "fig2", "vicsek"}) {
        CAPTURE(name);
        EIGSystem sys = *make_preset(name);
        LevelGraph a = build(sys, 3);
        LevelGraph b = build(sys, 3);
        CHECK(a.edges == b.edges);
        CHECK(a.birth_level == b.birth_level);

        // Level n ids are a prefix of level n+1 ids.
        LevelGraph prev = initial_graph(sys);
        for (int32_t n = 1; n <= 3; ++n) {
            LevelGraph cur = substitute(prev, sys);
            REQUIRE(cur.n_vertices >= prev.n_vertices);
            for (int64_t v = 0; v < prev.n_vertices; ++v)
                CHECK(cur.birth_level[v] == prev.birth_level[v]);
            for (int64_t v = prev.n_vertices; v < cur.n_vertices; ++v)
                CHECK(cur.birth_level[v] == n);
            prev = cur;
        }
    }
}

TEST_CASE("predicted counts equal built counts for all presets") {
    for (const std::string& name : preset_names()) {
        CAPTURE(name);
        EIGSystem sys = *make_preset(name);
        CountPrediction p = predict_counts(sys, 5);
        REQUIRE(!p.saturated);
        LevelGraph g = initial_graph(sys);
        for (int32_t n = 0; n <= 5; ++n) {
            CHECK(p.total_edges[n] == static_cast<int64_t>(g.edges.size()));
            CHECK(p.total_vertices[n] == g.n_vertices);
            std::vector<int64_t> by_colour(sys.colours, 0);
            for (const Edge& e : g.edges) by_colour[e.colour - 1] += 1;
            CHECK(p.edges_by_colour[n] == by_colour);
            if (n < 5) g = substitute(g, sys);
        }
    }
}

TEST_CASE("prediction saturates instead of overflowing") {
    CountPrediction p = predict_counts(*make_preset("dhl"), 64);
    CHECK(p.saturated);
    CHECK(p.total_edges.size() == 65);
    // 4^31 < 2^63 < 4^32: the last exact value is held from there on.
    CHECK(p.total_edges[31] == (int64_t{1} << 62));
    CHECK(p.total_edges[64] == p.total_edges[31]);
}

TEST_CASE("edge cap refuses oversized builds") {
    EIGSystem sys = *make_preset("dhl");
    CHECK(build(sys, 3, 100).edges.size() == 64);
    CHECK_THROWS_AS(build(sys, 4, 100), SizeCapError);
}

TEST_CASE("canonicality matches a permutation-based oracle") {
    for (const std::string& name : preset_names()) {
        CAPTURE(name);
        EIGSystem sys = *make_preset(name);
        auto violations = validate_canonical(sys);
        for (int32_t c = 1; c <= sys.colours; ++c) {
            auto covered = covered_by_permutations(sys.rule(c));
            for (size_t j = 0; j < covered.size(); ++j) {
                const bool flagged =
                    std::any_of(violations.begin(), violations.end(),
                                [&](const Violation& v) {
                                    return v.colour == c &&
                                           v.edge_index == static_cast<int32_t>(j);
                                });
                CHECK(flagged == !covered[j]);
            }
        }
    }
}

TEST_CASE("pendant decorations are the only canonicality violations") {
    CHECK(validate_canonical(*make_preset("dhl")).empty());
    CHECK(validate_canonical(*make_preset("xi")).empty());
    CHECK(validate_canonical(*make_preset("fig2")).empty());
    CHECK(validate_canonical(*make_preset("flower:2,3")).empty());
    CHECK(validate_canonical(*make_preset("flower:3,2")).empty());

    auto flag_indices = [](const std::vector<Violation>& vs) {
        std::vector<int32_t> out;
        for (const Violation& v : vs) out.push_back(v.edge_index);
        return out;
    };
    CHECK(flag_indices(validate_canonical(*make_preset("vicsek"))) ==
          std::vector<int32_t>{3, 4});
    CHECK(flag_indices(validate_canonical(*make_preset("laakso"))) ==
          std::vector<int32_t>{4, 5});
    CHECK(flag_indices(validate_canonical(*make_preset("binary-tree"))) ==
          std::vector<int32_t>{2});
}

TEST_CASE("distance positivity holds for presets and rejects known failures") {
    for (const std::string& name : preset_names()) {
        CAPTURE(name);
        CHECK(validate_distance_positive(*make_preset(name)).empty());
    }

    // Single colour, plants at graph distance 1.
    EIGSystem close = modified(*make_preset("dhl"), [](EIGSystem& s) {
        s.rules[0].edges.push_back({0, 1, 1});
    });
    auto violations = validate_distance_positive(close);
    REQUIRE(!violations.empty());
    CHECK(violations.back().message.find("distance >= 2") != std::string::npos);

    // Two colours, one rule has a path that avoids colour 2 entirely.
    EIGSystem skewed = modified(*make_preset("fig2"), [](EIGSystem& s) {
        s.rules[0] = RuleGraph{3, 0, 1, {{0, 2, 1}, {2, 1, 1}}};
    });
    violations = validate_distance_positive(skewed);
    REQUIRE(!violations.empty());
    CHECK(violations.front().message.find("no colour-2 edge") != std::string::npos);
}

TEST_CASE("flower parser accepts the documented spellings") {
    CHECK(*make_preset("flower:2,3") == *make_preset("flower(2,3)"));
    CHECK(*make_preset("flower:2,3") == *make_preset("flower-2-3"));
    CHECK(!make_preset("flower:2"));
    CHECK(!make_preset("flower:2,3,4"));
    CHECK(!make_preset("flower:0,3"));
    CHECK(!make_preset("daisy"));
    CHECK_THROWS_AS(make_preset("flower:1,1"), ConfigError);
}

TEST_CASE("resolve_config falls back from file to preset") {
    CHECK(resolve_config("dhl") == *make_preset("dhl"));
    CHECK_THROWS_AS(resolve_config("no-such-system"), ConfigError);

    const std::string path = "tmp_roundtrip_config.json";
    {
        std::ofstream out(path);
        out << system_to_json(*make_preset("fig2"));
    }
    CHECK(resolve_config(path) == *make_preset("fig2"));
    std::remove(path.c_str());
}
