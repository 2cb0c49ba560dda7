#include "eigslab/spectral.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <limits>
#include <set>

namespace eigslab {
namespace {

// Distinct (neighbour, colour) moves per vertex; parallel edges of equal
// colour collapse because they produce identical signatures.
std::vector<std::vector<std::pair<int32_t, int32_t>>> coloured_adjacency(
    const RuleGraph& r) {
    std::vector<std::set<std::pair<int32_t, int32_t>>> nb(r.n_vertices);
    for (const Edge& e : r.edges) {
        nb[e.tail].insert({e.head, e.colour});
        nb[e.head].insert({e.tail, e.colour});
    }
    std::vector<std::vector<std::pair<int32_t, int32_t>>> out(r.n_vertices);
    for (int32_t v = 0; v < r.n_vertices; ++v)
        out[v].assign(nb[v].begin(), nb[v].end());
    return out;
}

Eigen::MatrixXd to_eigen(const RealMatrix& m) {
    const auto n = static_cast<Eigen::Index>(m.size());
    Eigen::MatrixXd a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) a(i, j) = m[i][j];
    return a;
}

}  // namespace

CountMatrix mass_matrix(const EIGSystem& sys) {
    const int32_t k = sys.colours;
    CountMatrix m(k, std::vector<int64_t>(k, 0));
    for (int32_t i = 0; i < k; ++i)
        for (const Edge& e : sys.rules[i].edges) m[i][e.colour - 1] += 1;
    return m;
}

CountMatrix degree_matrix(const EIGSystem& sys) {
    const int32_t k = sys.colours;
    CountMatrix n(2 * k, std::vector<int64_t>(2 * k, 0));
    for (int32_t j = 0; j < k; ++j) {
        const RuleGraph& r = sys.rules[j];
        for (int32_t side = 0; side < 2; ++side) {  // 0 = plus, 1 = minus
            const int32_t plant = side == 0 ? r.plant_plus : r.plant_minus;
            const int32_t row = 2 * j + side;
            for (const Edge& e : r.edges) {
                if (e.tail == plant) n[row][2 * (e.colour - 1) + 0] += 1;
                if (e.head == plant) n[row][2 * (e.colour - 1) + 1] += 1;
            }
        }
    }
    return n;
}

std::vector<std::vector<int64_t>> path_signatures(const RuleGraph& rule,
                                                  int32_t colours) {
    if (rule.n_vertices > 24)
        throw ConfigError("rule graph too large for path enumeration (> 24 vertices)");
    auto adj = coloured_adjacency(rule);
    std::set<std::vector<int64_t>> sigs;
    std::vector<int64_t> counts(colours, 0);
    std::vector<char> visited(rule.n_vertices, 0);
    visited[rule.plant_plus] = 1;
    auto dfs = [&](auto&& self, int32_t v) -> void {
        if (v == rule.plant_minus) {
            sigs.insert(counts);
            return;
        }
        for (auto [w, colour] : adj[v]) {
            if (visited[w]) continue;
            visited[w] = 1;
            counts[colour - 1] += 1;
            self(self, w);
            counts[colour - 1] -= 1;
            visited[w] = 0;
        }
    };
    dfs(dfs, rule.plant_plus);
    return {sigs.begin(), sigs.end()};
}

std::vector<CountMatrix> distance_family(const EIGSystem& sys) {
    const int32_t k = sys.colours;
    std::vector<std::vector<std::vector<int64_t>>> per_rule;
    size_t combinations = 1;
    for (int32_t c = 1; c <= k; ++c) {
        per_rule.push_back(path_signatures(sys.rule(c), k));
        if (per_rule.back().empty())
            throw ConfigError("rule " + std::to_string(c) +
                              " has no simple plant-to-plant path");
        combinations *= per_rule.back().size();
        if (combinations > 1000000)
            throw ConfigError("distance family too large (> 1e6 matrices)");
    }
    std::set<CountMatrix> family;
    CountMatrix current(k);
    auto recurse = [&](auto&& self, int32_t row) -> void {
        if (row == k) {
            family.insert(current);
            return;
        }
        for (const auto& sig : per_rule[row]) {
            current[row] = sig;
            self(self, row + 1);
        }
    };
    recurse(recurse, 0);
    return {family.begin(), family.end()};
}

double spectral_radius(const RealMatrix& m) {
    if (m.empty()) return 0.0;
    Eigen::MatrixXd a = to_eigen(m);
    Eigen::EigenSolver<Eigen::MatrixXd> solver(a, /*computeEigenvectors=*/false);
    double radius = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        radius = std::max(radius, std::abs(solver.eigenvalues()[i]));
    return radius;
}

double spectral_radius(const CountMatrix& m) {
    RealMatrix r(m.size(), std::vector<double>(m.size(), 0.0));
    for (size_t i = 0; i < m.size(); ++i)
        for (size_t j = 0; j < m.size(); ++j)
            r[i][j] = static_cast<double>(m[i][j]);
    return spectral_radius(r);
}

double rho_min(const std::vector<CountMatrix>& family) {
    double best = std::numeric_limits<double>::infinity();
    for (const CountMatrix& d : family) best = std::min(best, spectral_radius(d));
    return best;
}

double rho_min(const EIGSystem& sys) { return rho_min(distance_family(sys)); }

}  // namespace eigslab
