#include "eigslab/resistance.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>

namespace eigslab {
namespace {

constexpr int64_t kDirectSolveLimit = 100000;

struct Dsu {
    std::vector<int32_t> parent;
    explicit Dsu(int64_t n) : parent(static_cast<size_t>(n)) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int32_t find(int32_t v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    }
    void unite(int32_t a, int32_t b) { parent[find(a)] = find(b); }
};

// Contract zero-resistance edges and drop the rest into a clean positive
// edge list over representative ids.
struct ContractedGraph {
    std::vector<WeightedEdge> edges;  // positive resistances, u != v
    Dsu dsu;
};

ContractedGraph contract_zeros(int64_t n, const std::vector<WeightedEdge>& edges) {
    ContractedGraph g{{}, Dsu(n)};
    for (const WeightedEdge& e : edges) {
        if (!(e.resistance >= 0.0) || std::isinf(e.resistance))
            throw std::invalid_argument("edge resistances must be finite and >= 0");
        if (e.resistance == 0.0) g.dsu.unite(e.u, e.v);
    }
    for (const WeightedEdge& e : edges) {
        if (e.resistance == 0.0) continue;
        int32_t u = g.dsu.find(e.u), v = g.dsu.find(e.v);
        if (u == v) continue;  // shorted out
        g.edges.push_back({u, v, e.resistance});
    }
    return g;
}

// Connected component of `a` over the contracted edges (by representative
// id). Returns a dense re-indexing of that component, or an empty map if b
// is outside it.
bool component_reindex(int64_t n, const std::vector<WeightedEdge>& edges,
                       int32_t a, int32_t b, std::vector<int32_t>* index,
                       int64_t* count) {
    std::vector<std::vector<int32_t>> adj(static_cast<size_t>(n));
    for (const WeightedEdge& e : edges) {
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    index->assign(static_cast<size_t>(n), -1);
    std::queue<int32_t> q;
    (*index)[a] = 0;
    int64_t next = 1;
    q.push(a);
    while (!q.empty()) {
        int32_t v = q.front();
        q.pop();
        for (int32_t w : adj[v]) {
            if ((*index)[w] >= 0) continue;
            (*index)[w] = static_cast<int32_t>(next++);
            q.push(w);
        }
    }
    *count = next;
    return (*index)[b] >= 0;
}

double solve_laplacian(int64_t n, const std::vector<WeightedEdge>& edges,
                       int32_t a, int32_t b) {
    // Ground b: unknowns are all component vertices except b. Solve
    // L' phi = e_a; the potential at a equals the effective resistance.
    std::vector<int32_t> index;
    int64_t count = 0;
    if (!component_reindex(n, edges, a, b, &index, &count)) return kInfResistance;

    const int32_t ib = index[b];
    const int64_t m = count - 1;
    if (m == 0) return 0.0;  // a == b after contraction, handled upstream

    // Grounding b removes its row and column; ids above it shift down.
    auto slot = [&](int32_t reindexed) -> int32_t {
        if (reindexed == ib) return -1;
        return reindexed > ib ? reindexed - 1 : reindexed;
    };

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(edges.size() * 4);
    for (const WeightedEdge& e : edges) {
        int32_t u = index[e.u], v = index[e.v];
        if (u < 0 || v < 0) continue;  // other component
        const double g = 1.0 / e.resistance;
        int32_t iu = slot(u), iv = slot(v);
        if (iu >= 0) trip.emplace_back(iu, iu, g);
        if (iv >= 0) trip.emplace_back(iv, iv, g);
        if (iu >= 0 && iv >= 0) {
            trip.emplace_back(iu, iv, -g);
            trip.emplace_back(iv, iu, -g);
        }
    }

    Eigen::SparseMatrix<double> lap(m, m);
    lap.setFromTriplets(trip.begin(), trip.end());

    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    const int32_t ia = slot(index[a]);
    rhs[ia] = 1.0;

    Eigen::VectorXd phi;
    if (m <= kDirectSolveLimit) {
        Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> solver(lap);
        if (solver.info() != Eigen::Success)
            throw std::runtime_error("Laplacian factorisation failed");
        phi = solver.solve(rhs);
    } else {
        Eigen::ConjugateGradient<Eigen::SparseMatrix<double>,
                                 Eigen::Lower | Eigen::Upper>
            solver;
        solver.setTolerance(1e-12);
        solver.setMaxIterations(20 * m);
        solver.compute(lap);
        phi = solver.solve(rhs);
        if (solver.info() != Eigen::Success)
            throw std::runtime_error("Laplacian CG solve did not converge");
    }
    return phi[ia];
}

// Star-mesh elimination: repeatedly Schur-complement interior vertices out
// of the conductance graph. Exact for every graph; independent of the
// sparse solver route.
double solve_reduction(int64_t n, const std::vector<WeightedEdge>& edges,
                       int32_t a, int32_t b) {
    std::map<int32_t, std::map<int32_t, double>> adj;
    for (const WeightedEdge& e : edges) {
        const double g = 1.0 / e.resistance;
        adj[e.u][e.v] += g;  // parallel edges merge on insert
        adj[e.v][e.u] += g;
    }
    // Eliminate smallest-degree interior vertices first to limit fill-in.
    while (true) {
        int32_t victim = -1;
        size_t best_deg = SIZE_MAX;
        for (const auto& [v, nb] : adj) {
            if (v == a || v == b) continue;
            if (nb.size() < best_deg) {
                best_deg = nb.size();
                victim = v;
            }
        }
        if (victim < 0) break;
        auto star = std::move(adj[victim]);
        adj.erase(victim);
        double total = 0.0;
        for (const auto& [u, g] : star) {
            adj[u].erase(victim);
            total += g;
        }
        if (total > 0.0) {
            for (auto i = star.begin(); i != star.end(); ++i) {
                for (auto j = std::next(i); j != star.end(); ++j) {
                    const double g = i->second * j->second / total;
                    adj[i->first][j->first] += g;
                    adj[j->first][i->first] += g;
                }
            }
        }
        // Vertices whose star emptied out vanish naturally; nothing else
        // to do for an isolated victim.
    }
    auto it = adj.find(a);
    if (it == adj.end()) return kInfResistance;
    auto jt = it->second.find(b);
    if (jt == it->second.end() || jt->second <= 0.0) return kInfResistance;
    (void)n;
    return 1.0 / jt->second;
}

}  // namespace

double effective_resistance(int64_t n_vertices,
                            const std::vector<WeightedEdge>& edges,
                            int32_t a, int32_t b, ResistanceBackend backend) {
    if (a == b) throw std::invalid_argument("terminals must be distinct");
    if (a < 0 || b < 0 || a >= n_vertices || b >= n_vertices)
        throw std::invalid_argument("terminal id out of range");
    ContractedGraph g = contract_zeros(n_vertices, edges);
    const int32_t ra = g.dsu.find(a), rb = g.dsu.find(b);
    if (ra == rb) return 0.0;
    switch (backend) {
        case ResistanceBackend::kLaplacian:
            return solve_laplacian(n_vertices, g.edges, ra, rb);
        case ResistanceBackend::kReduction:
            return solve_reduction(n_vertices, g.edges, ra, rb);
    }
    throw std::logic_error("unknown backend");
}

double grounded_resistance(int64_t n_vertices,
                           const std::vector<WeightedEdge>& edges,
                           int32_t v, const std::vector<char>& region) {
    if (v < 0 || v >= n_vertices) throw std::invalid_argument("vertex out of range");
    if (static_cast<int64_t>(region.size()) != n_vertices)
        throw std::invalid_argument("region indicator has wrong size");
    if (!region[v]) throw std::invalid_argument("vertex must lie inside the region");

    // Collapse the whole exterior onto one ground vertex, then the
    // two-terminal machinery applies unchanged.
    const auto ground = static_cast<int32_t>(n_vertices);
    std::vector<WeightedEdge> collapsed;
    collapsed.reserve(edges.size());
    for (const WeightedEdge& e : edges) {
        const bool iu = region[e.u], iv = region[e.v];
        if (iu && iv) {
            collapsed.push_back(e);
        } else if (iu) {
            collapsed.push_back({e.u, ground, e.resistance});
        } else if (iv) {
            collapsed.push_back({e.v, ground, e.resistance});
        }  // exterior-exterior edges carry no current
    }
    return effective_resistance(n_vertices + 1, collapsed, v, ground,
                                ResistanceBackend::kLaplacian);
}

std::vector<WeightedEdge> weighted_edges(const LevelGraph& g,
                                         const std::vector<double>& x) {
    std::vector<WeightedEdge> out;
    out.reserve(g.edges.size());
    for (const Edge& e : g.edges) {
        if (e.colour < 1 || static_cast<size_t>(e.colour) > x.size())
            throw std::invalid_argument("edge colour outside resistance vector");
        out.push_back({e.tail, e.head, x[e.colour - 1]});
    }
    return out;
}

std::vector<double> psi(const EIGSystem& sys, const std::vector<double>& x) {
    if (static_cast<int32_t>(x.size()) != sys.colours)
        throw std::invalid_argument("psi input needs one resistance per colour");
    for (double xi : x)
        if (!(xi >= 0.0) || std::isinf(xi))
            throw std::invalid_argument("psi input must be finite and >= 0");
    std::vector<double> out(x.size());
    for (int32_t c = 1; c <= sys.colours; ++c) {
        const RuleGraph& r = sys.rule(c);
        std::vector<WeightedEdge> edges;
        edges.reserve(r.edges.size());
        for (const Edge& e : r.edges)
            edges.push_back({e.tail, e.head, x[e.colour - 1]});
        out[c - 1] = effective_resistance(r.n_vertices, edges, r.plant_plus,
                                          r.plant_minus,
                                          ResistanceBackend::kReduction);
    }
    return out;
}

std::vector<std::vector<double>> psi_iterates(const EIGSystem& sys,
                                              const std::vector<double>& x0,
                                              int32_t n) {
    std::vector<std::vector<double>> out;
    std::vector<double> x = x0;
    for (int32_t i = 0; i < n; ++i) {
        x = psi(sys, x);
        out.push_back(x);
    }
    return out;
}

PsiEigenpair psi_eigenpair(const EIGSystem& sys, double tol,
                           int32_t max_iterations) {
    const int32_t k = sys.colours;
    PsiEigenpair result;
    std::vector<double> x(k, 1.0 / k);
    for (int32_t iter = 1; iter <= max_iterations; ++iter) {
        std::vector<double> y = psi(sys, x);
        double norm = 0.0;
        for (double yi : y) {
            if (!(yi > 0.0) || std::isinf(yi))
                throw ConfigError("renormalisation map is degenerate "
                                  "(zero or infinite component)");
            norm += yi;
        }
        const double rho = norm;  // ||x||_1 == 1 throughout
        double hilbert_lo = kInfResistance, hilbert_hi = -kInfResistance;
        double residual = 0.0;
        for (int32_t i = 0; i < k; ++i) {
            const double ratio = std::log(y[i] / norm) - std::log(x[i]);
            hilbert_lo = std::min(hilbert_lo, ratio);
            hilbert_hi = std::max(hilbert_hi, ratio);
            residual = std::max(residual, std::abs(y[i] - rho * x[i]));
            x[i] = y[i] / norm;
        }
        result.rho = rho;
        result.iterations = iter;
        if (hilbert_hi - hilbert_lo < tol && residual / rho < tol) {
            result.converged = true;
            break;
        }
    }
    result.x = x;
    return result;
}

RenormCheck verify_renormalisation(const EIGSystem& sys, int32_t n,
                                   const std::vector<double>& x,
                                   int64_t edge_cap) {
    RenormCheck check;
    LevelGraph g = build(sys, n, edge_cap);
    check.direct = effective_resistance(g.n_vertices, weighted_edges(g, x),
                                        g.terminal_plus, g.terminal_minus,
                                        ResistanceBackend::kLaplacian);
    std::vector<double> value = x;
    if (n > 0) value = psi_iterates(sys, x, n).back();
    check.iterated = value[sys.initial_colour - 1];
    const double scale = std::max(std::abs(check.iterated), 1e-300);
    check.rel_error = std::abs(check.direct - check.iterated) / scale;
    return check;
}

}  // namespace eigslab
