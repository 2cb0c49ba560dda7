#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "eigslab/core.hpp"

namespace eigslab {

// A weighted undirected multigraph for electrical computations: the edge
// list carries per-edge resistances (>= 0; zero-resistance edges are
// contracted before solving).
struct WeightedEdge {
    int32_t u = 0;
    int32_t v = 0;
    double resistance = 1.0;
};

enum class ResistanceBackend {
    kLaplacian,  // sparse Laplacian solve (direct <= 1e5 vertices, else PCG)
    kReduction,  // parallel-merge + star-mesh vertex elimination
};

inline constexpr double kInfResistance =
    std::numeric_limits<double>::infinity();

// Two-terminal effective resistance between a and b. Returns +inf when a
// and b are disconnected and 0 when zero-resistance contraction merges
// them. The two backends are independent routes and are cross-checked in
// the tests; callers pick one.
double effective_resistance(int64_t n_vertices,
                            const std::vector<WeightedEdge>& edges,
                            int32_t a, int32_t b,
                            ResistanceBackend backend);

// Resistance from v to the complement of the region: every vertex outside
// `region` is grounded, unit potential is held at v, and 1/I is returned
// (inf if no current can leave the region, i.e. v's component lies inside
// it). `region` is an indicator over vertex ids; v must be inside.
double grounded_resistance(int64_t n_vertices,
                           const std::vector<WeightedEdge>& edges,
                           int32_t v, const std::vector<char>& region);

// Per-colour edge resistances applied to a level graph.
std::vector<WeightedEdge> weighted_edges(const LevelGraph& g,
                                         const std::vector<double>& x);

// The renormalisation map: component i is the plant-to-plant effective
// resistance of rule i+1 when every colour-j edge has resistance x[j-1].
std::vector<double> psi(const EIGSystem& sys, const std::vector<double>& x);

// Raw iterates Psi^k(x0) for k = 1..n (no normalisation).
std::vector<std::vector<double>> psi_iterates(const EIGSystem& sys,
                                              const std::vector<double>& x0,
                                              int32_t n);

struct PsiEigenpair {
    double rho = 0.0;
    std::vector<double> x;  // l1-normalised, strictly positive
    int32_t iterations = 0;
    bool converged = false;
};

// Normalised fixed-point iteration from x0 = (1/K, ..., 1/K). Stops when
// both the Hilbert-metric step (log-ratio spread between successive
// normalised iterates) and the eigen-residual |Psi(x) - rho x|_inf / rho
// drop below tol.
PsiEigenpair psi_eigenpair(const EIGSystem& sys, double tol = 1e-12,
                           int32_t max_iterations = 10000);

// The renormalisation identity at level n: terminal resistance of the
// built graph under per-colour resistances x versus [Psi^n(x)] at the
// initial colour.
struct RenormCheck {
    double direct = 0.0;    // Laplacian solve on the level graph
    double iterated = 0.0;  // [Psi^n(x)]_iota
    double rel_error = 0.0;
};

RenormCheck verify_renormalisation(const EIGSystem& sys, int32_t n,
                                   const std::vector<double>& x,
                                   int64_t edge_cap = kDefaultEdgeCap);

}  // namespace eigslab
