#pragma once

#include <cstdint>
#include <vector>

#include "eigslab/core.hpp"

namespace eigslab {

// Undirected CSR adjacency with edge multiplicity (a double edge appears
// twice in each endpoint's neighbour list), so a uniform pick over
// neighbours[v] is exactly the SRW step over incident half-edges.
struct Csr {
    std::vector<int64_t> offsets;    // size n+1
    std::vector<int32_t> neighbours; // size 2|E|
    int64_t n_vertices = 0;
    int64_t n_edges = 0;

    int64_t degree(int32_t v) const { return offsets[v + 1] - offsets[v]; }
};

Csr build_csr(const LevelGraph& g);
Csr build_csr(int64_t n_vertices, const std::vector<Edge>& edges);

// BFS graph distances from v (-1 for unreachable vertices).
std::vector<int32_t> bfs_distances(const Csr& g, int32_t v);

// One SRW step from v under the trial's rng.
int32_t srw_step(const Csr& g, int32_t v, class Rng& rng);

struct ExitStats {
    double radius = 0.0;
    double mean_tau = 0.0;      // over uncensored trials
    double stddev_tau = 0.0;
    double censored_fraction = 0.0;
    int64_t trials = 0;
};

// Mean exit time from the open ball B(v, r) = {u : d(v,u) < r}. `dist`
// must be bfs_distances(g, v). Walks still inside the ball after
// max_steps are censored. Trial t uses stream (seed, t), so results are
// independent of worker count.
ExitStats exit_times(const Csr& g, int32_t v, const std::vector<int32_t>& dist,
                     double r, int64_t trials, int64_t max_steps,
                     uint64_t seed, int32_t workers = 1);

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
};

// Least-squares line through (xs, ys).
SlopeFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys);

struct WalkDimensionEstimate {
    std::vector<ExitStats> per_radius;
    double slope = 0.0;  // of log E[tau] against log r: the walk dimension
};

// Exit times from the plus-terminal of a level graph at radii
// rho_min^m for m in [m_min, m_max], plus the fitted slope.
WalkDimensionEstimate walk_dimension_estimate(
    const LevelGraph& g, double rho_min_value, int32_t m_min, int32_t m_max,
    int64_t trials, int64_t max_steps, uint64_t seed, int32_t workers = 1);

struct CommuteStats {
    double mean_commute = 0.0;  // measured a -> b -> a steps
    double stddev = 0.0;
    double expected = 0.0;      // 2 |E| R_eff(a, b)
    int64_t trials = 0;
};

// Monte Carlo commute time versus the electrical identity.
CommuteStats commute_time(const Csr& g, int32_t a, int32_t b, int64_t trials,
                          uint64_t seed, double r_eff, int32_t workers = 1);

// Return probabilities p_t = P_v[X_t = v] at the given times. Uses the
// exact transition operator (repeated sparse mat-vec) when the graph has
// at most `exact_vertex_limit` vertices, else Monte Carlo with `trials`
// walks.
std::vector<double> return_probability(const Csr& g, int32_t v,
                                       const std::vector<int64_t>& times,
                                       int64_t trials, uint64_t seed,
                                       int64_t exact_vertex_limit = 100000);

// Geometric even times floor(t0 * 2^j), j = 0..count-1 (rounded down to
// even so bipartite parity cannot zero the probabilities).
std::vector<int64_t> geometric_times(int64_t t0, int32_t count);

// -2 x slope of log p_t against log t: the spectral-dimension estimate.
double spectral_dimension_estimate(const std::vector<int64_t>& times,
                                   const std::vector<double>& probs);

// A single recorded trajectory.
std::vector<int32_t> trace(const Csr& g, int32_t v, int64_t steps,
                           uint64_t seed);

}  // namespace eigslab
