#pragma once

#include <cstdint>
#include <vector>

#include "eigslab/core.hpp"

namespace eigslab {

// Count matrices are exact: all entries are edge counts. Floating point
// enters only inside the eigenvalue computation.
using CountMatrix = std::vector<std::vector<int64_t>>;
using RealMatrix = std::vector<std::vector<double>>;

// M is K x K: M[i][j] = number of colour-(j+1) edges in the rule for
// colour i+1.
CountMatrix mass_matrix(const EIGSystem& sys);

// N is 2K x 2K over half-edge types in the order
// (1,+), (1,-), (2,+), (2,-), ..., (K,+), (K,-).
// Row (j,t), column (j',t'): the number of colour-j' edges in rule j
// incident to plant beta_j^t whose t'-end sits at that plant (t' = + means
// the edge's tail is the plant, t' = - means its head is).
CountMatrix degree_matrix(const EIGSystem& sys);

// All colour-count vectors of simple plant-to-plant paths of one rule
// (paths ignore edge orientation), deduplicated and sorted.
std::vector<std::vector<int64_t>> path_signatures(const RuleGraph& rule,
                                                  int32_t colours);

// The distance family: one K x K matrix per choice of a path signature for
// every rule, deduplicated and sorted lexicographically.
std::vector<CountMatrix> distance_family(const EIGSystem& sys);

// Perron root (largest eigenvalue modulus) of a non-negative matrix, to
// relative accuracy ~1e-12.
double spectral_radius(const CountMatrix& m);
double spectral_radius(const RealMatrix& m);

// Minimum of the per-matrix spectral radii over the distance family.
double rho_min(const std::vector<CountMatrix>& family);
double rho_min(const EIGSystem& sys);

}  // namespace eigslab
