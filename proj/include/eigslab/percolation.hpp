#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eigslab/spectral.hpp"

namespace eigslab {

// Critical probability of the hierarchical-diamond percolation flow:
// the positive root of p^2 + p = 1.
inline constexpr double kPc = 0.61803398874989484820;

struct PercParams {
    double p = 0.0;
    double p_diamond = 0.0;  // p^4 / (2p^2 - p^4)
    double p_series = 0.0;   // (2p^2 - 2p^4) / (2p^2 - p^4)
};

// Validates 0 < p < 1.
PercParams perc_params(double p);

// Conditioned one-step combinations in the log domain (inputs and outputs
// are log R).
double series_log(double log_a, double log_b);
double diamond_log(double log_a1, double log_a2, double log_b1,
                   double log_b2);

// A population of log-resistances.
struct PercPopulation {
    std::vector<double> log_r;
    int32_t level = 0;
};

// One renormalisation step: every new sample draws its combination type
// and its parents from the previous pool under stream (seed, level,
// sample), so the result is identical for any worker count.
void step_population(PercPopulation& pop, const PercParams& params,
                     uint64_t seed, int32_t workers = 1);

struct PercLevelStats {
    int32_t level = 0;
    double quenched = 0.0;   // E[log R_n] / n
    double annealed = 0.0;   // log E[R_n] / n
    double gap = 0.0;        // annealed - quenched (>= 0 by Jensen)
    double pop_std = 0.0;    // stddev of log R_n
    double product_moment = 0.0;       // E[R_n] E[1/R_n]
    double second_moment_ratio = 0.0;  // E[R_n^2] / E[R_n]^2
};

PercLevelStats population_stats(const PercPopulation& pop);

struct AlphaEstimate {
    double alpha_quenched = 0.0;
    double alpha_annealed = 0.0;
    double gap = 0.0;
    std::vector<PercLevelStats> trajectory;  // one entry per level
};

AlphaEstimate estimate_alpha(double p, int64_t population, int32_t levels,
                             uint64_t seed, int32_t workers = 1);

// Closed-form lower bound on alpha at p_c: log((14 - 4 sqrt 5) / 3).
double alpha_lower_bound();

// Exact rational for resistance atoms.
struct Rational {
    int64_t num = 0;
    int64_t den = 1;

    static Rational make(int64_t n, int64_t d);
    Rational operator+(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational reciprocal() const;
    bool operator==(const Rational&) const = default;
    auto operator<=>(const Rational& o) const {
        // both denominators positive after normalisation
        return static_cast<__int128>(num) * o.den <=>
               static_cast<__int128>(o.num) * den;
    }
    double to_double() const;
    std::string str() const;
};

// Exact distribution of R_n: resistance atoms are exact rationals, the
// probability weights are double (they are polynomials in the irrational
// p_diamond). Feasible for n <= 3 (enforced).
struct ExactAtom {
    Rational value;
    double probability = 0.0;
};

std::vector<ExactAtom> exact_distribution(double p, int32_t n);

// Moment diagnostics with the regime thresholds driven by p_diamond:
//   p_d <= 1/2:       E[R]E[1/R] <= 11/5 and E[R^2]/E[R]^2 <= 2
//   p_d <= 1/sqrt(3): E[R]E[1/R] <= 11/5 and E[R^2]/E[R]^2 <= 3
//   otherwise:        finiteness only
struct MomentDiagnostics {
    double p_diamond = 0.0;
    double product_bound = 0.0;  // applicable bound, 0 if none
    double ratio_bound = 0.0;    // applicable bound, 0 if none
    double one_step_product = 0.0;  // exact (2 - p_d)(1 + p_d)/2
};

MomentDiagnostics moment_diagnostics(double p);

// Distributional-limit diagnostic: the spread of log(lambda^n R_n) along a
// trajectory cannot collapse for any scaling lambda (the fixed-point
// equation forces the degenerate candidate to sit at zero). Reports the
// interquartile range of log R_n per level, which is scale-invariant.
struct SpreadDiagnostic {
    std::vector<int32_t> levels;
    std::vector<double> median_log_r;
    std::vector<double> iqr_log_r;
};

SpreadDiagnostic no_deterministic_limit_demo(double p, int64_t population,
                                             int32_t levels, uint64_t seed,
                                             int32_t step = 10);

// Expected cluster substitution matrices of the supercritical DHL cluster
// system, colour order (red, blue, green, black); black is the cemetery
// (zero row). Entries are polynomials in p, evaluated in double.
RealMatrix cluster_mass_matrix(double p);    // 4 x 4
RealMatrix cluster_degree_matrix(double p);  // 8 x 8

struct ClusterReport {
    double p = 0.0;
    double lambda_m = 0.0;  // Perron root of the live 3x3 block of E(M)
    double lambda_n = 0.0;  // Perron root of the live 6x6 block of E(N)
    double alpha = 0.0;     // annealed/quenched alpha used for dim_R
    double dim_B = 0.0;
    double dim_D = 0.0;
    double dim_R = 0.0;
    double dim_W = 0.0;
    double dim_S_finite = 0.0;
    double dim_S_generic = 0.0;
};

// The percolation-cluster table row (heuristic: the cluster matrices are
// annealed expectations). dim_B and dim_D use the DHL distance scale 2;
// dim_R = alpha / log 2. If alpha < 0 is passed, a fresh estimate with the
// given budget is computed.
ClusterReport cluster_dimension_report(double p, double alpha,
                                       int64_t population = 100000,
                                       int32_t levels = 2000,
                                       uint64_t seed = 271828);

}  // namespace eigslab
