#include "eigslab/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "eigslab/rng.hpp"

namespace eigslab {
namespace {

constexpr uint64_t kTagPerc = 0x9e7c;

double logaddexp(double a, double b) {
    if (a < b) std::swap(a, b);
    if (std::isinf(b) && b < 0) return a;
    return a + std::log1p(std::exp(b - a));
}

double log_mean_exp(const std::vector<double>& xs, double scale = 1.0) {
    double m = -std::numeric_limits<double>::infinity();
    for (double x : xs) m = std::max(m, scale * x);
    double acc = 0.0;
    for (double x : xs) acc += std::exp(scale * x - m);
    return m + std::log(acc / static_cast<double>(xs.size()));
}

void run_chunked(int64_t jobs, int32_t workers,
                 const std::function<void(int64_t, int64_t)>& body) {
    if (workers <= 1) {
        body(0, jobs);
        return;
    }
    std::vector<std::thread> pool;
    const int64_t chunk = (jobs + workers - 1) / workers;
    for (int32_t w = 0; w < workers; ++w) {
        const int64_t lo = w * chunk;
        const int64_t hi = std::min(jobs, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
    for (auto& t : pool) t.join();
}

int64_t gcd64(int64_t a, int64_t b) {
    while (b != 0) {
        int64_t t = a % b;
        a = b;
        b = t;
    }
    return a < 0 ? -a : a;
}

Rational from_i128(__int128 num, __int128 den) {
    if (den == 0) throw std::runtime_error("rational division by zero");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    // Reduce before the range check; all quantities here stay tiny.
    auto abs128 = [](__int128 v) { return v < 0 ? -v : v; };
    __int128 a = abs128(num), b = den;
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    if (a > 1) {
        num /= a;
        den /= a;
    }
    constexpr auto lim = static_cast<__int128>(INT64_MAX);
    if (num > lim || num < -lim || den > lim)
        throw std::runtime_error("rational overflow");
    return Rational{static_cast<int64_t>(num), static_cast<int64_t>(den)};
}

}  // namespace

PercParams perc_params(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("percolation parameter must satisfy 0 < p < 1");
    PercParams params;
    params.p = p;
    const double p2 = p * p, p4 = p2 * p2;
    const double denom = 2.0 * p2 - p4;
    params.p_diamond = p4 / denom;
    params.p_series = (2.0 * p2 - 2.0 * p4) / denom;
    return params;
}

double series_log(double log_a, double log_b) { return logaddexp(log_a, log_b); }

double diamond_log(double log_a1, double log_a2, double log_b1, double log_b2) {
    const double a = logaddexp(log_a1, log_a2);  // log(X1 + X2)
    const double b = logaddexp(log_b1, log_b2);
    return -logaddexp(-a, -b);  // log of the parallel combination
}

void step_population(PercPopulation& pop, const PercParams& params,
                     uint64_t seed, int32_t workers) {
    const auto n = static_cast<int64_t>(pop.log_r.size());
    if (n == 0) throw std::invalid_argument("population is empty");
    const int32_t next_level = pop.level + 1;
    std::vector<double> next(static_cast<size_t>(n));
    const std::vector<double>& prev = pop.log_r;
    run_chunked(n, workers, [&](int64_t lo, int64_t hi) {
        for (int64_t j = lo; j < hi; ++j) {
            Rng rng(seed, kTagPerc + static_cast<uint64_t>(next_level),
                    static_cast<uint64_t>(j));
            const auto pick = [&] {
                return prev[static_cast<size_t>(
                    rng.next_below(static_cast<uint64_t>(n)))];
            };
            double value;
            if (rng.next_double() < params.p_series) {
                const double a = pick(), b = pick();
                value = series_log(a, b);
            } else {
                const double a1 = pick(), a2 = pick();
                const double b1 = pick(), b2 = pick();
                value = diamond_log(a1, a2, b1, b2);
            }
            next[static_cast<size_t>(j)] = value;
        }
    });
    pop.log_r = std::move(next);
    pop.level = next_level;
}

PercLevelStats population_stats(const PercPopulation& pop) {
    PercLevelStats s;
    s.level = pop.level;
    const auto n = static_cast<double>(pop.log_r.size());
    double mean = 0.0;
    for (double x : pop.log_r) mean += x;
    mean /= n;
    double var = 0.0;
    for (double x : pop.log_r) var += (x - mean) * (x - mean);
    var /= n;
    const double lme1 = log_mean_exp(pop.log_r, 1.0);
    const double lme_neg = log_mean_exp(pop.log_r, -1.0);
    const double lme2 = log_mean_exp(pop.log_r, 2.0);
    const double level = std::max(1, pop.level);
    s.quenched = mean / level;
    s.annealed = lme1 / level;
    s.gap = s.annealed - s.quenched;
    s.pop_std = std::sqrt(var);
    s.product_moment = std::exp(lme1 + lme_neg);
    s.second_moment_ratio = std::exp(lme2 - 2.0 * lme1);
    return s;
}

AlphaEstimate estimate_alpha(double p, int64_t population, int32_t levels,
                             uint64_t seed, int32_t workers) {
    if (population < 2) throw std::invalid_argument("population must be >= 2");
    if (levels < 1) throw std::invalid_argument("levels must be >= 1");
    const PercParams params = perc_params(p);
    PercPopulation pop;
    pop.log_r.assign(static_cast<size_t>(population), 0.0);  // R_0 = 1
    pop.level = 0;
    AlphaEstimate est;
    est.trajectory.reserve(static_cast<size_t>(levels));
    for (int32_t l = 1; l <= levels; ++l) {
        step_population(pop, params, seed, workers);
        est.trajectory.push_back(population_stats(pop));
    }
    est.alpha_quenched = est.trajectory.back().quenched;
    est.alpha_annealed = est.trajectory.back().annealed;
    est.gap = est.trajectory.back().gap;
    return est;
}

double alpha_lower_bound() {
    return std::log((14.0 - 4.0 * std::sqrt(5.0)) / 3.0);
}

Rational Rational::make(int64_t n, int64_t d) {
    if (d == 0) throw std::runtime_error("rational division by zero");
    if (n == 0) return Rational{0, 1};
    if (d < 0) {
        n = -n;
        d = -d;
    }
    const int64_t g = gcd64(n, d);
    return Rational{n / g, d / g};
}

Rational Rational::operator+(const Rational& o) const {
    return from_i128(static_cast<__int128>(num) * o.den +
                         static_cast<__int128>(o.num) * den,
                     static_cast<__int128>(den) * o.den);
}

Rational Rational::operator*(const Rational& o) const {
    return from_i128(static_cast<__int128>(num) * o.num,
                     static_cast<__int128>(den) * o.den);
}

Rational Rational::reciprocal() const {
    if (num == 0) throw std::runtime_error("rational reciprocal of zero");
    return make(den, num);
}

double Rational::to_double() const {
    return static_cast<double>(num) / static_cast<double>(den);
}

std::string Rational::str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

std::vector<ExactAtom> exact_distribution(double p, int32_t n) {
    if (n < 0 || n > 3)
        throw std::invalid_argument("exact distribution is supported for 0 <= n <= 3");
    const PercParams params = perc_params(p);
    std::map<Rational, double> dist;
    dist[Rational{1, 1}] = 1.0;
    for (int32_t level = 1; level <= n; ++level) {
        // Distribution of a sum of two independent copies.
        std::map<Rational, double> sum2;
        for (const auto& [v1, p1] : dist)
            for (const auto& [v2, p2] : dist) sum2[v1 + v2] += p1 * p2;
        std::map<Rational, double> next;
        // Series: R = X1 + X2.
        for (const auto& [v, q] : sum2) next[v] += params.p_series * q;
        // Diamond: R = A B / (A + B) with A, B independent sums.
        for (const auto& [a, qa] : sum2) {
            for (const auto& [b, qb] : sum2) {
                const Rational r = (a.reciprocal() + b.reciprocal()).reciprocal();
                next[r] += params.p_diamond * qa * qb;
            }
        }
        dist = std::move(next);
    }
    std::vector<ExactAtom> out;
    out.reserve(dist.size());
    for (const auto& [v, q] : dist) out.push_back({v, q});
    return out;
}

MomentDiagnostics moment_diagnostics(double p) {
    const PercParams params = perc_params(p);
    MomentDiagnostics d;
    d.p_diamond = params.p_diamond;
    d.one_step_product = (2.0 - params.p_diamond) * (1.0 + params.p_diamond) / 2.0;
    if (params.p_diamond <= 0.5) {
        d.product_bound = 11.0 / 5.0;
        d.ratio_bound = 2.0;
    } else if (params.p_diamond <= 1.0 / std::sqrt(3.0)) {
        d.product_bound = 11.0 / 5.0;
        d.ratio_bound = 3.0;
    } else {
        d.product_bound = 0.0;
        d.ratio_bound = 0.0;
    }
    return d;
}

SpreadDiagnostic no_deterministic_limit_demo(double p, int64_t population,
                                             int32_t levels, uint64_t seed,
                                             int32_t step) {
    const PercParams params = perc_params(p);
    PercPopulation pop;
    pop.log_r.assign(static_cast<size_t>(population), 0.0);
    pop.level = 0;
    SpreadDiagnostic diag;
    std::vector<double> sorted;
    auto record = [&] {
        sorted = pop.log_r;
        std::sort(sorted.begin(), sorted.end());
        auto quantile = [&](double q) {
            const auto idx = static_cast<size_t>(
                q * static_cast<double>(sorted.size() - 1));
            return sorted[idx];
        };
        diag.levels.push_back(pop.level);
        diag.median_log_r.push_back(quantile(0.5));
        diag.iqr_log_r.push_back(quantile(0.75) - quantile(0.25));
    };
    for (int32_t l = 1; l <= levels; ++l) {
        step_population(pop, params, seed);
        if (l % step == 0 || l == levels) record();
    }
    return diag;
}

RealMatrix cluster_mass_matrix(double p) {
    const double p2 = p * p, p3 = p2 * p, p4 = p2 * p2, p5 = p4 * p;
    return {
        {8 * p2, 4 * p4, 4 * p5, 0},
        {4 * p2, 4 * p2, 4 * p3, 0},
        {2 * p2, 0, 2, 0},
        {0, 0, 0, 0},
    };
}

RealMatrix cluster_degree_matrix(double p) {
    const double p2 = p * p, p3 = p2 * p, p4 = p2 * p2, p5 = p4 * p;
    return {
        {4 * p2, 0, 2 * p4, 0, 2 * p5, 0, 0, 0},
        {0, 4 * p2, 0, 2 * p4, 0, 2 * p5, 0, 0},
        {2 * p2, 0, 2 * p2, 0, 2 * p3, 0, 0, 0},
        {0, 2 * p2, 0, 2 * p2, 0, 2 * p3, 0, 0},
        {2 * p, 0, 0, 0, 2 * p2, 0, 0, 0},
        {0, 0, 0, 0, 0, 2 * p, 0, 0},
        {0, 0, 0, 0, 0, 0, 0, 0},
        {0, 0, 0, 0, 0, 0, 0, 0},
    };
}

ClusterReport cluster_dimension_report(double p, double alpha,
                                       int64_t population, int32_t levels,
                                       uint64_t seed) {
    ClusterReport rep;
    rep.p = p;
    // Live blocks: the black colour is a cemetery (zero row), so the
    // Perron data lives in the leading 3x3 / 6x6 principal blocks.
    RealMatrix em = cluster_mass_matrix(p);
    RealMatrix live_m(3, std::vector<double>(3));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) live_m[i][j] = em[i][j];
    RealMatrix en = cluster_degree_matrix(p);
    RealMatrix live_n(6, std::vector<double>(6));
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) live_n[i][j] = en[i][j];
    rep.lambda_m = spectral_radius(live_m);
    rep.lambda_n = spectral_radius(live_n);
    if (alpha < 0.0)
        alpha = estimate_alpha(p, population, levels, seed).alpha_quenched;
    rep.alpha = alpha;

    const double log2 = std::log(2.0);  // DHL distance scale
    rep.dim_B = std::log(rep.lambda_m) / log2;
    rep.dim_D = std::log(rep.lambda_m) / std::log(rep.lambda_n);
    rep.dim_R = alpha / log2;
    rep.dim_W = rep.dim_B + rep.dim_R;
    rep.dim_S_finite =
        2.0 * rep.dim_B * (1.0 - 1.0 / rep.dim_D) / rep.dim_W;
    rep.dim_S_generic = 2.0 * rep.dim_B / rep.dim_W;
    return rep;
}

}  // namespace eigslab
