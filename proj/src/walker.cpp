#include "eigslab/walker.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <thread>

#include "eigslab/rng.hpp"

namespace eigslab {
namespace {

// Distinct stream tags so different experiments sharing a seed never
// consume the same substream.
constexpr uint64_t kTagExit = 0xe817;
constexpr uint64_t kTagCommute = 0xc077;
constexpr uint64_t kTagReturn = 0x4e7;
constexpr uint64_t kTagTrace = 0x74ace;

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

}  // namespace

Csr build_csr(int64_t n_vertices, const std::vector<Edge>& edges) {
    Csr g;
    g.n_vertices = n_vertices;
    g.n_edges = static_cast<int64_t>(edges.size());
    g.offsets.assign(static_cast<size_t>(n_vertices) + 1, 0);
    for (const Edge& e : edges) {
        g.offsets[static_cast<size_t>(e.tail) + 1] += 1;
        g.offsets[static_cast<size_t>(e.head) + 1] += 1;
    }
    for (size_t i = 1; i < g.offsets.size(); ++i) g.offsets[i] += g.offsets[i - 1];
    g.neighbours.resize(static_cast<size_t>(g.offsets.back()));
    std::vector<int64_t> cursor(g.offsets.begin(), g.offsets.end() - 1);
    for (const Edge& e : edges) {
        g.neighbours[static_cast<size_t>(cursor[e.tail]++)] = e.head;
        g.neighbours[static_cast<size_t>(cursor[e.head]++)] = e.tail;
    }
    return g;
}

Csr build_csr(const LevelGraph& g) { return build_csr(g.n_vertices, g.edges); }

std::vector<int32_t> bfs_distances(const Csr& g, int32_t v) {
    std::vector<int32_t> dist(static_cast<size_t>(g.n_vertices), -1);
    std::queue<int32_t> q;
    dist[v] = 0;
    q.push(v);
    while (!q.empty()) {
        int32_t u = q.front();
        q.pop();
        for (int64_t i = g.offsets[u]; i < g.offsets[u + 1]; ++i) {
            int32_t w = g.neighbours[static_cast<size_t>(i)];
            if (dist[w] >= 0) continue;
            dist[w] = dist[u] + 1;
            q.push(w);
        }
    }
    return dist;
}

int32_t srw_step(const Csr& g, int32_t v, Rng& rng) {
    const int64_t deg = g.degree(v);
    if (deg == 0) throw std::runtime_error("walk stranded on isolated vertex");
    return g.neighbours[static_cast<size_t>(
        g.offsets[v] + static_cast<int64_t>(rng.next_below(static_cast<uint64_t>(deg))))];
}

ExitStats exit_times(const Csr& g, int32_t v, const std::vector<int32_t>& dist,
                     double r, int64_t trials, int64_t max_steps, uint64_t seed,
                     int32_t workers) {
    if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
    std::vector<int64_t> tau(static_cast<size_t>(trials), -1);
    run_chunked(trials, workers, [&](int64_t lo, int64_t hi) {
        for (int64_t t = lo; t < hi; ++t) {
            Rng rng(seed, kTagExit, static_cast<uint64_t>(t));
            int32_t x = v;
            for (int64_t step = 1; step <= max_steps; ++step) {
                x = srw_step(g, x, rng);
                // Open ball: inside means graph distance strictly below r.
                if (static_cast<double>(dist[x]) >= r) {
                    tau[static_cast<size_t>(t)] = step;
                    break;
                }
            }
        }
    });
    ExitStats stats;
    stats.radius = r;
    stats.trials = trials;
    int64_t censored = 0;
    double sum = 0.0, sum_sq = 0.0;
    for (int64_t t : tau) {
        if (t < 0) {
            censored += 1;
        } else {
            sum += static_cast<double>(t);
            sum_sq += static_cast<double>(t) * static_cast<double>(t);
        }
    }
    const int64_t kept = trials - censored;
    stats.censored_fraction =
        static_cast<double>(censored) / static_cast<double>(trials);
    if (kept > 0) {
        stats.mean_tau = sum / static_cast<double>(kept);
        const double var =
            std::max(0.0, sum_sq / static_cast<double>(kept) -
                              stats.mean_tau * stats.mean_tau);
        stats.stddev_tau = std::sqrt(var);
    }
    return stats;
}

SlopeFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("need at least two points to fit");
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    SlopeFit fit;
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.intercept = (sy - fit.slope * sx) / n;
    return fit;
}

WalkDimensionEstimate walk_dimension_estimate(const LevelGraph& g,
                                              double rho_min_value,
                                              int32_t m_min, int32_t m_max,
                                              int64_t trials, int64_t max_steps,
                                              uint64_t seed, int32_t workers) {
    Csr csr = build_csr(g);
    const int32_t v = g.terminal_plus;
    std::vector<int32_t> dist = bfs_distances(csr, v);
    WalkDimensionEstimate est;
    std::vector<double> log_r, log_tau;
    for (int32_t m = m_min; m <= m_max; ++m) {
        const double r = std::pow(rho_min_value, m);
        ExitStats stats = exit_times(csr, v, dist, r, trials, max_steps,
                                     seed + static_cast<uint64_t>(m), workers);
        est.per_radius.push_back(stats);
        if (stats.mean_tau > 0.0) {
            log_r.push_back(std::log(r));
            log_tau.push_back(std::log(stats.mean_tau));
        }
    }
    if (log_r.size() >= 2) est.slope = fit_line(log_r, log_tau).slope;
    return est;
}

CommuteStats commute_time(const Csr& g, int32_t a, int32_t b, int64_t trials,
                          uint64_t seed, double r_eff, int32_t workers) {
    if (a == b) throw std::invalid_argument("commute endpoints must differ");
    std::vector<double> steps(static_cast<size_t>(trials), 0.0);
    run_chunked(trials, workers, [&](int64_t lo, int64_t hi) {
        for (int64_t t = lo; t < hi; ++t) {
            Rng rng(seed, kTagCommute, static_cast<uint64_t>(t));
            int32_t x = a;
            int64_t n = 0;
            while (x != b) {
                x = srw_step(g, x, rng);
                n += 1;
            }
            while (x != a) {
                x = srw_step(g, x, rng);
                n += 1;
            }
            steps[static_cast<size_t>(t)] = static_cast<double>(n);
        }
    });
    CommuteStats stats;
    stats.trials = trials;
    stats.expected = 2.0 * static_cast<double>(g.n_edges) * r_eff;
    double sum = 0.0, sum_sq = 0.0;
    for (double s : steps) {
        sum += s;
        sum_sq += s * s;
    }
    stats.mean_commute = sum / static_cast<double>(trials);
    stats.stddev = std::sqrt(std::max(
        0.0, sum_sq / static_cast<double>(trials) -
                 stats.mean_commute * stats.mean_commute));
    return stats;
}

std::vector<double> return_probability(const Csr& g, int32_t v,
                                       const std::vector<int64_t>& times,
                                       int64_t trials, uint64_t seed,
                                       int64_t exact_vertex_limit) {
    if (times.empty()) return {};
    const int64_t t_max = *std::max_element(times.begin(), times.end());
    std::vector<double> probs(times.size(), 0.0);

    if (g.n_vertices <= exact_vertex_limit) {
        // Exact transition operator: one sparse mat-vec per step.
        std::vector<double> p(static_cast<size_t>(g.n_vertices), 0.0);
        std::vector<double> next(p.size(), 0.0);
        p[static_cast<size_t>(v)] = 1.0;
        for (int64_t t = 1; t <= t_max; ++t) {
            std::fill(next.begin(), next.end(), 0.0);
            for (int64_t u = 0; u < g.n_vertices; ++u) {
                const double mass = p[static_cast<size_t>(u)];
                if (mass == 0.0) continue;
                const double share = mass / static_cast<double>(g.degree(
                                                static_cast<int32_t>(u)));
                for (int64_t i = g.offsets[u]; i < g.offsets[u + 1]; ++i)
                    next[static_cast<size_t>(g.neighbours[static_cast<size_t>(i)])] +=
                        share;
            }
            std::swap(p, next);
            for (size_t k = 0; k < times.size(); ++k)
                if (times[k] == t) probs[k] = p[static_cast<size_t>(v)];
        }
        return probs;
    }

    // Monte Carlo fallback for graphs too large for the dense vector pass.
    std::vector<int64_t> hits(times.size(), 0);
    for (int64_t t = 0; t < trials; ++t) {
        Rng rng(seed, kTagReturn, static_cast<uint64_t>(t));
        int32_t x = v;
        size_t k = 0;
        std::vector<size_t> sorted_idx(times.size());
        std::iota(sorted_idx.begin(), sorted_idx.end(), 0);
        std::sort(sorted_idx.begin(), sorted_idx.end(),
                  [&](size_t i, size_t j) { return times[i] < times[j]; });
        for (int64_t step = 1; step <= t_max && k < sorted_idx.size(); ++step) {
            x = srw_step(g, x, rng);
            while (k < sorted_idx.size() && times[sorted_idx[k]] == step) {
                if (x == v) hits[sorted_idx[k]] += 1;
                k += 1;
            }
        }
    }
    for (size_t k = 0; k < times.size(); ++k)
        probs[k] = static_cast<double>(hits[k]) / static_cast<double>(trials);
    return probs;
}

std::vector<int64_t> geometric_times(int64_t t0, int32_t count) {
    std::vector<int64_t> times;
    double t = static_cast<double>(t0);
    for (int32_t j = 0; j < count; ++j) {
        auto even = static_cast<int64_t>(t);
        even -= even % 2;  // bipartite levels kill odd-time returns
        even = std::max<int64_t>(even, 2);
        if (times.empty() || even > times.back()) times.push_back(even);
        t *= 2.0;
    }
    return times;
}

double spectral_dimension_estimate(const std::vector<int64_t>& times,
                                   const std::vector<double>& probs) {
    std::vector<double> lt, lp;
    for (size_t i = 0; i < times.size(); ++i) {
        if (probs[i] <= 0.0) continue;
        lt.push_back(std::log(static_cast<double>(times[i])));
        lp.push_back(std::log(probs[i]));
    }
    if (lt.size() < 2) return 0.0;
    return -2.0 * fit_line(lt, lp).slope;
}

std::vector<int32_t> trace(const Csr& g, int32_t v, int64_t steps,
                           uint64_t seed) {
    std::vector<int32_t> path;
    path.reserve(static_cast<size_t>(steps) + 1);
    path.push_back(v);
    Rng rng(seed, kTagTrace, 0);
    int32_t x = v;
    for (int64_t i = 0; i < steps; ++i) {
        x = srw_step(g, x, rng);
        path.push_back(x);
    }
    return path;
}

}  // namespace eigslab
