#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <thread>
#include <vector>

#include "hartigan/geometry.hpp"
#include "hartigan/local_search.hpp"
#include "hartigan/rng.hpp"

namespace hartigan {

/// Gaussian perturbation experiment configuration. If sigma > 1 the input is
/// rescaled to [0, 1/sigma]^d and perturbed with sigma = 1 instead; iteration
/// counts are invariant under global scaling, so the two runs are equivalent.
struct PerturbationConfig {
    double sigma = 0.1;
    std::uint64_t seed = 0;
    int trials = 1;
};

/// x_i = y_i + g_i with g_i ~ N(0, sigma^2 I_d), each coordinate drawn from
/// the counter stream keyed by (seed, point index, coordinate index).
inline PointSet<double> perturb(const PointSet<double>& base, double sigma, std::uint64_t seed) {
    PointSet<double> out(base.dim());
    std::vector<double> row(base.dim());
    for (int p = 0; p < base.size(); ++p) {
        for (int c = 0; c < base.dim(); ++c)
            row[c] = base.at(p, c) + sigma * rng::gaussian(seed, static_cast<std::uint64_t>(p),
                                                           static_cast<std::uint64_t>(c));
        out.add_point(row);
    }
    return out;
}

/// Apply the sigma > 1 rescaling convention, returning the point set that is
/// actually perturbed and the sigma to perturb it with.
inline std::pair<PointSet<double>, double> rescale_for_sigma(const PointSet<double>& base,
                                                             double sigma) {
    if (sigma <= 1.0) return {base, sigma};
    PointSet<double> scaled(base.dim());
    std::vector<double> row(base.dim());
    for (int p = 0; p < base.size(); ++p) {
        for (int c = 0; c < base.dim(); ++c) row[c] = base.at(p, c) / sigma;
        scaled.add_point(row);
    }
    return {std::move(scaled), 1.0};
}

/// Box bound D = sqrt(2 n ln(nkd)): perturbed points stay in [-D/2, D/2]^d
/// except with probability at most k^-n.
inline double box_bound(long n, long k, long d) {
    if (n < 1 || k < 1 || d < 1 || n * k * d < 3)
        throw InvariantViolation("box_bound: need n,k,d >= 1 and nkd >= 3");
    return std::sqrt(2.0 * static_cast<double>(n) *
                     std::log(static_cast<double>(n) * static_cast<double>(k) *
                              static_cast<double>(d)));
}

struct ApproxGainCheck {
    double lhs;    // |true gain - gain with the approximate centers|
    double bound;  // 9 sqrt(d) D eps
    bool ok;
};

/// Check the gain-approximation bound: replacing both cluster centers by
/// points within eps changes the gain by at most 9 sqrt(d) D eps, provided
/// eps <= sqrt(d) D and everything lives in [-D/2, D/2]^d.
inline ApproxGainCheck check_approx_gain(int x, int src, int dst,
                                         const Clustering<double>& clustering,
                                         const PointSet<double>& points,
                                         std::span<const double> c_src_approx,
                                         std::span<const double> c_dst_approx, double eps) {
    const double d = points.dim();
    const double D = box_bound(points.size(), clustering.k(), points.dim());
    const double sqrt_d_D = std::sqrt(d) * D;
    if (!(eps >= 0.0) || eps > sqrt_d_D)
        throw InvariantViolation("check_approx_gain: need 0 <= eps <= sqrt(d) * D");
    std::vector<double> cs = clustering.center(src);
    std::vector<double> cd = clustering.center(dst);
    double off_s = std::sqrt(squared_distance<double>({cs.data(), cs.size()}, c_src_approx));
    double off_d = std::sqrt(squared_distance<double>({cd.data(), cd.size()}, c_dst_approx));
    // Allow a whisker of rounding on the radius check itself.
    if (off_s > eps * (1 + 1e-12) + 1e-15 || off_d > eps * (1 + 1e-12) + 1e-15)
        throw InvariantViolation("check_approx_gain: approximate centers are farther than eps");
    double true_gain = move_gain<double>(x, src, dst, clustering, points);
    double approx_gain = gain_with_centers<double>(points.point(x), c_src_approx, c_dst_approx,
                                                   clustering.size(src), clustering.size(dst));
    ApproxGainCheck out;
    out.lhs = std::abs(true_gain - approx_gain);
    out.bound = 9.0 * sqrt_d_D * eps;
    out.ok = out.lhs <= out.bound;
    return out;
}

/// Exact center-update rule: when a cluster of size size_old loses `lost` and
/// gains `gained` (size_new = size_old + |gained| - |lost|), the approximation
///   c_new = (size_old/size_new) c_old + (sum(gained) - sum(lost)) / size_new
/// keeps the error ratio ||c_new - cm_new|| / ||c_old - cm_old|| exactly
/// size_old/size_new.
template <class S>
inline std::vector<S> update_center_approx(std::span<const S> c_old, int size_old, int size_new,
                                           const std::vector<std::vector<S>>& gained,
                                           const std::vector<std::vector<S>>& lost) {
    if (size_new < 1) throw InvariantViolation("update_center_approx: new size must be >= 1");
    if (size_new != size_old + static_cast<int>(gained.size()) - static_cast<int>(lost.size()))
        throw InvariantViolation("update_center_approx: sizes inconsistent with point lists");
    S ratio = scalar_traits<S>::from_int(size_old) / scalar_traits<S>::from_int(size_new);
    S inv_new = S(1) / scalar_traits<S>::from_int(size_new);
    std::vector<S> out(c_old.size());
    for (std::size_t d = 0; d < c_old.size(); ++d) {
        S net(0);
        for (const auto& g : gained) net += g[d];
        for (const auto& l : lost) net -= l[d];
        out[d] = ratio * c_old[d] + inv_new * net;
    }
    return out;
}

/// Monte Carlo estimate of P(Z in [center, center+eps]) for
/// Z = a ||X||^2 + <v, X>, X ~ N(mu, sigma^2 I_d).
inline double anticoncentration_mc(double a, std::span<const double> v,
                                   std::span<const double> mu, double sigma, double eps,
                                   double interval_center, long trials, std::uint64_t seed) {
    if (a == 0.0) throw InvariantViolation("anticoncentration_mc: a must be nonzero");
    if (trials < 10'000) throw InvariantViolation("anticoncentration_mc: need >= 1e4 trials");
    const std::size_t d = v.size();
    if (mu.size() != d) throw InvariantViolation("anticoncentration_mc: v and mu dimensions differ");
    long hits = 0;
    for (long t = 0; t < trials; ++t) {
        double norm2 = 0, dot = 0;
        for (std::size_t i = 0; i < d; ++i) {
            double x = mu[i] + sigma * rng::gaussian(seed, static_cast<std::uint64_t>(t),
                                                     static_cast<std::uint64_t>(i));
            norm2 += x * x;
            dot += v[i] * x;
        }
        double z = a * norm2 + dot;
        if (z >= interval_center && z <= interval_center + eps) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(trials);
}

struct SweepRow {
    double sigma;
    int trial;
    std::uint64_t seed;
    long iterations;
    double initial_potential;
    double final_potential;
    TerminationReason terminated;
    double wall_time_ms;
};

struct SweepResult {
    std::vector<SweepRow> rows;
};

struct SweepInit {
    InitStrategy strategy = InitStrategy::BalancedRandom;
    std::vector<int> given;  // used when strategy == Given
};

/// One trial per (sigma, trial index): perturb, init, run, record. Trials
/// are independent (counter-based seeds) and may execute in parallel; rows
/// come back keyed and ordered by (sigma index, trial index) regardless of
/// scheduling. sigma == 0 is the unperturbed control row.
inline SweepResult smoothed_sweep(const PointSet<double>& base, int k,
                                  const std::vector<double>& sigmas, const PerturbationConfig& cfg,
                                  const PivotRule& rule, const SweepInit& init, long max_iters,
                                  unsigned threads = 0) {
    if (cfg.trials < 1) throw InvariantViolation("smoothed_sweep: trials must be >= 1");
    const std::size_t total = sigmas.size() * static_cast<std::size_t>(cfg.trials);
    SweepResult result;
    result.rows.resize(total);

    auto run_one = [&](std::size_t flat) {
        const std::size_t si = flat / cfg.trials;
        const int trial = static_cast<int>(flat % cfg.trials);
        const double sigma = sigmas[si];
        const std::uint64_t trial_seed = rng::mix(cfg.seed, si, static_cast<std::uint64_t>(trial));

        auto t0 = std::chrono::steady_clock::now();
        auto [scaled, eff_sigma] = rescale_for_sigma(base, sigma);
        PointSet<double> pts = eff_sigma == 0.0 ? scaled : perturb(scaled, eff_sigma, trial_seed);
        Clustering<double> clustering =
            init.strategy == InitStrategy::Given
                ? init_clustering<double>(pts, k, InitStrategy::Given, trial_seed, &init.given)
                : init_clustering<double>(pts, k, InitStrategy::BalancedRandom, trial_seed);
        PivotRule trial_rule = rule.kind() == PivotRule::Kind::RandomImprovement
                                   ? PivotRule::random_improvement(trial_seed)
                                   : rule;
        Trace<double> trace = hw_run(pts, clustering, std::move(trial_rule), max_iters);
        auto t1 = std::chrono::steady_clock::now();

        SweepRow row;
        row.sigma = sigma;
        row.trial = trial;
        row.seed = trial_seed;
        row.iterations = trace.iterations;
        row.initial_potential = trace.initial_potential;
        row.final_potential = trace.final_potential;
        row.terminated = trace.terminated;
        row.wall_time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        result.rows[flat] = row;
    };

    unsigned nthreads = threads ? threads : std::thread::hardware_concurrency();
    if (nthreads <= 1 || total <= 1) {
        for (std::size_t i = 0; i < total; ++i) run_one(i);
    } else {
        nthreads = std::min<unsigned>(nthreads, static_cast<unsigned>(total));
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nthreads; ++t)
            pool.emplace_back([&, t]() {
                for (std::size_t i = t; i < total; i += nthreads) run_one(i);
            });
        for (auto& th : pool) th.join();
    }
    return result;
}

}  // namespace hartigan
