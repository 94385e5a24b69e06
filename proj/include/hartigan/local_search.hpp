#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "hartigan/geometry.hpp"
#include "hartigan/rng.hpp"

namespace hartigan {

enum class TerminationReason { LocalOpt, MaxIters, ScriptExhausted };

inline const char* to_string(TerminationReason r) {
    switch (r) {
        case TerminationReason::LocalOpt: return "LOCAL_OPT";
        case TerminationReason::MaxIters: return "MAX_ITERS";
        case TerminationReason::ScriptExhausted: return "SCRIPT_EXHAUSTED";
    }
    return "?";
}

/// One prescribed reassignment for the SCRIPTED rule.
struct ScriptMove {
    int point;
    int src;
    int dst;
};

template <class S>
struct Move {
    int point;
    int src;
    int dst;
    S gain;
};

template <class S>
struct Trace {
    std::vector<Move<S>> moves;
    S initial_potential;
    S final_potential;
    long iterations = 0;
    TerminationReason terminated = TerminationReason::LocalOpt;
};

/// Pivot rule for choosing among improving moves. FIRST and BEST scan
/// candidates in ascending (point id, target cluster id) order; RANDOM is a
/// pure function of (seed, current clustering); SCRIPTED consumes its move
/// list in order and never invents moves.
class PivotRule {
public:
    enum class Kind { FirstImprovement, BestImprovement, RandomImprovement, Scripted };

    static PivotRule first_improvement() { return PivotRule(Kind::FirstImprovement, 0, {}); }
    static PivotRule best_improvement() { return PivotRule(Kind::BestImprovement, 0, {}); }
    static PivotRule random_improvement(std::uint64_t seed) {
        return PivotRule(Kind::RandomImprovement, seed, {});
    }
    static PivotRule scripted(std::vector<ScriptMove> script) {
        return PivotRule(Kind::Scripted, 0, std::move(script));
    }

    Kind kind() const { return kind_; }
    std::uint64_t seed() const { return seed_; }
    bool script_exhausted() const { return cursor_ >= script_.size(); }
    std::size_t cursor() const { return cursor_; }
    const ScriptMove& next_scripted() const { return script_[cursor_]; }
    void advance() { ++cursor_; }

private:
    PivotRule(Kind kind, std::uint64_t seed, std::vector<ScriptMove> script)
        : kind_(kind), seed_(seed), script_(std::move(script)) {}
    Kind kind_;
    std::uint64_t seed_;
    std::vector<ScriptMove> script_;
    std::size_t cursor_ = 0;
};

enum class InitStrategy { BalancedRandom, Given };

/// BALANCED_RANDOM: round-robin over a seeded shuffle (sizes differ by at
/// most one). GIVEN: the explicit assignment, validated.
template <class S>
inline Clustering<S> init_clustering(const PointSet<S>& points, int k, InitStrategy strategy,
                                     std::uint64_t seed, const std::vector<int>* given = nullptr) {
    if (k < 1 || k > points.size())
        throw InvariantViolation("init_clustering: need 1 <= k <= n");
    if (strategy == InitStrategy::Given) {
        if (!given) throw InvariantViolation("init_clustering: GIVEN without an assignment");
        return Clustering<S>::build(points, *given, k);  // rejects empty clusters
    }
    std::vector<int> perm(points.size());
    std::iota(perm.begin(), perm.end(), 0);
    rng::shuffle(seed, perm);
    std::vector<int> assign(points.size());
    for (int i = 0; i < points.size(); ++i) assign[perm[i]] = i % k;
    return Clustering<S>::build(points, std::move(assign), k);
}

namespace detail {

template <class S>
inline std::vector<std::vector<S>> all_centers(const Clustering<S>& c) {
    std::vector<std::vector<S>> centers(c.k());
    for (int i = 0; i < c.k(); ++i) centers[i] = c.center(i);
    return centers;
}

inline std::uint64_t assignment_hash(const std::vector<int>& assign) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (int a : assign) {
        h ^= static_cast<std::uint64_t>(a) + 0x9e3779b9ULL;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace detail

/// One iteration: if an improving reassignment exists under the rule, apply
/// it and return it; otherwise leave the clustering unchanged and return
/// nothing. Scripted moves are validated (source membership, strictly
/// positive gain) and rejected with ScriptInvalid on failure.
template <class S>
inline std::optional<Move<S>> hw_step(Clustering<S>& clustering, const PointSet<S>& points,
                                      PivotRule& rule) {
    if (rule.kind() == PivotRule::Kind::Scripted) {
        if (rule.script_exhausted()) return std::nullopt;
        const ScriptMove& sm = rule.next_scripted();
        std::size_t index = rule.cursor();
        if (sm.point < 0 || sm.point >= points.size() || sm.src < 0 || sm.src >= clustering.k() ||
            sm.dst < 0 || sm.dst >= clustering.k() || sm.src == sm.dst)
            throw ScriptInvalid(index, "", "scripted move " + std::to_string(index) + " is malformed");
        if (clustering.assign(sm.point) != sm.src)
            throw ScriptInvalid(index, "",
                                "scripted move " + std::to_string(index) + ": point " +
                                    std::to_string(sm.point) + " is not in cluster " +
                                    std::to_string(sm.src));
        if (clustering.size(sm.src) < 2)
            throw ScriptInvalid(index, "",
                                "scripted move " + std::to_string(index) + " would empty cluster " +
                                    std::to_string(sm.src));
        S gain = move_gain<S>(sm.point, sm.src, sm.dst, clustering, points);
        // A script must strictly improve at every move; the float search
        // threshold does not apply to finite scripts.
        if (!(gain > S(0)))
            throw ScriptInvalid(index, scalar_traits<S>::str(gain),
                                "scripted move " + std::to_string(index) + " has non-positive gain " +
                                    scalar_traits<S>::str(gain));
        clustering.apply_move(sm.point, sm.src, sm.dst, points);
        rule.advance();
        return Move<S>{sm.point, sm.src, sm.dst, std::move(gain)};
    }

    const S threshold = improvement_threshold<S>(potential(clustering, points));
    auto centers = detail::all_centers(clustering);
    auto gain_of = [&](int p, int dst) {
        int src = clustering.assign(p);
        return gain_with_centers<S>(points.point(p), {centers[src].data(), centers[src].size()},
                                    {centers[dst].data(), centers[dst].size()},
                                    clustering.size(src), clustering.size(dst));
    };

    std::optional<Move<S>> chosen;
    std::vector<Move<S>> improving;  // only used by RANDOM
    for (int p = 0; p < points.size() && !chosen; ++p) {
        int src = clustering.assign(p);
        if (clustering.size(src) < 2) continue;  // evacuating a singleton never improves
        for (int dst = 0; dst < clustering.k(); ++dst) {
            if (dst == src) continue;
            S gain = gain_of(p, dst);
            if (!(gain > threshold)) continue;
            switch (rule.kind()) {
                case PivotRule::Kind::FirstImprovement:
                    chosen = Move<S>{p, src, dst, std::move(gain)};
                    break;
                case PivotRule::Kind::BestImprovement:
                    if (!improving.empty() && !(gain > improving.front().gain)) break;
                    improving.assign(1, Move<S>{p, src, dst, std::move(gain)});
                    break;
                case PivotRule::Kind::RandomImprovement:
                    improving.push_back(Move<S>{p, src, dst, std::move(gain)});
                    break;
                case PivotRule::Kind::Scripted:
                    break;  // handled above
            }
            if (chosen) break;
        }
    }
    if (!chosen && !improving.empty()) {
        if (rule.kind() == PivotRule::Kind::BestImprovement) {
            chosen = std::move(improving.front());
        } else {
            std::uint64_t h = rng::mix(rule.seed(), detail::assignment_hash(clustering.assignment()));
            chosen = std::move(improving[rng::bounded(h, improving.size())]);
        }
    }
    if (!chosen) return std::nullopt;
    clustering.apply_move(chosen->point, chosen->src, chosen->dst, points);
    return chosen;
}

/// Repeat hw_step until no improving move (or the script ends, or max_iters).
/// The clustering is updated in place.
template <class S>
inline Trace<S> hw_run(const PointSet<S>& points, Clustering<S>& clustering, PivotRule rule,
                       long max_iters) {
    Trace<S> trace;
    trace.initial_potential = potential(clustering, points);
    while (trace.iterations < max_iters) {
        auto mv = hw_step(clustering, points, rule);
        if (!mv) {
            trace.terminated = rule.kind() == PivotRule::Kind::Scripted
                                   ? TerminationReason::ScriptExhausted
                                   : TerminationReason::LocalOpt;
            trace.final_potential = potential(clustering, points);
            return trace;
        }
        trace.moves.push_back(std::move(*mv));
        ++trace.iterations;
    }
    trace.terminated = TerminationReason::MaxIters;
    trace.final_potential = potential(clustering, points);
    return trace;
}

/// Default iteration cap: 10 * k^(4kd), clipped to 1e7.
inline long default_max_iters(int k, int d) {
    long double v = 10.0L;
    for (long i = 0; i < 4L * k * d; ++i) {
        v *= k;
        if (v > 1e7L) return 10'000'000L;
    }
    return static_cast<long>(v);
}

/// True iff no single-point reassignment (from a non-singleton source) has
/// strictly positive gain.
template <class S>
inline bool is_hw_local_opt(const Clustering<S>& clustering, const PointSet<S>& points) {
    auto centers = detail::all_centers(clustering);
    for (int p = 0; p < points.size(); ++p) {
        int src = clustering.assign(p);
        if (clustering.size(src) < 2) continue;
        for (int dst = 0; dst < clustering.k(); ++dst) {
            if (dst == src) continue;
            S gain = gain_with_centers<S>(points.point(p), {centers[src].data(), centers[src].size()},
                                          {centers[dst].data(), centers[dst].size()},
                                          clustering.size(src), clustering.size(dst));
            if (gain > S(0)) return false;
        }
    }
    return true;
}

/// True iff every point is at minimal distance to its own cluster's center
/// (ties allowed). Float mode allows a small relative slack: a run stopped
/// at the improvement threshold can leave gaps of that order.
template <class S>
inline bool is_lloyd_local_opt(const Clustering<S>& clustering, const PointSet<S>& points) {
    auto centers = detail::all_centers(clustering);
    for (int p = 0; p < points.size(); ++p) {
        int own = clustering.assign(p);
        S own_d2 = squared_distance<S>(points.point(p), {centers[own].data(), centers[own].size()});
        for (int c = 0; c < clustering.k(); ++c) {
            if (c == own) continue;
            S d2 = squared_distance<S>(points.point(p), {centers[c].data(), centers[c].size()});
            if constexpr (scalar_traits<S>::exact) {
                if (d2 < own_d2) return false;
            } else {
                double slack = 1e-9 * std::max({1.0, own_d2, d2});
                if (d2 < own_d2 - slack) return false;
            }
        }
    }
    return true;
}

template <class S>
struct LloydRound {
    std::vector<int> assign;
    std::vector<std::vector<S>> centers;
    S potential_after;
};

template <class S>
struct LloydTrace {
    std::vector<LloydRound<S>> rounds;  // rounds that changed the state
    S initial_potential;
    S final_potential;
    bool converged = false;
};

/// Lloyd's method from a given clustering. Each round reassigns every point
/// to its nearest center (ties keep the current cluster) and then moves each
/// center to its cluster's centroid; a cluster emptied by reassignment keeps
/// its stale center. Stops when a full round changes nothing.
template <class S>
inline LloydTrace<S> lloyd_run(const PointSet<S>& points, const Clustering<S>& init,
                               long max_iters) {
    const int n = points.size();
    const int k = init.k();
    const int dim = points.dim();

    std::vector<int> assign(n);
    for (int p = 0; p < n; ++p) assign[p] = init.assign(p);
    std::vector<std::vector<S>> centers = detail::all_centers(init);

    auto potential_of = [&](const std::vector<int>& a) {
        // Objective w.r.t. centroids of the current clusters (not the carried
        // centers); empty clusters contribute nothing.
        std::vector<int> size(k, 0);
        std::vector<std::vector<S>> cm(k, std::vector<S>(dim, S(0)));
        for (int p = 0; p < n; ++p) {
            ++size[a[p]];
            for (int d = 0; d < dim; ++d) cm[a[p]][d] += points.at(p, d);
        }
        for (int c = 0; c < k; ++c)
            if (size[c] > 0)
                for (int d = 0; d < dim; ++d) cm[c][d] /= scalar_traits<S>::from_int(size[c]);
        S acc(0);
        for (int p = 0; p < n; ++p)
            acc += squared_distance<S>(points.point(p), {cm[a[p]].data(), cm[a[p]].size()});
        return acc;
    };

    LloydTrace<S> trace;
    trace.initial_potential = potential_of(assign);

    for (long round = 0; round < max_iters; ++round) {
        // Reassignment stage (synchronous, against the carried centers).
        std::vector<int> next(n);
        bool changed = false;
        for (int p = 0; p < n; ++p) {
            int best = assign[p];
            S best_d2 = squared_distance<S>(points.point(p),
                                            {centers[best].data(), centers[best].size()});
            for (int c = 0; c < k; ++c) {
                if (c == assign[p]) continue;
                S d2 = squared_distance<S>(points.point(p), {centers[c].data(), centers[c].size()});
                if (d2 < best_d2) {
                    best_d2 = std::move(d2);
                    best = c;
                }
            }
            next[p] = best;
            changed = changed || best != assign[p];
        }
        if (!changed) {
            trace.converged = true;
            break;
        }
        assign = std::move(next);
        // Center stage: centroids of nonempty clusters, stale otherwise.
        std::vector<int> size(k, 0);
        std::vector<std::vector<S>> sum(k, std::vector<S>(dim, S(0)));
        for (int p = 0; p < n; ++p) {
            ++size[assign[p]];
            for (int d = 0; d < dim; ++d) sum[assign[p]][d] += points.at(p, d);
        }
        for (int c = 0; c < k; ++c) {
            if (size[c] == 0) continue;
            for (int d = 0; d < dim; ++d) centers[c][d] = sum[c][d] / scalar_traits<S>::from_int(size[c]);
        }
        trace.rounds.push_back(LloydRound<S>{assign, centers, potential_of(assign)});
    }
    trace.final_potential =
        trace.rounds.empty() ? trace.initial_potential : trace.rounds.back().potential_after;
    return trace;
}

}  // namespace hartigan
