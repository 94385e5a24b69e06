#pragma once

#include <span>
#include <vector>

#include "hartigan/clustering.hpp"
#include "hartigan/errors.hpp"
#include "hartigan/point_set.hpp"
#include "hartigan/scalar.hpp"

namespace hartigan {

template <class S>
inline S squared_distance(std::span<const S> a, std::span<const S> b) {
    S acc(0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        S d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

/// Center of mass of a cluster, from the cached coordinate sum.
template <class S>
inline std::vector<S> center_of_mass(int cluster, const Clustering<S>& clustering,
                                     const PointSet<S>& points) {
    (void)points;
    return clustering.center(cluster);
}

/// Center of mass of an explicit id list.
template <class S>
inline std::vector<S> center_of_ids(std::span<const int> ids, const PointSet<S>& points) {
    if (ids.empty()) throw InvariantViolation("center_of_ids: empty set");
    std::vector<S> c(points.dim(), S(0));
    for (int id : ids)
        for (int d = 0; d < points.dim(); ++d) c[d] += points.at(id, d);
    S n = scalar_traits<S>::from_int(static_cast<long>(ids.size()));
    for (auto& v : c) v /= n;
    return c;
}

/// Sum of squared distances of a cluster's points to its center of mass.
template <class S>
inline S cluster_potential(int cluster, const Clustering<S>& clustering, const PointSet<S>& points) {
    std::vector<S> cm = clustering.center(cluster);
    S acc(0);
    for (int p = 0; p < points.size(); ++p)
        if (clustering.assign(p) == cluster) acc += squared_distance<S>(points.point(p), {cm.data(), cm.size()});
    return acc;
}

/// The k-means objective: sum of cluster potentials.
template <class S>
inline S potential(const Clustering<S>& clustering, const PointSet<S>& points) {
    // One pass over the points with the k centers precomputed.
    std::vector<std::vector<S>> centers(clustering.k());
    for (int i = 0; i < clustering.k(); ++i) centers[i] = clustering.center(i);
    S acc(0);
    for (int p = 0; p < points.size(); ++p) {
        const auto& cm = centers[clustering.assign(p)];
        acc += squared_distance<S>(points.point(p), {cm.data(), cm.size()});
    }
    return acc;
}

/// Potential increase from merging two disjoint nonempty id sets:
///   Phi(S u T) - Phi(S) - Phi(T) = |S||T|/(|S|+|T|) * ||cm(S)-cm(T)||^2.
template <class S>
inline S merge_delta(std::span<const int> set_s, std::span<const int> set_t,
                     const PointSet<S>& points) {
    if (set_s.empty() || set_t.empty()) throw InvariantViolation("merge_delta: empty set");
    for (int a : set_s)
        for (int b : set_t)
            if (a == b) throw InvariantViolation("merge_delta: sets share id " + std::to_string(a));
    std::vector<S> cs = center_of_ids<S>(set_s, points);
    std::vector<S> ct = center_of_ids<S>(set_t, points);
    S ns = scalar_traits<S>::from_int(static_cast<long>(set_s.size()));
    S nt = scalar_traits<S>::from_int(static_cast<long>(set_t.size()));
    return ns * nt / (ns + nt) * squared_distance<S>({cs.data(), cs.size()}, {ct.data(), ct.size()});
}

/// Gain of moving x between clusters with the centers held at a and b:
///   n_src/(n_src-1) ||x-a||^2 - n_dst/(n_dst+1) ||x-b||^2.
/// With a, b the true centers of mass this equals the potential decrease.
template <class S>
inline S gain_with_centers(std::span<const S> x, std::span<const S> a, std::span<const S> b,
                           int size_src, int size_dst) {
    if (size_src < 2) throw InvariantViolation("gain_with_centers: source size must be >= 2");
    if (size_dst < 1) throw InvariantViolation("gain_with_centers: destination size must be >= 1");
    S ns = scalar_traits<S>::from_int(size_src);
    S nd = scalar_traits<S>::from_int(size_dst);
    S one(1);
    return ns / (ns - one) * squared_distance<S>(x, a) - nd / (nd + one) * squared_distance<S>(x, b);
}

/// Gain (potential decrease; positive means improving) of reassigning point x
/// from cluster src to cluster dst.
template <class S>
inline S move_gain(int x, int src, int dst, const Clustering<S>& clustering,
                   const PointSet<S>& points) {
    if (src == dst) throw InvariantViolation("move_gain: src == dst");
    if (clustering.assign(x) != src)
        throw InvariantViolation("move_gain: point " + std::to_string(x) + " not in cluster " +
                                 std::to_string(src));
    if (clustering.size(src) < 2)
        throw InvariantViolation("move_gain: source cluster is a singleton");
    std::vector<S> a = clustering.center(src);
    std::vector<S> b = clustering.center(dst);
    return gain_with_centers<S>(points.point(x), {a.data(), a.size()}, {b.data(), b.size()},
                                clustering.size(src), clustering.size(dst));
}

}  // namespace hartigan
