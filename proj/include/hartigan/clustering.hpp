#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "hartigan/errors.hpp"
#include "hartigan/point_set.hpp"
#include "hartigan/scalar.hpp"

namespace hartigan {

/// Assignment of point ids to k clusters with cached per-cluster sizes and
/// coordinate sums. Sums are cached instead of means so that incremental
/// updates stay closed in the exact field.
template <class S>
class Clustering {
public:
    static Clustering build(const PointSet<S>& points, std::vector<int> assign, int k) {
        if (k < 1) throw InvariantViolation("Clustering: k must be >= 1");
        if (static_cast<int>(assign.size()) != points.size())
            throw InvariantViolation("Clustering: assignment length != n");
        Clustering c;
        c.k_ = k;
        c.dim_ = points.dim();
        c.assign_ = std::move(assign);
        c.size_.assign(k, 0);
        c.sum_.assign(static_cast<std::size_t>(k) * points.dim(), S(0));
        for (int p = 0; p < points.size(); ++p) {
            int ci = c.assign_[p];
            if (ci < 0 || ci >= k) throw InvariantViolation("Clustering: cluster id out of range");
            ++c.size_[ci];
            for (int d = 0; d < c.dim_; ++d) c.sum_at(ci, d) += points.at(p, d);
        }
        for (int i = 0; i < k; ++i)
            if (c.size_[i] == 0) throw InvariantViolation("Clustering: empty cluster " + std::to_string(i));
        return c;
    }

    int k() const { return k_; }
    int dim() const { return dim_; }
    int n() const { return static_cast<int>(assign_.size()); }
    int assign(int point) const { return assign_[point]; }
    int size(int cluster) const { return size_[cluster]; }
    const std::vector<int>& assignment() const { return assign_; }

    std::span<const S> coordsum(int cluster) const {
        return std::span<const S>(sum_.data() + static_cast<std::size_t>(cluster) * dim_, dim_);
    }

    std::vector<S> center(int cluster) const {
        if (size_[cluster] < 1) throw InvariantViolation("Clustering: center of empty cluster");
        std::vector<S> c(dim_);
        S inv_n = scalar_traits<S>::from_int(size_[cluster]);
        for (int d = 0; d < dim_; ++d) c[d] = sum_at(cluster, d) / inv_n;
        return c;
    }

    /// Reassign one point, updating size and sum caches incrementally.
    void apply_move(int point, int src, int dst, const PointSet<S>& points) {
        if (assign_[point] != src) throw InvariantViolation("Clustering: point not in stated source");
        if (src == dst) throw InvariantViolation("Clustering: src == dst");
        if (size_[src] < 2) throw InvariantViolation("Clustering: move would empty a cluster");
        assign_[point] = dst;
        --size_[src];
        ++size_[dst];
        for (int d = 0; d < dim_; ++d) {
            sum_at(src, d) -= points.at(point, d);
            sum_at(dst, d) += points.at(point, d);
        }
    }

    /// Recompute caches from the assignment and compare. Exact mode compares
    /// exactly; float mode within the given relative tolerance.
    bool caches_consistent(const PointSet<S>& points, double rel_tol = 1e-9) const {
        std::vector<int> size(k_, 0);
        std::vector<S> sum(static_cast<std::size_t>(k_) * dim_, S(0));
        for (int p = 0; p < points.size(); ++p) {
            ++size[assign_[p]];
            for (int d = 0; d < dim_; ++d)
                sum[static_cast<std::size_t>(assign_[p]) * dim_ + d] += points.at(p, d);
        }
        if (size != size_) return false;
        for (std::size_t i = 0; i < sum.size(); ++i) {
            if constexpr (scalar_traits<S>::exact) {
                if (sum[i] != sum_[i]) return false;
            } else {
                double a = sum[i], b = sum_[i];
                if (std::abs(a - b) > rel_tol * std::max({1.0, std::abs(a), std::abs(b)})) return false;
            }
        }
        return true;
    }

private:
    Clustering() = default;
    S& sum_at(int cluster, int d) { return sum_[static_cast<std::size_t>(cluster) * dim_ + d]; }
    const S& sum_at(int cluster, int d) const { return sum_[static_cast<std::size_t>(cluster) * dim_ + d]; }

    int k_ = 0;
    int dim_ = 0;
    std::vector<int> assign_;
    std::vector<int> size_;
    std::vector<S> sum_;
};

}  // namespace hartigan
