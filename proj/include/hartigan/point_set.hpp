#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "hartigan/errors.hpp"
#include "hartigan/rational.hpp"
#include "hartigan/scalar.hpp"

namespace hartigan {

/// Ordered collection of d-dimensional points; ids are 0..n-1 by position.
template <class S>
class PointSet {
public:
    explicit PointSet(int dim) : dim_(dim) {
        if (dim < 1) throw InvariantViolation("PointSet: dim must be >= 1");
    }

    static PointSet from_rows(const std::vector<std::vector<S>>& rows) {
        if (rows.empty()) throw InvariantViolation("PointSet: need at least one point");
        PointSet ps(static_cast<int>(rows[0].size()));
        for (const auto& r : rows) ps.add_point(r);
        return ps;
    }

    // 1-d convenience.
    static PointSet line(std::initializer_list<S> xs) {
        PointSet ps(1);
        for (const S& x : xs) ps.add_point({&x, 1});
        return ps;
    }

    void add_point(std::span<const S> coords) {
        if (static_cast<int>(coords.size()) != dim_)
            throw InvariantViolation("PointSet: point has wrong dimension");
        data_.insert(data_.end(), coords.begin(), coords.end());
        ++n_;
    }
    void add_point(const std::vector<S>& coords) { add_point(std::span<const S>(coords)); }

    int dim() const { return dim_; }
    int size() const { return n_; }

    const S& at(int point, int coord) const { return data_[static_cast<std::size_t>(point) * dim_ + coord]; }
    S& at(int point, int coord) { return data_[static_cast<std::size_t>(point) * dim_ + coord]; }

    std::span<const S> point(int p) const {
        return std::span<const S>(data_.data() + static_cast<std::size_t>(p) * dim_, dim_);
    }

private:
    int dim_;
    int n_ = 0;
    std::vector<S> data_;
};

inline PointSet<double> to_float(const PointSet<Rational>& ps) {
    PointSet<double> out(ps.dim());
    std::vector<double> row(ps.dim());
    for (int p = 0; p < ps.size(); ++p) {
        for (int c = 0; c < ps.dim(); ++c) row[c] = ps.at(p, c).to_double();
        out.add_point(row);
    }
    return out;
}

}  // namespace hartigan
