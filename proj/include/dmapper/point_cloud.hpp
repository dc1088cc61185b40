#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dmapper/errors.hpp"

namespace dmapper {

using point_index = std::int32_t;

// Fixed-dimension point set stored row-major.  Points are identified by
// their index; the whole pipeline treats that index as the point's name, so
// the cloud is immutable once built apart from append().
class PointCloud {
public:
    PointCloud() = default;

    PointCloud(int dim, std::vector<double> coords, std::vector<std::string> column_names = {})
        : dim_(dim), coords_(std::move(coords)), column_names_(std::move(column_names)) {
        if (dim_ <= 0) throw DimensionMismatch("point dimension must be positive");
        if (coords_.size() % static_cast<std::size_t>(dim_) != 0)
            throw DimensionMismatch("coordinate count " + std::to_string(coords_.size()) +
                                    " is not a multiple of dimension " + std::to_string(dim_));
        if (!column_names_.empty() && column_names_.size() != static_cast<std::size_t>(dim_))
            throw DimensionMismatch("column name count does not match dimension");
    }

    static PointCloud from_rows(const std::vector<std::vector<double>>& rows) {
        if (rows.empty()) throw DimensionMismatch("cannot infer dimension from an empty row list");
        const auto dim = rows.front().size();
        std::vector<double> coords;
        coords.reserve(rows.size() * dim);
        for (const auto& row : rows) {
            if (row.size() != dim)
                throw DimensionMismatch("row width " + std::to_string(row.size()) +
                                        " differs from first row width " + std::to_string(dim));
            coords.insert(coords.end(), row.begin(), row.end());
        }
        return PointCloud(static_cast<int>(dim), std::move(coords));
    }

    int dim() const { return dim_; }

    point_index size() const {
        return dim_ == 0 ? 0 : static_cast<point_index>(coords_.size() / static_cast<std::size_t>(dim_));
    }

    std::span<const double> point(point_index i) const {
        return {coords_.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(dim_),
                static_cast<std::size_t>(dim_)};
    }

    void append(std::span<const double> coords) {
        if (dim_ == 0) {
            if (coords.empty()) throw DimensionMismatch("cannot append an empty point");
            dim_ = static_cast<int>(coords.size());
        }
        if (coords.size() != static_cast<std::size_t>(dim_))
            throw DimensionMismatch("appended point has dimension " + std::to_string(coords.size()) +
                                    ", cloud has " + std::to_string(dim_));
        coords_.insert(coords_.end(), coords.begin(), coords.end());
    }

    const std::vector<double>& coordinates() const { return coords_; }
    const std::vector<std::string>& column_names() const { return column_names_; }
    void set_column_names(std::vector<std::string> names) {
        if (!names.empty() && names.size() != static_cast<std::size_t>(dim_))
            throw DimensionMismatch("column name count does not match dimension");
        column_names_ = std::move(names);
    }

private:
    int dim_ = 0;
    std::vector<double> coords_;          // row-major, size() * dim_ entries
    std::vector<std::string> column_names_;  // optional, from CSV headers
};

// One scalar per point plus the observed value range.
struct FilterValues {
    std::vector<double> values;
    double lo = 0.0;
    double hi = 0.0;

    static FilterValues from(std::vector<double> values) {
        FilterValues fv;
        fv.values = std::move(values);
        if (!fv.values.empty()) {
            fv.lo = fv.values.front();
            fv.hi = fv.values.front();
            for (double v : fv.values) {
                if (v < fv.lo) fv.lo = v;
                if (v > fv.hi) fv.hi = v;
            }
        }
        return fv;
    }
};

}  // namespace dmapper
