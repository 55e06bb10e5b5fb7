#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "gabor/errors.hpp"

namespace gabor {

// Uniformly sampled function on [x_min, x_min + step*(n-1)], linearly
// interpolated between samples and exactly zero outside that interval.
class grid_function {
public:
    grid_function() = default;

    grid_function(double x_min, double step, std::vector<double> values)
        : x_min_(x_min), step_(step), values_(std::move(values)) {
        if (!std::isfinite(x_min_)) throw validation_error("grid_function: x_min must be finite");
        if (!(step_ > 0) || !std::isfinite(step_))
            throw validation_error("grid_function: step must be positive and finite");
        if (values_.size() < 2) throw validation_error("grid_function: need at least two samples");
        for (double v : values_)
            if (!std::isfinite(v)) throw validation_error("grid_function: values must be finite");
    }

    double x_min() const { return x_min_; }
    double x_max() const { return x_min_ + step_ * static_cast<double>(values_.size() - 1); }
    double step() const { return step_; }
    std::size_t size() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }

    double operator()(double x) const {
        if (x < x_min_ || x > x_max()) return 0.0;
        double t = (x - x_min_) / step_;
        auto k = static_cast<std::size_t>(t);
        if (k >= values_.size() - 1) return values_.back();
        double frac = t - static_cast<double>(k);
        return values_[k] + frac * (values_[k + 1] - values_[k]);
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : values_) m = std::max(m, std::abs(v));
        return m;
    }

private:
    double x_min_ = 0.0;
    double step_ = 1.0;
    std::vector<double> values_;
};

}  // namespace gabor
