#pragma once

// Sampled data on the equidistant grid x_i = i/n, i = 1..n.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace stepfit {

// Half-open subinterval [left, right) of the unit interval.
struct Interval {
    double left;
    double right;

    Interval(double l, double r) : left(l), right(r) {
        if (!(l >= 0.0) || !(r <= 1.0) || !(l < r))
            throw std::invalid_argument("Interval: need 0 <= left < right <= 1");
    }

    double length() const { return right - left; }
};

// A finite signal y_1..y_n observed on the grid x_i = i/n.  Values must be
// finite; n >= 1.
class SampledSignal {
public:
    explicit SampledSignal(std::vector<double> values) : values_(std::move(values)) {
        if (values_.empty())
            throw std::invalid_argument("SampledSignal: empty");
        for (std::size_t i = 0; i < values_.size(); ++i) {
            const double v = values_[i];
            if (!(v == v) || v > 1e300 || v < -1e300)
                throw std::invalid_argument("SampledSignal: non-finite value at row " +
                                            std::to_string(i + 1));
        }
    }

    int size() const { return static_cast<int>(values_.size()); }
    const std::vector<double>& values() const { return values_; }
    // 1-based access, mirroring the usual index convention y_1..y_n.
    double operator[](int i) const { return values_[static_cast<std::size_t>(i - 1)]; }

private:
    std::vector<double> values_;
};

} // namespace stepfit
