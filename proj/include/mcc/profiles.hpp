#pragma once

#include <vector>

#include "mcc/grid.hpp"

namespace mcc {

// Declarative piecewise-polynomial function on [0,1]: segments are half-open
// on the left ([a,b), last segment closed) so point values are single-valued.
struct Segment {
    double a = 0.0, b = 1.0;
    std::vector<double> coef; // value(x) = sum_k coef[k] * x^k
};

struct PiecewiseProfile {
    std::vector<Segment> segments;

    static PiecewiseProfile constant(double v);
    void validate() const; // sorted, contiguous, covering [0,1]
    double operator()(double x) const;
    double primitive(double x) const; // antiderivative from 0, exact
};

NodalFunction interpolate(const PiecewiseProfile& p, const Partition& grid);
CellFunction cell_average(const PiecewiseProfile& p, const Partition& grid); // exact averages

} // namespace mcc
