#include "mcc/profiles.hpp"

#include <algorithm>
#include <cmath>

namespace mcc {

PiecewiseProfile PiecewiseProfile::constant(double v) { return PiecewiseProfile{{Segment{0.0, 1.0, {v}}}}; }

void PiecewiseProfile::validate() const {
    if (segments.empty()) throw ConfigError("profile needs at least one segment");
    double pos = 0.0;
    for (const auto& s : segments) {
        if (std::abs(s.a - pos) > 1e-12) throw ConfigError("profile segments must be contiguous from 0");
        if (!(s.b > s.a)) throw ConfigError("profile segment is empty");
        if (s.coef.empty()) throw ConfigError("profile segment has no coefficients");
        pos = s.b;
    }
    if (std::abs(pos - 1.0) > 1e-12) throw ConfigError("profile segments must cover [0,1]");
}

namespace {

double poly_eval(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
    return v;
}

double poly_primitive(const std::vector<double>& c, double x) {
    // antiderivative with zero constant
    double v = 0.0;
    for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k) v = v * x + c[k] / (k + 1);
    return v * x;
}

} // namespace

double PiecewiseProfile::operator()(double x) const {
    x = std::clamp(x, 0.0, 1.0);
    for (size_t k = 0; k < segments.size(); ++k) {
        const bool last = k + 1 == segments.size();
        if (x < segments[k].b || (last && x <= segments[k].b)) return poly_eval(segments[k].coef, x);
    }
    return poly_eval(segments.back().coef, x);
}

double PiecewiseProfile::primitive(double x) const {
    x = std::clamp(x, 0.0, 1.0);
    double acc = 0.0;
    for (const auto& s : segments) {
        if (x <= s.a) break;
        const double hi = std::min(x, s.b);
        acc += poly_primitive(s.coef, hi) - poly_primitive(s.coef, s.a);
        if (x <= s.b) break;
    }
    return acc;
}

NodalFunction interpolate(const PiecewiseProfile& p, const Partition& grid) {
    p.validate();
    Eigen::VectorXd v(grid.n_cells() + 1);
    for (int j = 0; j <= grid.n_cells(); ++j) v[j] = p(grid.cell_edges()[j]);
    return NodalFunction(grid, std::move(v));
}

CellFunction cell_average(const PiecewiseProfile& p, const Partition& grid) {
    p.validate();
    Eigen::VectorXd v(grid.n_cells());
    for (int i = 0; i < grid.n_cells(); ++i)
        v[i] = (p.primitive(grid.cell_right(i)) - p.primitive(grid.cell_left(i))) / grid.h();
    return CellFunction(grid, std::move(v));
}

} // namespace mcc
