#include "afmcf/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace afmcf {

PeriodicGrid::PeriodicGrid(int nx_, int ny_, double Lx_, double Ly_)
    : nx(nx_), ny(ny_), Lx(Lx_), Ly(Ly_) {
    if (nx < 8 || ny < 8)
        throw Error("PeriodicGrid: nx and ny must be >= 8, got " +
                    std::to_string(nx) + "x" + std::to_string(ny));
    if (!(Lx > 0.0) || !(Ly > 0.0))
        throw Error("PeriodicGrid: domain lengths must be positive");
}

Extremum ScalarField::max() const {
    Extremum best{values_[0], 0, 0};
    for (int j = 0; j < grid_.ny; ++j)
        for (int i = 0; i < grid_.nx; ++i) {
            double v = values_[grid_.index(i, j)];
            if (v > best.value) best = {v, i, j};
        }
    return best;
}

Extremum ScalarField::min() const {
    Extremum best{values_[0], 0, 0};
    for (int j = 0; j < grid_.ny; ++j)
        for (int i = 0; i < grid_.nx; ++i) {
            double v = values_[grid_.index(i, j)];
            if (v < best.value) best = {v, i, j};
        }
    return best;
}

double ScalarField::sup_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

bool ScalarField::all_finite() const {
    for (double v : values_)
        if (!std::isfinite(v)) return false;
    return true;
}

namespace {

template <class Stencil>
ScalarField apply_stencil(const ScalarField& f, Stencil&& st) {
    const PeriodicGrid& g = f.grid();
    ScalarField out(g);
    for (int j = 0; j < g.ny; ++j) {
        int jp = j + 1 == g.ny ? 0 : j + 1;
        int jm = j == 0 ? g.ny - 1 : j - 1;
        for (int i = 0; i < g.nx; ++i) {
            int ip = i + 1 == g.nx ? 0 : i + 1;
            int im = i == 0 ? g.nx - 1 : i - 1;
            out(i, j) = st(f, i, j, ip, im, jp, jm);
        }
    }
    return out;
}

} // namespace

ScalarField diff_x(const ScalarField& f) {
    double inv = 1.0 / (2.0 * f.grid().hx());
    return apply_stencil(f, [inv](const ScalarField& u, int, int j, int ip, int im, int, int) {
        return (u(ip, j) - u(im, j)) * inv;
    });
}

ScalarField diff_y(const ScalarField& f) {
    double inv = 1.0 / (2.0 * f.grid().hy());
    return apply_stencil(f, [inv](const ScalarField& u, int i, int, int, int, int jp, int jm) {
        return (u(i, jp) - u(i, jm)) * inv;
    });
}

ScalarField diff_xx(const ScalarField& f) {
    double inv = 1.0 / (f.grid().hx() * f.grid().hx());
    return apply_stencil(f, [inv](const ScalarField& u, int i, int j, int ip, int im, int, int) {
        return (u(ip, j) - 2.0 * u(i, j) + u(im, j)) * inv;
    });
}

ScalarField diff_yy(const ScalarField& f) {
    double inv = 1.0 / (f.grid().hy() * f.grid().hy());
    return apply_stencil(f, [inv](const ScalarField& u, int i, int j, int, int, int jp, int jm) {
        return (u(i, jp) - 2.0 * u(i, j) + u(i, jm)) * inv;
    });
}

ScalarField diff_xy(const ScalarField& f) {
    // Four-corner cross stencil; symmetric in x<->y, so diff_xy == diff_yx
    // up to the association order of two subtractions.
    double inv = 1.0 / (4.0 * f.grid().hx() * f.grid().hy());
    return apply_stencil(f, [inv](const ScalarField& u, int, int, int ip, int im, int jp, int jm) {
        return ((u(ip, jp) - u(ip, jm)) - (u(im, jp) - u(im, jm))) * inv;
    });
}

double stable_sum(std::vector<double>& terms) {
    // Sorting makes the reduction independent of the original term order
    // (cyclic shifts of a field permute but do not change the terms); the
    // Neumaier compensation keeps the result accurate for mixed signs.
    std::sort(terms.begin(), terms.end());
    double sum = 0.0, comp = 0.0;
    for (double t : terms) {
        double s = sum + t;
        if (std::abs(sum) >= std::abs(t))
            comp += (sum - s) + t;
        else
            comp += (t - s) + sum;
        sum = s;
    }
    return sum + comp;
}

double integrate(const ScalarField& f, const ScalarField& weight) {
    if (!(f.grid() == weight.grid()))
        throw Error("integrate: fields live on different grids");
    std::vector<double> terms(f.size());
    for (std::size_t k = 0; k < f.size(); ++k)
        terms[k] = f.data()[k] * weight.data()[k];
    return stable_sum(terms) * f.grid().hx() * f.grid().hy();
}

double integrate(const ScalarField& f) {
    std::vector<double> terms(f.data(), f.data() + f.size());
    return stable_sum(terms) * f.grid().hx() * f.grid().hy();
}

ScalarField cyclic_shift(const ScalarField& f, int di, int dj) {
    const PeriodicGrid& g = f.grid();
    ScalarField out(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            out(i, j) = f.at_wrapped(i - di, j - dj);
    return out;
}

} // namespace afmcf
