#pragma once

#include <cstddef>
#include <vector>

#include "afmcf/errors.hpp"

namespace afmcf {

/// Uniform periodic grid over the rectangle [0,Lx) x [0,Ly).
///
/// Sample i lives at x = i*hx with hx = Lx/nx (no duplicated edge column:
/// the point at x = Lx is the point at x = 0). Indexing wraps modulo
/// (nx, ny) in both directions. Storage is row-major, (i,j) -> j*nx + i;
/// this layout is fixed because field files are written in it.
struct PeriodicGrid {
    int nx = 0;
    int ny = 0;
    double Lx = 1.0;
    double Ly = 1.0;

    PeriodicGrid() = default;
    PeriodicGrid(int nx_, int ny_, double Lx_, double Ly_);

    double hx() const { return Lx / nx; }
    double hy() const { return Ly / ny; }
    double x(int i) const { return i * hx(); }
    double y(int j) const { return j * hy(); }

    int wrap_x(int i) const { int n = i % nx; return n < 0 ? n + nx : n; }
    int wrap_y(int j) const { int n = j % ny; return n < 0 ? n + ny : n; }

    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(j) * nx + i;
    }
    std::size_t size() const {
        return static_cast<std::size_t>(nx) * ny;
    }

    bool operator==(const PeriodicGrid&) const = default;
};

/// Location-tagged extremum. Ties resolve to the first storage-order index.
struct Extremum {
    double value = 0.0;
    int i = 0;
    int j = 0;
};

/// Real scalar samples on a PeriodicGrid.
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(const PeriodicGrid& grid, double fill = 0.0)
        : grid_(grid), values_(grid.size(), fill) {}

    /// Builds a field by evaluating fn(x, y) at every sample point.
    template <class Fn>
    static ScalarField sample(const PeriodicGrid& grid, Fn&& fn) {
        ScalarField f(grid);
        for (int j = 0; j < grid.ny; ++j)
            for (int i = 0; i < grid.nx; ++i)
                f(i, j) = fn(grid.x(i), grid.y(j));
        return f;
    }

    const PeriodicGrid& grid() const { return grid_; }

    double& operator()(int i, int j) { return values_[grid_.index(i, j)]; }
    double operator()(int i, int j) const { return values_[grid_.index(i, j)]; }

    /// Access with periodic wrapping of both indices.
    double at_wrapped(int i, int j) const {
        return values_[grid_.index(grid_.wrap_x(i), grid_.wrap_y(j))];
    }

    double* data() { return values_.data(); }
    const double* data() const { return values_.data(); }
    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }

    Extremum max() const;
    Extremum min() const;
    double sup_abs() const;
    bool all_finite() const;

private:
    PeriodicGrid grid_;
    std::vector<double> values_;
};

/// Symmetric 2x2 tensor samples; only (t11, t12, t22) are stored.
struct SymTensorField {
    ScalarField t11;
    ScalarField t12;
    ScalarField t22;

    SymTensorField() = default;
    explicit SymTensorField(const PeriodicGrid& grid)
        : t11(grid), t12(grid), t22(grid) {}
};

// Centered second-order periodic finite differences. Total on finite input;
// all stencils annihilate constants exactly.
ScalarField diff_x(const ScalarField& f);
ScalarField diff_y(const ScalarField& f);
ScalarField diff_xx(const ScalarField& f);
ScalarField diff_yy(const ScalarField& f);
ScalarField diff_xy(const ScalarField& f);

/// Periodic trapezoid rule: hx*hy * sum f*w. The reduction is performed in
/// a value-sorted compensated order, so the result is independent of cyclic
/// index shifts of the integrand and bit-reproducible.
double integrate(const ScalarField& f, const ScalarField& weight);
double integrate(const ScalarField& f);

/// Cyclic shift by (di, dj) grid steps: out(i,j) = f(i-di, j-dj) wrapped.
ScalarField cyclic_shift(const ScalarField& f, int di, int dj);

/// Order-independent compensated sum of a scratch buffer (sorts in place).
double stable_sum(std::vector<double>& terms);

} // namespace afmcf
