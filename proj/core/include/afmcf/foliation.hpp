#pragma once

#include <optional>
#include <utility>

#include "afmcf/surface.hpp"

namespace afmcf {

/// Symmetric 2x2 matrix (metric or tensor) at one grid point.
struct Metric2 {
    double g11 = 0.0;
    double g12 = 0.0;
    double g22 = 0.0;

    double det() const { return g11 * g22 - g12 * g12; }
    Metric2 inverse() const {
        double d = det();
        return {g22 / d, -g12 / d, g11 / d};
    }
};

/// Metric value together with its analytic r-derivative and centered
/// finite-difference x/y-derivatives at fixed r.
struct MetricJet {
    Metric2 g;
    Metric2 dr;
    Metric2 dx;
    Metric2 dy;
};

/// One slice S(r) of the equidistant foliation: area and curvature fields.
/// mu1 <= mu2 pointwise and |H| < 2 for admissible data.
struct SliceGeometry {
    double r = 0.0;
    double area = 0.0;
    ScalarField mu1;
    ScalarField mu2;
    ScalarField H;
};

/// Closed-form evaluator of the equidistant-foliation metric
///     g(x,r) = e^{2v(x)} [cosh(r) I + sinh(r) e^{-2v(x)} A(x)]^2
/// and of the slice curvature fields
///     mu_j(x,r) = (tanh r + lambda_j(x)) / (1 + lambda_j(x) tanh r).
///
/// The default eigenvalue fields are the minimal normal form lambda_1 = -lambda,
/// lambda_2 = +lambda of the reference data; a custom second eigenvalue field
/// generalizes to non-minimal reference surfaces (the metric then uses the
/// shape operator with eigenvalues (lambda_1, lambda_2) along the principal
/// directions of A).
class AmbientFoliation {
public:
    explicit AmbientFoliation(ReferenceSurfaceData surface);
    AmbientFoliation(ReferenceSurfaceData surface, ScalarField lambda2);

    const ReferenceSurfaceData& surface() const { return surface_; }
    const ScalarField& lambda1() const { return lam1_; }
    const ScalarField& lambda2() const { return lam2_; }
    const PeriodicGrid& grid() const { return surface_.grid; }
    bool minimal_normal_form() const { return minimal_; }

    /// max over the grid of max(|lambda_1|, |lambda_2|); < 1 by construction.
    double lambda_sup() const { return lambda_sup_; }

    Metric2 metric_at(int i, int j, double r) const;
    MetricJet metric_jet_at(int i, int j, double r) const;

    /// (mu1, mu2) sorted pointwise so that mu1 <= mu2.
    std::pair<ScalarField, ScalarField> slice_principal_curvatures(double r) const;

    /// Full two-eigenvalue mean curvature formula; equals mu1 + mu2 pointwise.
    ScalarField slice_mean_curvature(double r) const;

    /// Quadrature of the area element sqrt(det g) = e^{2v}(cosh r + lambda_1
    /// sinh r)(cosh r + lambda_2 sinh r).
    double slice_area(double r) const;

    SliceGeometry slice_geometry(double r) const;

    /// r0 = artanh(lambda_sup): beyond +-r0 every slice is convex/concave.
    double convexity_radius() const;

    /// Composite Simpson quadrature of slice_area over [r_lo, r_hi] with
    /// n_quad >= 16 intervals (rounded up to even). r_lo == r_hi gives 0.
    double volume_between(double r_lo, double r_hi, int n_quad) const;

    /// Pointwise coefficient fields of the factored metric
    ///     g_ij(x,r) = alpha(r,x) phi(x) delta_ij + 2 beta(r,x) T_ij(x)
    /// with alpha = (cosh r + m sinh r)^2 + s^2 sinh^2 r and
    /// beta = (cosh r + m sinh r) sinh r, where m = (lambda_1+lambda_2)/2 and
    /// s = (lambda_2-lambda_1)/2. In the minimal normal form m = 0, s = lambda
    /// and T = A. The derivative fields are centered differences, cached once
    /// for the graph-geometry kernel.
    struct MetricCoeffs {
        ScalarField phi;  // e^{2v}
        ScalarField m;
        ScalarField s;
        ScalarField T11;
        ScalarField T12;
        ScalarField phi_x, phi_y;
        ScalarField m_x, m_y;
        ScalarField s_x, s_y;
        ScalarField T11_x, T11_y;
        ScalarField T12_x, T12_y;
    };
    const MetricCoeffs& coeffs() const { return coeffs_; }

private:
    void finish_setup();

    ReferenceSurfaceData surface_;
    ScalarField lam1_;
    ScalarField lam2_;
    bool minimal_ = true;
    double lambda_sup_ = 0.0;
    MetricCoeffs coeffs_;
};

} // namespace afmcf
