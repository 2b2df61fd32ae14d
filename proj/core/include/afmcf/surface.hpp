#pragma once

#include <filesystem>

#include "afmcf/grid.hpp"

namespace afmcf {

/// Reference surface data on a periodic fundamental domain: induced metric
/// e^{2v} dx.dx, trace-free second fundamental form A (t22 = -t11), and the
/// derived principal-curvature magnitude lambda = e^{-2v} sqrt(t11^2+t12^2).
/// Admissible data has lambda < 1 everywhere; construction enforces it.
struct ReferenceSurfaceData {
    PeriodicGrid grid;
    ScalarField v;
    SymTensorField A;
    ScalarField lambda;
    double lambda0 = 0.0;
};

/// Totally geodesic model: v constant, A = 0, lambda = 0.
ReferenceSurfaceData make_fuchsian(const PeriodicGrid& grid, double v_const);

/// Assembles arbitrary admissible data from v and the two independent tensor
/// components; t22 = -t11 is enforced. Throws AdmissibilityError (with the
/// maximum and its location) when the derived lambda reaches 1 anywhere.
ReferenceSurfaceData make_synthetic(const PeriodicGrid& grid, ScalarField v,
                                    ScalarField a11, ScalarField a12);

/// One-parameter synthetic family used by the CLI and test suites:
///   v(x,y)   = v_amp * cos(2 pi x / Lx)
///   a11(x,y) = lambda_amp * e^{2v} * cos^2(pi x / Lx),  a12 = 0
/// so that the grid maximum of lambda is exactly lambda_amp (attained at
/// the i = 0 column).
ReferenceSurfaceData make_cosine_synthetic(const PeriodicGrid& grid,
                                           double v_amp, double lambda_amp);

/// Solves the desk-model Gauss equation
///     Lap0 v = e^{2v} - |alpha|^2 e^{-2v}
/// (flat periodic Laplacian) by damped Newton iteration to a residual
/// sup-norm <= tol, with the constant trace-free tensor t11 = alpha_re,
/// t12 = -alpha_im. On the periodic cell the only solution is the constant
/// v = log|alpha|/2, which sits exactly on the lambda = 1 admissibility
/// boundary, so this typically ends in AdmissibilityError; non-convergence
/// raises SolverError with the residual history.
ReferenceSurfaceData solve_gauss_equation(const PeriodicGrid& grid,
                                          double alpha_re, double alpha_im,
                                          double tol);

/// Sup-norm of K + 1 - lambda^2 with K = -e^{-2v} Lap0 v: the residual of
/// the desk-model curvature relation solved by solve_gauss_equation. Pure
/// diagnostic; synthetic data may have a large residual by design (the flat
/// Fuchsian cell reports exactly 1).
double check_gauss_residual(const ReferenceSurfaceData& s);

struct SurfaceAreas {
    double area = 0.0;           // |Sigma| under the induced metric
    double a_hyp_eff = 0.0;      // area + integral of lambda^2 dmu
    double a_hyp_nominal = 0.0;  // 2 pi (2g - 2)
};

/// Quadratures of the induced area element. genus must be >= 2 (it only
/// feeds the nominal hyperbolic area).
SurfaceAreas areas(const ReferenceSurfaceData& s, int genus);

double nominal_hyperbolic_area(int genus);

/// Directory layout: v.f64, a11.f64, a12.f64 plus a `meta` text file with
/// `lambda0=...` and `genus=...` lines.
void save_surface(const std::filesystem::path& dir, const ReferenceSurfaceData& s,
                  int genus);
ReferenceSurfaceData load_surface(const std::filesystem::path& dir,
                                  int* genus_out = nullptr);

} // namespace afmcf
