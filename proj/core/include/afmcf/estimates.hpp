#pragma once

#include "afmcf/errors.hpp"

namespace afmcf {

/// All scalar bounds derived from the maximal principal curvature lambda0
/// and a hyperbolic area (nominal 2 pi (2g-2) or the effective desk-model
/// value). Pure closed forms.
struct EstimateReport {
    double lambda0 = 0.0;
    double a_hyp = 0.0;
    double r0 = 0.0;
    double vol_bound_exact = 0.0;
    double vol_bound_taylor = 0.0;
    double vol_c1_bound = 0.0;
    double hausdorff_bound_quasicircle = 1.0;
    double hausdorff_bound_bc = 2.0;
    double spectrum_lower_bound = 0.0;
    double k3 = 1e-11;
    bool near_boundary_warning = false;  // lambda0 in [0.95, 1)
};

/// r0 = artanh(lambda0) = log((1+lambda0)/(1-lambda0)) / 2.
double convexity_radius(double lambda0);

/// Convex-core volume bound a_hyp * (lambda0/(1-lambda0^2) + r0);
/// algebraically equal to a_hyp * (cosh r0 sinh r0 + r0).
double volume_bound(double lambda0, double a_hyp);

/// Small-lambda0 expansion a_hyp * (2 lambda0 + 4/3 lambda0^3); the dropped
/// remainder is bounded by 4 a_hyp lambda0^5 for lambda0 <= 0.2.
double volume_bound_taylor(double lambda0, double a_hyp);

/// Quasicircle bound 1 + lambda0^2 on the limit-set Hausdorff dimension.
double hausdorff_bound(double lambda0);

struct BurgerCanaryBounds {
    double spectrum_lower_bound = 0.0;  // k3 / V1^2
    double hausdorff_bound = 2.0;       // 2 - k3 / V1^2
    double volume_c1 = 0.0;             // V1 = a_hyp (sinh(2 r0 + 2)/2 - r0 - 1)
};

/// Spectrum / dimension bounds through the volume of the radius-one
/// neighborhood of the convex core. Coarser than hausdorff_bound for all
/// lambda0 of interest.
BurgerCanaryBounds burger_canary_bounds(double lambda0, double a_hyp,
                                        double k3 = 1e-11);

enum class AHypMode { Nominal, Effective };

/// Fills every report field. In Nominal mode a_hyp = 2 pi (2 genus - 2);
/// in Effective mode the caller supplies a_hyp directly.
EstimateReport make_report(double lambda0, int genus, AHypMode mode,
                           double a_hyp_effective = 0.0, double k3 = 1e-11);

} // namespace afmcf
