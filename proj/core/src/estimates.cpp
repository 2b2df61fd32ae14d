#include "afmcf/estimates.hpp"

#include <cmath>
#include <string>

#include "afmcf/surface.hpp"

namespace afmcf {

namespace {

void require_admissible(double lambda0, const char* who) {
    if (!(lambda0 >= 0.0) || lambda0 >= 1.0)
        throw AdmissibilityError(std::string(who) + ": lambda0 must lie in [0, 1), got " +
                                     std::to_string(lambda0),
                                 lambda0, 0, 0);
}

void require_area(double a_hyp, const char* who) {
    if (!(a_hyp > 0.0))
        throw Error(std::string(who) + ": a_hyp must be positive");
}

} // namespace

double convexity_radius(double lambda0) {
    require_admissible(lambda0, "convexity_radius");
    return std::atanh(lambda0);
}

double volume_bound(double lambda0, double a_hyp) {
    require_admissible(lambda0, "volume_bound");
    require_area(a_hyp, "volume_bound");
    return a_hyp * (lambda0 / (1.0 - lambda0 * lambda0) + std::atanh(lambda0));
}

double volume_bound_taylor(double lambda0, double a_hyp) {
    require_admissible(lambda0, "volume_bound_taylor");
    require_area(a_hyp, "volume_bound_taylor");
    return a_hyp * (2.0 * lambda0 + (4.0 / 3.0) * lambda0 * lambda0 * lambda0);
}

double hausdorff_bound(double lambda0) {
    require_admissible(lambda0, "hausdorff_bound");
    return 1.0 + lambda0 * lambda0;
}

BurgerCanaryBounds burger_canary_bounds(double lambda0, double a_hyp, double k3) {
    require_admissible(lambda0, "burger_canary_bounds");
    require_area(a_hyp, "burger_canary_bounds");
    if (!(k3 > 0.0))
        throw Error("burger_canary_bounds: k3 must be positive");

    double r0 = std::atanh(lambda0);
    BurgerCanaryBounds out;
    out.volume_c1 = a_hyp * (0.5 * std::sinh(2.0 * r0 + 2.0) - r0 - 1.0);
    double ratio = k3 / (out.volume_c1 * out.volume_c1);
    out.spectrum_lower_bound = ratio;
    out.hausdorff_bound = 2.0 - ratio;
    return out;
}

EstimateReport make_report(double lambda0, int genus, AHypMode mode,
                           double a_hyp_effective, double k3) {
    EstimateReport rep;
    rep.lambda0 = lambda0;
    rep.a_hyp = mode == AHypMode::Nominal ? nominal_hyperbolic_area(genus)
                                          : a_hyp_effective;
    require_area(rep.a_hyp, "make_report");
    rep.k3 = k3;
    rep.r0 = convexity_radius(lambda0);
    rep.vol_bound_exact = volume_bound(lambda0, rep.a_hyp);
    rep.vol_bound_taylor = volume_bound_taylor(lambda0, rep.a_hyp);
    BurgerCanaryBounds bc = burger_canary_bounds(lambda0, rep.a_hyp, k3);
    rep.vol_c1_bound = bc.volume_c1;
    rep.spectrum_lower_bound = bc.spectrum_lower_bound;
    rep.hausdorff_bound_bc = bc.hausdorff_bound;
    rep.hausdorff_bound_quasicircle = hausdorff_bound(lambda0);
    rep.near_boundary_warning = lambda0 >= 0.95;
    return rep;
}

} // namespace afmcf
