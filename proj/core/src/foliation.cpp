#include "afmcf/foliation.hpp"

#include <cmath>
#include <string>

namespace afmcf {

namespace {

double mobius(double lambda, double t) {
    return (t + lambda) / (1.0 + lambda * t);
}

} // namespace

AmbientFoliation::AmbientFoliation(ReferenceSurfaceData surface)
    : surface_(std::move(surface)) {
    const PeriodicGrid& g = surface_.grid;
    lam1_ = ScalarField(g);
    lam2_ = ScalarField(g);
    for (std::size_t k = 0; k < lam1_.size(); ++k) {
        lam1_.data()[k] = -surface_.lambda.data()[k];
        lam2_.data()[k] = surface_.lambda.data()[k];
    }
    minimal_ = true;
    finish_setup();
}

AmbientFoliation::AmbientFoliation(ReferenceSurfaceData surface, ScalarField lambda2)
    : surface_(std::move(surface)) {
    if (!(lambda2.grid() == surface_.grid))
        throw Error("AmbientFoliation: lambda2 field lives on a different grid");
    const PeriodicGrid& g = surface_.grid;
    lam1_ = ScalarField(g);
    for (std::size_t k = 0; k < lam1_.size(); ++k)
        lam1_.data()[k] = -surface_.lambda.data()[k];
    lam2_ = std::move(lambda2);
    minimal_ = false;
    finish_setup();
}

void AmbientFoliation::finish_setup() {
    const PeriodicGrid& g = surface_.grid;

    double sup = 0.0;
    Extremum where{0.0, 0, 0};
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            double a = std::max(std::abs(lam1_(i, j)), std::abs(lam2_(i, j)));
            if (a > sup) {
                sup = a;
                where = {a, i, j};
            }
        }
    if (sup >= 1.0)
        throw AdmissibilityError(
            "foliation eigenvalue magnitude reaches " + std::to_string(sup) +
                " >= 1 at grid point (" + std::to_string(where.i) + "," +
                std::to_string(where.j) + ")",
            sup, where.i, where.j);
    lambda_sup_ = sup;

    MetricCoeffs& c = coeffs_;
    c.phi = ScalarField(g);
    c.m = ScalarField(g);
    c.s = ScalarField(g);
    c.T11 = ScalarField(g);
    c.T12 = ScalarField(g);
    for (std::size_t k = 0; k < c.phi.size(); ++k) {
        double l1 = lam1_.data()[k];
        double l2 = lam2_.data()[k];
        c.phi.data()[k] = std::exp(2.0 * surface_.v.data()[k]);
        c.m.data()[k] = 0.5 * (l1 + l2);
        double s = 0.5 * (l2 - l1);
        c.s.data()[k] = s;
        if (minimal_) {
            // s == lambda, so s/lambda * A == A exactly.
            c.T11.data()[k] = surface_.A.t11.data()[k];
            c.T12.data()[k] = surface_.A.t12.data()[k];
        } else {
            double lam = surface_.lambda.data()[k];
            if (lam > 0.0) {
                double scale = s / lam;
                c.T11.data()[k] = scale * surface_.A.t11.data()[k];
                c.T12.data()[k] = scale * surface_.A.t12.data()[k];
            } else {
                // Principal directions are undetermined where A vanishes;
                // the coordinate frame is as good as any.
                c.T11.data()[k] = s * c.phi.data()[k];
                c.T12.data()[k] = 0.0;
            }
        }
    }
    c.phi_x = diff_x(c.phi);
    c.phi_y = diff_y(c.phi);
    c.m_x = diff_x(c.m);
    c.m_y = diff_y(c.m);
    c.s_x = diff_x(c.s);
    c.s_y = diff_y(c.s);
    c.T11_x = diff_x(c.T11);
    c.T11_y = diff_y(c.T11);
    c.T12_x = diff_x(c.T12);
    c.T12_y = diff_y(c.T12);
}

Metric2 AmbientFoliation::metric_at(int i, int j, double r) const {
    const MetricCoeffs& c = coeffs_;
    double C = std::cosh(r), S = std::sinh(r);
    double E = C + S * c.m(i, j);
    double s = c.s(i, j);
    double alpha = E * E + S * S * s * s;
    double beta = E * S;
    double ap = alpha * c.phi(i, j);
    return {ap + 2.0 * beta * c.T11(i, j), 2.0 * beta * c.T12(i, j),
            ap - 2.0 * beta * c.T11(i, j)};
}

MetricJet AmbientFoliation::metric_jet_at(int i, int j, double r) const {
    const MetricCoeffs& c = coeffs_;
    double C = std::cosh(r), S = std::sinh(r);
    double m = c.m(i, j), s = c.s(i, j), phi = c.phi(i, j);
    double T11 = c.T11(i, j), T12 = c.T12(i, j);

    double E = C + S * m;
    double Ep = S + C * m;  // d/dr of E
    double alpha = E * E + S * S * s * s;
    double beta = E * S;
    double alpha_r = 2.0 * E * Ep + 2.0 * C * S * s * s;
    double beta_r = Ep * S + E * C;

    MetricJet jet;
    jet.g = {alpha * phi + 2.0 * beta * T11, 2.0 * beta * T12,
             alpha * phi - 2.0 * beta * T11};
    jet.dr = {alpha_r * phi + 2.0 * beta_r * T11, 2.0 * beta_r * T12,
              alpha_r * phi - 2.0 * beta_r * T11};

    auto spatial = [&](double m_d, double s_d, double phi_d, double T11_d,
                       double T12_d) -> Metric2 {
        double alpha_d = 2.0 * E * S * m_d + 2.0 * S * S * s * s_d;
        double beta_d = S * S * m_d;
        double diag = alpha_d * phi + alpha * phi_d;
        return {diag + 2.0 * (beta_d * T11 + beta * T11_d),
                2.0 * (beta_d * T12 + beta * T12_d),
                diag - 2.0 * (beta_d * T11 + beta * T11_d)};
    };
    jet.dx = spatial(c.m_x(i, j), c.s_x(i, j), c.phi_x(i, j), c.T11_x(i, j),
                     c.T12_x(i, j));
    jet.dy = spatial(c.m_y(i, j), c.s_y(i, j), c.phi_y(i, j), c.T11_y(i, j),
                     c.T12_y(i, j));
    return jet;
}

std::pair<ScalarField, ScalarField>
AmbientFoliation::slice_principal_curvatures(double r) const {
    const PeriodicGrid& g = grid();
    double t = std::tanh(r);
    ScalarField mu1(g), mu2(g);
    for (std::size_t k = 0; k < mu1.size(); ++k) {
        double a = mobius(lam1_.data()[k], t);
        double b = mobius(lam2_.data()[k], t);
        mu1.data()[k] = std::min(a, b);
        mu2.data()[k] = std::max(a, b);
    }
    return {std::move(mu1), std::move(mu2)};
}

ScalarField AmbientFoliation::slice_mean_curvature(double r) const {
    const PeriodicGrid& g = grid();
    double t = std::tanh(r);
    ScalarField H(g);
    for (std::size_t k = 0; k < H.size(); ++k) {
        double l1 = lam1_.data()[k], l2 = lam2_.data()[k];
        double num = 2.0 * (1.0 + l1 * l2) * t + (l1 + l2) * (1.0 + t * t);
        double den = 1.0 + (l1 + l2) * t + l1 * l2 * t * t;
        H.data()[k] = num / den;
    }
    return H;
}

double AmbientFoliation::slice_area(double r) const {
    double C = std::cosh(r), S = std::sinh(r);
    const MetricCoeffs& c = coeffs_;
    std::vector<double> terms(c.phi.size());
    for (std::size_t k = 0; k < terms.size(); ++k)
        terms[k] = c.phi.data()[k] * (C + lam1_.data()[k] * S) *
                   (C + lam2_.data()[k] * S);
    return stable_sum(terms) * grid().hx() * grid().hy();
}

SliceGeometry AmbientFoliation::slice_geometry(double r) const {
    SliceGeometry out;
    out.r = r;
    out.area = slice_area(r);
    auto [mu1, mu2] = slice_principal_curvatures(r);
    out.mu1 = std::move(mu1);
    out.mu2 = std::move(mu2);
    out.H = slice_mean_curvature(r);
    return out;
}

double AmbientFoliation::convexity_radius() const {
    if (lambda_sup_ >= 1.0)
        throw AdmissibilityError("convexity radius undefined for lambda0 >= 1",
                                 lambda_sup_, 0, 0);
    return std::atanh(lambda_sup_);
}

double AmbientFoliation::volume_between(double r_lo, double r_hi, int n_quad) const {
    if (r_lo > r_hi)
        throw Error("volume_between: r_lo must not exceed r_hi");
    if (n_quad < 16)
        throw Error("volume_between: n_quad must be >= 16");
    if (r_lo == r_hi) return 0.0;

    int n = n_quad + (n_quad % 2);
    double h = (r_hi - r_lo) / n;
    double sum = slice_area(r_lo) + slice_area(r_hi);
    for (int k = 1; k < n; ++k)
        sum += (k % 2 == 1 ? 4.0 : 2.0) * slice_area(r_lo + k * h);
    return sum * h / 3.0;
}

} // namespace afmcf
