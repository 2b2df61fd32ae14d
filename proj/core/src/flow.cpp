#include "afmcf/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "afmcf/format.hpp"

namespace afmcf {

namespace {

struct InverseMetricFields {
    ScalarField gi11, gi12, gi22;  // inverse of the induced metric
};

// Evaluates the full graph geometry of r = u(x). The slice metric and its
// r-derivative come from the factored closed form cached on the foliation;
// spatial metric derivatives combine the cached coefficient differences with
// the same closed form, so only u itself is differenced here.
void eval_geometry(const AmbientFoliation& f, const ScalarField& u,
                   GraphSurfaceGeometry& out, InverseMetricFields* inv_out) {
    const PeriodicGrid& g = u.grid();
    const AmbientFoliation::MetricCoeffs& c = f.coeffs();

    ScalarField ux = diff_x(u), uy = diff_y(u);
    ScalarField uxx = diff_xx(u), uyy = diff_yy(u), uxy = diff_xy(u);

    out.u = u;
    out.theta = ScalarField(g);
    out.W = ScalarField(g);
    out.H = ScalarField(g);
    out.A2 = ScalarField(g);
    out.det_induced = ScalarField(g);
    if (inv_out) {
        inv_out->gi11 = ScalarField(g);
        inv_out->gi12 = ScalarField(g);
        inv_out->gi22 = ScalarField(g);
    }

    double g_eig_min = std::numeric_limits<double>::infinity();

#ifdef AFMCF_HAVE_OPENMP
#pragma omp parallel for reduction(min : g_eig_min) schedule(static)
#endif
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            double r = u(i, j);
            double er = std::exp(r);
            double C = 0.5 * (er + 1.0 / er);
            double S = 0.5 * (er - 1.0 / er);

            double m = c.m(i, j), s = c.s(i, j), phi = c.phi(i, j);
            double T11 = c.T11(i, j), T12 = c.T12(i, j);

            double E = C + S * m;
            double Ep = S + C * m;
            double alpha = E * E + S * S * s * s;
            double beta = E * S;

            double g11 = alpha * phi + 2.0 * beta * T11;
            double g12 = 2.0 * beta * T12;
            double g22 = alpha * phi - 2.0 * beta * T11;
            double detg = g11 * g22 - g12 * g12;

            double alpha_r = 2.0 * E * Ep + 2.0 * C * S * s * s;
            double beta_r = Ep * S + E * C;
            double K11 = 0.5 * (alpha_r * phi + 2.0 * beta_r * T11);
            double K12 = beta_r * T12;
            double K22 = 0.5 * (alpha_r * phi - 2.0 * beta_r * T11);

            // Spatial derivatives of g at fixed r.
            double alpha_x = 2.0 * E * S * c.m_x(i, j) + 2.0 * S * S * s * c.s_x(i, j);
            double beta_x = S * S * c.m_x(i, j);
            double diag_x = alpha_x * phi + alpha * c.phi_x(i, j);
            double off_x = 2.0 * (beta_x * T11 + beta * c.T11_x(i, j));
            double dxg11 = diag_x + off_x;
            double dxg12 = 2.0 * (beta_x * T12 + beta * c.T12_x(i, j));
            double dxg22 = diag_x - off_x;

            double alpha_y = 2.0 * E * S * c.m_y(i, j) + 2.0 * S * S * s * c.s_y(i, j);
            double beta_y = S * S * c.m_y(i, j);
            double diag_y = alpha_y * phi + alpha * c.phi_y(i, j);
            double off_y = 2.0 * (beta_y * T11 + beta * c.T11_y(i, j));
            double dyg11 = diag_y + off_y;
            double dyg12 = 2.0 * (beta_y * T12 + beta * c.T12_y(i, j));
            double dyg22 = diag_y - off_y;

            double gi11 = g22 / detg, gi12 = -g12 / detg, gi22 = g11 / detg;

            double p = ux(i, j), q = uy(i, j);
            double w1 = gi11 * p + gi12 * q;
            double w2 = gi12 * p + gi22 * q;
            double W2 = 1.0 + p * w1 + q * w2;
            double W = std::sqrt(W2);
            double theta = 1.0 / W;

            // Christoffel terms contracted with the height gradient:
            // GU_ij = Gamma^k_ij u_k from the covector blocks D_ij.
            double D11_1 = dxg11, D11_2 = 2.0 * dxg12 - dyg11;
            double D12_1 = dyg11, D12_2 = dxg22;
            double D22_1 = 2.0 * dyg12 - dxg22, D22_2 = dyg22;
            double GU11 = 0.5 * ((gi11 * D11_1 + gi12 * D11_2) * p +
                                 (gi12 * D11_1 + gi22 * D11_2) * q);
            double GU12 = 0.5 * ((gi11 * D12_1 + gi12 * D12_2) * p +
                                 (gi12 * D12_1 + gi22 * D12_2) * q);
            double GU22 = 0.5 * ((gi11 * D22_1 + gi12 * D22_2) * p +
                                 (gi12 * D22_1 + gi22 * D22_2) * q);

            double hess11 = uxx(i, j) - GU11;
            double hess12 = uxy(i, j) - GU12;
            double hess22 = uyy(i, j) - GU22;

            double cross1 = K11 * w1 + K12 * w2;
            double cross2 = K12 * w1 + K22 * w2;

            double h11 = (-hess11 + K11 + 2.0 * p * cross1) / W;
            double h12 = (-hess12 + K12 + p * cross2 + q * cross1) / W;
            double h22 = (-hess22 + K22 + 2.0 * q * cross2) / W;

            double detgh = detg * W2;  // det(g + du du^T) = det g * W^2
            double hi11 = (g22 + q * q) / detgh;
            double hi12 = -(g12 + p * q) / detgh;
            double hi22 = (g11 + p * p) / detgh;

            double S11 = hi11 * h11 + hi12 * h12;
            double S12 = hi11 * h12 + hi12 * h22;
            double S21 = hi12 * h11 + hi22 * h12;
            double S22 = hi12 * h12 + hi22 * h22;

            out.theta(i, j) = theta;
            out.W(i, j) = W;
            out.H(i, j) = S11 + S22;
            out.A2(i, j) = S11 * S11 + S22 * S22 + 2.0 * S12 * S21;
            out.det_induced(i, j) = detgh;
            if (inv_out) {
                inv_out->gi11(i, j) = hi11;
                inv_out->gi12(i, j) = hi12;
                inv_out->gi22(i, j) = hi22;
            }

            double tr = g11 + g22;
            double disc = std::sqrt(std::max(tr * tr - 4.0 * detg, 0.0));
            g_eig_min = std::min(g_eig_min, 0.5 * (tr - disc));
        }
    }

    out.metric_inverse_max_eig = 1.0 / g_eig_min;
}

double cfl_dt(const PeriodicGrid& g, const GraphSurfaceGeometry& geo,
              const FlowConfig& cfg) {
    double theta_max = 0.0;
    for (std::size_t k = 0; k < geo.theta.size(); ++k)
        theta_max = std::max(theta_max, geo.theta.data()[k]);
    double h = std::min(g.hx(), g.hy());
    double denom = 4.0 * theta_max * theta_max * geo.metric_inverse_max_eig;
    double dt = cfg.dt_safety * h * h / denom;
    return std::min(dt, cfg.dt_max);
}

void validate_config(const FlowConfig& cfg) {
    if (!(cfg.dt_safety > 0.0) || cfg.dt_safety > 1.0)
        throw Error("FlowConfig: dt_safety must lie in (0, 1]");
    if (!(cfg.dt_max > 0.0))
        throw Error("FlowConfig: dt_max must be positive");
    if (cfg.output_every < 1)
        throw Error("FlowConfig: output_every must be >= 1");
}

ScalarField weighted_density(const ScalarField& a, const ScalarField& b) {
    ScalarField out(a.grid());
    for (std::size_t k = 0; k < out.size(); ++k)
        out.data()[k] = a.data()[k] * b.data()[k];
    return out;
}

FlowSample make_sample(double t, const GraphSurfaceGeometry& geo,
                       const FlowSample* prev) {
    const PeriodicGrid& g = geo.u.grid();
    ScalarField dmu(g);
    for (std::size_t k = 0; k < dmu.size(); ++k)
        dmu.data()[k] = std::sqrt(geo.det_induced.data()[k]);

    FlowSample row;
    row.t = t;
    row.area = integrate(dmu);
    row.h = integrate(weighted_density(geo.H, geo.H), dmu);
    row.u_min = geo.u.min().value;
    row.u_max = geo.u.max().value;
    row.theta_min = geo.theta.min().value;
    row.H_min = geo.H.min().value;
    row.H_max = geo.H.max().value;
    row.A2_max = geo.A2.max().value;
    if (prev && row.t > prev->t)
        row.darea_residual = std::abs((row.area - prev->area) / (row.t - prev->t) +
                                      0.5 * (row.h + prev->h));
    return row;
}

} // namespace

GraphSurfaceGeometry graph_geometry(const AmbientFoliation& f, const ScalarField& u) {
    if (!(u.grid() == f.grid()))
        throw Error("graph_geometry: height field lives on a different grid");
    GraphSurfaceGeometry out;
    eval_geometry(f, u, out, nullptr);
    return out;
}

ScalarField flow_rhs(const AmbientFoliation& f, const ScalarField& u) {
    GraphSurfaceGeometry geo = graph_geometry(f, u);
    ScalarField out(u.grid());
    for (std::size_t k = 0; k < out.size(); ++k)
        out.data()[k] = -geo.H.data()[k] * geo.theta.data()[k];
    return out;
}

StepResult flow_step(const AmbientFoliation& f, const ScalarField& u,
                     const FlowConfig& cfg, double t_now) {
    validate_config(cfg);
    GraphSurfaceGeometry geo;
    eval_geometry(f, u, geo, nullptr);
    double dt = cfl_dt(u.grid(), geo, cfg);
    if (!std::isfinite(dt) || !(dt > 0.0))
        throw BlowupError("non-finite step size at t = " + fmt17(t_now), t_now, {});

    ScalarField um(u.grid());
    for (std::size_t k = 0; k < um.size(); ++k)
        um.data()[k] = u.data()[k] -
                       0.5 * dt * geo.H.data()[k] * geo.theta.data()[k];

    GraphSurfaceGeometry geo_mid;
    eval_geometry(f, um, geo_mid, nullptr);

    StepResult res;
    res.dt_used = dt;
    res.u = ScalarField(u.grid());
    for (std::size_t k = 0; k < res.u.size(); ++k)
        res.u.data()[k] = u.data()[k] -
                          dt * geo_mid.H.data()[k] * geo_mid.theta.data()[k];
    if (!res.u.all_finite())
        throw BlowupError("non-finite height field at t = " + fmt17(t_now + dt),
                          t_now + dt, {});
    return res;
}

FlowResult run_flow(const AmbientFoliation& f, const ScalarField& u0,
                    const FlowConfig& cfg) {
    validate_config(cfg);
    if (!(u0.grid() == f.grid()))
        throw Error("run_flow: height field lives on a different grid");
    if (!u0.all_finite())
        throw Error("run_flow: non-finite initial height field");
    if (!(cfg.t_end >= 0.0))
        throw Error("FlowConfig: t_end must be nonnegative");

    FlowResult out;
    ScalarField u = u0;
    double t = 0.0;
    long step_index = 0;
    const double t_eps = 1e-14 * std::max(cfg.t_end, 1.0);

    auto blow = [&](const std::string& what, double when) {
        return BlowupError(what, when, std::move(out.trace));
    };

    while (true) {
        GraphSurfaceGeometry geo;
        eval_geometry(f, u, geo, nullptr);
        if (!geo.H.all_finite() || !geo.theta.all_finite())
            throw blow("non-finite graph geometry at t = " + fmt17(t), t);

        bool due = step_index % cfg.output_every == 0;
        bool last = t >= cfg.t_end - t_eps;
        if (due || last) {
            const FlowSample* prev = out.trace.empty() ? nullptr : &out.trace.back();
            out.trace.append(make_sample(t, geo, prev));
        }
        if (last) break;

        double dt = std::min(cfl_dt(f.grid(), geo, cfg), cfg.t_end - t);
        if (!std::isfinite(dt) || !(dt > 0.0))
            throw blow("non-finite step size at t = " + fmt17(t), t);

        ScalarField um(u.grid());
        for (std::size_t k = 0; k < um.size(); ++k)
            um.data()[k] = u.data()[k] -
                           0.5 * dt * geo.H.data()[k] * geo.theta.data()[k];
        GraphSurfaceGeometry geo_mid;
        eval_geometry(f, um, geo_mid, nullptr);
        for (std::size_t k = 0; k < u.size(); ++k)
            u.data()[k] -= dt * geo_mid.H.data()[k] * geo_mid.theta.data()[k];
        if (!u.all_finite())
            throw blow("non-finite height field at t = " + fmt17(t + dt), t + dt);

        t += dt;
        ++step_index;
    }

    out.final_u = std::move(u);
    return out;
}

double verify_mean_curvature_evolution(const AmbientFoliation& f,
                                       const ScalarField& u,
                                       const FlowConfig& cfg, double dt) {
    validate_config(cfg);
    GraphSurfaceGeometry geo;
    InverseMetricFields inv;
    eval_geometry(f, u, geo, &inv);
    double dt0 = dt > 0.0 ? dt : cfl_dt(u.grid(), geo, cfg);

    // Euler probe of dH/dt on the fixed chart.
    ScalarField u1(u.grid());
    for (std::size_t k = 0; k < u1.size(); ++k)
        u1.data()[k] = u.data()[k] -
                       dt0 * geo.H.data()[k] * geo.theta.data()[k];
    GraphSurfaceGeometry geo1;
    eval_geometry(f, u1, geo1, nullptr);

    const PeriodicGrid& g = u.grid();
    ScalarField q(g), sg(g);
    for (std::size_t k = 0; k < q.size(); ++k) {
        double th = geo.theta.data()[k];
        q.data()[k] = geo.H.data()[k] * th * th;
        sg.data()[k] = std::sqrt(geo.det_induced.data()[k]);
    }
    ScalarField qx = diff_x(q), qy = diff_y(q);
    ScalarField Fx(g), Fy(g);
    for (std::size_t k = 0; k < Fx.size(); ++k) {
        Fx.data()[k] = sg.data()[k] * (inv.gi11.data()[k] * qx.data()[k] +
                                       inv.gi12.data()[k] * qy.data()[k]);
        Fy.data()[k] = sg.data()[k] * (inv.gi12.data()[k] * qx.data()[k] +
                                       inv.gi22.data()[k] * qy.data()[k]);
    }
    ScalarField divx = diff_x(Fx), divy = diff_y(Fy);
    ScalarField Hx = diff_x(geo.H), Hy = diff_y(geo.H);
    ScalarField ux = diff_x(u), uy = diff_y(u);

    double worst = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) {
        double lap = (divx.data()[k] + divy.data()[k]) / sg.data()[k];
        double adv = geo.H.data()[k] * geo.theta.data()[k] *
                     (inv.gi11.data()[k] * ux.data()[k] * Hx.data()[k] +
                      inv.gi12.data()[k] * (ux.data()[k] * Hy.data()[k] +
                                            uy.data()[k] * Hx.data()[k]) +
                      inv.gi22.data()[k] * uy.data()[k] * Hy.data()[k]);
        double target = lap + q.data()[k] * (geo.A2.data()[k] - 2.0) - adv;
        double lhs = (geo1.H.data()[k] - geo.H.data()[k]) / dt0;
        worst = std::max(worst, std::abs(lhs - target));
    }
    return worst;
}

double FlowTrace::tail_slope(double fraction) const {
    std::size_t n = rows_.size();
    if (n < 3) return 0.0;
    std::size_t take = std::max<std::size_t>(3, static_cast<std::size_t>(fraction * n));
    take = std::min(take, n);

    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    std::size_t used = 0;
    for (std::size_t k = n - take; k < n; ++k) {
        if (!(rows_[k].h > 0.0)) continue;
        double t = rows_[k].t, y = std::log(rows_[k].h);
        st += t;
        sy += y;
        stt += t * t;
        sty += t * y;
        ++used;
    }
    if (used < 2) return 0.0;
    double denom = used * stt - st * st;
    return denom == 0.0 ? 0.0 : (used * sty - st * sy) / denom;
}

double FlowTrace::tail_max_a2(double fraction) const {
    std::size_t n = rows_.size();
    if (n == 0) return 0.0;
    std::size_t take = std::max<std::size_t>(1, static_cast<std::size_t>(fraction * n));
    take = std::min(take, n);
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t k = n - take; k < n; ++k) m = std::max(m, rows_[k].A2_max);
    return m;
}

void FlowTrace::write_csv(std::ostream& os,
                          const std::vector<std::string>& comment_lines) const {
    for (const std::string& line : comment_lines) os << "# " << line << "\n";
    os << kCsvHeader << "\n";
    for (const FlowSample& r : rows_) {
        os << fmt17(r.t) << ',' << fmt17(r.area) << ',' << fmt17(r.h) << ','
           << fmt17(r.u_min) << ',' << fmt17(r.u_max) << ',' << fmt17(r.theta_min)
           << ',' << fmt17(r.H_min) << ',' << fmt17(r.H_max) << ','
           << fmt17(r.A2_max) << ',' << fmt17(r.darea_residual) << "\n";
    }
}

} // namespace afmcf
