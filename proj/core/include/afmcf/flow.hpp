#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "afmcf/foliation.hpp"

namespace afmcf {

/// Pointwise geometry of the graph r = u(x) over the foliated chart
/// ds^2 = g_ij(x,r) dx^i dx^j + dr^2. The unit normal is oriented so that
/// theta = <nu, d/dr> = 1/W > 0; W^2 = 1 + g^{ij} u_i u_j with g at (x,u).
/// A2 >= H^2/2 pointwise.
struct GraphSurfaceGeometry {
    ScalarField u;
    ScalarField theta;
    ScalarField W;
    ScalarField H;
    ScalarField A2;
    ScalarField det_induced;

    /// max over the grid of the largest eigenvalue of g(x,u)^{-1}; feeds the
    /// parabolic stability bound.
    double metric_inverse_max_eig = 0.0;
};

struct FlowConfig {
    double dt_safety = 0.9;   // in (0, 1]
    double t_end = 1.0;
    int output_every = 100;   // steps between trace samples
    enum class Scheme { ExplicitRk2 } scheme = Scheme::ExplicitRk2;
    double dt_max = 0.05;     // stiffness cap on the step size
};

struct FlowSample {
    double t = 0.0;
    double area = 0.0;
    double h = 0.0;  // integral of H^2 dmu
    double u_min = 0.0;
    double u_max = 0.0;
    double theta_min = 0.0;
    double H_min = 0.0;
    double H_max = 0.0;
    double A2_max = 0.0;
    double darea_residual = 0.0;  // |dArea/dt + h| between consecutive samples
};

/// Append-only time series of flow diagnostics.
class FlowTrace {
public:
    static constexpr const char* kCsvHeader =
        "t,area,h,u_min,u_max,theta_min,H_min,H_max,A2_max,darea_residual";

    void append(FlowSample row) { rows_.push_back(row); }
    const std::vector<FlowSample>& rows() const { return rows_; }
    bool empty() const { return rows_.empty(); }
    const FlowSample& back() const { return rows_.back(); }

    /// Least-squares slope of log h(t) over the trailing fraction of samples.
    double tail_slope(double fraction = 0.25) const;
    /// max of A2_max over the same trailing window.
    double tail_max_a2(double fraction = 0.25) const;

    /// CSV with optional leading `# ...` comment lines, then kCsvHeader.
    void write_csv(std::ostream& os,
                   const std::vector<std::string>& comment_lines = {}) const;

private:
    std::vector<FlowSample> rows_;
};

/// Non-finite values appeared during time stepping. Carries the offending
/// time and the diagnostics gathered so far.
class BlowupError : public Error {
public:
    BlowupError(const std::string& what, double time, FlowTrace partial)
        : Error(what), time(time), partial_trace(std::move(partial)) {}

    double time;
    FlowTrace partial_trace;
};

GraphSurfaceGeometry graph_geometry(const AmbientFoliation& f, const ScalarField& u);

/// Graph flow speed -H * theta.
ScalarField flow_rhs(const AmbientFoliation& f, const ScalarField& u);

struct StepResult {
    ScalarField u;
    double dt_used = 0.0;
};

/// One explicit midpoint (RK2) step with the stability-bounded step size
///     dt <= dt_safety * min(hx,hy)^2 / (4 * sup theta^2 * Lambda),
/// Lambda the current metric_inverse_max_eig, additionally capped by dt_max.
StepResult flow_step(const AmbientFoliation& f, const ScalarField& u,
                     const FlowConfig& cfg, double t_now = 0.0);

struct FlowResult {
    FlowTrace trace;
    ScalarField final_u;
};

/// Integrates to t_end, sampling diagnostics every output_every steps plus
/// the first and final states. Throws BlowupError with the partial trace.
FlowResult run_flow(const AmbientFoliation& f, const ScalarField& u0,
                    const FlowConfig& cfg);

/// Discrete residual of the mean-curvature evolution identity under the
/// graph flow, transported to the fixed chart:
///     dH/dt = Lap (H theta^2) + H theta^2 (A2 - 2) - H theta <grad u, grad H>
/// (Laplacian, gradients and inner product in the induced metric). On
/// vertical-normal configurations (grad u = 0) this is the classical
/// dH/dt = Lap H + H(A2 - 2). The left side is probed with one explicit
/// Euler step of size dt (dt <= 0 uses the stability-bounded step), so the
/// returned sup-norm residual is O(dt) + O(h^2).
double verify_mean_curvature_evolution(const AmbientFoliation& f,
                                       const ScalarField& u,
                                       const FlowConfig& cfg, double dt = 0.0);

} // namespace afmcf
