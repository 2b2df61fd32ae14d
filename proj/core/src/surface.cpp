#include "afmcf/surface.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "afmcf/field_io.hpp"

namespace afmcf {

namespace {

ScalarField derive_lambda(const ScalarField& v, const ScalarField& a11,
                          const ScalarField& a12) {
    ScalarField lam(v.grid());
    for (std::size_t k = 0; k < lam.size(); ++k)
        lam.data()[k] = std::exp(-2.0 * v.data()[k]) *
                        std::hypot(a11.data()[k], a12.data()[k]);
    return lam;
}

} // namespace

ReferenceSurfaceData make_fuchsian(const PeriodicGrid& grid, double v_const) {
    ReferenceSurfaceData s;
    s.grid = grid;
    s.v = ScalarField(grid, v_const);
    s.A = SymTensorField(grid);
    s.lambda = ScalarField(grid, 0.0);
    s.lambda0 = 0.0;
    return s;
}

ReferenceSurfaceData make_synthetic(const PeriodicGrid& grid, ScalarField v,
                                    ScalarField a11, ScalarField a12) {
    if (!(v.grid() == grid) || !(a11.grid() == grid) || !(a12.grid() == grid))
        throw Error("make_synthetic: input fields live on a different grid");
    if (!v.all_finite() || !a11.all_finite() || !a12.all_finite())
        throw Error("make_synthetic: non-finite input samples");

    ReferenceSurfaceData s;
    s.grid = grid;
    s.lambda = derive_lambda(v, a11, a12);
    Extremum lmax = s.lambda.max();
    if (lmax.value >= 1.0)
        throw AdmissibilityError(
            "principal curvature magnitude reaches " + std::to_string(lmax.value) +
                " >= 1 at grid point (" + std::to_string(lmax.i) + "," +
                std::to_string(lmax.j) + ")",
            lmax.value, lmax.i, lmax.j);
    s.lambda0 = lmax.value;

    s.v = std::move(v);
    s.A.t11 = std::move(a11);
    s.A.t12 = std::move(a12);
    s.A.t22 = ScalarField(grid);
    for (std::size_t k = 0; k < s.A.t22.size(); ++k)
        s.A.t22.data()[k] = -s.A.t11.data()[k];
    return s;
}

ReferenceSurfaceData make_cosine_synthetic(const PeriodicGrid& grid,
                                           double v_amp, double lambda_amp) {
    using std::numbers::pi;
    ScalarField v = ScalarField::sample(grid, [&](double x, double) {
        return v_amp * std::cos(2.0 * pi * x / grid.Lx);
    });
    ScalarField a11 = ScalarField::sample(grid, [&](double x, double) {
        double c = std::cos(pi * x / grid.Lx);
        return lambda_amp * std::exp(2.0 * v_amp * std::cos(2.0 * pi * x / grid.Lx)) * c * c;
    });
    ScalarField a12(grid, 0.0);
    return make_synthetic(grid, std::move(v), std::move(a11), std::move(a12));
}

ReferenceSurfaceData solve_gauss_equation(const PeriodicGrid& grid,
                                          double alpha_re, double alpha_im,
                                          double tol) {
    double q = alpha_re * alpha_re + alpha_im * alpha_im;
    if (!(q > 0.0))
        throw Error("solve_gauss_equation: |alpha| must be positive");
    if (!(tol > 0.0))
        throw Error("solve_gauss_equation: tol must be positive");

    const int max_outer = 50;
    ScalarField v(grid, 0.0);

    auto residual_field = [&](const ScalarField& w) {
        ScalarField lap = diff_xx(w);
        ScalarField lyy = diff_yy(w);
        ScalarField r(grid);
        for (std::size_t k = 0; k < r.size(); ++k) {
            double e2 = std::exp(2.0 * w.data()[k]);
            r.data()[k] = lap.data()[k] + lyy.data()[k] - e2 + q / e2;
        }
        return r;
    };

    // Jacobi-preconditioned CG on -J with J = Lap0 - diag(2e^{2v} + 2q e^{-2v});
    // -J is symmetric positive definite on the periodic cell.
    auto solve_newton_system = [&](const ScalarField& w, const ScalarField& rhs) {
        double hx2 = 1.0 / (grid.hx() * grid.hx());
        double hy2 = 1.0 / (grid.hy() * grid.hy());
        ScalarField diag(grid);
        for (std::size_t k = 0; k < diag.size(); ++k) {
            double e2 = std::exp(2.0 * w.data()[k]);
            diag.data()[k] = 2.0 * hx2 + 2.0 * hy2 + 2.0 * e2 + 2.0 * q / e2;
        }
        auto apply = [&](const ScalarField& p) {
            ScalarField out(grid);
            for (int j = 0; j < grid.ny; ++j) {
                int jp = j + 1 == grid.ny ? 0 : j + 1;
                int jm = j == 0 ? grid.ny - 1 : j - 1;
                for (int i = 0; i < grid.nx; ++i) {
                    int ip = i + 1 == grid.nx ? 0 : i + 1;
                    int im = i == 0 ? grid.nx - 1 : i - 1;
                    double lap = (p(ip, j) + p(im, j)) * hx2 + (p(i, jp) + p(i, jm)) * hy2;
                    out(i, j) = diag(i, j) * p(i, j) - lap;
                }
            }
            return out;
        };
        auto dot = [](const ScalarField& a, const ScalarField& b) {
            double s = 0.0;
            for (std::size_t k = 0; k < a.size(); ++k) s += a.data()[k] * b.data()[k];
            return s;
        };

        ScalarField x(grid, 0.0);
        ScalarField r = rhs;               // b - A*0
        ScalarField z(grid);
        for (std::size_t k = 0; k < z.size(); ++k) z.data()[k] = r.data()[k] / diag.data()[k];
        ScalarField p = z;
        double rz = dot(r, z);
        double b_norm = std::sqrt(dot(rhs, rhs));
        if (b_norm == 0.0) return x;
        int max_cg = 4 * (grid.nx + grid.ny);
        for (int it = 0; it < max_cg; ++it) {
            ScalarField Ap = apply(p);
            double alpha = rz / dot(p, Ap);
            for (std::size_t k = 0; k < x.size(); ++k) {
                x.data()[k] += alpha * p.data()[k];
                r.data()[k] -= alpha * Ap.data()[k];
            }
            if (std::sqrt(dot(r, r)) <= 1e-10 * b_norm) break;
            for (std::size_t k = 0; k < z.size(); ++k) z.data()[k] = r.data()[k] / diag.data()[k];
            double rz_next = dot(r, z);
            double beta = rz_next / rz;
            rz = rz_next;
            for (std::size_t k = 0; k < p.size(); ++k)
                p.data()[k] = z.data()[k] + beta * p.data()[k];
        }
        return x;
    };

    std::vector<double> history;
    ScalarField res = residual_field(v);
    double res_norm = res.sup_abs();
    history.push_back(res_norm);

    for (int outer = 0; outer < max_outer && res_norm > tol; ++outer) {
        // Newton direction: -J delta = res  (so v + delta reduces F).
        ScalarField delta = solve_newton_system(v, res);
        double step = 1.0;
        ScalarField v_next(grid);
        double next_norm = res_norm;
        for (int halving = 0; halving < 30; ++halving) {
            for (std::size_t k = 0; k < v.size(); ++k)
                v_next.data()[k] = v.data()[k] + step * delta.data()[k];
            ScalarField res_next = residual_field(v_next);
            next_norm = res_next.sup_abs();
            if (next_norm < res_norm) {
                v = v_next;
                res = std::move(res_next);
                break;
            }
            step *= 0.5;
        }
        if (!(next_norm < res_norm)) break;  // damping stalled
        res_norm = next_norm;
        history.push_back(res_norm);
    }

    if (res_norm > tol)
        throw SolverError("Gauss equation Newton iteration stalled at residual " +
                              std::to_string(res_norm) + " (tol " + std::to_string(tol) + ")",
                          std::move(history));

    ScalarField a11(grid, alpha_re);
    ScalarField a12(grid, -alpha_im);
    return make_synthetic(grid, std::move(v), std::move(a11), std::move(a12));
}

double check_gauss_residual(const ReferenceSurfaceData& s) {
    ScalarField lap_x = diff_xx(s.v);
    ScalarField lap_y = diff_yy(s.v);
    double worst = 0.0;
    for (std::size_t k = 0; k < s.v.size(); ++k) {
        double K = -std::exp(-2.0 * s.v.data()[k]) * (lap_x.data()[k] + lap_y.data()[k]);
        double lam = s.lambda.data()[k];
        worst = std::max(worst, std::abs(K + 1.0 - lam * lam));
    }
    return worst;
}

double nominal_hyperbolic_area(int genus) {
    if (genus < 2)
        throw Error("nominal hyperbolic area needs genus >= 2, got " + std::to_string(genus));
    return 2.0 * std::numbers::pi * (2.0 * genus - 2.0);
}

SurfaceAreas areas(const ReferenceSurfaceData& s, int genus) {
    SurfaceAreas out;
    out.a_hyp_nominal = nominal_hyperbolic_area(genus);

    ScalarField e2v(s.grid);
    ScalarField lam2(s.grid);
    for (std::size_t k = 0; k < e2v.size(); ++k) {
        e2v.data()[k] = std::exp(2.0 * s.v.data()[k]);
        lam2.data()[k] = s.lambda.data()[k] * s.lambda.data()[k];
    }
    out.area = integrate(e2v);
    out.a_hyp_eff = out.area + integrate(lam2, e2v);
    return out;
}

void save_surface(const std::filesystem::path& dir, const ReferenceSurfaceData& s,
                  int genus) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create surface directory " + dir.string());

    write_field(dir / "v.f64", s.v);
    write_field(dir / "a11.f64", s.A.t11);
    write_field(dir / "a12.f64", s.A.t12);

    std::ofstream meta(dir / "meta");
    if (!meta) throw IoError("cannot write surface meta file in " + dir.string());
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", s.lambda0);
    meta << "lambda0=" << buf << "\n";
    meta << "genus=" << genus << "\n";
}

ReferenceSurfaceData load_surface(const std::filesystem::path& dir, int* genus_out) {
    ScalarField v = read_field(dir / "v.f64");
    ScalarField a11 = read_field(dir / "a11.f64");
    ScalarField a12 = read_field(dir / "a12.f64");
    if (!(a11.grid() == v.grid()) || !(a12.grid() == v.grid()))
        throw IoError("surface component files disagree on grid in " + dir.string());

    int genus = 2;
    std::ifstream meta(dir / "meta");
    if (!meta) throw IoError("missing surface meta file in " + dir.string());
    std::string line;
    while (std::getline(meta, line)) {
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        if (line.substr(0, eq) == "genus") genus = std::stoi(line.substr(eq + 1));
    }
    if (genus_out) *genus_out = genus;

    // lambda0 in meta is informational; the authoritative value is recomputed.
    return make_synthetic(v.grid(), std::move(v), std::move(a11), std::move(a12));
}

} // namespace afmcf
