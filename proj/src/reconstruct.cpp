#include "wavegp/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "wavegp/parallel.hpp"

namespace wavegp {

ScalarField3D reconstruction_grid(const Vec3& center, double R, double dx, double pad) {
    if (!(R > 0.0) || !(dx > 0.0) || !(pad >= 0.0)) throw InputError("invalid reconstruction grid parameters");
    const Vec3 half = Vec3::Constant((1.0 + pad) * R);
    return ScalarField3D::covering(center - half, center + half, dx);
}

namespace {

ScalarField3D mean_at_time(const FittedModel& fm, const ScalarField3D& grid, double t) {
    std::vector<SpaceTimePoint> zs;
    zs.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) zs.emplace_back(grid.node(i), t);
    ScalarField3D out = grid;
    out.data() = fm.mean(zs);
    return out;
}

double lp_of_values(const std::vector<double>& v, double cell, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::abs(x));
        return m;
    }
    double acc = 0.0;
    for (double x : v) acc += std::pow(std::abs(x), p);
    return std::pow(acc * cell, 1.0 / p);
}

void check_p(double p) {
    if (!(p >= 1.0)) throw InputError("p must be at least 1");
}

}  // namespace

ScalarField3D reconstruct_u0(const FittedModel& fm, const ScalarField3D& grid) { return mean_at_time(fm, grid, 0.0); }

ScalarField3D reconstruct_v0(const FittedModel& fm, const ScalarField3D& grid, double dt_fd) {
    if (!(dt_fd > 0.0)) throw InputError("finite-difference step must be positive");
    ScalarField3D m0 = mean_at_time(fm, grid, 0.0);
    ScalarField3D m1 = mean_at_time(fm, grid, dt_fd);
    for (std::size_t i = 0; i < m1.size(); ++i) m1[i] = (m1[i] - m0[i]) / dt_fd;
    return m1;
}

double lp_norm(const ScalarField3D& f, double p) {
    check_p(p);
    const double h = f.spacing();
    return lp_of_values(f.data(), h * h * h, p);
}

double lp_relative_error(const ScalarField3D& approx, const ScalarField3D& truth, double p) {
    if (!approx.same_geometry(truth)) throw InputError("fields must share one grid");
    const double denom = lp_norm(truth, p);
    if (!(denom > 0.0)) throw InputError("reference field has zero norm");
    ScalarField3D diff = truth;
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = approx[i] - truth[i];
    return lp_norm(diff, p) / denom;
}

double gradient_constant(double p) {
    check_p(p);
    if (std::isinf(p)) return 1.0;
    const double pi = boost::math::constants::pi<double>();
    // one of the 48 congruent cells z >= x >= y >= 0 of the sphere
    auto qnorm = [&](const Vec3& g) {
        if (p == 1.0) return g.cwiseAbs().maxCoeff();
        const double q = p / (p - 1.0);
        return std::pow(std::pow(std::abs(g[0]), q) + std::pow(std::abs(g[1]), q) + std::pow(std::abs(g[2]), q),
                        1.0 / q);
    };
    auto outer = [&](double phi) {
        const double th_max = std::atan(1.0 / std::cos(phi));
        return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
            [&](double th) {
                const Vec3 g(std::sin(th) * std::cos(phi), std::sin(th) * std::sin(phi), std::cos(th));
                return std::pow(qnorm(g), p) * std::sin(th);
            },
            0.0, th_max, 10, 1e-13);
    };
    const double cell = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(outer, 0.0, pi / 4.0, 10, 1e-12);
    return std::pow(48.0 * cell / (4.0 * pi), 1.0 / p);
}

double gradient_norm(const Vec3& g, double p) {
    check_p(p);
    if (std::isinf(p)) return g.norm();
    if (p == 1.0) return g.cwiseAbs().sum();
    return std::pow(std::pow(std::abs(g[0]), p) + std::pow(std::abs(g[1]), p) + std::pow(std::abs(g[2]), p), 1.0 / p);
}

ScalarField3D sample(const ScalarField3D& grid, const FieldFn& f) {
    ScalarField3D out = grid;
    parallel_for(grid.size(), [&](std::size_t i) { out[i] = f(grid.node(i)); });
    return out;
}

LpBoundReport check_lp_bound(const FieldFn& dv, const FieldFn& du, const GradFn& grad_du,
                             const std::function<double(const Vec3&, double)>& solution_error,
                             const ScalarField3D& grid, double t, double p, double c, double slack) {
    check_p(p);
    if (!(c > 0.0)) throw InputError("wave speed must be positive");
    LpBoundReport rep;
    rep.p = p;
    rep.t = t;
    const double h = grid.spacing();
    const double cell = h * h * h;
    const double Cp = gradient_constant(p);

    std::vector<double> vals(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) { vals[i] = dv(grid.node(i)); });
    rep.term_v = std::abs(t) * lp_of_values(vals, cell, p);
    parallel_for(grid.size(), [&](std::size_t i) { vals[i] = du(grid.node(i)); });
    rep.term_u = lp_of_values(vals, cell, p);
    parallel_for(grid.size(), [&](std::size_t i) { vals[i] = gradient_norm(grad_du(grid.node(i)), p); });
    rep.term_grad = Cp * c * std::abs(t) * lp_of_values(vals, cell, p);
    rep.rhs = rep.term_v + rep.term_u + rep.term_grad;

    // the solution error spreads by c|t|; extend the grid by whole cells
    const auto extra = static_cast<double>(std::ceil(c * std::abs(t) / h));
    const Vec3 lo = grid.origin() - Vec3::Constant(extra * h);
    std::array<std::size_t, 3> dims = grid.dims();
    for (auto& d : dims) d += 2 * static_cast<std::size_t>(extra);
    const ScalarField3D wide(lo, h, dims);
    std::vector<double> err(wide.size());
    parallel_for(wide.size(), [&](std::size_t i) { err[i] = solution_error(wide.node(i), t); });
    rep.lhs = lp_of_values(err, cell, p);
    rep.satisfied = rep.lhs <= rep.rhs * (1.0 + slack) + 1e-12;
    return rep;
}

Eigen::MatrixXd layout_coherence(const WaveKernelModel& model, const std::vector<Vec3>& sensors,
                                 const std::vector<double>& times) {
    if (sensors.empty() || times.empty()) throw InputError("coherence needs sensors and times");
    const std::size_t q = sensors.size();
    const std::size_t N = times.size();
    std::vector<WaveKernelModel::Features> f(q * N);
    for (std::size_t i = 0; i < q; ++i)
        for (std::size_t k = 0; k < N; ++k) f[i * N + k] = model.features(SpaceTimePoint(sensors[i], times[k]));
    double var = 0.0;
    for (const auto& fi : f) var = std::max(var, model(fi, fi));
    if (!(var > 0.0)) throw InputError("model has zero variance at every sensor sample");
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(q));
    parallel_for(q, [&](std::size_t i) {
        for (std::size_t j = i; j < q; ++j) {
            double m = 0.0;
            for (std::size_t k = 0; k < N; ++k)
                for (std::size_t l = 0; l < N; ++l) m = std::max(m, std::abs(model(f[i * N + k], f[j * N + l])));
            C(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m / var;
        }
    });
    for (Eigen::Index i = 0; i < C.rows(); ++i)
        for (Eigen::Index j = 0; j < i; ++j) C(i, j) = C(j, i);
    return C;
}

}  // namespace wavegp
