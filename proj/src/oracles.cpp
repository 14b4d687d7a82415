#include "wavegp/oracles.hpp"

#include <cmath>

#include <boost/math/constants/constants.hpp>

#include "wavegp/quadrature.hpp"

namespace wavegp {

namespace {

struct SphereNodes {
    std::vector<Vec3> y;
    std::vector<double> w;
};

// Quadrature for the normalized measure on the sphere {x - a g}.
SphereNodes sphere_nodes(const Vec3& x, double a, const OracleOptions& opts, const std::vector<double>& extra_radii) {
    SphereNodes out;
    if (a == 0.0) {
        out.y.push_back(x);
        out.w.push_back(1.0);
        return out;
    }
    Vec3 e(0.0, 0.0, 1.0);
    std::vector<double> breaks;
    if (opts.frame) {
        const Vec3 d = x - opts.frame->center;
        const double r = d.norm();
        if (r > 0.0) {
            e = d / r;
            auto add = [&](double rho) { breaks.push_back((r * r + a * a - rho * rho) / (2.0 * r * a)); };
            for (double rho : opts.frame->radii) add(rho);
            for (double rho : extra_radii) add(rho);
        }
    }
    // y = x - a g with g = mu e + ..., so mu = cos(angle between g and e)
    Vec3 e1 = (std::abs(e[0]) < 0.9 ? Vec3(1.0, 0.0, 0.0) : Vec3(0.0, 1.0, 0.0)).cross(e).normalized();
    Vec3 e2 = e.cross(e1);
    std::vector<double> mu;
    std::vector<double> wmu;
    composite_gauss(-1.0, 1.0, breaks, opts.n_quad, mu, wmu);
    const int n_phi = opts.n_phi > 0 ? opts.n_phi : opts.n_quad;
    const double two_pi = 2.0 * boost::math::constants::pi<double>();
    out.y.reserve(mu.size() * static_cast<std::size_t>(n_phi));
    out.w.reserve(mu.size() * static_cast<std::size_t>(n_phi));
    for (std::size_t i = 0; i < mu.size(); ++i) {
        const double st = std::sqrt(std::max(0.0, 1.0 - mu[i] * mu[i]));
        for (int j = 0; j < n_phi; ++j) {
            const double ph = two_pi * (j + 0.5) / n_phi;
            const Vec3 g = mu[i] * e + st * (std::cos(ph) * e1 + std::sin(ph) * e2);
            out.y.push_back(x - a * g);
            out.w.push_back(0.5 * wmu[i] / n_phi);
        }
    }
    return out;
}

}  // namespace

double kirchhoff_oracle(const SpaceTimePoint& z, const SpaceTimePoint& zp, const SpatialKernel& k_init, double c,
                        int n_quad) {
    OracleOptions opts;
    opts.n_quad = n_quad;
    return kirchhoff_oracle(z, zp, k_init, c, opts);
}

double kirchhoff_oracle(const SpaceTimePoint& z, const SpaceTimePoint& zp, const SpatialKernel& k_init, double c,
                        const OracleOptions& opts) {
    if (opts.n_quad < 1) throw InputError("n_quad must be positive");
    if (z.t == 0.0 || zp.t == 0.0) return 0.0;
    const SphereNodes outer = sphere_nodes(z.x, c * std::abs(z.t), opts, {});
    const bool kink = opts.frame && opts.frame->diagonal_kink;
    SphereNodes inner;
    if (!kink) inner = sphere_nodes(zp.x, c * std::abs(zp.t), opts, {});
    double total = 0.0;
    for (std::size_t i = 0; i < outer.y.size(); ++i) {
        if (kink) inner = sphere_nodes(zp.x, c * std::abs(zp.t), opts, {(outer.y[i] - opts.frame->center).norm()});
        double acc = 0.0;
        for (std::size_t j = 0; j < inner.y.size(); ++j) acc += inner.w[j] * k_init(outer.y[i], inner.y[j]);
        total += outer.w[i] * acc;
    }
    return z.t * zp.t * total;
}

double kirchhoff_oracle_dtdt(const SpaceTimePoint& z, const SpaceTimePoint& zp, const SpatialKernel& k_init, double c,
                             const OracleOptions& opts, double step) {
    auto f = [&](double dt, double dtp) {
        return kirchhoff_oracle(SpaceTimePoint(z.x, z.t + dt), SpaceTimePoint(zp.x, zp.t + dtp), k_init, c, opts);
    };
    // fourth-order central stencil in each time argument
    static constexpr int offs[4] = {-2, -1, 1, 2};
    static constexpr double coef[4] = {1.0, -8.0, 8.0, -1.0};
    double acc = 0.0;
    for (int i = 0; i < 4; ++i) {
        double row = 0.0;
        for (int j = 0; j < 4; ++j) row += coef[j] * f(offs[i] * step, offs[j] * step);
        acc += coef[i] * row;
    }
    return acc / (144.0 * step * step);
}

double kirchhoff_single(const Vec3& x, double t, const std::function<double(const Vec3&)>& g, double c,
                        const OracleOptions& opts) {
    if (t == 0.0) return 0.0;
    const SphereNodes s = sphere_nodes(x, c * std::abs(t), opts, {});
    double acc = 0.0;
    for (std::size_t i = 0; i < s.y.size(); ++i) acc += s.w[i] * g(s.y[i]);
    return t * acc;
}

}  // namespace wavegp
