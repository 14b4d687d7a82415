#include "wavegp/kernels.hpp"

#include <cmath>

#include <boost/math/constants/constants.hpp>

#include "wavegp/quadrature.hpp"

namespace wavegp {

namespace {

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

double small_radius(double a) { return 1e-6 * std::max(1.0, a); }

}  // namespace

double Matern52::operator()(double h) const {
    const double a = std::abs(h) / rho;
    return sigma2 * (1.0 + a + a * a / 3.0) * std::exp(-a);
}

double Matern52::d1(double h) const {
    const double a = std::abs(h) / rho;
    return -sgn(h) * sigma2 * a * (1.0 + a) * std::exp(-a) / (3.0 * rho);
}

double Matern52::d2(double h) const {
    const double a = std::abs(h) / rho;
    return -sigma2 * (1.0 + a - a * a) * std::exp(-a) / (3.0 * rho * rho);
}

double matern52(double h, const Matern52& k) { return k(h); }

double TruncationProfile::value(double s) const {
    if (s <= alpha) return 1.0;
    if (s >= 1.0) return 0.0;
    const double u = (s - alpha) / (1.0 - alpha);
    return 1.0 - u * u * (3.0 - 2.0 * u);
}

double TruncationProfile::deriv(double s) const {
    if (s <= alpha || s >= 1.0) return 0.0;
    const double u = (s - alpha) / (1.0 - alpha);
    return -6.0 * u * (1.0 - u) / (1.0 - alpha);
}

double RadialUKernel::spatial(double s, double sp) const {
    return k0(s - sp) * trunc.value(std::sqrt(s) / R) * trunc.value(std::sqrt(sp) / R);
}

KernelTerms v_terms(const SpaceTimePoint& z, const RadialVKernel& k) {
    KernelTerms out;
    if (z.t == 0.0) return out;
    const double scale = sgn(z.t) / (4.0 * k.c);
    const double r = (z.x - k.x0).norm();
    const double a = k.c * std::abs(z.t);
    const double R2 = k.R * k.R;
    auto S = [&](double rho) { return std::min(rho * rho, R2); };
    if (r < small_radius(a)) {
        // sum_e e K((r + e a)^2, .) / r -> 2 d/drho K(rho^2, .) at rho = a
        const double dS = (a * a < R2) ? 2.0 * a : 0.0;
        out.count = 1;
        out.w[0] = scale * 2.0 * dS;
        out.s[0] = S(a);
        out.order[0] = 1;
        return out;
    }
    out.count = 2;
    out.w = {scale / r, -scale / r};
    out.s = {S(r + a), S(r - a)};
    out.order = {0, 0};
    return out;
}

KernelTerms u_terms(const SpaceTimePoint& z, const RadialUKernel& k) {
    KernelTerms out;
    const double r = (z.x - k.x0).norm();
    const double a = k.c * std::abs(z.t);
    auto P = [&](double rho) { return rho * k.trunc.value(std::abs(rho) / k.R); };
    if (r < small_radius(a)) {
        const double phi = k.trunc.value(a / k.R);
        const double dP = phi + a * k.trunc.deriv(a / k.R) / k.R;
        out.count = 2;
        out.w = {dP, 2.0 * a * P(a)};
        out.s = {a * a, a * a};
        out.order = {0, 1};
        return out;
    }
    const double rp = r + a;
    const double rm = r - a;
    out.count = 2;
    out.w = {P(rp) / (2.0 * r), P(rm) / (2.0 * r)};
    out.s = {rp * rp, rm * rm};
    out.order = {0, 0};
    return out;
}

double pair_form(const KernelTerms& a, const KernelTerms& b, const Matern52& m) {
    auto term = [&](int i, int j) {
        const auto ii = static_cast<std::size_t>(i);
        const auto jj = static_cast<std::size_t>(j);
        const double w = a.w[ii] * b.w[jj];
        if (w == 0.0) return 0.0;
        const double h = a.s[ii] - b.s[jj];
        const int oi = a.order[ii];
        const int oj = b.order[jj];
        double d;
        if (oi == 0 && oj == 0)
            d = m(h);
        else if (oi == 1 && oj == 0)
            d = m.d1(h);
        else if (oi == 0)
            d = -m.d1(h);
        else
            d = -m.d2(h);
        return w * d;
    };
    if (a.count == 0 || b.count == 0) return 0.0;
    if (a.count == 1 && b.count == 1) return term(0, 0);
    if (a.count == 1) return term(0, 0) + term(0, 1);
    if (b.count == 1) return term(0, 0) + term(1, 0);
    // grouped so that swapping the arguments gives the same rounding
    return (term(0, 0) + term(1, 1)) + (term(0, 1) + term(1, 0));
}

double kv_wave(const SpaceTimePoint& z, const SpaceTimePoint& zp, const RadialVKernel& k) {
    return pair_form(v_terms(z, k), v_terms(zp, k), k.K);
}

double ku_wave(const SpaceTimePoint& z, const SpaceTimePoint& zp, const RadialUKernel& k) {
    return pair_form(u_terms(z, k), u_terms(zp, k), k.k0);
}

WaveKernelModel::WaveKernelModel(const Hyperparameters& theta, double alpha) : theta_(theta) {
    theta.validate();
    if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("truncation alpha must lie in (0,1)");
    if (theta.v_part) {
        const auto& p = *theta.v_part;
        v_ = RadialVKernel{p.x0, p.R, Matern52{p.rho, p.sigma2}, theta.c};
    }
    if (theta.u_part) {
        const auto& p = *theta.u_part;
        u_ = RadialUKernel{p.x0, p.R, Matern52{p.rho, p.sigma2}, theta.c, TruncationProfile{alpha}};
    }
}

double WaveKernelModel::operator()(const SpaceTimePoint& z, const SpaceTimePoint& zp) const {
    double out = 0.0;
    if (v_) out += kv_wave(z, zp, *v_);
    if (u_) out += ku_wave(z, zp, *u_);
    return out;
}

WaveKernelModel::Features WaveKernelModel::features(const SpaceTimePoint& z) const {
    Features f;
    if (v_) f.v = v_terms(z, *v_);
    if (u_) f.u = u_terms(z, *u_);
    return f;
}

double WaveKernelModel::operator()(const Features& a, const Features& b) const {
    double out = 0.0;
    if (v_) out += pair_form(a.v, b.v, v_->K);
    if (u_) out += pair_form(a.u, b.u, u_->k0);
    return out;
}

double wave_kernel(const SpaceTimePoint& z, const SpaceTimePoint& zp, const WaveKernelModel& m) { return m(z, zp); }

double ft_ft_density(const Vec3& h, double t, double tp, double c) {
    const double d = h.norm();
    if (d == 0.0) throw InputError("singular diagonal: F_t * F_t' is unbounded at h = 0");
    const double lo = c * std::abs(std::abs(t) - std::abs(tp));
    const double hi = c * (std::abs(t) + std::abs(tp));
    if (d < lo || d > hi) return 0.0;
    const double pi = boost::math::constants::pi<double>();
    return sgn(t) * sgn(tp) / (8.0 * pi * c * c * d);
}

namespace {

double normal_pdf(double u) { return std::exp(-0.5 * u * u) / std::sqrt(2.0 * boost::math::constants::pi<double>()); }

// (Phi(x + d) - Phi(x - d)) / (2 d) for d < 1, finite at d = 0
double phi_slope(double x, double d) {
    const GaussRule& g = gauss_legendre(20);
    double acc = 0.0;
    for (std::size_t k = 0; k < g.nodes.size(); ++k) acc += g.weights[k] * normal_pdf(x + d * g.nodes[k]);
    return 0.5 * acc;
}

// Phi(b) - Phi(a) for a < b, from whichever tail keeps both terms small
double phi_diff(double a, double b) {
    const double s = 1.0 / std::sqrt(2.0);
    if (a >= 0.0) return 0.5 * (std::erfc(a * s) - std::erfc(b * s));
    if (b <= 0.0) return 0.5 * (std::erfc(-b * s) - std::erfc(-a * s));
    return 0.5 * (std::erf(b * s) - std::erf(a * s));
}

}  // namespace

// With u, d in units of L the value is C L^2 / (4 c^2) * int_{R1}^{R2} g(u) du
// where g(u) = (exp(-(u - d)^2 / 2) - exp(-(u + d)^2 / 2)) / d.
double gaussian_stationary_wave(const Vec3& h, double t, double tp, double C, double L, double c) {
    const double s = sgn(t) * sgn(tp);
    if (s == 0.0) return 0.0;
    const double pi = boost::math::constants::pi<double>();
    const double d = h.norm() / L;
    const double R1 = c * std::abs(std::abs(t) - std::abs(tp)) / L;
    const double R2 = c * (std::abs(t) + std::abs(tp)) / L;
    double J;
    if (R2 - R1 <= 1.0) {
        // thin shell: the integrand is smooth on a unit-width window
        const GaussRule& g = gauss_legendre(24);
        const double mid = 0.5 * (R1 + R2);
        const double half = 0.5 * (R2 - R1);
        J = 0.0;
        for (std::size_t k = 0; k < g.nodes.size(); ++k) {
            const double u = mid + half * g.nodes[k];
            const double shape = d > 0.0 ? -std::expm1(-2.0 * u * d) / d : 2.0 * u;
            J += g.weights[k] * std::exp(-0.5 * (u - d) * (u - d)) * shape;
        }
        J *= half;
    } else if (d < 0.5) {
        J = 2.0 * std::sqrt(2.0 * pi) * (phi_slope(R1, d) - phi_slope(R2, d));
    } else {
        J = std::sqrt(2.0 * pi) * (phi_diff(R1 - d, R2 - d) - phi_diff(R1 + d, R2 + d)) / d;
    }
    return s * C * L * L / (4.0 * c * c) * J;
}

double radial_single_convolution(const Vec3& x, double t, const std::function<double(double)>& F_anti,
                                 const std::function<double(double)>& f, double c) {
    if (t == 0.0) return 0.0;
    const double r = x.norm();
    const double a = c * std::abs(t);
    if (r < small_radius(a)) return t * f(a * a);
    return sgn(t) / (4.0 * c * r) * (F_anti((r + a) * (r + a)) - F_anti((r - a) * (r - a)));
}

double radial_single_convolution_dt(const Vec3& x, double t, const std::function<double(double)>& f,
                                    const std::function<double(double)>& df, double c) {
    const double r = x.norm();
    const double a = c * std::abs(t);
    if (r < small_radius(a)) return f(a * a) + 2.0 * a * a * df(a * a);
    const double rp = r + a;
    const double rm = r - a;
    return (rp * f(rp * rp) + rm * f(rm * rm)) / (2.0 * r);
}

}  // namespace wavegp
