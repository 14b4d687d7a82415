#pragma once

#include <array>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "wavegp/core.hpp"

namespace wavegp {

// sigma2 (1 + a + a^2/3) exp(-a), a = |h| / rho.
struct Matern52 {
    double rho = 1.0;
    double sigma2 = 1.0;

    double operator()(double h) const;
    double d1(double h) const;  // odd in h
    double d2(double h) const;
};

double matern52(double h, const Matern52& k);

// C^1 decreasing cutoff: 1 below alpha, 0 from 1 on, cubic Hermite in between.
struct TruncationProfile {
    double alpha = 0.8;

    double value(double s) const;
    double deriv(double s) const;
};

// v part of the kernel: K_v(s, s') = m(s - s') on squared radii, clamped at R^2.
struct RadialVKernel {
    Vec3 x0 = Vec3::Zero();
    double R = std::numeric_limits<double>::infinity();
    Matern52 K;
    double c = 1.0;
};

// u part: k_u0(s, s') = m(s - s') damped by phi(sqrt(s)/R) phi(sqrt(s')/R).
struct RadialUKernel {
    Vec3 x0 = Vec3::Zero();
    double R = std::numeric_limits<double>::infinity();
    Matern52 k0;
    double c = 1.0;
    TruncationProfile trunc;

    // Truncated spatial kernel on squared radii about x0.
    double spatial(double s, double sp) const;
};

double kv_wave(const SpaceTimePoint& z, const SpaceTimePoint& zp, const RadialVKernel& k);
double ku_wave(const SpaceTimePoint& z, const SpaceTimePoint& zp, const RadialUKernel& k);

// Per-point data for fast repeated evaluation. Each kernel evaluation is a
// bilinear form sum_ij w_i w_j D(s_i - s_j) over at most two terms per point,
// where D is m or one of its derivatives depending on the term orders.
struct KernelTerms {
    int count = 0;
    std::array<double, 2> w{};
    std::array<double, 2> s{};
    std::array<int, 2> order{};
};

KernelTerms v_terms(const SpaceTimePoint& z, const RadialVKernel& k);
KernelTerms u_terms(const SpaceTimePoint& z, const RadialUKernel& k);
double pair_form(const KernelTerms& a, const KernelTerms& b, const Matern52& m);

class WaveKernelModel {
public:
    WaveKernelModel() = default;
    explicit WaveKernelModel(const Hyperparameters& theta, double alpha = 0.8);

    const Hyperparameters& theta() const { return theta_; }
    const std::optional<RadialVKernel>& v_kernel() const { return v_; }
    const std::optional<RadialUKernel>& u_kernel() const { return u_; }

    double operator()(const SpaceTimePoint& z, const SpaceTimePoint& zp) const;

    struct Features {
        KernelTerms v;
        KernelTerms u;
    };
    Features features(const SpaceTimePoint& z) const;
    double operator()(const Features& a, const Features& b) const;

private:
    Hyperparameters theta_;
    std::optional<RadialVKernel> v_;
    std::optional<RadialUKernel> u_;
};

double wave_kernel(const SpaceTimePoint& z, const SpaceTimePoint& zp, const WaveKernelModel& m);

// Density of F_t * F_t' at h. Throws at h = 0.
double ft_ft_density(const Vec3& h, double t, double tp, double c);

// (F_t * F_t' * k_S)(h) for k_S(x) = C exp(-|x|^2 / 2L^2).
double gaussian_stationary_wave(const Vec3& h, double t, double tp, double C, double L, double c);

// (F_t * g)(x) for g(y) = f(|y|^2), given an antiderivative F of f and f itself
// (used at x = 0).
double radial_single_convolution(const Vec3& x, double t, const std::function<double(double)>& F_anti,
                                 const std::function<double(double)>& f, double c);

// (d/dt F_t * g)(x): solution with initial displacement g and zero speed.
// df is f' (only used at x = 0).
double radial_single_convolution_dt(const Vec3& x, double t, const std::function<double(double)>& f,
                                    const std::function<double(double)>& df, double c);

}  // namespace wavegp
