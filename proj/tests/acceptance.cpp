// Runs every acceptance criterion and prints one PASS/FAIL line for each.
// Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "wavegp/cli.hpp"
#include "wavegp/config.hpp"
#include "wavegp/fdtd.hpp"
#include "wavegp/gpr.hpp"
#include "wavegp/hyperopt.hpp"
#include "wavegp/kernels.hpp"
#include "wavegp/oracles.hpp"
#include "wavegp/pointsource.hpp"
#include "wavegp/reconstruct.hpp"

using namespace wavegp;
namespace fs = std::filesystem;

namespace {

const double kPi = boost::math::constants::pi<double>();
const double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt(const char* f, double a, double b) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Vec3 random_direction(std::mt19937_64& rng) {
    std::normal_distribution<double> n;
    Vec3 d(n(rng), n(rng), n(rng));
    return d.normalized();
}

double uni(std::mt19937_64& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

Config case1_config() { return Config::load(fs::path(WAVEGP_SOURCE_DIR) / "configs" / "case1.cfg"); }

SensorDataset case1_dataset(const Config& cfg) {
    const FDTDConfig fc = fdtd_config_from(cfg);
    const ScalarField3D grid = fdtd_grid(fc);
    const auto sensors =
        latin_hypercube_layout(static_cast<std::size_t>(cfg.get_int("layout.sensors", 30)), cfg.get_vec3("layout.lo"),
                               cfg.get_vec3("layout.hi"), static_cast<std::size_t>(cfg.get_int("layout.restarts", 1000)),
                               cfg.get_seed("layout.seed", 11));
    const SensorDataset clean = simulate(fc, make_ic(initial_condition_from(cfg, "ic.u"), grid),
                                         make_ic(initial_condition_from(cfg, "ic.v"), grid), sensors);
    return add_noise(clean, cfg.get_double("noise.sigma"), cfg.get_seed("noise.seed", 7));
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(101);
    OracleOptions opts;
    opts.n_quad = 64;
    opts.n_phi = 4;  // radial kernels in a pole-aligned frame do not vary in azimuth

    double worst_v = 0.0;
    int n_v = 0;
    while (n_v < 100) {
        RadialVKernel k;
        k.x0 = Vec3(uni(rng, 0.3, 0.7), uni(rng, 0.3, 0.7), uni(rng, 0.3, 0.7));
        k.R = uni(rng, 0.15, 0.35);
        k.K = Matern52{uni(rng, 0.05, 0.5), uni(rng, 0.5, 3.0)};
        k.c = uni(rng, 0.3, 1.0);
        const SpaceTimePoint z(k.x0 + uni(rng, 0.02, 0.5) * random_direction(rng), uni(rng, -0.8, 0.8));
        const SpaceTimePoint zp(k.x0 + uni(rng, 0.02, 0.5) * random_direction(rng), uni(rng, -0.8, 0.8));
        const double val = kv_wave(z, zp, k);
        const double scale = std::sqrt(kv_wave(z, z, k) * kv_wave(zp, zp, k));
        if (!(std::abs(val) > 1e-3 * scale)) continue;
        const Matern52 m = k.K;
        const double R2 = k.R * k.R;
        const Vec3 x0 = k.x0;
        const SpatialKernel kinit = [m, R2, x0](const Vec3& y, const Vec3& yp) {
            const double s = (y - x0).squaredNorm();
            const double sp = (yp - x0).squaredNorm();
            if (s >= R2 || sp >= R2) return 0.0;
            return -m.d2(s - sp);
        };
        opts.frame = SphereFrame{k.x0, {k.R}, true};
        const double ref = kirchhoff_oracle(z, zp, kinit, k.c, opts);
        worst_v = std::max(worst_v, std::abs(val - ref) / std::abs(ref));
        ++n_v;
    }

    double worst_u = 0.0;
    int n_u = 0;
    while (n_u < 100) {
        RadialUKernel k;
        k.x0 = Vec3(uni(rng, 0.3, 0.7), uni(rng, 0.3, 0.7), uni(rng, 0.3, 0.7));
        k.R = uni(rng, 0.15, 0.35);
        k.k0 = Matern52{uni(rng, 0.05, 0.5), uni(rng, 0.5, 3.0)};
        k.c = uni(rng, 0.3, 1.0);
        auto tval = [&] {
            const double a = uni(rng, 0.01, 0.8);
            return uni(rng, 0.0, 1.0) < 0.5 ? -a : a;
        };
        const SpaceTimePoint z(k.x0 + uni(rng, 0.02, 0.5) * random_direction(rng), tval());
        const SpaceTimePoint zp(k.x0 + uni(rng, 0.02, 0.5) * random_direction(rng), tval());
        const double val = ku_wave(z, zp, k);
        const double scale = std::sqrt(ku_wave(z, z, k) * ku_wave(zp, zp, k));
        if (!(std::abs(val) > 1e-3 * scale)) continue;
        const RadialUKernel kk = k;
        const SpatialKernel kinit = [kk](const Vec3& y, const Vec3& yp) {
            return kk.spatial((y - kk.x0).squaredNorm(), (yp - kk.x0).squaredNorm());
        };
        opts.frame = SphereFrame{k.x0, {k.trunc.alpha * k.R, k.R}, true};
        const double ref = kirchhoff_oracle_dtdt(z, zp, kinit, k.c, opts, 1e-4);
        worst_u = std::max(worst_u, std::abs(val - ref) / std::abs(ref));
        ++n_u;
    }
    const double secs = seconds_since(t0);
    Outcome o;
    o.pass = worst_v < 1e-6 && worst_u < 1e-4 && secs < 120.0;
    o.detail = fmt("max rel err v %.2e, u %.2e", worst_v, worst_u) + fmt(", %.1f s", secs);
    return o;
}

// ---------------------------------------------------------------------------

Hyperparameters random_uv_theta(std::mt19937_64& rng) {
    Hyperparameters th;
    th.c = uni(rng, 0.3, 0.8);
    th.u_part = RadialPart{Vec3(uni(rng, 0.3, 0.7), uni(rng, 0.3, 0.7), uni(rng, 0.3, 0.7)), uni(rng, 0.15, 0.4),
                           uni(rng, 0.3, 1.0), uni(rng, 0.5, 3.0)};
    th.v_part = RadialPart{Vec3(uni(rng, 0.3, 0.7), uni(rng, 0.3, 0.7), uni(rng, 0.3, 0.7)), uni(rng, 0.15, 0.4),
                           uni(rng, 0.3, 1.0), uni(rng, 0.5, 3.0)};
    th.lambda = 1e-2;
    return th;
}

// Radius bands [lo, hi] where a radial profile is not smooth: the support edge
// of v, and the whole smoothstep band [alpha R, R] of u, whose third derivative
// jumps at both ends.
struct Band {
    double lo;
    double hi;
};

// true when r keeps r_min and r +- c|t| keep r_min / 5 away from 0, and r +- c|t|
// keep gap away from the band
bool clear_of_kinks(double r, double t, double c, Band band, double gap, double r_min) {
    const double a = c * std::abs(t);
    if (r < r_min || std::abs(t) < gap) return false;
    for (double s : {r + a, std::abs(r - a)}) {
        if (s < r_min / 5.0) return false;
        if (s > band.lo - gap && s < band.hi + gap) return false;
    }
    return true;
}

// c^-2 d_tt f - Laplacian f by second-order central differences
double dalembertian(const std::function<double(const SpaceTimePoint&)>& f, const SpaceTimePoint& z, double c,
                    double h, double* magnitude) {
    const double f0 = f(z);
    double mag = std::abs(f0);
    auto at = [&](const Vec3& dx, double dt) {
        const double v = f(SpaceTimePoint(z.x + dx, z.t + dt));
        mag = std::max(mag, std::abs(v));
        return v;
    };
    const double ftt = (at(Vec3::Zero(), h) - 2.0 * f0 + at(Vec3::Zero(), -h)) / (h * h);
    double lap = 0.0;
    for (int d = 0; d < 3; ++d) {
        Vec3 e = Vec3::Zero();
        e[d] = h;
        lap += (at(e, 0.0) - 2.0 * f0 + at(-e, 0.0)) / (h * h);
    }
    *magnitude = mag;
    return ftt / (c * c) - lap;
}

Outcome criterion2() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(202);
    double worst_eig = kInf;
    for (int g = 0; g < 50; ++g) {
        const WaveKernelModel model(random_uv_theta(rng));
        std::vector<SpaceTimePoint> pts;
        for (int i = 0; i < 200; ++i)
            pts.emplace_back(Vec3(uni(rng, 0, 1), uni(rng, 0, 1), uni(rng, 0, 1)), uni(rng, -1.5, 1.5));
        const Eigen::MatrixXd K = assemble_gram(model, pts);
        const double tr = K.trace();
        const double lmin = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(K, Eigen::EigenvaluesOnly).eigenvalues()[0];
        worst_eig = std::min(worst_eig, lmin / tr);
    }

    const double h = 1e-3;
    // the stencil error of a one-sided spherical wave g(r - ct)/r grows like h^2/r^4
    const double gap = 0.02;
    const double r_min = 0.25;
    auto sample_point = [&](const Hyperparameters& th) {
        while (true) {
            const SpaceTimePoint z(Vec3(uni(rng, 0.1, 0.9), uni(rng, 0.1, 0.9), uni(rng, 0.1, 0.9)), uni(rng, -1.0, 1.0));
            const double ru = (z.x - th.u_part->x0).norm();
            const double rv = (z.x - th.v_part->x0).norm();
            if (clear_of_kinks(ru, z.t, th.c, Band{0.8 * th.u_part->R, th.u_part->R}, gap, r_min) &&
                clear_of_kinks(rv, z.t, th.c, Band{th.v_part->R, th.v_part->R}, gap, r_min))
                return z;
        }
    };

    double worst_section = 0.0;
    int n_sec = 0;
    while (n_sec < 20) {
        const Hyperparameters th = random_uv_theta(rng);
        const WaveKernelModel model(th);
        const SpaceTimePoint zp(Vec3(uni(rng, 0.2, 0.8), uni(rng, 0.2, 0.8), uni(rng, 0.2, 0.8)), uni(rng, -1.0, 1.0));
        const SpaceTimePoint z = sample_point(th);
        double mag = 0.0;
        const double box = dalembertian([&](const SpaceTimePoint& q) { return model(q, zp); }, z, th.c, h, &mag);
        if (!(mag > 1e-6 * std::sqrt(model(zp, zp) * model(z, z)))) continue;
        worst_section = std::max(worst_section, std::abs(box) / mag);
        ++n_sec;
    }

    double worst_mean = 0.0;
    int n_mean = 0;
    while (n_mean < 20) {
        const Hyperparameters th = random_uv_theta(rng);
        const WaveKernelModel model(th);
        std::vector<SpaceTimePoint> pts;
        Eigen::VectorXd w(60);
        for (int i = 0; i < 60; ++i) {
            pts.emplace_back(Vec3(uni(rng, 0.2, 0.8), uni(rng, 0.2, 0.8), uni(rng, 0.2, 0.8)), uni(rng, 0.0, 1.0));
            w[i] = uni(rng, -1.0, 1.0);
        }
        const FittedModel fm(model, pts, w);
        const SpaceTimePoint z = sample_point(th);
        double mag = 0.0;
        const double box = dalembertian([&](const SpaceTimePoint& q) { return fm.mean(q); }, z, th.c, h, &mag);
        if (!(mag > 1e-6)) continue;
        worst_mean = std::max(worst_mean, std::abs(box) / mag);
        ++n_mean;
    }
    const double secs = seconds_since(t0);
    Outcome o;
    o.pass = worst_eig >= -1e-8 && worst_section <= 1e-3 && worst_mean <= 1e-3 && secs < 300.0;
    o.detail = fmt("min eig/trace %.2e", worst_eig) + fmt(", box k %.2e, box mean %.2e", worst_section, worst_mean) +
               fmt(", %.1f s", secs);
    return o;
}

// ---------------------------------------------------------------------------

Outcome criterion3() {
    std::mt19937_64 rng(303);
    int nonzero = 0;
    for (int i = 0; i < 1000; ++i) {
        const double c = uni(rng, 0.2, 1.0);
        const double R = uni(rng, 0.05, 0.4);
        const Vec3 x0(uni(rng, 0, 1), uni(rng, 0, 1), uni(rng, 0, 1));
        // outside the shell: either r > R + c|t| or r < c|t| - R
        const double t = uni(rng, -2.0, 2.0);
        const double a = c * std::abs(t);
        double r;
        if (a > R + 1e-3 && uni(rng, 0, 1) < 0.5)
            r = uni(rng, 0.0, a - R - 1e-6);
        else
            r = a + R + uni(rng, 1e-6, 1.0);
        const SpaceTimePoint z(x0 + r * random_direction(rng), t);
        RadialVKernel kv;
        kv.x0 = x0;
        kv.R = R;
        kv.K = Matern52{uni(rng, 0.05, 1.0), uni(rng, 0.5, 3.0)};
        kv.c = c;
        RadialUKernel ku;
        ku.x0 = x0;
        ku.R = R;
        ku.k0 = Matern52{uni(rng, 0.05, 1.0), uni(rng, 0.5, 3.0)};
        ku.c = c;
        const double r_true = (z.x - x0).norm();
        if ((r_true - a) * (r_true - a) <= R * R) continue;
        if (kv_wave(z, z, kv) != 0.0) ++nonzero;
        if (ku_wave(z, z, ku) != 0.0) ++nonzero;
    }
    Outcome o;
    o.pass = nonzero == 0;
    o.detail = std::to_string(nonzero) + " nonzero variances outside the light shells in 1000 samples";
    return o;
}

// ---------------------------------------------------------------------------

double stationary_reference(const Vec3& h, double t, double tp, double C, double L, double c) {
    const double hn = h.norm();
    const double lo = c * std::abs(std::abs(t) - std::abs(tp));
    const double hi = c * (std::abs(t) + std::abs(tp));
    if (t == 0.0 || tp == 0.0) return 0.0;
    // shell density times the spherical mean of the Gaussian about h
    auto integrand = [&](double rho) {
        const double density = ((t > 0) == (tp > 0) ? 1.0 : -1.0) / (8.0 * kPi * c * c * rho);
        const double mean = C * L * L / (2.0 * hn * rho) * std::exp(-(rho - hn) * (rho - hn) / (2 * L * L)) *
                            -std::expm1(-2.0 * rho * hn / (L * L));
        return density * 4.0 * kPi * rho * rho * mean;
    };
    double err = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, lo, hi, 20, 1e-14, &err);
}

Outcome criterion4() {
    std::mt19937_64 rng(404);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double c = uni(rng, 0.3, 1.5);
        const double L = uni(rng, 0.05, 0.5);
        const double C = uni(rng, 0.5, 3.0);
        const double t = uni(rng, -1.0, 1.0);
        const double tp = uni(rng, -1.0, 1.0);
        const Vec3 h = uni(rng, 0.01, 1.0) * random_direction(rng);
        const double val = gaussian_stationary_wave(h, t, tp, C, L, c);
        const double ref = stationary_reference(h, t, tp, C, L, c);
        const double scale = std::max(std::abs(ref), 1e-12 * C * std::abs(t * tp));
        worst = std::max(worst, std::abs(val - ref) / scale);
    }

    // support bounds and sign, with values exact in binary
    bool exact = true;
    const double c = 1.0;
    for (double t : {1.0, -1.0})
        for (double tp : {0.5, -0.5}) {
            const double sign = (t > 0) == (tp > 0) ? 1.0 : -1.0;
            exact &= ft_ft_density(Vec3(0.5, 0, 0), t, tp, c) == sign / (8.0 * kPi * c * c * 0.5);
            exact &= ft_ft_density(Vec3(0, 1.5, 0), t, tp, c) == sign / (8.0 * kPi * c * c * 1.5);
            exact &= ft_ft_density(Vec3(0, 0, 1.0), t, tp, c) == sign / (8.0 * kPi * c * c * 1.0);
            exact &= ft_ft_density(Vec3(std::nextafter(0.5, 0.0), 0, 0), t, tp, c) == 0.0;
            exact &= ft_ft_density(Vec3(0, std::nextafter(1.5, 2.0), 0), t, tp, c) == 0.0;
        }
    Outcome o;
    o.pass = worst < 1e-8 && exact;
    o.detail = fmt("max rel err %.2e", worst) + (exact ? ", density support/sign exact" : ", density support/sign WRONG");
    return o;
}

// ---------------------------------------------------------------------------

Outcome criterion5() {
    // small-lambda expansion of the rank-one likelihood
    const MollifiedGreen g(0.05, 0.5);
    const std::vector<Vec3> sensors{Vec3(0.2, 0.2, 0.2), Vec3(0.8, 0.3, 0.4), Vec3(0.3, 0.8, 0.6), Vec3(0.6, 0.6, 0.9)};
    const Vec3 x0_true(0.45, 0.5, 0.5);
    std::vector<double> times(200);
    for (std::size_t k = 0; k < times.size(); ++k) times[k] = 2.0 * static_cast<double>(k) / 199.0;
    const Eigen::VectorXd W = signature_vector(sensors, times, x0_true, g);
    const Eigen::VectorXd F = signature_vector(sensors, times, Vec3(0.47, 0.49, 0.52), g);
    std::vector<double> ratios;
    for (double lam : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6})
        ratios.push_back(std::abs(lam * nlml_rank_one(W, F, lam) - limit_objective(W, F)) / (lam * std::abs(std::log(lam))));
    const double spread = *std::max_element(ratios.begin(), ratios.end()) / *std::min_element(ratios.begin(), ratios.end());
    const bool spread_ok = spread <= 3.0;

    // continuous-time limit: pulses are still running at t = T, so the Riemann
    // sums carry an O(1/N) endpoint error
    const MollifiedGreen g8(0.1, 0.5);
    const double T = 1.0;
    const Vec3 xs(0.5, 0.5, 0.5);
    const std::vector<Vec3> s8{xs + Vec3(0.5, 0, 0), xs + Vec3(0, -0.48, 0.1), xs + Vec3(-0.2, 0.3, -0.35),
                               xs + Vec3(0.1, 0.2, 0.46)};
    const Vec3 xc = xs + Vec3(0.03, -0.02, 0.01);
    const double r_inf = continuous_correlation(s8, xs, xc, g8, T);
    std::vector<double> diffs;
    for (int N : {25, 50, 100, 200}) {
        std::vector<double> tk(static_cast<std::size_t>(N));
        for (int k = 0; k < N; ++k) tk[static_cast<std::size_t>(k)] = T * k / (N - 1.0);
        diffs.push_back(std::abs(discrete_correlation(signature_vector(s8, tk, xs, g8), signature_vector(s8, tk, xc, g8)) - r_inf));
    }
    bool halving = true;
    std::string rs;
    for (std::size_t i = 1; i < diffs.size(); ++i) {
        const double q = diffs[i] / diffs[i - 1];
        halving &= q > 0.35 && q < 0.65;
        rs += fmt(" %.3f", q);
    }
    Outcome o;
    o.pass = spread_ok && halving;
    o.detail = fmt("rank-one limit ratio spread %.3f", spread) + ", sampling limit diff ratios" + rs + fmt(" (r_inf %.4f)", r_inf);
    return o;
}

// ---------------------------------------------------------------------------

Outcome criterion6() {
    const auto t0 = std::chrono::steady_clock::now();
    const double c = 0.5;
    const double R = 0.02;
    const MollifiedGreen g(R, c);
    const Vec3 x0(0.37, 0.61, 0.44);
    const std::vector<Vec3> sensors{Vec3(0.1, 0.1, 0.1), Vec3(0.9, 0.2, 0.3), Vec3(0.2, 0.85, 0.7), Vec3(0.75, 0.7, 0.95)};
    std::vector<double> times(200);
    for (std::size_t k = 0; k < times.size(); ++k) times[k] = 2.0 * static_cast<double>(k) / 199.0;
    const SensorDataset data = point_source_dataset(sensors, times, x0, g);

    const std::size_t n = 40;
    const double cell = 1.0 / static_cast<double>(n - 1);
    const ScalarField3D grid(Vec3::Zero(), cell, {n, n, n});
    const double lam = default_scan_lambda(flatten_observations(data));
    const ScanResult res = scan(data, g, grid, lam, 0.005);
    const bool argmin_ok = ((res.argmin - x0).cwiseAbs().array() <= cell).all();

    // arrival times from the traces
    std::vector<double> radii;
    for (std::size_t i = 0; i < sensors.size(); ++i) {
        Eigen::Index k = 0;
        data.values().row(static_cast<Eigen::Index>(i)).cwiseAbs().maxCoeff(&k);
        radii.push_back(c * times[static_cast<std::size_t>(k)]);
    }
    double worst = 0.0;
    for (std::size_t idx : res.threshold_set) {
        const Vec3 x = grid.node(idx);
        double best = kInf;
        for (std::size_t i = 0; i < sensors.size(); ++i) best = std::min(best, std::abs((x - sensors[i]).norm() - radii[i]));
        worst = std::max(worst, best);
    }
    const bool level_ok = worst <= 2 * R + cell;

    const ScanResult wrong = scan(data, MollifiedGreen(R, 0.8 * c), grid, lam, 0.005);
    const double min_true = res.grid[res.argmin_index];
    const double min_wrong = wrong.grid[wrong.argmin_index];
    const double secs = seconds_since(t0);
    Outcome o;
    o.pass = argmin_ok && level_ok && min_wrong > min_true && secs < 600.0;
    o.detail = fmt("argmin offset %.4f (cell %.4f)", (res.argmin - x0).cwiseAbs().maxCoeff(), cell) +
               fmt(", level set to spheres %.4f (limit %.4f)", worst, 2 * R + cell) +
               fmt(", min L %.6g vs wrong speed %.6g", min_true, min_wrong) + fmt(", %.1f s", secs);
    return o;
}

// ---------------------------------------------------------------------------

std::vector<double> fdtd_trace_errors(std::size_t nodes, double dt, const InitialCondition& v0,
                                      const std::vector<Vec3>& sensors) {
    FDTDConfig fc;
    fc.dx = 1.0 / static_cast<double>(nodes - 1);
    fc.dt = dt;
    fc.validate();
    const ScalarField3D grid = fdtd_grid(fc);
    const SensorDataset d = simulate(fc, make_ic(InitialCondition::zero(), grid), make_ic(v0, grid), sensors);
    std::vector<double> errs;
    for (std::size_t i = 0; i < sensors.size(); ++i) {
        double num = 0.0;
        double den = 0.0;
        for (std::size_t k = 0; k < d.num_times(); ++k) {
            const double e = v0.as_speed(sensors[i], d.times()[k], fc.c);
            num += std::pow(d.values()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) - e, 2);
            den += e * e;
        }
        errs.push_back(std::sqrt(num / den));
    }
    return errs;
}

Outcome criterion7() {
    const InitialCondition v0 = InitialCondition::raised(Vec3(0.5, 0.5, 0.5), 0.3, 1.0);
    std::vector<Vec3> sensors = latin_hypercube_layout(8, Vec3::Constant(0.2), Vec3::Constant(0.8), 200, 5);
    sensors.push_back(Vec3(0.5, 0.5, 0.5));
    const auto coarse = fdtd_trace_errors(24, 1.0 / 200.0, v0, sensors);
    const auto fine = fdtd_trace_errors(48, 1.0 / 400.0, v0, sensors);
    bool ok = true;
    double worst_coarse = 0.0;
    double worst_fine = 0.0;
    for (std::size_t i = 0; i < sensors.size(); ++i) {
        ok &= coarse[i] <= 0.05 && fine[i] < coarse[i];
        worst_coarse = std::max(worst_coarse, coarse[i]);
        worst_fine = std::max(worst_fine, fine[i]);
    }
    Outcome o;
    o.pass = ok;
    o.detail = fmt("max rel L2 trace error 24^3 %.4f, 48^3 %.4f", worst_coarse, worst_fine) +
               (ok ? ", every sensor improves" : "");
    return o;
}

// ---------------------------------------------------------------------------

Outcome criterion8(const SensorDataset& case1) {
    const auto t0 = std::chrono::steady_clock::now();
    Hyperparameters layout;
    layout.u_part = RadialPart{};
    MultistartConfig mc;
    mc.n_starts = 20;
    mc.max_evals_per_start = 500;
    mc.seed = 1;
    const MultistartResult r = multistart_fit(layout, case1.first_sensors(5), SearchBox::u_only_default(), mc, 0.8);
    const Hyperparameters& th = r.best_theta;
    const double dc = std::abs(th.c - 0.5);
    const double dx = (th.u_part->x0 - Vec3(0.5, 0.5, 0.5)).norm();
    const double R_star = 0.3;
    const double secs = seconds_since(t0);
    Outcome o;
    o.pass = dc <= 0.05 && dx <= 0.05 && th.u_part->R >= R_star - 0.05 && secs <= 1800.0;
    o.detail = fmt("|c-c*| %.4f, |x0-x0*| %.4f", dc, dx) + fmt(", R_u %.3f, rho %.3f", th.u_part->R, th.u_part->rho) +
               fmt(", lambda %.3f, %.1f s", th.lambda, secs);
    return o;
}

// ---------------------------------------------------------------------------

Outcome criterion9(const SensorDataset& case1) {
    const SensorDataset d15 = case1.first_sensors(15);
    Hyperparameters th;
    th.c = 0.5;
    th.u_part = RadialPart{Vec3(0.5, 0.5, 0.5), 0.3, 0.2, 3.0};
    th.lambda = 0.45 * 0.45;
    const FittedModel fm = fit(WaveKernelModel(th), d15);
    const InitialCondition u0 = InitialCondition::ring(Vec3(0.5, 0.5, 0.5), 0.15, 0.3, 5.0);
    const ScalarField3D grid = reconstruction_grid(u0.center, u0.support_radius(), 0.01, 0.1);
    const ScalarField3D est = reconstruct_u0(fm, grid);
    const double e2 = lp_relative_error(est, make_ic(u0, grid), 2.0);

    // linearity: doubling the data doubles the field bit for bit; sums agree to round-off
    const ScalarField3D small = reconstruction_grid(u0.center, u0.support_radius(), 0.05, 0.1);
    const Eigen::VectorXd w = flatten_observations(d15);
    const Eigen::VectorXd w2 = Eigen::VectorXd::LinSpaced(w.size(), -1.0, 1.0);
    const ScalarField3D a = reconstruct_u0(FittedModel(WaveKernelModel(th), d15.points(), w), small);
    const ScalarField3D b = reconstruct_u0(FittedModel(WaveKernelModel(th), d15.points(), 2.0 * w), small);
    const ScalarField3D c2 = reconstruct_u0(FittedModel(WaveKernelModel(th), d15.points(), w2), small);
    const ScalarField3D ab = reconstruct_u0(FittedModel(WaveKernelModel(th), d15.points(), 3.0 * w - 0.5 * w2), small);
    bool scale_exact = true;
    double lin_err = 0.0;
    double lin_scale = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        scale_exact &= b[i] == 2.0 * a[i];
        lin_err = std::max(lin_err, std::abs(ab[i] - (3.0 * a[i] - 0.5 * c2[i])));
        lin_scale = std::max(lin_scale, std::abs(ab[i]));
    }
    const bool linear = scale_exact && lin_err <= 1e-10 * lin_scale;

    // v-only model: the reconstructed displacement is identically zero
    Hyperparameters thv;
    thv.c = 0.5;
    thv.v_part = RadialPart{Vec3(0.5, 0.5, 0.5), 0.3, 0.2, 3.0};
    thv.lambda = th.lambda;
    const ScalarField3D uv = reconstruct_u0(fit(WaveKernelModel(thv), d15), small);
    bool v_zero = true;
    for (double x : uv.data()) v_zero &= x == 0.0;

    // u-only model: the reconstructed speed is O(dt_fd). Halving a step that is
    // large enough to dominate round-off halves it, so the time derivative at 0
    // vanishes; at the default step it is small against the displacement.
    const ScalarField3D us = reconstruct_u0(fm, small);
    auto max_abs = [](const ScalarField3D& f) {
        double m = 0.0;
        for (double x : f.data()) m = std::max(m, std::abs(x));
        return m;
    };
    const double umax = max_abs(us);
    const double v_big = max_abs(reconstruct_v0(fm, small, 1e-5));
    const double v_half = max_abs(reconstruct_v0(fm, small, 5e-6));
    const double v_default = max_abs(reconstruct_v0(fm, small, 1e-7));
    const double richardson = v_big / v_half;
    const bool u_zero = richardson > 1.8 && richardson < 2.2 && v_default <= 1e-3 * umax;

    Outcome o;
    o.pass = e2 <= 0.15 && linear && v_zero && u_zero;
    o.detail = fmt("e2,rel(u0) %.4f (limit 0.15)", e2) + (linear ? ", linear" : ", NOT linear") +
               (v_zero ? ", v-only u0 == 0" : ", v-only u0 != 0") + fmt(", u-only |v0|/|u0| %.1e", v_default / umax) + fmt(" (step-halving ratio %.3f)", richardson);
    return o;
}

// ---------------------------------------------------------------------------

Outcome criterion10() {
    const double c = 0.5;
    const double C1 = gradient_constant(1.0);
    const double C2 = gradient_constant(2.0);
    const double Cinf = gradient_constant(kInf);
    bool constants_ok = C1 <= 1.0 && C2 <= 3.0 && Cinf == 1.0;

    struct Instance {
        InitialCondition v0, v0_hat, u0, u0_hat;
    };
    const Vec3 ctr(0.5, 0.5, 0.5);
    const std::vector<Instance> instances{
        {InitialCondition::ring(ctr, 0.1, 0.3, 1.0), InitialCondition::zero(), InitialCondition::zero(), InitialCondition::zero()},
        {InitialCondition::zero(), InitialCondition::zero(), InitialCondition::raised(ctr, 0.2, 2.0), InitialCondition::zero()},
        {InitialCondition::ring(ctr, 0.1, 0.3, 1.0), InitialCondition::ring(Vec3(0.52, 0.5, 0.48), 0.12, 0.3, 0.9),
         InitialCondition::raised(Vec3(0.46, 0.54, 0.5), 0.2, 2.0), InitialCondition::raised(Vec3(0.5, 0.5, 0.5), 0.22, 1.8)},
        {InitialCondition::raised(Vec3(0.42, 0.5, 0.56), 0.18, 3.0), InitialCondition::raised(Vec3(0.44, 0.5, 0.56), 0.18, 3.0),
         InitialCondition::ring(Vec3(0.56, 0.48, 0.5), 0.05, 0.25, 1.5), InitialCondition::ring(Vec3(0.56, 0.48, 0.5), 0.06, 0.26, 1.3)},
    };
    auto zero_or = [](const InitialCondition& ic, const Vec3& x) { return ic.kind == ICKind::zero ? 0.0 : ic.value(x); };
    auto grad_or = [](const InitialCondition& ic, const Vec3& x) {
        return ic.kind == ICKind::zero ? Vec3(Vec3::Zero()) : ic.gradient(x);
    };
    auto speed_or = [c](const InitialCondition& ic, const Vec3& x, double t) {
        return ic.kind == ICKind::zero ? 0.0 : ic.as_speed(x, t, c);
    };
    auto disp_or = [c](const InitialCondition& ic, const Vec3& x, double t) {
        return ic.kind == ICKind::zero ? 0.0 : ic.as_displacement(x, t, c);
    };

    const ScalarField3D grid(Vec3::Constant(0.1), 0.02, {41, 41, 41});
    int checked = 0;
    int violated = 0;
    double tightest = 0.0;
    for (const auto& inst : instances)
        for (double t : {0.2, 0.5, 1.0})
            for (double p : {1.0, 2.0, kInf}) {
                const LpBoundReport rep = check_lp_bound(
                    [&](const Vec3& x) { return zero_or(inst.v0, x) - zero_or(inst.v0_hat, x); },
                    [&](const Vec3& x) { return zero_or(inst.u0, x) - zero_or(inst.u0_hat, x); },
                    [&](const Vec3& x) { return Vec3(grad_or(inst.u0, x) - grad_or(inst.u0_hat, x)); },
                    [&](const Vec3& x, double tt) {
                        return speed_or(inst.v0, x, tt) - speed_or(inst.v0_hat, x, tt) + disp_or(inst.u0, x, tt) -
                               disp_or(inst.u0_hat, x, tt);
                    },
                    grid, t, p, c, 1e-3);
                ++checked;
                if (!rep.satisfied) ++violated;
                if (rep.rhs > 0) tightest = std::max(tightest, rep.lhs / rep.rhs);
            }
    Outcome o;
    o.pass = constants_ok && violated == 0;
    o.detail = std::to_string(checked - violated) + "/" + std::to_string(checked) + " bounds hold" +
               fmt(", tightest lhs/rhs %.4f", tightest) + fmt(", C_1 %.4f, C_2 %.4f", C1, C2);
    return o;
}

// ---------------------------------------------------------------------------

bool same_tree(const fs::path& a, const fs::path& b, std::string& diff) {
    std::vector<fs::path> fa;
    for (const auto& e : fs::recursive_directory_iterator(a))
        if (e.is_regular_file()) fa.push_back(fs::relative(e.path(), a));
    std::sort(fa.begin(), fa.end());
    std::size_t nb = 0;
    for (const auto& e : fs::recursive_directory_iterator(b))
        if (e.is_regular_file()) ++nb;
    if (fa.size() != nb) {
        diff = "file counts differ";
        return false;
    }
    for (const auto& rel : fa) {
        if (!fs::exists(b / rel) || read_text_file(a / rel) != read_text_file(b / rel)) {
            diff = rel.string();
            return false;
        }
    }
    return true;
}

int run_pipeline(const fs::path& dir) {
    fs::create_directories(dir);
    const std::string cfg = (fs::path(WAVEGP_SOURCE_DIR) / "configs" / "case1.cfg").string();
    const std::string d = (dir / "d.csv").string();
    const std::string th = (dir / "theta.json").string();
    int rc = 0;
    rc |= run({"wavegp", "simulate", "--config", cfg, "--seed", "7", "--out", d});
    rc |= run({"wavegp", "fit", "--config", cfg, "--dataset", d, "--model", "u", "--multistart", "3", "--max-evals",
               "80", "--sensors", "4", "--seed", "5", "--out", th, "--results", (dir / "starts.csv").string()});
    fs::create_directories(dir / "rec");
    rc |= run({"wavegp", "reconstruct", "--config", cfg, "--set", "reconstruct.dx=0.04", "--dataset", d, "--theta", th,
               "--sensors", "4", "--out-dir", (dir / "rec").string()});
    rc |= run({"wavegp", "coherence", "--config", cfg, "--theta", th, "--dataset", d, "--out",
               (dir / "coherence.csv").string()});
    write_text_file(dir / "pairs.csv", "x,y,z,t,xp,yp,zp,tp\n0.4,0.5,0.6,0.3,0.5,0.5,0.5,0.7\n0.1,0.2,0.3,1.0,0.5,0.6,0.4,0.2\n");
    rc |= run({"wavegp", "kernel-eval", "--theta", th, "--pairs", (dir / "pairs.csv").string(), "--out",
               (dir / "values.csv").string()});
    const std::string ps = (dir / "ps.csv").string();
    rc |= run({"wavegp", "simulate", "--set", "simulate.mode=point_source", "--set", "source.x0=0.4,0.6,0.5", "--set",
               "layout.sensors=4", "--set", "noise.sigma=0.001", "--set", "layout.restarts=50", "--out", ps});
    fs::create_directories(dir / "loc");
    rc |= run({"wavegp", "locate", "--set", "locate.grid=16", "--dataset", ps, "--out-dir", (dir / "loc").string()});
    return rc;
}

Outcome criterion11() {
    const fs::path base = fs::temp_directory_path() / "wavegp_acceptance_determinism";
    fs::remove_all(base);
    // both runs use the same path, since manifests record their arguments
    const int rc1 = run_pipeline(base / "run");
    fs::rename(base / "run", base / "a");
    const int rc2 = run_pipeline(base / "run");
    fs::rename(base / "run", base / "b");
    std::string diff;
    const bool same = rc1 == 0 && rc2 == 0 && same_tree(base / "a", base / "b", diff);
    fs::remove_all(base);
    Outcome o;
    o.pass = same;
    o.detail = same ? "simulate, fit, reconstruct, coherence, kernel-eval, locate outputs identical across two runs"
                    : "outputs differ: " + (diff.empty() ? std::string("a stage failed") : diff);
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
    auto wanted = [&](int n) { return only.empty() || std::find(only.begin(), only.end(), n) != only.end(); };

    int failures = 0;
    auto report = [&](int n, const char* name, const std::function<Outcome()>& f) {
        if (!wanted(n)) return;
        Outcome o;
        try {
            o = f();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        if (!o.pass) ++failures;
        std::printf("criterion %2d %-4s %-34s %s\n", n, o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
        std::fflush(stdout);
    };

    report(1, "kernel-oracle equivalence", criterion1);
    report(2, "PSD and annihilation", criterion2);
    report(3, "strong Huygens zeros", criterion3);
    report(4, "stationary formulas", criterion4);
    report(5, "likelihood limits", criterion5);
    report(6, "multilateration", criterion6);
    report(7, "FDTD validation", criterion7);
    SensorDataset case1;
    if (wanted(8) || wanted(9)) case1 = case1_dataset(case1_config());
    report(8, "parameter estimation", [&] { return criterion8(case1); });
    report(9, "reconstruction quality", [&] { return criterion9(case1); });
    report(10, "Lp stability bounds", criterion10);
    report(11, "determinism", criterion11);
    return failures == 0 ? 0 : 1;
}
