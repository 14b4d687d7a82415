#include "wavegp/pointsource.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/constants/constants.hpp>

#include "wavegp/parallel.hpp"
#include "wavegp/quadrature.hpp"

namespace wavegp {

namespace {

double bump(double u) { return u < 1.0 ? std::exp(-1.0 / (1.0 - u * u)) : 0.0; }

// Q(u) = int_0^u v psi(v) dv for the normalized bump psi, as a cubic Hermite
// table with exact slopes u psi(u).
class BumpTable {
public:
    static const BumpTable& get() {
        static const BumpTable table;
        return table;
    }

    double psi(double u) const { return bump(u) / Z_; }

    double Q(double u) const {
        if (u <= 0.0) return 0.0;
        if (u >= 1.0) return q_.back();
        const double x = u * kIntervals;
        auto k = static_cast<std::size_t>(x);
        if (k >= kIntervals) k = kIntervals - 1;
        const double tau = x - static_cast<double>(k);
        const double h = 1.0 / kIntervals;
        const double t2 = tau * tau;
        const double t3 = t2 * tau;
        return (2 * t3 - 3 * t2 + 1) * q_[k] + (t3 - 2 * t2 + tau) * h * d_[k] + (-2 * t3 + 3 * t2) * q_[k + 1] +
               (t3 - t2) * h * d_[k + 1];
    }

private:
    static constexpr std::size_t kIntervals = 4096;

    BumpTable() {
        const GaussRule& g = gauss_legendre(12);
        auto panel = [&](double a, double b, auto&& f) {
            double acc = 0.0;
            for (std::size_t i = 0; i < g.nodes.size(); ++i)
                acc += g.weights[i] * f(0.5 * (a + b) + 0.5 * (b - a) * g.nodes[i]);
            return 0.5 * (b - a) * acc;
        };
        const double pi = boost::math::constants::pi<double>();
        double z = 0.0;
        q_.assign(kIntervals + 1, 0.0);
        d_.assign(kIntervals + 1, 0.0);
        std::vector<double> raw(kIntervals + 1, 0.0);
        for (std::size_t k = 0; k < kIntervals; ++k) {
            const double a = static_cast<double>(k) / kIntervals;
            const double b = static_cast<double>(k + 1) / kIntervals;
            z += panel(a, b, [](double u) { return u * u * bump(u); });
            raw[k + 1] = raw[k] + panel(a, b, [](double u) { return u * bump(u); });
        }
        Z_ = 4.0 * pi * z;
        for (std::size_t k = 0; k <= kIntervals; ++k) {
            const double u = static_cast<double>(k) / kIntervals;
            q_[k] = raw[k] / Z_;
            d_[k] = u * bump(u) / Z_;
        }
    }

    double Z_ = 1.0;
    std::vector<double> q_;
    std::vector<double> d_;
};

}  // namespace

MollifiedGreen::MollifiedGreen(double R, double c) : R_(R), c_(c) {
    if (!(R > 0.0)) throw InputError("mollification radius must be positive");
    if (!(c > 0.0)) throw InputError("wave speed must be positive");
    BumpTable::get();
}

double MollifiedGreen::mollifier(double s) const { return BumpTable::get().psi(s / R_) / (R_ * R_ * R_); }

double MollifiedGreen::P(double s) const { return BumpTable::get().Q(s / R_) / R_; }

double MollifiedGreen::radial(double r, double t) const {
    if (t == 0.0) return 0.0;
    const double a = c_ * std::abs(t);
    if (std::abs(r - a) >= R_) return 0.0;
    if (r < 1e-7 * R_) return t * mollifier(a);
    return t / (2.0 * r * a) * (P(r + a) - P(std::abs(r - a)));
}

double MollifiedGreen::operator()(const Vec3& x, double t) const { return radial(x.norm(), t); }

double mollified_green(const Vec3& x, double t, const MollifiedGreen& g) { return g(x, t); }

Eigen::VectorXd signature_vector(const std::vector<Vec3>& sensors, const std::vector<double>& times, const Vec3& x0,
                                 const MollifiedGreen& g) {
    const std::size_t N = times.size();
    Eigen::VectorXd F(static_cast<Eigen::Index>(sensors.size() * N));
    for (std::size_t i = 0; i < sensors.size(); ++i) {
        const double r = (sensors[i] - x0).norm();
        for (std::size_t j = 0; j < N; ++j) F[static_cast<Eigen::Index>(i * N + j)] = g.radial(r, times[j]);
    }
    return F;
}

SensorDataset point_source_dataset(const std::vector<Vec3>& sensors, const std::vector<double>& times, const Vec3& x0,
                                   const MollifiedGreen& g) {
    const Eigen::VectorXd F = signature_vector(sensors, times, x0, g);
    return SensorDataset(sensors, times, unflatten_observations(F, sensors.size(), times.size()));
}

double nlml_rank_one(const Eigen::VectorXd& W, const Eigen::VectorXd& F, double lambda) {
    if (!(lambda > 0.0)) throw InputError("lambda must be positive");
    if (W.size() != F.size()) throw InputError("W and F must have equal length");
    const double ww = W.squaredNorm();
    const double ff = F.squaredNorm();
    const double fw = F.dot(W);
    const auto n = static_cast<double>(W.size());
    return (ww - fw * fw / (lambda + ff)) / lambda + (n - 1.0) * std::log(lambda) + std::log(lambda + ff);
}

double discrete_correlation(const Eigen::VectorXd& W, const Eigen::VectorXd& F) {
    const double nw = W.norm();
    const double nf = F.norm();
    if (nf == 0.0 || nw == 0.0) return 0.0;
    return F.dot(W) / (nw * nf);
}

double limit_objective(const Eigen::VectorXd& W, const Eigen::VectorXd& F) {
    if (!(W.squaredNorm() > 0.0)) throw InputError("limit objective needs nonzero observations");
    const double r = discrete_correlation(W, F);
    return W.squaredNorm() * (1.0 - r * r);
}

double continuous_correlation(const std::vector<Vec3>& sensors, const Vec3& x0_true, const Vec3& x0,
                              const MollifiedGreen& g, double T) {
    if (!(T > 0.0)) throw InputError("observation window must be positive");
    const double c = g.c();
    const double R = g.R();
    auto window = [&](double d) { return std::make_pair(std::max(0.0, (d - R) / c), std::min(T, (d + R) / c)); };
    auto integral = [&](double d1, double d2, double abs_tol) {
        const auto w1 = window(d1);
        const auto w2 = window(d2);
        const double lo = std::max(w1.first, w2.first);
        const double hi = std::min(w1.second, w2.second);
        if (!(hi > lo)) return 0.0;
        return integrate([&](double t) { return g.radial(d1, t) * g.radial(d2, t); }, lo, hi, abs_tol, 1e-10);
    };
    double ww = 0.0;
    double ff = 0.0;
    double fw = 0.0;
    for (const auto& s : sensors) {
        const double dw = (s - x0_true).norm();
        const double df = (s - x0).norm();
        const double a = integral(dw, dw, 0.0);
        const double b = integral(df, df, 0.0);
        ww += a;
        ff += b;
        // cross terms may cancel; measure their accuracy against |f_w| |f|
        fw += integral(dw, df, 1e-12 * std::sqrt(a * b));
    }
    if (!(ff > 0.0)) throw InputError("invisible candidate position: no sensor hears it within [0, T]");
    if (!(ww > 0.0)) throw InputError("true source is invisible to every sensor");
    return fw / std::sqrt(ww * ff);
}

double default_scan_lambda(const Eigen::VectorXd& W) {
    return 1e-6 * W.squaredNorm() / static_cast<double>(W.size());
}

ScanResult scan(const SensorDataset& data, const MollifiedGreen& g, const ScalarField3D& grid, double lambda,
                double quantile) {
    if (!(quantile > 0.0 && quantile <= 1.0)) throw InputError("quantile must lie in (0, 1]");
    if (!(lambda > 0.0)) throw InputError("lambda must be positive");
    const Eigen::VectorXd W = flatten_observations(data);
    const std::size_t N = data.num_times();
    ScanResult res;
    res.grid = grid;
    parallel_for(grid.size(), [&](std::size_t idx) {
        const Vec3 x0 = grid.node(idx);
        double ff = 0.0;
        double fw = 0.0;
        for (std::size_t i = 0; i < data.num_sensors(); ++i) {
            const double r = (data.sensors()[i] - x0).norm();
            for (std::size_t j = 0; j < N; ++j) {
                const double f = g.radial(r, data.times()[j]);
                ff += f * f;
                fw += f * W[static_cast<Eigen::Index>(i * N + j)];
            }
        }
        const double ww = W.squaredNorm();
        const auto n = static_cast<double>(W.size());
        res.grid[idx] = (ww - fw * fw / (lambda + ff)) / lambda + (n - 1.0) * std::log(lambda) + std::log(lambda + ff);
    });
    const auto& v = res.grid.data();
    res.argmin_index = static_cast<std::size_t>(std::min_element(v.begin(), v.end()) - v.begin());
    res.argmin = grid.node(res.argmin_index);
    std::vector<double> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    const auto q = static_cast<std::size_t>(std::floor(quantile * static_cast<double>(sorted.size() - 1)));
    res.threshold = sorted[q];
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] <= res.threshold) res.threshold_set.push_back(i);
    return res;
}

}  // namespace wavegp
