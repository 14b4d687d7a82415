#include "wavegp/fdtd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/constants/constants.hpp>

#include "wavegp/kernels.hpp"
#include "wavegp/parallel.hpp"
#include "wavegp/rng.hpp"

namespace wavegp {

namespace {
constexpr double kPi = boost::math::constants::pi<double>();
}

void FDTDConfig::validate() const {
    if (!(c > 0.0) || !(dx > 0.0) || !(dt > 0.0) || !(T > 0.0) || !(output_rate > 0.0))
        throw InputError("FDTD parameters must be positive");
    const double n = 1.0 / dx;
    if (std::abs(n - std::round(n)) > 1e-6 * n) throw InputError("1/dx must be an integer (unit cube grid)");
    if (courant() > 1.0 / std::sqrt(3.0) + 1e-12)
        throw InputError("CFL condition violated: c*dt/dx = " + format_double(courant()) + " > 1/sqrt(3)");
    const double stride = 1.0 / (output_rate * dt);
    if (std::abs(stride - std::round(stride)) > 1e-9 * stride || std::round(stride) < 1.0)
        throw InputError("output period must be a whole number of time steps");
}

std::size_t FDTDConfig::nodes_per_axis() const { return static_cast<std::size_t>(std::llround(1.0 / dx)) + 1; }

std::size_t FDTDConfig::output_stride() const {
    return static_cast<std::size_t>(std::llround(1.0 / (output_rate * dt)));
}

std::size_t FDTDConfig::output_samples() const { return static_cast<std::size_t>(std::llround(T * output_rate)); }

InitialCondition InitialCondition::zero() { return InitialCondition{}; }

InitialCondition InitialCondition::ring(const Vec3& center, double R1, double R2, double A) {
    InitialCondition ic{ICKind::ring_cosine, center, R1, R2, A};
    ic.validate();
    return ic;
}

InitialCondition InitialCondition::raised(const Vec3& center, double R, double A) {
    InitialCondition ic{ICKind::raised_cosine, center, 0.0, R, A};
    ic.validate();
    return ic;
}

void InitialCondition::validate() const {
    if (kind == ICKind::zero) return;
    if (kind == ICKind::ring_cosine && !(R1 >= 0.0 && R1 < R2)) throw InputError("ring needs 0 <= R1 < R2");
    if (!(R2 > 0.0)) throw InputError("support radius must be positive");
    for (int a = 0; a < 3; ++a)
        if (center[a] - R2 < 0.0 || center[a] + R2 > 1.0)
            throw InputError("initial condition support must lie inside the unit cube");
}

double InitialCondition::support_radius() const { return kind == ICKind::zero ? 0.0 : R2; }

namespace {

struct Shape {
    double lo, hi, k, mid;
};

Shape shape_of(const InitialCondition& ic) {
    if (ic.kind == ICKind::ring_cosine)
        return {ic.R1, ic.R2, 2.0 * kPi / (ic.R2 - ic.R1), 0.5 * (ic.R1 + ic.R2)};
    return {0.0, ic.R2, kPi / ic.R2, 0.0};
}

}  // namespace

double InitialCondition::profile(double s) const {
    if (kind == ICKind::zero) return 0.0;
    const Shape sh = shape_of(*this);
    const double rho = std::sqrt(s);
    if (rho < sh.lo || rho > sh.hi) return 0.0;
    return amplitude * (1.0 + std::cos(sh.k * (rho - sh.mid)));
}

double InitialCondition::profile_ds(double s) const {
    if (kind == ICKind::zero) return 0.0;
    const Shape sh = shape_of(*this);
    const double rho = std::sqrt(s);
    if (rho < sh.lo || rho > sh.hi) return 0.0;
    if (rho == 0.0) return -0.5 * amplitude * sh.k * sh.k;
    return -amplitude * sh.k * std::sin(sh.k * (rho - sh.mid)) / (2.0 * rho);
}

double InitialCondition::antiderivative(double s) const {
    if (kind == ICKind::zero) return 0.0;
    const Shape sh = shape_of(*this);
    auto prim = [&](double rho) {
        const double ph = sh.k * (rho - sh.mid);
        return rho * rho / 2.0 + rho * std::sin(ph) / sh.k + std::cos(ph) / (sh.k * sh.k);
    };
    const double rho = std::min(std::sqrt(std::max(s, 0.0)), sh.hi);
    if (rho <= sh.lo) return 0.0;
    return 2.0 * amplitude * (prim(rho) - prim(sh.lo));
}

double InitialCondition::value(const Vec3& x) const { return profile((x - center).squaredNorm()); }

Vec3 InitialCondition::gradient(const Vec3& x) const {
    const Vec3 d = x - center;
    const double rho = d.norm();
    if (kind == ICKind::zero || rho == 0.0) return Vec3::Zero();
    const Shape sh = shape_of(*this);
    if (rho < sh.lo || rho > sh.hi) return Vec3::Zero();
    return (-amplitude * sh.k * std::sin(sh.k * (rho - sh.mid)) / rho) * d;
}

double InitialCondition::as_speed(const Vec3& x, double t, double c) const {
    if (kind == ICKind::zero) return 0.0;
    return radial_single_convolution(
        x - center, t, [this](double s) { return antiderivative(s); }, [this](double s) { return profile(s); }, c);
}

double InitialCondition::as_displacement(const Vec3& x, double t, double c) const {
    if (kind == ICKind::zero) return 0.0;
    return radial_single_convolution_dt(
        x - center, t, [this](double s) { return profile(s); }, [this](double s) { return profile_ds(s); }, c);
}

ScalarField3D fdtd_grid(const FDTDConfig& cfg) {
    const std::size_t n = cfg.nodes_per_axis();
    return ScalarField3D(Vec3::Zero(), cfg.dx, {n, n, n});
}

ScalarField3D make_ic(const InitialCondition& ic, const ScalarField3D& grid) {
    ScalarField3D out = grid;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = ic.value(out.node(i));
    return out;
}

double trilinear(const ScalarField3D& f, const Vec3& x) {
    Vec3 g = (x - f.origin()) / f.spacing();
    std::array<std::size_t, 3> i0{};
    std::array<double, 3> w{};
    for (int a = 0; a < 3; ++a) {
        const auto ua = static_cast<std::size_t>(a);
        const double n = static_cast<double>(f.dims()[ua]);
        constexpr double slack = 1e-9;  // round-off in node coordinates
        if (!(g[a] >= -slack && g[a] <= n - 1.0 + slack)) throw InputError("interpolation point outside the grid");
        g[a] = std::clamp(g[a], 0.0, n - 1.0);
        double fl = std::floor(g[a]);
        if (fl >= n - 1.0) fl = n - 2.0;
        if (fl < 0.0) fl = 0.0;
        i0[ua] = static_cast<std::size_t>(fl);
        w[ua] = f.dims()[ua] > 1 ? g[a] - fl : 0.0;
    }
    double acc = 0.0;
    for (int c = 0; c < 8; ++c) {
        std::array<std::size_t, 3> idx{};
        double wt = 1.0;
        for (std::size_t a = 0; a < 3; ++a) {
            const bool up = (c >> a) & 1;
            if (up && f.dims()[a] == 1) {
                wt = 0.0;
                break;
            }
            idx[a] = i0[a] + (up ? 1 : 0);
            wt *= up ? w[a] : 1.0 - w[a];
        }
        if (wt != 0.0) acc += wt * f(idx[0], idx[1], idx[2]);
    }
    return acc;
}

namespace {

class Stepper {
public:
    Stepper(const FDTDConfig& cfg, std::size_t n) : n_(n), C2_(cfg.courant() * cfg.courant()) {
        const double cdt = cfg.c * cfg.dt;
        mur_ = (cdt - cfg.dx) / (cdt + cfg.dx);
    }

    std::size_t id(std::size_t i, std::size_t j, std::size_t k) const { return i + n_ * (j + n_ * k); }

    double laplacian(const std::vector<double>& w, std::size_t i, std::size_t j, std::size_t k) const {
        const std::size_t c = id(i, j, k);
        const std::size_t sy = n_;
        const std::size_t sz = n_ * n_;
        return w[c - 1] + w[c + 1] + w[c - sy] + w[c + sy] + w[c - sz] + w[c + sz] - 6.0 * w[c];
    }

    void interior(const std::vector<double>& prev, const std::vector<double>& cur, std::vector<double>& next) const {
        parallel_for(n_ - 2, [&](std::size_t kk) {
            const std::size_t k = kk + 1;
            for (std::size_t j = 1; j + 1 < n_; ++j)
                for (std::size_t i = 1; i + 1 < n_; ++i) {
                    const std::size_t c = id(i, j, k);
                    next[c] = 2.0 * cur[c] - prev[c] + C2_ * laplacian(cur, i, j, k);
                }
        });
    }

    // First-order absorbing update, faces first, then edges, then corners.
    void boundary(const std::vector<double>& cur, std::vector<double>& next) const {
        const std::size_t last = n_ - 1;
        auto inward = [&](std::size_t v) { return v == 0 ? std::size_t{1} : last - 1; };
        auto on_bnd = [&](std::size_t v) { return v == 0 || v == last; };
        for (int pass = 1; pass <= 3; ++pass) {
            for (std::size_t k = 0; k < n_; ++k)
                for (std::size_t j = 0; j < n_; ++j)
                    for (std::size_t i = 0; i < n_; ++i) {
                        const int nb = on_bnd(i) + on_bnd(j) + on_bnd(k);
                        if (nb != pass) continue;
                        const std::size_t c = id(i, j, k);
                        double acc = 0.0;
                        if (on_bnd(i)) acc += mur(cur, next, c, id(inward(i), j, k));
                        if (on_bnd(j)) acc += mur(cur, next, c, id(i, inward(j), k));
                        if (on_bnd(k)) acc += mur(cur, next, c, id(i, j, inward(k)));
                        next[c] = acc / nb;
                    }
        }
    }

    double energy(const std::vector<double>& cur, const std::vector<double>& next, double dx, double cdt) const {
        double kinetic = 0.0;
        for (std::size_t c = 0; c < cur.size(); ++c) {
            const double d = (next[c] - cur[c]) / cdt;
            kinetic += d * d;
        }
        double strain = 0.0;
        const std::size_t stride[3] = {1, n_, n_ * n_};
        for (std::size_t k = 0; k < n_; ++k)
            for (std::size_t j = 0; j < n_; ++j)
                for (std::size_t i = 0; i < n_; ++i) {
                    const std::size_t c = id(i, j, k);
                    const std::size_t pos[3] = {i, j, k};
                    for (int a = 0; a < 3; ++a) {
                        if (pos[a] + 1 >= n_) continue;
                        const std::size_t o = c + stride[a];
                        strain += (next[o] - next[c]) * (cur[o] - cur[c]);
                    }
                }
        return 0.5 * (kinetic + strain / (dx * dx)) * dx * dx * dx;
    }

private:
    double mur(const std::vector<double>& cur, const std::vector<double>& next, std::size_t b, std::size_t in) const {
        return cur[in] + mur_ * (next[in] - cur[b]);
    }

    std::size_t n_;
    double C2_;
    double mur_;
};

}  // namespace

SensorDataset simulate(const FDTDConfig& cfg, const ScalarField3D& u0, const ScalarField3D& v0,
                       const std::vector<Vec3>& sensors, SimulationDiagnostics* diag) {
    cfg.validate();
    const ScalarField3D grid = fdtd_grid(cfg);
    if (!u0.same_geometry(grid) || !v0.same_geometry(grid))
        throw InputError("initial fields must live on the solver grid");
    if (sensors.empty()) throw InputError("need at least one sensor");
    const double side = cfg.dx * static_cast<double>(cfg.nodes_per_axis() - 1);
    for (const auto& s : sensors)
        for (int a = 0; a < 3; ++a)
            if (!(s[a] > 0.0 && s[a] < side)) throw InputError("sensors must lie strictly inside the domain");

    const std::size_t n = cfg.nodes_per_axis();
    const Stepper st(cfg, n);
    std::vector<double> prev = u0.data();
    std::vector<double> cur(prev.size(), 0.0);
    std::vector<double> next(prev.size(), 0.0);

    // Taylor start: w1 = w0 + dt v0 + dt^2 c^2 / 2 lap(w0)
    const double half = 0.5 * cfg.c * cfg.c * cfg.dt * cfg.dt / (cfg.dx * cfg.dx);
    for (std::size_t c = 0; c < cur.size(); ++c) cur[c] = prev[c] + cfg.dt * v0[c];
    for (std::size_t k = 1; k + 1 < n; ++k)
        for (std::size_t j = 1; j + 1 < n; ++j)
            for (std::size_t i = 1; i + 1 < n; ++i) cur[st.id(i, j, k)] += half * st.laplacian(prev, i, j, k);

    const std::size_t stride = cfg.output_stride();
    const std::size_t n_out = cfg.output_samples();
    std::vector<double> times(n_out);
    Eigen::MatrixXd values(static_cast<Eigen::Index>(sensors.size()), static_cast<Eigen::Index>(n_out));
    ScalarField3D view = grid;

    auto record = [&](std::size_t step, const std::vector<double>& w) {
        if (step % stride == 0 && step / stride < n_out) {
            const std::size_t col = step / stride;
            view.data() = w;
            times[col] = static_cast<double>(col) / cfg.output_rate;
            for (std::size_t s = 0; s < sensors.size(); ++s)
                values(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(col)) = trilinear(view, sensors[s]);
        }
        if (diag) {
            for (std::size_t q = 0; q < diag->snapshot_times.size(); ++q) {
                const auto target = static_cast<std::size_t>(std::llround(diag->snapshot_times[q] / cfg.dt));
                if (target == step) {
                    if (diag->snapshots.size() < diag->snapshot_times.size())
                        diag->snapshots.resize(diag->snapshot_times.size());
                    diag->snapshots[q] = grid;
                    diag->snapshots[q].data() = w;
                }
            }
        }
    };

    record(0, prev);
    if (diag) diag->energy.push_back(st.energy(prev, cur, cfg.dx, cfg.c * cfg.dt));
    const std::size_t last_step = (n_out - 1) * stride;
    for (std::size_t step = 1; step <= last_step; ++step) {
        record(step, cur);
        if (step == last_step) break;
        st.interior(prev, cur, next);
        st.boundary(cur, next);
        if (diag) diag->energy.push_back(st.energy(cur, next, cfg.dx, cfg.c * cfg.dt));
        std::swap(prev, cur);
        std::swap(cur, next);
    }
    return SensorDataset(sensors, std::move(times), std::move(values));
}

std::vector<std::vector<Vec3>> layout_candidates(std::size_t q, const Vec3& lo, const Vec3& hi,
                                                 std::size_t n_restarts, std::uint64_t seed) {
    if (q == 0) throw InputError("layout needs at least one sensor");
    if (n_restarts == 0) throw InputError("layout needs at least one draw");
    std::vector<std::vector<Vec3>> out;
    out.reserve(n_restarts);
    SplitMix64 rng(seed);
    std::vector<std::size_t> perm(q);
    for (std::size_t r = 0; r < n_restarts; ++r) {
        std::vector<Vec3> pts(q, Vec3::Zero());
        for (int a = 0; a < 3; ++a) {
            for (std::size_t i = 0; i < q; ++i) perm[i] = i;
            for (std::size_t i = q; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
            for (std::size_t i = 0; i < q; ++i)
                pts[i][a] = lo[a] + (hi[a] - lo[a]) * (static_cast<double>(perm[i]) + rng.uniform()) /
                                        static_cast<double>(q);
        }
        out.push_back(std::move(pts));
    }
    return out;
}

double min_pairwise_distance(const std::vector<Vec3>& pts) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::min(best, (pts[i] - pts[j]).norm());
    return best;
}

std::vector<Vec3> latin_hypercube_layout(std::size_t q, const Vec3& lo, const Vec3& hi, std::size_t n_restarts,
                                         std::uint64_t seed) {
    auto cands = layout_candidates(q, lo, hi, n_restarts, seed);
    std::size_t best = 0;
    double best_d = min_pairwise_distance(cands[0]);
    for (std::size_t r = 1; r < cands.size(); ++r) {
        const double d = min_pairwise_distance(cands[r]);
        if (d > best_d) {
            best_d = d;
            best = r;
        }
    }
    return cands[best];
}

SensorDataset add_noise(const SensorDataset& d, double sigma, std::uint64_t seed) {
    if (!(sigma >= 0.0)) throw InputError("noise level must be nonnegative");
    if (sigma == 0.0) return d.with_noise(0.0, true);
    SplitMix64 rng(seed);
    Eigen::MatrixXd v = d.values();
    for (Eigen::Index i = 0; i < v.rows(); ++i)
        for (Eigen::Index j = 0; j < v.cols(); ++j) v(i, j) += sigma * rng.normal();
    return d.with_values(std::move(v)).with_noise(sigma * sigma, true);
}

}  // namespace wavegp
