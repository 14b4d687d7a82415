#include "wavegp/hyperopt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "wavegp/gpr.hpp"
#include "wavegp/parallel.hpp"
#include "wavegp/rng.hpp"

namespace wavegp {

void SearchBox::validate() const {
    if (lower.size() == 0 || lower.size() != upper.size()) throw InputError("search box bounds must have equal size");
    for (Eigen::Index i = 0; i < lower.size(); ++i)
        if (!(lower[i] < upper[i])) throw InputError("search box needs lower < upper in every coordinate");
}

bool SearchBox::contains(const Eigen::VectorXd& x) const {
    return x.size() == lower.size() && (x.array() >= lower.array()).all() && (x.array() <= upper.array()).all();
}

Eigen::VectorXd SearchBox::clamp(const Eigen::VectorXd& x) const { return x.cwiseMax(lower).cwiseMin(upper); }

SearchBox SearchBox::u_only_default() {
    SearchBox b;
    b.lower.resize(8);
    b.upper.resize(8);
    b.lower << 0, 0, 0, 0.03, 0.02, 0.1, 0.2, 1e-8;
    b.upper << 1, 1, 1, 0.5, 2, 5, 0.8, 1;
    return b;
}

SearchBox SearchBox::uv_default() {
    SearchBox b;
    b.lower.resize(14);
    b.upper.resize(14);
    b.lower << 0, 0, 0, 0.05, 0.02, 0.1, 0, 0, 0, 0.05, 0.02, 0.1, 0.2, 1e-8;
    b.upper << 1, 1, 1, 0.4, 2, 5, 1, 1, 1, 0.4, 2, 5, 0.8, 2e-2;
    return b;
}

void MultistartConfig::validate() const {
    if (n_starts < 1) throw InputError("n_starts must be at least 1");
    if (max_evals_per_start < 1) throw InputError("max_evals_per_start must be positive");
    if (!(x_tol > 0.0) || !(f_tol >= 0.0)) throw InputError("tolerances must be positive");
}

LocalResult local_minimize(const Objective& f, const Eigen::VectorXd& x0, const SearchBox& box,
                           const MultistartConfig& cfg) {
    box.validate();
    if (!box.contains(x0)) throw InputError("starting point lies outside the search box");
    const Eigen::Index d = box.size();
    const Eigen::VectorXd span = box.upper - box.lower;
    const double inf = std::numeric_limits<double>::infinity();

    LocalResult res;
    res.x = x0;
    res.f = inf;
    auto eval = [&](const Eigen::VectorXd& u) {
        const Eigen::VectorXd x = box.clamp(box.lower + u.cwiseProduct(span));
        ++res.n_evals;
        double v = f(x);
        if (!std::isfinite(v)) v = inf;
        if (v < res.f) {
            res.f = v;
            res.x = x;
        }
        return v;
    };
    auto project = [](Eigen::VectorXd u) { return u.cwiseMax(0.0).cwiseMin(1.0); };
    const auto budget = cfg.max_evals_per_start;

    Eigen::VectorXd u_best = ((x0 - box.lower).array() / span.array()).matrix();
    eval(u_best);
    res.best_trace.push_back(res.f);

    std::vector<Eigen::VectorXd> simplex(static_cast<std::size_t>(d + 1));
    std::vector<double> fv(static_cast<std::size_t>(d + 1));
    std::vector<std::size_t> order(static_cast<std::size_t>(d + 1));
    const double step = 0.1;

    for (int restart = 0; restart < 10 && res.n_evals < budget; ++restart) {
        const double f_start = res.f;
        u_best = ((res.x - box.lower).array() / span.array()).matrix();
        simplex[0] = u_best;
        fv[0] = res.f;
        for (Eigen::Index i = 0; i < d && res.n_evals < budget; ++i) {
            Eigen::VectorXd v = u_best;
            v[i] += (v[i] + step <= 1.0) ? step : -step;
            simplex[static_cast<std::size_t>(i + 1)] = v;
            fv[static_cast<std::size_t>(i + 1)] = eval(v);
        }
        if (res.n_evals >= budget) break;

        bool converged = false;
        while (res.n_evals < budget) {
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
            {
                std::vector<Eigen::VectorXd> s2(simplex.size());
                std::vector<double> f2(fv.size());
                for (std::size_t k = 0; k < order.size(); ++k) {
                    s2[k] = simplex[order[k]];
                    f2[k] = fv[order[k]];
                }
                simplex.swap(s2);
                fv.swap(f2);
            }
            double size = 0.0;
            for (std::size_t k = 1; k < simplex.size(); ++k)
                size = std::max(size, (simplex[k] - simplex[0]).cwiseAbs().maxCoeff());
            const double spread = fv.back() - fv.front();
            if (size < cfg.x_tol || (std::isfinite(spread) && spread <= cfg.f_tol * (1.0 + std::abs(fv.front())))) {
                converged = true;
                break;
            }

            const std::size_t worst = simplex.size() - 1;
            Eigen::VectorXd centroid = Eigen::VectorXd::Zero(d);
            for (std::size_t k = 0; k < worst; ++k) centroid += simplex[k];
            centroid /= static_cast<double>(worst);

            const Eigen::VectorXd xr = project(centroid + (centroid - simplex[worst]));
            const double fr = eval(xr);
            if (fr < fv[0]) {
                const Eigen::VectorXd xe = project(centroid + 2.0 * (centroid - simplex[worst]));
                const double fe = res.n_evals < budget ? eval(xe) : inf;
                if (fe < fr) {
                    simplex[worst] = xe;
                    fv[worst] = fe;
                } else {
                    simplex[worst] = xr;
                    fv[worst] = fr;
                }
            } else if (fr < fv[worst - 1]) {
                simplex[worst] = xr;
                fv[worst] = fr;
            } else {
                const bool outside = fr < fv[worst];
                const Eigen::VectorXd xc = outside ? project(centroid + 0.5 * (xr - centroid))
                                                   : project(centroid + 0.5 * (simplex[worst] - centroid));
                const double fc = res.n_evals < budget ? eval(xc) : inf;
                if (fc < std::min(fr, fv[worst])) {
                    simplex[worst] = xc;
                    fv[worst] = fc;
                } else {
                    for (std::size_t k = 1; k < simplex.size() && res.n_evals < budget; ++k) {
                        simplex[k] = simplex[0] + 0.5 * (simplex[k] - simplex[0]);
                        fv[k] = eval(simplex[k]);
                    }
                }
            }
            res.best_trace.push_back(res.f);
        }
        if (!converged) break;
        // a restart that gains nothing ends the run
        if (restart > 0 && f_start - res.f <= cfg.f_tol * (1.0 + std::abs(res.f))) break;
    }
    res.budget_exhausted = res.n_evals >= budget;
    res.best_trace.push_back(res.f);
    return res;
}

std::vector<Eigen::VectorXd> latin_hypercube(std::size_t n, std::size_t d, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<Eigen::VectorXd> pts(n, Eigen::VectorXd(static_cast<Eigen::Index>(d)));
    std::vector<std::size_t> perm(n);
    for (std::size_t j = 0; j < d; ++j) {
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
        for (std::size_t i = 0; i < n; ++i)
            pts[i][static_cast<Eigen::Index>(j)] = (static_cast<double>(perm[i]) + rng.uniform()) / static_cast<double>(n);
    }
    return pts;
}

MultistartResult multistart_fit(const Hyperparameters& layout, const SensorDataset& data, const SearchBox& box,
                                const MultistartConfig& cfg, double alpha) {
    box.validate();
    cfg.validate();
    if (static_cast<std::size_t>(box.size()) != layout.dimension())
        throw InputError("search box dimension does not match the hyperparameter layout");
    const Eigen::Index li = box.size() - 1;
    if (!(box.lower[li] > 0.0)) throw InputError("lambda lower bound must be positive");

    // lambda lives in log scale inside the optimizer
    SearchBox inner = box;
    inner.lower[li] = std::log(box.lower[li]);
    inner.upper[li] = std::log(box.upper[li]);
    auto to_theta = [&](const Eigen::VectorXd& y) {
        Eigen::VectorXd v = y;
        v[li] = std::exp(y[li]);
        return Hyperparameters::from_vector(v, layout);
    };
    const std::vector<SpaceTimePoint> points = data.points();
    const Eigen::VectorXd w = flatten_observations(data);
    auto objective = [&](const Eigen::VectorXd& y) {
        try {
            return FittedModel(WaveKernelModel(to_theta(y), alpha), points, w).nlml();
        } catch (const NumericalError&) {
            return std::numeric_limits<double>::infinity();
        } catch (const InputError&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    const auto starts = latin_hypercube(static_cast<std::size_t>(cfg.n_starts), static_cast<std::size_t>(box.size()),
                                        cfg.seed);
    MultistartResult out;
    out.all_results.resize(starts.size());
    parallel_for(starts.size(), [&](std::size_t s) {
        const Eigen::VectorXd y0 = inner.lower + starts[s].cwiseProduct(inner.upper - inner.lower);
        const LocalResult r = local_minimize(objective, inner.clamp(y0), inner, cfg);
        StartResult sr;
        sr.start_id = static_cast<int>(s);
        sr.theta = to_theta(r.x);
        sr.nlml = r.f;
        sr.n_evals = r.n_evals;
        sr.budget_exhausted = r.budget_exhausted;
        out.all_results[s] = sr;
    });
    int best = -1;
    for (const auto& r : out.all_results)
        if (std::isfinite(r.nlml) && (best < 0 || r.nlml < out.all_results[static_cast<std::size_t>(best)].nlml))
            best = r.start_id;
    if (best < 0) throw NumericalError("every start produced a non-finite objective");
    out.best_theta = out.all_results[static_cast<std::size_t>(best)].theta;
    out.best_nlml = out.all_results[static_cast<std::size_t>(best)].nlml;
    return out;
}

std::string format_results_csv(const MultistartResult& r) {
    std::string out = "start_id,nlml";
    if (!r.all_results.empty())
        for (const auto& n : r.all_results.front().theta.names()) out += "," + n;
    out += '\n';
    for (const auto& s : r.all_results) {
        out += std::to_string(s.start_id) + "," + format_double(s.nlml);
        const Eigen::VectorXd v = s.theta.to_vector();
        for (Eigen::Index i = 0; i < v.size(); ++i) out += "," + format_double(v[i]);
        out += '\n';
    }
    return out;
}

}  // namespace wavegp
