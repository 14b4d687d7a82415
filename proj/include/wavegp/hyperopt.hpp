#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "wavegp/core.hpp"

namespace wavegp {

struct SearchBox {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;

    void validate() const;
    Eigen::Index size() const { return lower.size(); }
    bool contains(const Eigen::VectorXd& x) const;
    Eigen::VectorXd clamp(const Eigen::VectorXd& x) const;

    // [0,1]^3 x [0.03,0.5] x [0.02,2] x [0.1,5] x [0.2,0.8] x [1e-8,1]
    static SearchBox u_only_default();
    // u and v parts with lambda in [1e-8, 2e-2]
    static SearchBox uv_default();
};

struct MultistartConfig {
    int n_starts = 20;
    int max_evals_per_start = 500;
    std::uint64_t seed = 1;
    double x_tol = 1e-4;
    double f_tol = 1e-8;

    void validate() const;
};

struct LocalResult {
    Eigen::VectorXd x;
    double f = 0.0;
    int n_evals = 0;
    bool budget_exhausted = false;
    std::vector<double> best_trace;  // best value after each iteration
};

using Objective = std::function<double(const Eigen::VectorXd&)>;

// Nelder-Mead on the box, working in coordinates scaled to [0,1]^d; trial
// points are projected onto the box. Non-finite values count as +inf.
LocalResult local_minimize(const Objective& f, const Eigen::VectorXd& x0, const SearchBox& box,
                           const MultistartConfig& cfg);

// n points in [0,1]^d, one per bin along every axis.
std::vector<Eigen::VectorXd> latin_hypercube(std::size_t n, std::size_t d, std::uint64_t seed);

struct StartResult {
    int start_id = 0;
    Hyperparameters theta;
    double nlml = 0.0;
    int n_evals = 0;
    bool budget_exhausted = false;
};

struct MultistartResult {
    Hyperparameters best_theta;
    double best_nlml = 0.0;
    std::vector<StartResult> all_results;
};

// Minimizes theta -> nlml(fit(model(theta), data)) from Latin hypercube starts.
// `layout` fixes which parts are present. lambda is searched in log scale.
MultistartResult multistart_fit(const Hyperparameters& layout, const SensorDataset& data, const SearchBox& box,
                                const MultistartConfig& cfg, double alpha = 0.8);

std::string format_results_csv(const MultistartResult& r);

}  // namespace wavegp
