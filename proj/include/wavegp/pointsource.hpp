#pragma once

#include <vector>

#include "wavegp/core.hpp"

namespace wavegp {

// f_t^R = F_t * phi_R with phi_R(y) = R^-3 psi(|y|/R), psi the unit-mass bump
// exp(-1/(1-u^2)) on the unit ball.
class MollifiedGreen {
public:
    MollifiedGreen(double R, double c);

    double R() const { return R_; }
    double c() const { return c_; }

    double operator()(const Vec3& x, double t) const;
    // same, from |x|
    double radial(double r, double t) const;
    // phi_R at distance s from the center
    double mollifier(double s) const;

private:
    // int_0^s u phi_R(u) du
    double P(double s) const;

    double R_;
    double c_;
};

double mollified_green(const Vec3& x, double t, const MollifiedGreen& g);

// F[i*N + j] = f_{t_j}(x_i - x0), sensor-major like flatten_observations.
Eigen::VectorXd signature_vector(const std::vector<Vec3>& sensors, const std::vector<double>& times, const Vec3& x0,
                                 const MollifiedGreen& g);

// Approximated observations produced by a mollified source at x0.
SensorDataset point_source_dataset(const std::vector<Vec3>& sensors, const std::vector<double>& times, const Vec3& x0,
                                   const MollifiedGreen& g);

double nlml_rank_one(const Eigen::VectorXd& W, const Eigen::VectorXd& F, double lambda);
double limit_objective(const Eigen::VectorXd& W, const Eigen::VectorXd& F);
double discrete_correlation(const Eigen::VectorXd& W, const Eigen::VectorXd& F);

// L2([0,T]) correlation between the continuous signals of a source at
// x0_true and a candidate at x0, summed over sensors.
double continuous_correlation(const std::vector<Vec3>& sensors, const Vec3& x0_true, const Vec3& x0,
                              const MollifiedGreen& g, double T);

struct ScanResult {
    ScalarField3D grid;  // L at every node
    Vec3 argmin = Vec3::Zero();
    std::size_t argmin_index = 0;
    double threshold = 0.0;
    std::vector<std::size_t> threshold_set;
};

// Default lambda: 1e-6 * |W|^2 / n.
double default_scan_lambda(const Eigen::VectorXd& W);

ScanResult scan(const SensorDataset& data, const MollifiedGreen& g, const ScalarField3D& grid, double lambda,
                double quantile = 0.005);

}  // namespace wavegp
