#pragma once

#include <vector>

#include "wavegp/core.hpp"
#include "wavegp/kernels.hpp"

namespace wavegp {

// Raised when k(Z,Z) + lambda I cannot be factorized.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Eigen::MatrixXd assemble_gram(const WaveKernelModel& model, const std::vector<SpaceTimePoint>& points);

// rows: queries, columns: points
Eigen::MatrixXd cross_kernel(const WaveKernelModel& model, const std::vector<SpaceTimePoint>& points,
                             const std::vector<SpaceTimePoint>& queries);

class FittedModel {
public:
    FittedModel(WaveKernelModel model, std::vector<SpaceTimePoint> points, const Eigen::VectorXd& w_obs);

    const WaveKernelModel& model() const { return model_; }
    const std::vector<SpaceTimePoint>& points() const { return points_; }
    const Eigen::MatrixXd& chol() const { return L_; }
    const Eigen::VectorXd& alpha() const { return alpha_; }
    const Eigen::VectorXd& observations() const { return w_; }
    double nlml() const { return nlml_; }

    double mean(const SpaceTimePoint& z) const;
    std::vector<double> mean(const std::vector<SpaceTimePoint>& zs) const;
    double cov(const SpaceTimePoint& z, const SpaceTimePoint& zp) const;

private:
    Eigen::VectorXd kvec(const SpaceTimePoint& z) const;

    WaveKernelModel model_;
    std::vector<SpaceTimePoint> points_;
    std::vector<WaveKernelModel::Features> features_;
    Eigen::MatrixXd L_;
    Eigen::VectorXd w_;
    Eigen::VectorXd alpha_;
    double nlml_ = 0.0;
};

// lambda is taken from model.theta().lambda.
FittedModel fit(const WaveKernelModel& model, const SensorDataset& data);
FittedModel fit(const WaveKernelModel& model, const std::vector<SpaceTimePoint>& points, const Eigen::VectorXd& w_obs);

double kriging_mean(const FittedModel& fm, const SpaceTimePoint& z);
double kriging_cov(const FittedModel& fm, const SpaceTimePoint& z, const SpaceTimePoint& zp);
double nlml(const FittedModel& fm);

}  // namespace wavegp
