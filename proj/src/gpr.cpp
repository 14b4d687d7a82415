#include "wavegp/gpr.hpp"

#include <cmath>

#include "wavegp/parallel.hpp"

namespace wavegp {

namespace {

std::vector<WaveKernelModel::Features> all_features(const WaveKernelModel& model,
                                                    const std::vector<SpaceTimePoint>& points) {
    std::vector<WaveKernelModel::Features> f(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) f[i] = model.features(points[i]);
    return f;
}

Eigen::MatrixXd gram_from_features(const WaveKernelModel& model, const std::vector<WaveKernelModel::Features>& f) {
    const auto n = static_cast<Eigen::Index>(f.size());
    Eigen::MatrixXd G(n, n);
    parallel_for(f.size(), [&](std::size_t i) {
        for (std::size_t j = i; j < f.size(); ++j)
            G(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = model(f[i], f[j]);
    });
    for (Eigen::Index j = 1; j < n; ++j)
        for (Eigen::Index i = 0; i < j; ++i) G(i, j) = G(j, i);
    return G;
}

}  // namespace

Eigen::MatrixXd assemble_gram(const WaveKernelModel& model, const std::vector<SpaceTimePoint>& points) {
    return gram_from_features(model, all_features(model, points));
}

Eigen::MatrixXd cross_kernel(const WaveKernelModel& model, const std::vector<SpaceTimePoint>& points,
                             const std::vector<SpaceTimePoint>& queries) {
    const auto fp = all_features(model, points);
    Eigen::MatrixXd K(static_cast<Eigen::Index>(queries.size()), static_cast<Eigen::Index>(points.size()));
    parallel_for(queries.size(), [&](std::size_t q) {
        const auto fq = model.features(queries[q]);
        for (std::size_t j = 0; j < fp.size(); ++j)
            K(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(j)) = model(fq, fp[j]);
    });
    return K;
}

FittedModel::FittedModel(WaveKernelModel model, std::vector<SpaceTimePoint> points, const Eigen::VectorXd& w_obs)
    : model_(std::move(model)), points_(std::move(points)), w_(w_obs) {
    if (points_.empty()) throw InputError("cannot fit on zero observations");
    if (static_cast<std::size_t>(w_.size()) != points_.size())
        throw InputError("observation vector length must match the number of points");
    features_ = all_features(model_, points_);
    Eigen::MatrixXd G = gram_from_features(model_, features_);
    G.diagonal().array() += model_.theta().lambda;
    Eigen::LLT<Eigen::MatrixXd> llt(G);
    if (llt.info() != Eigen::Success) throw NumericalError("ill-conditioned Gram; increase lambda");
    L_ = llt.matrixL();
    const auto diag = L_.diagonal();
    if (!diag.allFinite() || (diag.array() <= 0.0).any()) throw NumericalError("ill-conditioned Gram; increase lambda");
    alpha_ = llt.solve(w_);
    if (!alpha_.allFinite()) throw NumericalError("ill-conditioned Gram; increase lambda");
    nlml_ = w_.dot(alpha_) + 2.0 * diag.array().log().sum();
}

Eigen::VectorXd FittedModel::kvec(const SpaceTimePoint& z) const {
    const auto fz = model_.features(z);
    Eigen::VectorXd k(static_cast<Eigen::Index>(features_.size()));
    for (std::size_t j = 0; j < features_.size(); ++j) k[static_cast<Eigen::Index>(j)] = model_(features_[j], fz);
    return k;
}

double FittedModel::mean(const SpaceTimePoint& z) const { return kvec(z).dot(alpha_); }

std::vector<double> FittedModel::mean(const std::vector<SpaceTimePoint>& zs) const {
    std::vector<double> out(zs.size());
    parallel_for(zs.size(), [&](std::size_t i) { out[i] = mean(zs[i]); });
    return out;
}

double FittedModel::cov(const SpaceTimePoint& z, const SpaceTimePoint& zp) const {
    const auto tri = L_.triangularView<Eigen::Lower>();
    const Eigen::VectorXd a = tri.solve(kvec(z));
    const Eigen::VectorXd b = tri.solve(kvec(zp));
    return model_(z, zp) - a.dot(b);
}

FittedModel fit(const WaveKernelModel& model, const SensorDataset& data) {
    return FittedModel(model, data.points(), flatten_observations(data));
}

FittedModel fit(const WaveKernelModel& model, const std::vector<SpaceTimePoint>& points,
                const Eigen::VectorXd& w_obs) {
    return FittedModel(model, points, w_obs);
}

double kriging_mean(const FittedModel& fm, const SpaceTimePoint& z) { return fm.mean(z); }

double kriging_cov(const FittedModel& fm, const SpaceTimePoint& z, const SpaceTimePoint& zp) {
    return fm.cov(z, zp);
}

double nlml(const FittedModel& fm) { return fm.nlml(); }

}  // namespace wavegp
