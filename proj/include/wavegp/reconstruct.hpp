#pragma once

#include <functional>
#include <vector>

#include "wavegp/core.hpp"
#include "wavegp/gpr.hpp"

namespace wavegp {

// Grid with spacing dx covering center +- (1 + pad) R.
ScalarField3D reconstruction_grid(const Vec3& center, double R, double dx = 0.01, double pad = 0.1);

ScalarField3D reconstruct_u0(const FittedModel& fm, const ScalarField3D& grid);
ScalarField3D reconstruct_v0(const FittedModel& fm, const ScalarField3D& grid, double dt_fd = 1e-7);

// Riemann-sum L^p norm; p = inf for the max norm.
double lp_norm(const ScalarField3D& f, double p);
double lp_relative_error(const ScalarField3D& approx, const ScalarField3D& truth, double p);

// (int_S |g|_q^p dOmega / 4pi)^(1/p), 1/p + 1/q = 1. Returns 1 for p = inf,
// where gradients are measured in the Euclidean norm.
double gradient_constant(double p);

// Pointwise gradient norm paired with gradient_constant(p).
double gradient_norm(const Vec3& g, double p);

using FieldFn = std::function<double(const Vec3&)>;
using GradFn = std::function<Vec3(const Vec3&)>;

struct LpBoundReport {
    double p = 2.0;
    double t = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double term_v = 0.0;     // |t| |v0 - v0_hat|_p
    double term_u = 0.0;     // |u0 - u0_hat|_p
    double term_grad = 0.0;  // C_p c |t| |grad(u0 - u0_hat)|_p
    bool satisfied = false;
};

// Both sides of |w(t) - m(t)|_p <= |t| |dv|_p + |du|_p + C_p c |t| |grad du|_p.
// dv, du, grad_du are the initial-condition errors, solution_error(x, t) is
// w - m. Norms of the initial errors use `grid`; the solution error uses the
// same grid expanded by c|t| on every side.
LpBoundReport check_lp_bound(const FieldFn& dv, const FieldFn& du, const GradFn& grad_du,
                             const std::function<double(const Vec3&, double)>& solution_error,
                             const ScalarField3D& grid, double t, double p, double c, double slack = 1e-3);

// Grid of `f` sampled at the nodes of `grid`.
ScalarField3D sample(const ScalarField3D& grid, const FieldFn& f);

// coherence(i, j) = max_{k,l} |k((x_i,t_k),(x_j,t_l))| / max_{i,k} k((x_i,t_k),(x_i,t_k)).
Eigen::MatrixXd layout_coherence(const WaveKernelModel& model, const std::vector<Vec3>& sensors,
                                 const std::vector<double>& times);

}  // namespace wavegp
