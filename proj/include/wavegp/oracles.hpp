#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "wavegp/core.hpp"

namespace wavegp {

using SpatialKernel = std::function<double(const Vec3&, const Vec3&)>;

// Orientation hint for sphere quadrature. Poles are aligned with x - center
// and the polar panels split where |y - center| crosses one of `radii`. With
// diagonal_kink set, the inner sphere is also split where
// |y' - center| = |y - center| for the current outer node y.
struct SphereFrame {
    Vec3 center = Vec3::Zero();
    std::vector<double> radii;
    bool diagonal_kink = false;
};

struct OracleOptions {
    int n_quad = 64;  // Gauss-Legendre nodes in cos(theta) per panel
    int n_phi = 0;    // uniform azimuth nodes, 0 means n_quad
    std::optional<SphereFrame> frame;
};

// t t' * double spherical mean of k_init(x - c|t| g, x' - c|t'| g').
double kirchhoff_oracle(const SpaceTimePoint& z, const SpaceTimePoint& zp, const SpatialKernel& k_init, double c,
                        int n_quad);
double kirchhoff_oracle(const SpaceTimePoint& z, const SpaceTimePoint& zp, const SpatialKernel& k_init, double c,
                        const OracleOptions& opts);

// Mixed fourth-order central difference in (t, t') of kirchhoff_oracle.
double kirchhoff_oracle_dtdt(const SpaceTimePoint& z, const SpaceTimePoint& zp, const SpatialKernel& k_init, double c,
                             const OracleOptions& opts, double step = 1e-4);

// t * spherical mean of g(x - c|t| g).
double kirchhoff_single(const Vec3& x, double t, const std::function<double(const Vec3&)>& g, double c,
                        const OracleOptions& opts);

}  // namespace wavegp
