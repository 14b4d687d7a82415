#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "wavegp/core.hpp"

namespace wavegp {

struct FDTDConfig {
    double c = 0.5;
    double dx = 1.0 / 23.0;  // unit cube, 24 nodes per axis
    double dt = 1.0 / 200.0;
    double T = 1.5;
    double output_rate = 50.0;

    void validate() const;
    std::size_t nodes_per_axis() const;
    double courant() const { return c * dt / dx; }
    std::size_t output_stride() const;
    std::size_t output_samples() const;
};

enum class ICKind { zero, ring_cosine, raised_cosine };

struct InitialCondition {
    ICKind kind = ICKind::zero;
    Vec3 center = Vec3::Constant(0.5);
    double R1 = 0.0;  // ring inner radius
    double R2 = 0.0;  // ring outer radius, or the raised-cosine radius
    double amplitude = 0.0;

    static InitialCondition zero();
    static InitialCondition ring(const Vec3& center, double R1, double R2, double A);
    static InitialCondition raised(const Vec3& center, double R, double A);

    void validate() const;
    double support_radius() const;

    double value(const Vec3& x) const;
    Vec3 gradient(const Vec3& x) const;

    // profile f(s) with value(x) = f(|x - center|^2), its s-derivative, and
    // the antiderivative F(s) = int_0^s f
    double profile(double s) const;
    double profile_ds(double s) const;
    double antiderivative(double s) const;

    // free-space solutions: this field as initial speed (zero displacement),
    // and as initial displacement (zero speed)
    double as_speed(const Vec3& x, double t, double c) const;
    double as_displacement(const Vec3& x, double t, double c) const;
};

// Node grid of the solver: origin 0, spacing dx.
ScalarField3D fdtd_grid(const FDTDConfig& cfg);

ScalarField3D make_ic(const InitialCondition& ic, const ScalarField3D& grid);

double trilinear(const ScalarField3D& f, const Vec3& x);

struct SimulationDiagnostics {
    std::vector<double> energy;  // discrete energy after every step
    std::vector<double> snapshot_times;
    std::vector<ScalarField3D> snapshots;  // filled for snapshot_times
};

SensorDataset simulate(const FDTDConfig& cfg, const ScalarField3D& u0, const ScalarField3D& v0,
                       const std::vector<Vec3>& sensors, SimulationDiagnostics* diag = nullptr);

// All n_restarts seeded Latin hypercube draws in [lo, hi]^3.
std::vector<std::vector<Vec3>> layout_candidates(std::size_t q, const Vec3& lo, const Vec3& hi,
                                                 std::size_t n_restarts, std::uint64_t seed);
// The candidate with the largest minimum pairwise distance.
std::vector<Vec3> latin_hypercube_layout(std::size_t q, const Vec3& lo, const Vec3& hi, std::size_t n_restarts,
                                         std::uint64_t seed);
double min_pairwise_distance(const std::vector<Vec3>& pts);

SensorDataset add_noise(const SensorDataset& d, double sigma, std::uint64_t seed);

}  // namespace wavegp
