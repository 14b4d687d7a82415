#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace wavegp {

using Vec3 = Eigen::Vector3d;

/// Space-time observation location z = (x, t).
struct SpaceTimePoint {
    Vec3 x = Vec3::Zero();
    double t = 0.0;

    SpaceTimePoint() = default;
    SpaceTimePoint(const Vec3& x_, double t_);
};

/// Error raised for malformed inputs (files, configs, argument contracts).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Sensor time series on a shared time grid.
///
/// values(i, j) is sensor i at times[j]. Observations are flattened
/// sensor-major: block i holds all times of sensor i.
class SensorDataset {
public:
    SensorDataset() = default;
    SensorDataset(std::vector<Vec3> sensors, std::vector<double> times, Eigen::MatrixXd values,
                  double noise_variance = 0.0, bool noise_known = false);

    std::size_t num_sensors() const { return sensors_.size(); }
    std::size_t num_times() const { return times_.size(); }
    std::size_t size() const { return sensors_.size() * times_.size(); }

    const std::vector<Vec3>& sensors() const { return sensors_; }
    const std::vector<double>& times() const { return times_; }
    const Eigen::MatrixXd& values() const { return values_; }
    double noise_variance() const { return noise_variance_; }
    bool noise_known() const { return noise_known_; }

    /// Observation points in flattening order.
    std::vector<SpaceTimePoint> points() const;

    /// First `q` sensors only.
    SensorDataset first_sensors(std::size_t q) const;

    SensorDataset with_values(Eigen::MatrixXd values) const;
    SensorDataset with_noise(double noise_variance, bool known) const;

private:
    std::vector<Vec3> sensors_;
    std::vector<double> times_;
    Eigen::MatrixXd values_;
    double noise_variance_ = 0.0;
    bool noise_known_ = false;
};

Eigen::VectorXd flatten_observations(const SensorDataset& d);
Eigen::MatrixXd unflatten_observations(const Eigen::VectorXd& flat, std::size_t q, std::size_t n_times);

/// CSV with header `sensor_id,x,y,z,t,value`. Rows may come in any order.
SensorDataset load_dataset(const std::filesystem::path& path);
SensorDataset parse_dataset_csv(const std::string& text);
void save_dataset(const SensorDataset& d, const std::filesystem::path& path);
std::string format_dataset_csv(const SensorDataset& d);

/// Regular grid with uniform spacing; node (i,j,k) sits at origin + spacing*(i,j,k).
/// Storage is x-fastest.
class ScalarField3D {
public:
    ScalarField3D() = default;
    ScalarField3D(const Vec3& origin, double spacing, std::array<std::size_t, 3> dims, double fill = 0.0);

    const Vec3& origin() const { return origin_; }
    double spacing() const { return spacing_; }
    const std::array<std::size_t, 3>& dims() const { return dims_; }
    std::size_t size() const { return data_.size(); }

    std::size_t index(std::size_t i, std::size_t j, std::size_t k) const {
        return i + dims_[0] * (j + dims_[1] * k);
    }
    double& operator()(std::size_t i, std::size_t j, std::size_t k) { return data_[index(i, j, k)]; }
    double operator()(std::size_t i, std::size_t j, std::size_t k) const { return data_[index(i, j, k)]; }
    double& operator[](std::size_t n) { return data_[n]; }
    double operator[](std::size_t n) const { return data_[n]; }

    Vec3 node(std::size_t i, std::size_t j, std::size_t k) const;
    Vec3 node(std::size_t flat) const;
    std::array<std::size_t, 3> unflatten(std::size_t flat) const;

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool same_geometry(const ScalarField3D& other) const;

    /// Grid with the given spacing covering the axis-aligned box [lo, hi].
    static ScalarField3D covering(const Vec3& lo, const Vec3& hi, double spacing);

private:
    Vec3 origin_ = Vec3::Zero();
    double spacing_ = 1.0;
    std::array<std::size_t, 3> dims_{0, 0, 0};
    std::vector<double> data_;
};

/// Radial compactly supported part of the wave kernel, shared by the u and v parts.
struct RadialPart {
    Vec3 x0 = Vec3::Zero();
    double R = 1.0;
    double rho = 1.0;
    double sigma2 = 1.0;
};

/// Kernel hyperparameters. Vector layout follows the physical ordering
/// (x0_u, R_u, rho_u, sigma2_u, [x0_v, R_v, rho_v, sigma2_v,] c, lambda):
/// 8 entries with the u part only, 14 with both.
struct Hyperparameters {
    double c = 0.5;
    std::optional<RadialPart> u_part;
    std::optional<RadialPart> v_part;
    double lambda = 0.0;

    void validate() const;
    std::size_t dimension() const;

    Eigen::VectorXd to_vector() const;
    /// Same presence pattern as `layout`, values from `v`.
    static Hyperparameters from_vector(const Eigen::VectorXd& v, const Hyperparameters& layout);
    std::vector<std::string> names() const;
};

std::string hyperparameters_to_json(const Hyperparameters& theta);
Hyperparameters hyperparameters_from_json(const std::string& text);
Hyperparameters load_hyperparameters(const std::filesystem::path& path);
void save_hyperparameters(const Hyperparameters& theta, const std::filesystem::path& path);

/// Shortest round-trip decimal representation (17 significant digits).
std::string format_double(double v);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace wavegp
