#include "wavegp/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "json.hpp"

namespace wavegp {

namespace {

bool all_finite(const Vec3& v) { return std::isfinite(v[0]) && std::isfinite(v[1]) && std::isfinite(v[2]); }

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) {
        auto b = cell.find_first_not_of(" \t\r");
        auto e = cell.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? std::string{} : cell.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_number(const std::string& s, std::size_t line_no) {
    if (s.empty()) throw InputError("line " + std::to_string(line_no) + ": empty field");
    const char* begin = s.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw InputError("line " + std::to_string(line_no) + ": cannot parse number '" + s + "'");
    return v;
}

}  // namespace

SpaceTimePoint::SpaceTimePoint(const Vec3& x_, double t_) : x(x_), t(t_) {
    if (!all_finite(x) || !std::isfinite(t)) throw InputError("space-time point must be finite");
}

SensorDataset::SensorDataset(std::vector<Vec3> sensors, std::vector<double> times, Eigen::MatrixXd values,
                             double noise_variance, bool noise_known)
    : sensors_(std::move(sensors)),
      times_(std::move(times)),
      values_(std::move(values)),
      noise_variance_(noise_variance),
      noise_known_(noise_known) {
    if (sensors_.empty()) throw InputError("dataset needs at least one sensor");
    if (times_.empty()) throw InputError("dataset needs at least one sample time");
    if (static_cast<std::size_t>(values_.rows()) != sensors_.size() ||
        static_cast<std::size_t>(values_.cols()) != times_.size())
        throw InputError("values matrix must be q x N");
    for (const auto& s : sensors_)
        if (!all_finite(s)) throw InputError("non-finite sensor position");
    for (std::size_t j = 0; j < times_.size(); ++j) {
        if (!std::isfinite(times_[j])) throw InputError("non-finite sample time");
        if (j > 0 && times_[j] < times_[j - 1]) throw InputError("sample times must be non-decreasing");
    }
    if (!values_.allFinite()) throw InputError("non-finite observation");
    if (!(noise_variance_ >= 0.0)) throw InputError("noise variance must be nonnegative");
}

std::vector<SpaceTimePoint> SensorDataset::points() const {
    std::vector<SpaceTimePoint> pts;
    pts.reserve(size());
    for (const auto& s : sensors_)
        for (double t : times_) pts.emplace_back(s, t);
    return pts;
}

SensorDataset SensorDataset::first_sensors(std::size_t q) const {
    if (q == 0 || q > sensors_.size()) throw InputError("requested sensor count out of range");
    std::vector<Vec3> s(sensors_.begin(), sensors_.begin() + static_cast<std::ptrdiff_t>(q));
    return SensorDataset(std::move(s), times_, values_.topRows(static_cast<Eigen::Index>(q)), noise_variance_,
                         noise_known_);
}

SensorDataset SensorDataset::with_values(Eigen::MatrixXd values) const {
    return SensorDataset(sensors_, times_, std::move(values), noise_variance_, noise_known_);
}

SensorDataset SensorDataset::with_noise(double noise_variance, bool known) const {
    return SensorDataset(sensors_, times_, values_, noise_variance, known);
}

Eigen::VectorXd flatten_observations(const SensorDataset& d) {
    const auto q = static_cast<Eigen::Index>(d.num_sensors());
    const auto n = static_cast<Eigen::Index>(d.num_times());
    Eigen::VectorXd out(q * n);
    for (Eigen::Index i = 0; i < q; ++i)
        for (Eigen::Index j = 0; j < n; ++j) out[i * n + j] = d.values()(i, j);
    return out;
}

Eigen::MatrixXd unflatten_observations(const Eigen::VectorXd& flat, std::size_t q, std::size_t n_times) {
    if (static_cast<std::size_t>(flat.size()) != q * n_times) throw InputError("flat vector length must be q*N");
    Eigen::MatrixXd out(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(n_times));
    for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = 0; j < n_times; ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                flat[static_cast<Eigen::Index>(i * n_times + j)];
    return out;
}

SensorDataset parse_dataset_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto cols = split_csv_line(line);
        const std::vector<std::string> expected{"sensor_id", "x", "y", "z", "t", "value"};
        if (cols != expected) throw InputError("missing or malformed header; expected sensor_id,x,y,z,t,value");
        have_header = true;
        break;
    }
    if (!have_header) throw InputError("empty dataset file");

    struct Row {
        Vec3 x;
        double t;
        double value;
    };
    std::map<long long, std::vector<Row>> by_sensor;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto cols = split_csv_line(line);
        if (cols.size() != 6) throw InputError("line " + std::to_string(line_no) + ": expected 6 fields");
        double id_d = parse_number(cols[0], line_no);
        if (id_d != std::floor(id_d)) throw InputError("line " + std::to_string(line_no) + ": sensor_id must be integer");
        Row r{Vec3(parse_number(cols[1], line_no), parse_number(cols[2], line_no), parse_number(cols[3], line_no)),
              parse_number(cols[4], line_no), parse_number(cols[5], line_no)};
        if (!all_finite(r.x) || !std::isfinite(r.t))
            throw InputError("line " + std::to_string(line_no) + ": non-finite coordinate");
        if (!std::isfinite(r.value)) throw InputError("line " + std::to_string(line_no) + ": non-finite observation");
        by_sensor[static_cast<long long>(id_d)].push_back(r);
    }
    if (by_sensor.empty()) throw InputError("dataset has no rows");

    std::vector<Vec3> sensors;
    std::vector<double> times;
    std::vector<std::vector<double>> rows;
    for (auto& [id, samples] : by_sensor) {
        std::stable_sort(samples.begin(), samples.end(), [](const Row& a, const Row& b) { return a.t < b.t; });
        const Vec3 pos = samples.front().x;
        for (const auto& s : samples)
            if (s.x != pos) throw InputError("sensor " + std::to_string(id) + " has inconsistent coordinates");
        std::vector<double> ts;
        std::vector<double> vs;
        for (const auto& s : samples) {
            ts.push_back(s.t);
            vs.push_back(s.value);
        }
        if (times.empty()) {
            times = ts;
        } else if (ts != times) {
            throw InputError("non-uniform time grids across sensors (sensor " + std::to_string(id) + ")");
        }
        sensors.push_back(pos);
        rows.push_back(std::move(vs));
    }
    Eigen::MatrixXd values(static_cast<Eigen::Index>(sensors.size()), static_cast<Eigen::Index>(times.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < times.size(); ++j)
            values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return SensorDataset(std::move(sensors), std::move(times), std::move(values));
}

SensorDataset load_dataset(const std::filesystem::path& path) { return parse_dataset_csv(read_text_file(path)); }

std::string format_dataset_csv(const SensorDataset& d) {
    std::string out = "sensor_id,x,y,z,t,value\n";
    for (std::size_t i = 0; i < d.num_sensors(); ++i) {
        const auto& s = d.sensors()[i];
        for (std::size_t j = 0; j < d.num_times(); ++j) {
            out += std::to_string(i);
            for (double v : {s[0], s[1], s[2], d.times()[j],
                             d.values()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))}) {
                out += ',';
                out += format_double(v);
            }
            out += '\n';
        }
    }
    return out;
}

void save_dataset(const SensorDataset& d, const std::filesystem::path& path) {
    write_text_file(path, format_dataset_csv(d));
}

ScalarField3D::ScalarField3D(const Vec3& origin, double spacing, std::array<std::size_t, 3> dims, double fill)
    : origin_(origin), spacing_(spacing), dims_(dims) {
    if (!(spacing > 0.0)) throw InputError("grid spacing must be positive");
    if (dims[0] == 0 || dims[1] == 0 || dims[2] == 0) throw InputError("grid dims must be positive");
    data_.assign(dims[0] * dims[1] * dims[2], fill);
}

Vec3 ScalarField3D::node(std::size_t i, std::size_t j, std::size_t k) const {
    return origin_ + spacing_ * Vec3(static_cast<double>(i), static_cast<double>(j), static_cast<double>(k));
}

std::array<std::size_t, 3> ScalarField3D::unflatten(std::size_t flat) const {
    const std::size_t i = flat % dims_[0];
    const std::size_t rest = flat / dims_[0];
    return {i, rest % dims_[1], rest / dims_[1]};
}

Vec3 ScalarField3D::node(std::size_t flat) const {
    auto [i, j, k] = unflatten(flat);
    return node(i, j, k);
}

bool ScalarField3D::same_geometry(const ScalarField3D& other) const {
    return dims_ == other.dims_ && spacing_ == other.spacing_ && origin_ == other.origin_;
}

ScalarField3D ScalarField3D::covering(const Vec3& lo, const Vec3& hi, double spacing) {
    std::array<std::size_t, 3> dims{};
    for (int a = 0; a < 3; ++a) {
        if (!(hi[a] >= lo[a])) throw InputError("grid box must satisfy lo <= hi");
        dims[static_cast<std::size_t>(a)] = static_cast<std::size_t>(std::ceil((hi[a] - lo[a]) / spacing - 1e-9)) + 1;
    }
    return ScalarField3D(lo, spacing, dims);
}

void Hyperparameters::validate() const {
    if (!(c > 0.0) || !std::isfinite(c)) throw InputError("wave speed c must be positive");
    if (!u_part && !v_part) throw InputError("hyperparameters need a u part, a v part, or both");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InputError("lambda must be nonnegative");
    for (const auto* p : {&u_part, &v_part}) {
        if (!*p) continue;
        const auto& part = **p;
        if (!all_finite(part.x0)) throw InputError("source center must be finite");
        if (!(part.R > 0.0)) throw InputError("support radius must be positive");
        if (!(part.rho > 0.0) || !(part.sigma2 > 0.0)) throw InputError("Matern parameters must be positive");
    }
}

std::size_t Hyperparameters::dimension() const { return 2 + (u_part ? 6 : 0) + (v_part ? 6 : 0); }

Eigen::VectorXd Hyperparameters::to_vector() const {
    Eigen::VectorXd v(static_cast<Eigen::Index>(dimension()));
    Eigen::Index k = 0;
    for (const auto* p : {&u_part, &v_part}) {
        if (!*p) continue;
        const auto& part = **p;
        v[k++] = part.x0[0];
        v[k++] = part.x0[1];
        v[k++] = part.x0[2];
        v[k++] = part.R;
        v[k++] = part.rho;
        v[k++] = part.sigma2;
    }
    v[k++] = c;
    v[k++] = lambda;
    return v;
}

Hyperparameters Hyperparameters::from_vector(const Eigen::VectorXd& v, const Hyperparameters& layout) {
    if (static_cast<std::size_t>(v.size()) != layout.dimension())
        throw InputError("hyperparameter vector has wrong dimension");
    Hyperparameters out = layout;
    Eigen::Index k = 0;
    for (auto* p : {&out.u_part, &out.v_part}) {
        if (!*p) continue;
        auto& part = **p;
        part.x0 = Vec3(v[k], v[k + 1], v[k + 2]);
        part.R = v[k + 3];
        part.rho = v[k + 4];
        part.sigma2 = v[k + 5];
        k += 6;
    }
    out.c = v[k];
    out.lambda = v[k + 1];
    return out;
}

std::vector<std::string> Hyperparameters::names() const {
    std::vector<std::string> out;
    for (const char* tag : {"u", "v"}) {
        if ((tag[0] == 'u' && !u_part) || (tag[0] == 'v' && !v_part)) continue;
        const std::string s(tag);
        for (const char* axis : {"x", "y", "z"}) out.push_back("x0_" + s + "_" + axis);
        out.push_back("R_" + s);
        out.push_back("rho_" + s);
        out.push_back("sigma2_" + s);
    }
    out.emplace_back("c");
    out.emplace_back("lambda");
    return out;
}

std::string hyperparameters_to_json(const Hyperparameters& theta) {
    // Hand-formatted so every value keeps 17 significant digits.
    std::string out = "{\n  \"c\": " + format_double(theta.c);
    auto add_part = [&](const char* tag, const RadialPart& p) {
        const std::string s(tag);
        out += ",\n  \"x0_" + s + "\": [" + format_double(p.x0[0]) + ", " + format_double(p.x0[1]) + ", " +
               format_double(p.x0[2]) + "]";
        out += ",\n  \"R_" + s + "\": " + format_double(p.R);
        out += ",\n  \"rho_" + s + "\": " + format_double(p.rho);
        out += ",\n  \"sigma2_" + s + "\": " + format_double(p.sigma2);
    };
    if (theta.u_part) add_part("u", *theta.u_part);
    if (theta.v_part) add_part("v", *theta.v_part);
    out += ",\n  \"lambda\": " + format_double(theta.lambda) + "\n}\n";
    return out;
}

Hyperparameters hyperparameters_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("hyperparameter JSON: ") + e.what());
    }
    if (!j.is_object()) throw InputError("hyperparameter JSON must be an object");
    auto number = [&](const std::string& key) {
        if (!j.contains(key) || !j[key].is_number()) throw InputError("hyperparameter JSON: missing number '" + key + "'");
        return j[key].get<double>();
    };
    Hyperparameters theta;
    theta.c = number("c");
    theta.lambda = number("lambda");
    for (const char* tag : {"u", "v"}) {
        const std::string s(tag);
        if (!j.contains("x0_" + s)) continue;
        const auto& arr = j["x0_" + s];
        if (!arr.is_array() || arr.size() != 3) throw InputError("x0_" + s + " must be a 3-element array");
        RadialPart p;
        p.x0 = Vec3(arr[0].get<double>(), arr[1].get<double>(), arr[2].get<double>());
        p.R = number("R_" + s);
        p.rho = number("rho_" + s);
        p.sigma2 = number("sigma2_" + s);
        (s == "u" ? theta.u_part : theta.v_part) = p;
    }
    theta.validate();
    return theta;
}

Hyperparameters load_hyperparameters(const std::filesystem::path& path) {
    return hyperparameters_from_json(read_text_file(path));
}

void save_hyperparameters(const Hyperparameters& theta, const std::filesystem::path& path) {
    write_text_file(path, hyperparameters_to_json(theta));
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write file: " + path.string());
    out << text;
}

}  // namespace wavegp
