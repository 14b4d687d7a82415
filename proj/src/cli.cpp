#include "wavegp/cli.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "wavegp/gpr.hpp"
#include "wavegp/hyperopt.hpp"
#include "wavegp/kernels.hpp"
#include "wavegp/parallel.hpp"
#include "wavegp/pointsource.hpp"
#include "wavegp/reconstruct.hpp"

namespace wavegp {

namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kKnownKeys = {
    "case.name",
    "simulate.mode",
    "fdtd.c", "fdtd.nodes", "fdtd.dt", "fdtd.T", "fdtd.output_rate",
    "ic.u.kind", "ic.u.center", "ic.u.R1", "ic.u.R2", "ic.u.R", "ic.u.amplitude",
    "ic.v.kind", "ic.v.center", "ic.v.R1", "ic.v.R2", "ic.v.R", "ic.v.amplitude",
    "layout.sensors", "layout.lo", "layout.hi", "layout.restarts", "layout.seed",
    "noise.sigma", "noise.seed",
    "source.x0", "source.R", "source.c", "source.T", "source.samples",
    "fit.model", "fit.sensors", "fit.multistart", "fit.max_evals", "fit.seed", "fit.x_tol", "fit.f_tol",
    "fit.alpha", "fit.box.lower", "fit.box.upper",
    "reconstruct.dx", "reconstruct.dt_fd", "reconstruct.pad", "reconstruct.slice_z",
    "locate.R", "locate.c", "locate.grid", "locate.lambda", "locate.quantile",
};

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
    return buf;
}

struct Manifest {
    std::string command;
    std::vector<std::string> args;
    const Config* cfg = nullptr;
    nlohmann::ordered_json seeds = nlohmann::ordered_json::object();
    nlohmann::ordered_json extra = nlohmann::ordered_json::object();

    void write(const fs::path& path) const {
        nlohmann::ordered_json j;
        j["tool"] = "wavegp";
        j["version"] = kVersion;
        j["command"] = command;
        j["arguments"] = args;
        j["config_hash"] = hex64(cfg ? cfg->hash() : fnv1a(""));
        j["config"] = cfg ? cfg->entries() : std::map<std::string, std::string>{};
        j["seeds"] = seeds;
        for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
        write_text_file(path, j.dump(2) + "\n");
    }
};

Config load_config(const std::string& path, const std::vector<std::string>& overrides) {
    Config cfg = path.empty() ? Config{} : Config::load(path);
    for (const auto& kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw InputError("--set expects key=value, got '" + kv + "'");
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    cfg.require_known(kKnownKeys);
    return cfg;
}

std::string field_csv(const ScalarField3D& f) {
    std::string out = "x,y,z,value\n";
    for (std::size_t i = 0; i < f.size(); ++i) {
        const Vec3 x = f.node(i);
        out += format_double(x[0]) + "," + format_double(x[1]) + "," + format_double(x[2]) + "," +
               format_double(f[i]) + "\n";
    }
    return out;
}

std::string slice_csv(const ScalarField3D& f, double z) {
    const double kf = std::round((z - f.origin()[2]) / f.spacing());
    if (kf < 0 || kf >= static_cast<double>(f.dims()[2])) throw InputError("slice height outside the grid");
    const auto k = static_cast<std::size_t>(kf);
    std::string out = "x,y,value\n";
    for (std::size_t j = 0; j < f.dims()[1]; ++j)
        for (std::size_t i = 0; i < f.dims()[0]; ++i) {
            const Vec3 x = f.node(i, j, k);
            out += format_double(x[0]) + "," + format_double(x[1]) + "," + format_double(f(i, j, k)) + "\n";
        }
    return out;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) {
        const auto b = cell.find_first_not_of(" \t\r");
        const auto e = cell.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? std::string{} : cell.substr(b, e - b + 1));
    }
    return out;
}

double parse_cell(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0') throw InputError("cannot parse number '" + s + "'");
    return v;
}

Hyperparameters layout_for(const std::string& model) {
    Hyperparameters h;
    if (model == "u") {
        h.u_part = RadialPart{};
    } else if (model == "uv") {
        h.u_part = RadialPart{};
        h.v_part = RadialPart{};
    } else if (model == "v") {
        h.v_part = RadialPart{};
    } else {
        throw InputError("model must be one of u, v, uv");
    }
    return h;
}

SearchBox box_for(const Config& cfg, const Hyperparameters& layout) {
    SearchBox box;
    if (cfg.has("fit.box.lower") || cfg.has("fit.box.upper")) {
        const auto lo = cfg.get_list("fit.box.lower");
        const auto hi = cfg.get_list("fit.box.upper");
        box.lower = Eigen::Map<const Eigen::VectorXd>(lo.data(), static_cast<Eigen::Index>(lo.size()));
        box.upper = Eigen::Map<const Eigen::VectorXd>(hi.data(), static_cast<Eigen::Index>(hi.size()));
    } else if (layout.u_part && layout.v_part) {
        box = SearchBox::uv_default();
    } else if (layout.u_part) {
        box = SearchBox::u_only_default();
    } else {
        // v only: same ranges as the u-only box
        box = SearchBox::u_only_default();
    }
    box.validate();
    if (static_cast<std::size_t>(box.size()) != layout.dimension())
        throw InputError("search box dimension does not match the model");
    return box;
}

SensorDataset select_sensors(const SensorDataset& d, long long n) {
    if (n <= 0 || static_cast<std::size_t>(n) >= d.num_sensors()) return d;
    return d.first_sensors(static_cast<std::size_t>(n));
}

// bounding box of center +- (1 + pad) R, merged with `other` when given
void extend_box(Vec3& lo, Vec3& hi, bool& empty, const Vec3& center, double R) {
    const Vec3 a = center - Vec3::Constant(R);
    const Vec3 b = center + Vec3::Constant(R);
    if (empty) {
        lo = a;
        hi = b;
        empty = false;
    } else {
        lo = lo.cwiseMin(a);
        hi = hi.cwiseMax(b);
    }
}

int cmd_simulate(const Config& cfg, const fs::path& out, const std::vector<double>& snapshot_times,
                 const std::string& snapshot_dir, Manifest& manifest) {
    const std::string mode = cfg.get_string("simulate.mode", "fdtd");
    const auto q = static_cast<std::size_t>(cfg.get_int("layout.sensors", 30));
    const Vec3 lo = cfg.get_vec3("layout.lo", Vec3::Constant(0.2));
    const Vec3 hi = cfg.get_vec3("layout.hi", Vec3::Constant(0.8));
    const auto restarts = static_cast<std::size_t>(cfg.get_int("layout.restarts", 1000));
    const std::uint64_t layout_seed = cfg.get_seed("layout.seed", 11);
    const double sigma = cfg.get_double("noise.sigma", 0.0);
    const std::uint64_t noise_seed = cfg.get_seed("noise.seed", 7);
    manifest.seeds["layout.seed"] = layout_seed;
    manifest.seeds["noise.seed"] = noise_seed;

    const std::vector<Vec3> sensors = latin_hypercube_layout(q, lo, hi, restarts, layout_seed);
    SensorDataset clean;
    if (mode == "fdtd") {
        const FDTDConfig fc = fdtd_config_from(cfg);
        const ScalarField3D grid = fdtd_grid(fc);
        const ScalarField3D u0 = make_ic(initial_condition_from(cfg, "ic.u"), grid);
        const ScalarField3D v0 = make_ic(initial_condition_from(cfg, "ic.v"), grid);
        SimulationDiagnostics diag;
        diag.snapshot_times = snapshot_times;
        clean = simulate(fc, u0, v0, sensors, snapshot_times.empty() ? nullptr : &diag);
        for (std::size_t s = 0; s < diag.snapshots.size(); ++s) {
            const ScalarField3D& f = diag.snapshots[s];
            std::string text = "i,j,k,value\n";
            for (std::size_t n = 0; n < f.size(); ++n) {
                const auto [i, j, k] = f.unflatten(n);
                text += std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) + "," +
                        format_double(f[n]) + "\n";
            }
            write_text_file(fs::path(snapshot_dir) / ("snapshot_" + std::to_string(s) + ".csv"), text);
        }
    } else if (mode == "point_source") {
        const MollifiedGreen g(cfg.get_double("source.R", 0.02), cfg.get_double("source.c", 0.5));
        const double T = cfg.get_double("source.T", 2.0);
        const auto n = static_cast<std::size_t>(cfg.get_int("source.samples", 200));
        if (n < 2) throw InputError("source.samples must be at least 2");
        std::vector<double> times(n);
        for (std::size_t k = 0; k < n; ++k) times[k] = T * static_cast<double>(k) / static_cast<double>(n - 1);
        clean = point_source_dataset(sensors, times, cfg.get_vec3("source.x0"), g);
    } else {
        throw InputError("simulate.mode must be fdtd or point_source");
    }
    const SensorDataset noisy = add_noise(clean, sigma, noise_seed);
    save_dataset(noisy, out);
    manifest.extra["outputs"] = {out.string()};
    manifest.write(fs::path(out.string() + ".manifest.json"));
    std::cout << "wrote " << noisy.num_sensors() << " sensors x " << noisy.num_times() << " samples to " << out
              << "\n";
    return 0;
}

int cmd_fit(const Config& cfg, const fs::path& dataset, const fs::path& out, const std::string& results,
            Manifest& manifest) {
    const SensorDataset data = select_sensors(load_dataset(dataset), cfg.get_int("fit.sensors", 0));
    const Hyperparameters layout = layout_for(cfg.get_string("fit.model", "u"));
    const SearchBox box = box_for(cfg, layout);
    MultistartConfig mc;
    mc.n_starts = static_cast<int>(cfg.get_int("fit.multistart", 20));
    mc.max_evals_per_start = static_cast<int>(cfg.get_int("fit.max_evals", 500));
    mc.seed = cfg.get_seed("fit.seed", 1);
    mc.x_tol = cfg.get_double("fit.x_tol", 1e-4);
    mc.f_tol = cfg.get_double("fit.f_tol", 1e-8);
    manifest.seeds["fit.seed"] = mc.seed;
    const MultistartResult r = multistart_fit(layout, data, box, mc, cfg.get_double("fit.alpha", 0.8));
    save_hyperparameters(r.best_theta, out);
    std::vector<std::string> outputs{out.string()};
    if (!results.empty()) {
        write_text_file(results, format_results_csv(r));
        outputs.push_back(results);
    }
    manifest.extra["outputs"] = outputs;
    manifest.extra["sensors_used"] = data.num_sensors();
    manifest.write(fs::path(out.string() + ".manifest.json"));
    std::cout << "best nlml " << format_double(r.best_nlml) << "\n" << hyperparameters_to_json(r.best_theta);
    return 0;
}

int cmd_reconstruct(const Config& cfg, const fs::path& dataset, const fs::path& theta_path, const fs::path& out_dir,
                    Manifest& manifest) {
    const SensorDataset data = select_sensors(load_dataset(dataset), cfg.get_int("fit.sensors", 0));
    const Hyperparameters theta = load_hyperparameters(theta_path);
    const FittedModel fm = fit(WaveKernelModel(theta, cfg.get_double("fit.alpha", 0.8)), data);
    const double dx = cfg.get_double("reconstruct.dx", 0.01);
    const double pad = cfg.get_double("reconstruct.pad", 0.1);
    const double dt_fd = cfg.get_double("reconstruct.dt_fd", 1e-7);
    std::vector<std::string> outputs;
    nlohmann::ordered_json errors = nlohmann::ordered_json::object();

    for (const char* tag : {"u", "v"}) {
        const bool is_u = tag[0] == 'u';
        const auto& part = is_u ? theta.u_part : theta.v_part;
        const std::string prefix = std::string("ic.") + tag;
        const bool has_truth = cfg.has(prefix + ".kind") && cfg.get_string(prefix + ".kind") != "zero";
        if (!part && !has_truth) continue;
        Vec3 lo;
        Vec3 hi;
        bool empty = true;
        if (part) extend_box(lo, hi, empty, part->x0, (1.0 + pad) * part->R);
        InitialCondition truth;
        if (has_truth) {
            truth = initial_condition_from(cfg, prefix);
            extend_box(lo, hi, empty, truth.center, (1.0 + pad) * truth.support_radius());
        }
        const ScalarField3D grid = ScalarField3D::covering(lo, hi, dx);
        const ScalarField3D est = is_u ? reconstruct_u0(fm, grid) : reconstruct_v0(fm, grid, dt_fd);
        const fs::path file = out_dir / (std::string(tag) + "0.csv");
        write_text_file(file, field_csv(est));
        outputs.push_back(file.string());
        if (cfg.has("reconstruct.slice_z")) {
            const fs::path sfile = out_dir / (std::string(tag) + "0_slice.csv");
            write_text_file(sfile, slice_csv(est, cfg.get_double("reconstruct.slice_z")));
            outputs.push_back(sfile.string());
        }
        if (has_truth) {
            const ScalarField3D ref = make_ic(truth, grid);
            const double inf = std::numeric_limits<double>::infinity();
            errors[tag] = {{"e1", lp_relative_error(est, ref, 1.0)},
                           {"e2", lp_relative_error(est, ref, 2.0)},
                           {"einf", lp_relative_error(est, ref, inf)}};
        }
    }
    if (!errors.empty()) {
        write_text_file(out_dir / "errors.json", errors.dump(2) + "\n");
        outputs.push_back((out_dir / "errors.json").string());
        std::cout << errors.dump(2) << "\n";
    }
    manifest.extra["outputs"] = outputs;
    manifest.write(out_dir / "manifest.json");
    return 0;
}

int cmd_locate(const Config& cfg, const fs::path& dataset, const fs::path& out_dir, Manifest& manifest) {
    const SensorDataset data = load_dataset(dataset);
    const double c = cfg.get_double("locate.c", cfg.get_double("source.c", 0.5));
    const MollifiedGreen g(cfg.get_double("locate.R", cfg.get_double("source.R", 0.02)), c);
    const auto n = static_cast<std::size_t>(cfg.get_int("locate.grid", 40));
    if (n < 2) throw InputError("locate.grid must be at least 2");
    const ScalarField3D grid(Vec3::Zero(), 1.0 / static_cast<double>(n - 1), {n, n, n});
    const Eigen::VectorXd W = flatten_observations(data);
    const double lambda = cfg.get_double("locate.lambda", default_scan_lambda(W));
    const ScanResult res = scan(data, g, grid, lambda, cfg.get_double("locate.quantile", 0.005));

    std::string scan_text = "x,y,z,L\n";
    for (std::size_t i = 0; i < res.grid.size(); ++i) {
        const Vec3 x = res.grid.node(i);
        scan_text += format_double(x[0]) + "," + format_double(x[1]) + "," + format_double(x[2]) + "," +
                     format_double(res.grid[i]) + "\n";
    }
    std::string level_text = "x,y,z,L\n";
    for (std::size_t i : res.threshold_set) {
        const Vec3 x = res.grid.node(i);
        level_text += format_double(x[0]) + "," + format_double(x[1]) + "," + format_double(x[2]) + "," +
                      format_double(res.grid[i]) + "\n";
    }
    write_text_file(out_dir / "scan.csv", scan_text);
    write_text_file(out_dir / "levelset.csv", level_text);
    std::cout << "argmin " << format_double(res.argmin[0]) << " " << format_double(res.argmin[1]) << " "
              << format_double(res.argmin[2]) << "\n";
    for (std::size_t i = 0; i < data.num_sensors(); ++i) {
        Eigen::Index k = 0;
        data.values().row(static_cast<Eigen::Index>(i)).cwiseAbs().maxCoeff(&k);
        const double Ti = data.times()[static_cast<std::size_t>(k)];
        std::cout << "sensor " << i << " sphere radius c*T = " << format_double(c * Ti) << "\n";
    }
    manifest.extra["outputs"] = {(out_dir / "scan.csv").string(), (out_dir / "levelset.csv").string()};
    manifest.extra["lambda"] = lambda;
    manifest.write(out_dir / "manifest.json");
    return 0;
}

int cmd_kernel_eval(const Config& cfg, const fs::path& theta_path, const fs::path& pairs, const fs::path& out,
                    Manifest& manifest) {
    const WaveKernelModel model(load_hyperparameters(theta_path), cfg.get_double("fit.alpha", 0.8));
    std::istringstream is(read_text_file(pairs));
    std::string line;
    if (!std::getline(is, line)) throw InputError("empty pairs file");
    const std::vector<std::string> expected{"x", "y", "z", "t", "xp", "yp", "zp", "tp"};
    if (split(line) != expected) throw InputError("pairs header must be x,y,z,t,xp,yp,zp,tp");
    std::string text = "x,y,z,t,xp,yp,zp,tp,value\n";
    while (std::getline(is, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto cells = split(line);
        if (cells.size() != 8) throw InputError("pairs rows need 8 fields");
        double v[8];
        for (int i = 0; i < 8; ++i) v[i] = parse_cell(cells[static_cast<std::size_t>(i)]);
        const double k = model(SpaceTimePoint(Vec3(v[0], v[1], v[2]), v[3]), SpaceTimePoint(Vec3(v[4], v[5], v[6]), v[7]));
        for (int i = 0; i < 8; ++i) text += format_double(v[i]) + ",";
        text += format_double(k) + "\n";
    }
    write_text_file(out, text);
    manifest.extra["outputs"] = {out.string()};
    manifest.write(fs::path(out.string() + ".manifest.json"));
    return 0;
}

int cmd_coherence(const Config& cfg, const fs::path& theta_path, const fs::path& dataset, const fs::path& out,
                  Manifest& manifest) {
    const WaveKernelModel model(load_hyperparameters(theta_path), cfg.get_double("fit.alpha", 0.8));
    const SensorDataset data = load_dataset(dataset);
    const Eigen::MatrixXd C = layout_coherence(model, data.sensors(), data.times());
    std::string text = "sensor";
    for (Eigen::Index j = 0; j < C.cols(); ++j) text += "," + std::to_string(j);
    text += "\n";
    for (Eigen::Index i = 0; i < C.rows(); ++i) {
        text += std::to_string(i);
        for (Eigen::Index j = 0; j < C.cols(); ++j) text += "," + format_double(C(i, j));
        text += "\n";
    }
    write_text_file(out, text);
    manifest.extra["outputs"] = {out.string()};
    manifest.write(fs::path(out.string() + ".manifest.json"));
    return 0;
}

}  // namespace

FDTDConfig fdtd_config_from(const Config& cfg) {
    FDTDConfig fc;
    fc.c = cfg.get_double("fdtd.c", fc.c);
    const long long nodes = cfg.get_int("fdtd.nodes", 24);
    if (nodes < 3) throw InputError("fdtd.nodes must be at least 3");
    fc.dx = 1.0 / static_cast<double>(nodes - 1);
    fc.dt = cfg.get_double("fdtd.dt", fc.dt);
    fc.T = cfg.get_double("fdtd.T", fc.T);
    fc.output_rate = cfg.get_double("fdtd.output_rate", fc.output_rate);
    fc.validate();
    return fc;
}

InitialCondition initial_condition_from(const Config& cfg, const std::string& prefix) {
    const std::string kind = cfg.get_string(prefix + ".kind", "zero");
    if (kind == "zero") return InitialCondition::zero();
    const Vec3 center = cfg.get_vec3(prefix + ".center");
    const double A = cfg.get_double(prefix + ".amplitude");
    if (kind == "ring_cosine")
        return InitialCondition::ring(center, cfg.get_double(prefix + ".R1"), cfg.get_double(prefix + ".R2"), A);
    if (kind == "raised_cosine") return InitialCondition::raised(center, cfg.get_double(prefix + ".R"), A);
    throw InputError(prefix + ".kind must be zero, ring_cosine or raised_cosine");
}

int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data());
}

int run(int argc, const char* const* argv) {
    CLI::App app{"Wave-equation Gaussian process toolkit"};
    app.require_subcommand(1);
    unsigned threads = 0;
    app.add_option("--threads", threads, "worker thread cap (0 = all cores)");

    std::string config_path;
    std::vector<std::string> overrides;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "key = value config file");
        sub->add_option("--set", overrides, "override a config key (key=value)");
    };

    std::string out, dataset, theta, out_dir, results, pairs, snapshot_dir, model;
    std::vector<double> snapshot_times;
    std::uint64_t seed = 0;
    std::uint64_t layout_seed = 0;
    double noise_sigma = -1.0;
    int multistart = 0;
    int max_evals = 0;
    int sensors = 0;

    auto* sim = app.add_subcommand("simulate", "generate a sensor dataset");
    common(sim);
    sim->add_option("--out", out, "dataset CSV")->required();
    sim->add_option("--seed", seed, "noise seed");
    sim->add_option("--layout-seed", layout_seed, "sensor layout seed");
    sim->add_option("--noise-sigma", noise_sigma, "noise standard deviation");
    sim->add_option("--sensors", sensors, "number of sensors");
    sim->add_option("--snapshot-times", snapshot_times, "times of full-field dumps")->delimiter(',');
    sim->add_option("--snapshot-dir", snapshot_dir, "directory for field dumps");

    auto* fitc = app.add_subcommand("fit", "estimate hyperparameters by multistart NLML minimization");
    common(fitc);
    fitc->add_option("--dataset", dataset)->required();
    fitc->add_option("--out", out, "hyperparameter JSON")->required();
    fitc->add_option("--model", model, "u, v or uv");
    fitc->add_option("--multistart", multistart, "number of starts");
    fitc->add_option("--max-evals", max_evals, "evaluation budget per start");
    fitc->add_option("--seed", seed, "start seed");
    fitc->add_option("--sensors", sensors, "use only the first N sensors");
    fitc->add_option("--results", results, "per-start results CSV");

    auto* rec = app.add_subcommand("reconstruct", "recover initial conditions on a grid");
    common(rec);
    rec->add_option("--dataset", dataset)->required();
    rec->add_option("--theta", theta)->required();
    rec->add_option("--out-dir", out_dir)->required();
    rec->add_option("--sensors", sensors, "use only the first N sensors");

    auto* loc = app.add_subcommand("locate", "scan the point-source likelihood over a grid");
    common(loc);
    loc->add_option("--dataset", dataset)->required();
    loc->add_option("--out-dir", out_dir)->required();

    auto* ke = app.add_subcommand("kernel-eval", "evaluate the wave kernel on point pairs");
    common(ke);
    ke->add_option("--theta", theta)->required();
    ke->add_option("--pairs", pairs)->required();
    ke->add_option("--out", out)->required();

    auto* coh = app.add_subcommand("coherence", "cross-kernel magnitudes between sensors");
    common(coh);
    coh->add_option("--theta", theta)->required();
    coh->add_option("--dataset", dataset)->required();
    coh->add_option("--out", out)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        set_thread_count(threads);
        Config cfg = load_config(config_path, overrides);
        Manifest manifest;
        manifest.args.assign(argv + 1, argv + argc);
        manifest.cfg = &cfg;
        if (*sim) {
            if (sim->count("--seed")) cfg.set("noise.seed", std::to_string(seed));
            if (sim->count("--layout-seed")) cfg.set("layout.seed", std::to_string(layout_seed));
            if (sim->count("--noise-sigma")) cfg.set("noise.sigma", format_double(noise_sigma));
            if (sim->count("--sensors")) cfg.set("layout.sensors", std::to_string(sensors));
            manifest.command = "simulate";
            return cmd_simulate(cfg, out, snapshot_times, snapshot_dir.empty() ? "." : snapshot_dir, manifest);
        }
        if (*fitc) {
            if (fitc->count("--model")) cfg.set("fit.model", model);
            if (fitc->count("--multistart")) cfg.set("fit.multistart", std::to_string(multistart));
            if (fitc->count("--max-evals")) cfg.set("fit.max_evals", std::to_string(max_evals));
            if (fitc->count("--seed")) cfg.set("fit.seed", std::to_string(seed));
            if (fitc->count("--sensors")) cfg.set("fit.sensors", std::to_string(sensors));
            manifest.command = "fit";
            return cmd_fit(cfg, dataset, out, results, manifest);
        }
        if (*rec) {
            if (rec->count("--sensors")) cfg.set("fit.sensors", std::to_string(sensors));
            manifest.command = "reconstruct";
            return cmd_reconstruct(cfg, dataset, theta, out_dir, manifest);
        }
        if (*loc) {
            manifest.command = "locate";
            return cmd_locate(cfg, dataset, out_dir, manifest);
        }
        if (*ke) {
            manifest.command = "kernel-eval";
            return cmd_kernel_eval(cfg, theta, pairs, out, manifest);
        }
        if (*coh) {
            manifest.command = "coherence";
            return cmd_coherence(cfg, theta, dataset, out, manifest);
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace wavegp
