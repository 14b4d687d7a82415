#include "wavegp/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace wavegp {

namespace {

// Legendre P_n(x) and its derivative by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

GaussRule build_rule(int n) {
    GaussRule rule;
    rule.nodes.assign(static_cast<std::size_t>(n), 0.0);
    rule.weights.assign(static_cast<std::size_t>(n), 0.0);
    const double pi = boost::math::constants::pi<double>();
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            const auto [p, dp] = legendre(n, x);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double dp = legendre(n, x).second;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[static_cast<std::size_t>(i)] = -x;
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
    if (n < 1) throw std::runtime_error("Gauss-Legendre order must be positive");
    static std::mutex mu;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
    return it->second;
}

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol, double rel_tol) {
    if (a == b) return 0.0;
    double err = 0.0;
    double l1 = 0.0;
    const double val = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 30, rel_tol * 0.1,
                                                                                     &err, &l1);
    if (!std::isfinite(val)) throw std::runtime_error("quadrature produced a non-finite value");
    if (err > std::max(abs_tol, rel_tol * std::abs(val)) && err > 1e-15 * l1 * 10)
        throw std::runtime_error("adaptive quadrature did not reach the requested tolerance");
    return val;
}

double integrate_split(const std::function<double(double)>& f, double a, double b, std::vector<double> breaks,
                       double abs_tol, double rel_tol) {
    breaks.erase(std::remove_if(breaks.begin(), breaks.end(), [&](double x) { return !(x > a && x < b); }),
                 breaks.end());
    std::sort(breaks.begin(), breaks.end());
    double total = 0.0;
    double lo = a;
    for (double x : breaks) {
        total += integrate(f, lo, x, abs_tol, rel_tol);
        lo = x;
    }
    total += integrate(f, lo, b, abs_tol, rel_tol);
    return total;
}

void composite_gauss(double a, double b, std::vector<double> breaks, int n, std::vector<double>& nodes,
                     std::vector<double>& weights) {
    const GaussRule& rule = gauss_legendre(n);
    breaks.erase(std::remove_if(breaks.begin(), breaks.end(), [&](double x) { return !(x > a && x < b); }),
                 breaks.end());
    std::sort(breaks.begin(), breaks.end());
    breaks.insert(breaks.begin(), a);
    breaks.push_back(b);
    for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
        const double half = 0.5 * (breaks[p + 1] - breaks[p]);
        const double mid = 0.5 * (breaks[p + 1] + breaks[p]);
        if (half <= 0.0) continue;
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
            nodes.push_back(mid + half * rule.nodes[k]);
            weights.push_back(half * rule.weights[k]);
        }
    }
}

}  // namespace wavegp
