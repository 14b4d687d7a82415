#pragma once

#include <functional>
#include <vector>

namespace wavegp {

struct GaussRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;  // sum to 2
};

// n-point Gauss-Legendre rule, cached per n.
const GaussRule& gauss_legendre(int n);

// Adaptive Gauss-Kronrod on [a, b]. Throws if the error estimate stays above
// max(abs_tol, rel_tol * |integral|).
double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol = 1e-12,
                 double rel_tol = 1e-12);

// Same, splitting [a, b] at the given interior breakpoints first.
double integrate_split(const std::function<double(double)>& f, double a, double b, std::vector<double> breaks,
                       double abs_tol = 1e-12, double rel_tol = 1e-12);

// Fixed composite rule: n-point Gauss-Legendre on every panel between
// consecutive breakpoints. Appends (node, weight) pairs.
void composite_gauss(double a, double b, std::vector<double> breaks, int n, std::vector<double>& nodes,
                     std::vector<double>& weights);

}  // namespace wavegp
