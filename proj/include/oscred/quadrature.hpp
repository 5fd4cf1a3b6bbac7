#ifndef OSCRED_QUADRATURE_HPP
#define OSCRED_QUADRATURE_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace oscred {

struct GaussLegendreRule {
    std::vector<double> nodes;    // on (-1, 1)
    std::vector<double> weights;  // sum to 2
};

// Nodes/weights by Newton iteration on P_m; cached per order.
const GaussLegendreRule& gauss_legendre(std::size_t order);

// Deterministic pairwise (tree) summation; result independent of any
// evaluation-order games upstream for a fixed vector length.
double pairwise_sum(std::span<const double> values);

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    bool converged = false;
    std::size_t nodes = 0;
};

class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, QuadResult partial)
        : std::runtime_error(what), partial_result(partial) {}
    QuadResult partial_result;
};

// Composite 16-point Gauss-Legendre with panel doubling until the relative
// change drops below rel_tol (with a small absolute floor). Throws
// QuadratureError when the node cap is hit without convergence.
QuadResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                        double rel_tol = 1e-10, std::size_t max_nodes = (1u << 20));

// Integral of g over the weighted simplex {s >= 0, sum_i p_i s_i = 1}
// against the Leray measure that eliminates coordinate `eliminated`
// (ds_{i != eliminated} / p_eliminated). The value is independent of the
// eliminated index; exposing it lets tests exercise that invariance.
// Dimension n-1 must be <= 3.
QuadResult integrate_simplex(const std::function<double(std::span<const double>)>& g,
                             std::span<const long long> weights, std::size_t eliminated,
                             double rel_tol = 1e-10, std::size_t max_nodes = (1u << 20));

}  // namespace oscred

#endif
