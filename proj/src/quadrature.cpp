#include "oscred/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace oscred {

namespace {

GaussLegendreRule compute_rule(std::size_t m) {
    GaussLegendreRule r;
    r.nodes.resize(m);
    r.weights.resize(m);
    for (std::size_t i = 0; i < (m + 1) / 2; ++i) {
        double x = std::cos(M_PI * (double(i) + 0.75) / (double(m) + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * double(j) + 1.0) * x * p1 - double(j) * p2) / (double(j) + 1.0);
            }
            pp = double(m) * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.nodes[i] = -x;
        r.nodes[m - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        r.weights[i] = w;
        r.weights[m - 1 - i] = w;
    }
    return r;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(std::size_t order) {
    static std::map<std::size_t, GaussLegendreRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, compute_rule(order)).first;
    return it->second;
}

double pairwise_sum(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(values.subspan(0, half)) + pairwise_sum(values.subspan(half));
}

namespace {

constexpr std::size_t kPanelOrder = 16;

double panels_1d(const std::function<double(double)>& f, double a, double b,
                 std::size_t npanels) {
    const auto& rule = gauss_legendre(kPanelOrder);
    const double h = (b - a) / double(npanels);
    std::vector<double> contrib(npanels * kPanelOrder);
    for (std::size_t p = 0; p < npanels; ++p) {
        const double lo = a + h * double(p);
        const double mid = lo + 0.5 * h;
        for (std::size_t i = 0; i < kPanelOrder; ++i)
            contrib[p * kPanelOrder + i] =
                0.5 * h * rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]);
    }
    return pairwise_sum(contrib);
}

}  // namespace

QuadResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                        double rel_tol, std::size_t max_nodes) {
    QuadResult res;
    double prev = panels_1d(f, a, b, 1);
    std::size_t npanels = 2;
    while (true) {
        const double cur = panels_1d(f, a, b, npanels);
        res.nodes = npanels * kPanelOrder;
        res.error_estimate = std::abs(cur - prev);
        res.value = cur;
        const double scale = std::max(std::abs(cur), 1e-300);
        if (res.error_estimate <= rel_tol * scale + 1e-305) {
            res.converged = true;
            return res;
        }
        if (res.nodes * 2 > max_nodes) {
            throw QuadratureError("integrate_1d: node cap reached before convergence", res);
        }
        prev = cur;
        npanels *= 2;
    }
}

namespace {

// Tensor GL over the Duffy-style box mapping of the weighted simplex.
// Free coordinates keep their natural index order, skipping `eliminated`.
double simplex_panels(const std::function<double(std::span<const double>)>& g,
                      std::span<const long long> p, std::size_t eliminated,
                      std::size_t npanels) {
    const std::size_t n = p.size();
    const std::size_t dim = n - 1;
    if (dim == 0) {
        std::vector<double> s(n);
        s[eliminated] = 1.0 / double(p[eliminated]);
        const double val = g(std::span<const double>(s));
        return val / double(p[eliminated]);
    }

    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < n; ++i)
        if (i != eliminated) free.push_back(i);

    const auto& rule = gauss_legendre(kPanelOrder);
    const std::size_t pts = npanels * kPanelOrder;
    std::vector<double> axis(pts), axw(pts);
    const double h = 1.0 / double(npanels);
    for (std::size_t q = 0; q < npanels; ++q)
        for (std::size_t i = 0; i < kPanelOrder; ++i) {
            axis[q * kPanelOrder + i] = h * (double(q) + 0.5 + 0.5 * rule.nodes[i]);
            axw[q * kPanelOrder + i] = 0.5 * h * rule.weights[i];
        }

    std::vector<double> contrib;
    contrib.reserve(std::size_t(std::pow(double(pts), double(dim))));
    std::vector<std::size_t> idx(dim, 0);
    std::vector<double> s(n, 0.0);
    while (true) {
        double budget = 1.0;
        double jac = 1.0;
        for (std::size_t d = 0; d < dim; ++d) {
            const double xi = axis[idx[d]];
            const std::size_t i = free[d];
            s[i] = budget * xi / double(p[i]);
            jac *= budget / double(p[i]) * axw[idx[d]];
            budget *= (1.0 - xi);
        }
        s[eliminated] = budget / double(p[eliminated]);
        jac /= double(p[eliminated]);
        contrib.push_back(jac * g(std::span<const double>(s)));

        std::size_t d = 0;
        while (d < dim && ++idx[d] == pts) {
            idx[d] = 0;
            ++d;
        }
        if (d == dim) break;
    }
    return pairwise_sum(contrib);
}

}  // namespace

QuadResult integrate_simplex(const std::function<double(std::span<const double>)>& g,
                             std::span<const long long> weights, std::size_t eliminated,
                             double rel_tol, std::size_t max_nodes) {
    const std::size_t n = weights.size();
    if (eliminated >= n) throw std::invalid_argument("integrate_simplex: bad eliminated index");
    if (n - 1 > 3) throw std::invalid_argument("integrate_simplex: dimension > 3 unsupported");

    QuadResult res;
    if (n == 1) {
        res.value = simplex_panels(g, weights, eliminated, 1);
        res.converged = true;
        res.nodes = 1;
        return res;
    }
    const std::size_t dim = n - 1;
    double prev = simplex_panels(g, weights, eliminated, 1);
    std::size_t npanels = 2;
    while (true) {
        const double cur = simplex_panels(g, weights, eliminated, npanels);
        std::size_t total = 1;
        for (std::size_t d = 0; d < dim; ++d) total *= npanels * kPanelOrder;
        res.nodes = total;
        res.error_estimate = std::abs(cur - prev);
        res.value = cur;
        const double scale = std::max(std::abs(cur), 1e-300);
        if (res.error_estimate <= rel_tol * scale + 1e-305) {
            res.converged = true;
            return res;
        }
        std::size_t next = 1;
        for (std::size_t d = 0; d < dim; ++d) next *= 2 * npanels * kPanelOrder;
        if (next > max_nodes)
            throw QuadratureError("integrate_simplex: node cap reached before convergence", res);
        prev = cur;
        npanels *= 2;
    }
}

}  // namespace oscred
