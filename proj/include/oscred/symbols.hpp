#ifndef OSCRED_SYMBOLS_HPP
#define OSCRED_SYMBOLS_HPP

#include <complex>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "oscred/fock.hpp"

namespace oscred {

using cplx = std::complex<double>;

// One monomial key c * k^{-l} * zbar^gamma * z^delta.
struct SymbolKey {
    MultiIndex gamma;
    MultiIndex delta;
    long long l = 0;
    auto operator<=>(const SymbolKey&) const = default;
};

// Finite polynomial symbol over C^n with 1/k bookkeeping; the computational
// model of the symbol class. Zero coefficients are never stored.
class PolySymbol {
public:
    PolySymbol() = default;
    explicit PolySymbol(std::size_t n) : n_(n) {}

    static PolySymbol constant(std::size_t n, cplx value);
    // zbar^gamma z^delta / k^l
    static PolySymbol monomial(MultiIndex gamma, MultiIndex delta, long long l = 0,
                               cplx coeff = 1.0);
    // the action variable s_i = zbar_i z_i (0-based index)
    static PolySymbol action(std::size_t n, std::size_t i);

    std::size_t n() const { return n_; }
    const std::map<SymbolKey, cplx>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    void add_term(const SymbolKey& key, cplx coeff);

    PolySymbol operator+(const PolySymbol& rhs) const;
    PolySymbol operator-(const PolySymbol& rhs) const;
    PolySymbol operator*(const PolySymbol& rhs) const;
    PolySymbol operator*(cplx scalar) const;

    PolySymbol dz(std::size_t i) const;     // d/dz_i
    PolySymbol dzbar(std::size_t i) const;  // d/dzbar_i

    // conjugate symbol: swap gamma/delta, conjugate coefficients
    PolySymbol adjoint() const;
    bool is_hermitian(double tol = 0.0) const;

    // true when every term satisfies <p, delta - gamma> = 0
    bool is_circle_invariant(const WeightVector& weights) const;

    // principal (l = 0, circle-diagonal) part has only gamma == delta terms
    bool is_action_diagonal() const;

    // evaluate at a complex point; hbar = 1/k enters through the k^{-l} factors
    cplx eval_at(std::span<const cplx> z, long long k) const;

    std::string render() const;

private:
    std::size_t n_ = 0;
    std::map<SymbolKey, cplx> terms_;
};

// Action-angle point of the level set: s >= 0 with sum_i p_i s_i = 1,
// plus n-1 residual angles. The angle lift used everywhere is
// theta = (phi_1, ..., phi_{n-1}, 0).
struct ReducedPoint {
    std::vector<double> s;
    std::vector<double> phi;
};

ReducedPoint make_reduced_point(const WeightVector& weights, std::vector<double> s,
                                std::vector<double> phi = {});

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t offset);
    std::size_t offset;
};

// Symbol mini-language:
//   expr   := term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := 'z(' i ')' | 'zb(' i ')' | 's(' i ')' | 'kinv' | coeff
//   coeff  := real literal | real literal 'i' | '(' a (('+'|'-') b 'i')? ')'
// Indices are 1-based; 's(i)' expands to zb(i)*z(i); repeated factors
// multiply exponents. Errors carry the byte offset of the offending token.
PolySymbol parse_symbol(const std::string& text, std::size_t n);

// S^1-average against the weighted action: keeps exactly the terms with
// <p, delta - gamma> = 0. Idempotent; preserves Hermitian symbols.
PolySymbol average_circle(const PolySymbol& f, const WeightVector& weights);

// Principal-symbol evaluation at a reduced point: l = 0 terms only,
// s_i^((gamma_i + delta_i)/2) e^{i (delta - gamma).theta} with the lift above.
cplx eval_principal(const PolySymbol& f, const ReducedPoint& point);

// Ambient Poisson bracket {f, g} = i sum_j (dzbar_j f dz_j g - dz_j f dzbar_j g),
// the sign fixed by {s_i, theta_i} = 1 in action-angle form.
PolySymbol poisson_bracket_ambient(const PolySymbol& f, const PolySymbol& g);

// Real polynomials in one variable, used as spectral test functions.
class RealPolynomial {
public:
    RealPolynomial() = default;
    explicit RealPolynomial(std::vector<double> coeffs);  // ascending powers

    static RealPolynomial parse(const std::string& text);

    double operator()(double x) const;
    const std::vector<double>& coeffs() const { return c_; }
    long long degree() const { return c_.empty() ? 0 : (long long)c_.size() - 1; }
    std::string render() const;

    // f(g) for a symbol g, expanded as a PolySymbol
    PolySymbol compose(const PolySymbol& g) const;

private:
    std::vector<double> c_;
};

}  // namespace oscred

#endif
