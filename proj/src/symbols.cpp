#include "oscred/symbols.hpp"

#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace oscred {

namespace {
constexpr double kDropTol = 0.0;  // exact zero check; coefficients are never rounded away
}

PolySymbol PolySymbol::constant(std::size_t n, cplx value) {
    PolySymbol f(n);
    f.add_term({MultiIndex(n, 0), MultiIndex(n, 0), 0}, value);
    return f;
}

PolySymbol PolySymbol::monomial(MultiIndex gamma, MultiIndex delta, long long l, cplx coeff) {
    if (gamma.size() != delta.size())
        throw std::invalid_argument("PolySymbol::monomial: gamma/delta size mismatch");
    PolySymbol f(gamma.size());
    f.add_term({std::move(gamma), std::move(delta), l}, coeff);
    return f;
}

PolySymbol PolySymbol::action(std::size_t n, std::size_t i) {
    MultiIndex e(n, 0);
    e[i] = 1;
    return monomial(e, e, 0, 1.0);
}

void PolySymbol::add_term(const SymbolKey& key, cplx coeff) {
    if (key.gamma.size() != n_ || key.delta.size() != n_)
        throw std::invalid_argument("PolySymbol::add_term: dimension mismatch");
    if (key.l < 0) throw std::invalid_argument("PolySymbol::add_term: negative k power");
    auto it = terms_.find(key);
    if (it == terms_.end()) {
        if (coeff != cplx(0.0)) terms_.emplace(key, coeff);
        return;
    }
    it->second += coeff;
    if (std::abs(it->second) <= kDropTol) terms_.erase(it);
}

PolySymbol PolySymbol::operator+(const PolySymbol& rhs) const {
    if (n_ != rhs.n_) throw std::invalid_argument("PolySymbol: dimension mismatch in sum");
    PolySymbol out = *this;
    for (const auto& [k, c] : rhs.terms_) out.add_term(k, c);
    return out;
}

PolySymbol PolySymbol::operator-(const PolySymbol& rhs) const {
    if (n_ != rhs.n_) throw std::invalid_argument("PolySymbol: dimension mismatch in difference");
    PolySymbol out = *this;
    for (const auto& [k, c] : rhs.terms_) out.add_term(k, -c);
    return out;
}

PolySymbol PolySymbol::operator*(const PolySymbol& rhs) const {
    if (n_ != rhs.n_) throw std::invalid_argument("PolySymbol: dimension mismatch in product");
    PolySymbol out(n_);
    for (const auto& [ka, ca] : terms_) {
        for (const auto& [kb, cb] : rhs.terms_) {
            SymbolKey key{ka.gamma, ka.delta, ka.l + kb.l};
            for (std::size_t i = 0; i < n_; ++i) {
                key.gamma[i] += kb.gamma[i];
                key.delta[i] += kb.delta[i];
            }
            out.add_term(key, ca * cb);
        }
    }
    return out;
}

PolySymbol PolySymbol::operator*(cplx scalar) const {
    PolySymbol out(n_);
    if (scalar == cplx(0.0)) return out;
    for (const auto& [k, c] : terms_) out.add_term(k, c * scalar);
    return out;
}

PolySymbol PolySymbol::dz(std::size_t i) const {
    PolySymbol out(n_);
    for (const auto& [k, c] : terms_) {
        if (k.delta[i] == 0) continue;
        SymbolKey key = k;
        const double power = double(key.delta[i]--);
        out.add_term(key, c * power);
    }
    return out;
}

PolySymbol PolySymbol::dzbar(std::size_t i) const {
    PolySymbol out(n_);
    for (const auto& [k, c] : terms_) {
        if (k.gamma[i] == 0) continue;
        SymbolKey key = k;
        const double power = double(key.gamma[i]--);
        out.add_term(key, c * power);
    }
    return out;
}

PolySymbol PolySymbol::adjoint() const {
    PolySymbol out(n_);
    for (const auto& [k, c] : terms_) out.add_term({k.delta, k.gamma, k.l}, std::conj(c));
    return out;
}

bool PolySymbol::is_hermitian(double tol) const {
    for (const auto& [k, c] : terms_) {
        auto it = terms_.find({k.delta, k.gamma, k.l});
        if (it == terms_.end()) {
            if (std::abs(c) > tol) return false;
            continue;
        }
        if (std::abs(it->second - std::conj(c)) > tol) return false;
    }
    return true;
}

bool PolySymbol::is_circle_invariant(const WeightVector& weights) const {
    for (const auto& [k, c] : terms_) {
        long long w = 0;
        for (std::size_t i = 0; i < n_; ++i) w += weights[i] * (k.delta[i] - k.gamma[i]);
        if (w != 0) return false;
    }
    return true;
}

bool PolySymbol::is_action_diagonal() const {
    for (const auto& [k, c] : terms_)
        if (k.gamma != k.delta) return false;
    return true;
}

cplx PolySymbol::eval_at(std::span<const cplx> z, long long k) const {
    if (z.size() != n_) throw std::invalid_argument("PolySymbol::eval_at: dimension mismatch");
    cplx total = 0.0;
    for (const auto& [key, c] : terms_) {
        cplx v = c;
        for (long long j = 0; j < key.l; ++j) v /= double(k);
        for (std::size_t i = 0; i < n_; ++i) {
            for (long long j = 0; j < key.gamma[i]; ++j) v *= std::conj(z[i]);
            for (long long j = 0; j < key.delta[i]; ++j) v *= z[i];
        }
        total += v;
    }
    return total;
}

std::string PolySymbol::render() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    os.precision(17);
    bool first = true;
    for (const auto& [k, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.real();
        if (c.imag() != 0.0) os << (c.imag() > 0 ? "+" : "-") << std::abs(c.imag()) << "i";
        os << ")";
        for (long long j = 0; j < k.l; ++j) os << "*kinv";
        for (std::size_t i = 0; i < n_; ++i)
            for (long long j = 0; j < k.gamma[i]; ++j) os << "*zb(" << (i + 1) << ")";
        for (std::size_t i = 0; i < n_; ++i)
            for (long long j = 0; j < k.delta[i]; ++j) os << "*z(" << (i + 1) << ")";
    }
    return os.str();
}

ReducedPoint make_reduced_point(const WeightVector& weights, std::vector<double> s,
                                std::vector<double> phi) {
    if (s.size() != weights.n())
        throw std::invalid_argument("make_reduced_point: dimension mismatch");
    double level = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] < 0.0) throw std::invalid_argument("make_reduced_point: negative action value");
        level += double(weights[i]) * s[i];
    }
    if (std::abs(level - 1.0) > 1e-12)
        throw std::invalid_argument("make_reduced_point: point not on the weighted simplex");
    if (phi.empty()) phi.assign(weights.n() - 1, 0.0);
    if (phi.size() != weights.n() - 1)
        throw std::invalid_argument("make_reduced_point: need n-1 residual angles");
    return ReducedPoint{std::move(s), std::move(phi)};
}

// ---------------------------------------------------------------------------
// parser

ParseError::ParseError(const std::string& msg, std::size_t off)
    : std::runtime_error(msg + " at byte " + std::to_string(off)), offset(off) {}

namespace {

struct Cursor {
    const std::string& text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace((unsigned char)text[pos])) ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= text.size();
    }
    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }
    bool consume(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    bool consume_word(const char* w) {
        skip_ws();
        const std::size_t len = std::string(w).size();
        if (text.compare(pos, len, w) == 0) {
            pos += len;
            return true;
        }
        return false;
    }
};

double parse_real(Cursor& cur) {
    cur.skip_ws();
    const std::size_t start = cur.pos;
    std::size_t i = cur.pos;
    if (i < cur.text.size() && (cur.text[i] == '+' || cur.text[i] == '-')) ++i;
    bool digits = false;
    while (i < cur.text.size() && (std::isdigit((unsigned char)cur.text[i]) || cur.text[i] == '.')) {
        digits = digits || std::isdigit((unsigned char)cur.text[i]);
        ++i;
    }
    if (i < cur.text.size() && (cur.text[i] == 'e' || cur.text[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < cur.text.size() && (cur.text[j] == '+' || cur.text[j] == '-')) ++j;
        if (j < cur.text.size() && std::isdigit((unsigned char)cur.text[j])) {
            ++j;
            while (j < cur.text.size() && std::isdigit((unsigned char)cur.text[j])) ++j;
            i = j;
        }
    }
    if (!digits) throw ParseError("expected numeric literal", start);
    const double v = std::stod(cur.text.substr(start, i - start));
    cur.pos = i;
    return v;
}

std::size_t parse_index(Cursor& cur, std::size_t n) {
    cur.skip_ws();
    const std::size_t at = cur.pos;
    if (!cur.consume('(')) throw ParseError("expected '('", cur.pos);
    cur.skip_ws();
    const std::size_t numpos = cur.pos;
    std::size_t i = cur.pos;
    while (i < cur.text.size() && std::isdigit((unsigned char)cur.text[i])) ++i;
    if (i == cur.pos) throw ParseError("expected coordinate index", numpos);
    const long long idx = std::stoll(cur.text.substr(cur.pos, i - cur.pos));
    cur.pos = i;
    if (!cur.consume(')')) throw ParseError("expected ')'", cur.pos);
    if (idx < 1 || std::size_t(idx) > n)
        throw ParseError("coordinate index out of range 1.." + std::to_string(n), numpos);
    (void)at;
    return std::size_t(idx - 1);
}

// one multiplicative factor, accumulated into (coeff, gamma, delta, l)
void parse_factor(Cursor& cur, std::size_t n, cplx& coeff, MultiIndex& gamma, MultiIndex& delta,
                  long long& l) {
    cur.skip_ws();
    const std::size_t at = cur.pos;
    if (cur.consume_word("zb")) {
        gamma[parse_index(cur, n)] += 1;
        return;
    }
    if (cur.consume_word("z")) {
        delta[parse_index(cur, n)] += 1;
        return;
    }
    if (cur.consume_word("s")) {
        const std::size_t i = parse_index(cur, n);
        gamma[i] += 1;
        delta[i] += 1;
        return;
    }
    if (cur.consume_word("kinv")) {
        l += 1;
        return;
    }
    if (cur.peek() == '(') {
        // parenthesized complex literal a, a+bi, a-bi
        cur.consume('(');
        const double re = parse_real(cur);
        double im = 0.0;
        cur.skip_ws();
        if (cur.peek() == '+' || cur.peek() == '-') {
            im = parse_real(cur);
            if (!cur.consume('i')) throw ParseError("expected 'i' after imaginary part", cur.pos);
        } else if (cur.consume('i')) {
            im = re;
            coeff *= cplx(0.0, im);
            if (!cur.consume(')')) throw ParseError("expected ')'", cur.pos);
            return;
        }
        if (!cur.consume(')')) throw ParseError("expected ')'", cur.pos);
        coeff *= cplx(re, im);
        return;
    }
    if (std::isdigit((unsigned char)cur.peek()) || cur.peek() == '.') {
        const double v = parse_real(cur);
        if (cur.pos < cur.text.size() && cur.text[cur.pos] == 'i') {
            ++cur.pos;
            coeff *= cplx(0.0, v);
        } else {
            coeff *= v;
        }
        return;
    }
    if (cur.pos < cur.text.size() && cur.text[cur.pos] == 'i' &&
        (cur.pos + 1 == cur.text.size() || !std::isalnum((unsigned char)cur.text[cur.pos + 1]))) {
        ++cur.pos;
        coeff *= cplx(0.0, 1.0);
        return;
    }
    throw ParseError("expected factor (z(i), zb(i), s(i), kinv or literal)", at);
}

}  // namespace

PolySymbol parse_symbol(const std::string& text, std::size_t n) {
    Cursor cur{text};
    PolySymbol out(n);
    if (cur.eof()) throw ParseError("empty symbol expression", 0);
    bool more = true;
    double sign = 1.0;
    if (cur.consume('-')) sign = -1.0;
    while (more) {
        cplx coeff = sign;
        MultiIndex gamma(n, 0), delta(n, 0);
        long long l = 0;
        parse_factor(cur, n, coeff, gamma, delta, l);
        while (cur.consume('*')) parse_factor(cur, n, coeff, gamma, delta, l);
        out.add_term({std::move(gamma), std::move(delta), l}, coeff);

        cur.skip_ws();
        if (cur.consume('+')) {
            sign = 1.0;
        } else if (cur.consume('-')) {
            sign = -1.0;
        } else {
            more = false;
        }
    }
    if (!cur.eof()) throw ParseError("unexpected trailing input", cur.pos);
    return out;
}

PolySymbol average_circle(const PolySymbol& f, const WeightVector& weights) {
    if (f.n() != weights.n())
        throw std::invalid_argument("average_circle: dimension mismatch");
    PolySymbol out(f.n());
    for (const auto& [k, c] : f.terms()) {
        long long w = 0;
        for (std::size_t i = 0; i < f.n(); ++i) w += weights[i] * (k.delta[i] - k.gamma[i]);
        if (w == 0) out.add_term(k, c);
    }
    return out;
}

cplx eval_principal(const PolySymbol& f, const ReducedPoint& point) {
    const std::size_t n = point.s.size();
    if (f.n() != n) throw std::invalid_argument("eval_principal: dimension mismatch");
    // lift theta = (phi_1, ..., phi_{n-1}, 0)
    std::vector<double> theta(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) theta[i] = point.phi[i];
    cplx total = 0.0;
    for (const auto& [k, c] : f.terms()) {
        if (k.l != 0) continue;
        double mag = 1.0;
        double ang = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const long long e = k.gamma[i] + k.delta[i];
            if (e > 0) mag *= std::pow(point.s[i], 0.5 * double(e));
            ang += double(k.delta[i] - k.gamma[i]) * theta[i];
        }
        total += c * mag * std::polar(1.0, ang);
    }
    return total;
}

PolySymbol poisson_bracket_ambient(const PolySymbol& f, const PolySymbol& g) {
    if (f.n() != g.n())
        throw std::invalid_argument("poisson_bracket_ambient: dimension mismatch");
    PolySymbol out(f.n());
    const cplx iunit(0.0, 1.0);
    for (std::size_t j = 0; j < f.n(); ++j) {
        out = out + (f.dzbar(j) * g.dz(j)) * iunit - (f.dz(j) * g.dzbar(j)) * iunit;
    }
    return out;
}

// ---------------------------------------------------------------------------
// real test-function polynomials

RealPolynomial::RealPolynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) {
    while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
}

double RealPolynomial::operator()(double x) const {
    double v = 0.0;
    for (std::size_t i = c_.size(); i-- > 0;) v = v * x + c_[i];
    return v;
}

std::string RealPolynomial::render() const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    os.precision(17);
    bool first = true;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0.0 && c_.size() > 1) continue;
        if (!first) os << " + ";
        first = false;
        os << c_[i];
        if (i >= 1) os << "*x";
        if (i >= 2) os << "^" << i;
    }
    return os.str();
}

RealPolynomial RealPolynomial::parse(const std::string& text) {
    Cursor cur{text};
    std::vector<double> coeffs;
    auto bump = [&](std::size_t pw, double v) {
        if (coeffs.size() <= pw) coeffs.resize(pw + 1, 0.0);
        coeffs[pw] += v;
    };
    if (cur.eof()) throw ParseError("empty polynomial expression", 0);
    double sign = 1.0;
    if (cur.consume('-')) sign = -1.0;
    bool more = true;
    while (more) {
        double coeff = sign;
        std::size_t power = 0;
        bool saw_factor = false;
        while (true) {
            cur.skip_ws();
            if (cur.consume('x')) {
                saw_factor = true;
                std::size_t e = 1;
                if (cur.consume('^')) {
                    cur.skip_ws();
                    std::size_t i = cur.pos;
                    while (i < cur.text.size() && std::isdigit((unsigned char)cur.text[i])) ++i;
                    if (i == cur.pos) throw ParseError("expected exponent", cur.pos);
                    e = std::stoull(cur.text.substr(cur.pos, i - cur.pos));
                    cur.pos = i;
                }
                power += e;
            } else if (std::isdigit((unsigned char)cur.peek()) || cur.peek() == '.') {
                saw_factor = true;
                coeff *= parse_real(cur);
            } else {
                break;
            }
            if (!cur.consume('*')) break;
        }
        if (!saw_factor) throw ParseError("expected term", cur.pos);
        bump(power, coeff);
        cur.skip_ws();
        if (cur.consume('+')) {
            sign = 1.0;
        } else if (cur.consume('-')) {
            sign = -1.0;
        } else {
            more = false;
        }
    }
    if (!cur.eof()) throw ParseError("unexpected trailing input", cur.pos);
    return RealPolynomial(std::move(coeffs));
}

PolySymbol RealPolynomial::compose(const PolySymbol& g) const {
    PolySymbol out(g.n());
    PolySymbol power = PolySymbol::constant(g.n(), 1.0);
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] != 0.0) out = out + power * cplx(c_[i]);
        if (i + 1 < c_.size()) power = power * g;
    }
    if (c_.empty()) return out;
    return out;
}

}  // namespace oscred
