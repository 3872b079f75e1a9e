#include "polystruct/poly.hpp"

#include <cstdlib>
#include <sstream>

#include "polystruct/errors.hpp"
#include "polystruct/rng.hpp"

namespace polystruct {

Polynomial Polynomial::constant(int p, int n, int c) {
    Polynomial f(p, n);
    f.add_term(Exponents(n, 0), c);
    return f;
}

Polynomial Polynomial::variable(int p, int n, int i) {
    Polynomial f(p, n);
    Exponents e(n, 0);
    e[i] = 1;
    f.add_term(e, 1);
    return f;
}

int Polynomial::degree() const {
    int d = 0;
    for (const auto& [e, c] : terms) d = std::max(d, total_degree(e));
    return d;
}

void Polynomial::add_term(const Exponents& exps, int coeff) {
    if (static_cast<int>(exps.size()) != n)
        throw structural_error("Polynomial: exponent vector length mismatch");
    PrimeField F(p);
    coeff = F.reduce(coeff);
    if (coeff == 0) return;
    Exponents red(n);
    for (int i = 0; i < n; ++i) {
        if (exps[i] < 0) throw structural_error("Polynomial: negative exponent");
        red[i] = reduce_exponent(exps[i], p);
    }
    auto it = terms.find(red);
    if (it == terms.end()) {
        terms.emplace(std::move(red), coeff);
    } else {
        it->second = F.add(it->second, coeff);
        if (it->second == 0) terms.erase(it);
    }
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    Polynomial out = *this;
    for (const auto& [e, c] : o.terms) out.add_term(e, c);
    return out;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    Polynomial out = *this;
    for (const auto& [e, c] : o.terms) out.add_term(e, p - c);
    return out;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    Polynomial out(p, n);
    Exponents sum(n);
    for (const auto& [e1, c1] : terms)
        for (const auto& [e2, c2] : o.terms) {
            for (int i = 0; i < n; ++i) sum[i] = e1[i] + e2[i];
            out.add_term(sum, c1 * c2);
        }
    return out;
}

Polynomial Polynomial::scaled(int c) const {
    Polynomial out(p, n);
    for (const auto& [e, co] : terms) out.add_term(e, co * c);
    return out;
}

int Polynomial::evaluate(const Point& x) const {
    if (static_cast<int>(x.size()) != n)
        throw structural_error("Polynomial::evaluate: point dimension mismatch");
    PrimeField F(p);
    int acc = 0;
    for (const auto& [e, c] : terms) {
        int term = c;
        for (int i = 0; i < n && term != 0; ++i)
            if (e[i] != 0) term = term * F.pow(x[i], e[i]) % p;
        acc = F.add(acc, term);
    }
    return acc;
}

Polynomial Polynomial::homogeneous_part(int d) const {
    Polynomial out(p, n);
    for (const auto& [e, c] : terms)
        if (total_degree(e) == d) out.terms.emplace(e, c);
    return out;
}

Polynomial Polynomial::truncate_degree(int d) const {
    Polynomial out(p, n);
    for (const auto& [e, c] : terms)
        if (total_degree(e) <= d) out.terms.emplace(e, c);
    return out;
}

Polynomial Polynomial::substitute(const std::vector<Polynomial>& subs, int m_vars) const {
    if (static_cast<int>(subs.size()) != n)
        throw structural_error("Polynomial::substitute: need one replacement per variable");
    Polynomial out(p, m_vars);
    for (const auto& [e, c] : terms) {
        Polynomial term = Polynomial::constant(p, m_vars, c);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < e[i]; ++k) term = term * subs[i];
        out = out + term;
    }
    return out;
}

std::string Polynomial::to_string() const {
    if (terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms) {
        if (!first) os << " + ";
        first = false;
        bool printed = false;
        if (c != 1 || total_degree(e) == 0) {
            os << c;
            printed = true;
        }
        for (int i = 0; i < static_cast<int>(e.size()); ++i) {
            if (e[i] == 0) continue;
            if (printed) os << "*";
            os << "x" << (i + 1);
            if (e[i] > 1) os << "^" << e[i];
            printed = true;
        }
    }
    return os.str();
}

Polynomial reduce_raw(int p, int n,
                      const std::vector<std::pair<Exponents, int>>& raw_terms) {
    Polynomial f(p, n);
    for (const auto& [e, c] : raw_terms) {
        if (static_cast<int>(e.size()) != n)
            throw structural_error("reduce_raw: exponent vector length mismatch");
        f.add_term(e, c);
    }
    return f;
}

long long max_table_size() {
    static long long cap = [] {
        const char* env = std::getenv("POLYSTRUCT_MAX_TABLE");
        if (env != nullptr) {
            long long v = std::atoll(env);
            if (v > 0) return v;
        }
        return 1LL << 26;
    }();
    return cap;
}

TruthTable to_truth_table(const Polynomial& f) {
    long long size = pow_ll(f.p, f.n);
    if (size > max_table_size())
        throw resource_error("to_truth_table: p^n = " + std::to_string(size) +
                             " exceeds table cap " + std::to_string(max_table_size()));
    TruthTable t(f.p, f.n);
    // Incremental sweep: walk the little-endian odometer and evaluate term by
    // term.  Plain evaluation is fast enough at every size the cap allows.
    Point x(f.n, 0);
    for (long long i = 0; i < size; ++i) {
        t.values[i] = static_cast<std::uint8_t>(f.evaluate(x));
        for (int j = 0; j < f.n; ++j) {
            if (++x[j] < f.p) break;
            x[j] = 0;
        }
    }
    return t;
}

Polynomial from_truth_table(const TruthTable& t) {
    long long size = pow_ll(t.p, t.n);
    if (static_cast<long long>(t.values.size()) != size)
        throw structural_error("from_truth_table: table length is not p^n");
    PrimeField F(t.p);
    // Inverse Vandermonde interpolation along each axis: converting the value
    // tensor to the coefficient tensor one variable at a time yields the
    // unique reduced polynomial (all exponents < p).
    Matrix vand(t.p, std::vector<int>(t.p));
    for (int x = 0; x < t.p; ++x)
        for (int e = 0; e < t.p; ++e) vand[x][e] = F.pow(x, e);
    auto inv = mat_inverse(vand, F);
    if (!inv) throw verification_error("from_truth_table: Vandermonde not invertible");

    std::vector<int> coef(t.values.begin(), t.values.end());
    long long stride = 1;
    for (int axis = 0; axis < t.n; ++axis) {
        long long block = stride * t.p;
        std::vector<int> line(t.p), out(t.p);
        for (long long base = 0; base < size; base += block)
            for (long long off = 0; off < stride; ++off) {
                for (int k = 0; k < t.p; ++k) line[k] = coef[base + off + k * stride];
                for (int e = 0; e < t.p; ++e) {
                    long long acc = 0;
                    for (int k = 0; k < t.p; ++k) acc += (*inv)[e][k] * line[k];
                    out[e] = F.reduce(acc);
                }
                for (int e = 0; e < t.p; ++e) coef[base + off + e * stride] = out[e];
            }
        stride = block;
    }

    Polynomial f(t.p, t.n);
    Point e(t.n, 0);
    for (long long i = 0; i < size; ++i) {
        if (coef[i] != 0) {
            // Exponent p-1 is already reduced except that x^(p-1) with the
            // value at x=0 folded in is exactly what interpolation produced;
            // all exponents here are < p, hence reduced.
            f.terms.emplace(e, coef[i]);
        }
        for (int j = 0; j < t.n; ++j) {
            if (++e[j] < t.p) break;
            e[j] = 0;
        }
    }
    return f;
}

Polynomial compose_affine(const Polynomial& f, const Matrix& T, const Point& b) {
    if (static_cast<int>(T.size()) != f.n || static_cast<int>(b.size()) != f.n)
        throw structural_error("compose_affine: dimension mismatch");
    PrimeField F(f.p);
    if (!mat_inverse(T, F)) throw structural_error("compose_affine: singular matrix");
    std::vector<Polynomial> subs;
    subs.reserve(f.n);
    for (int i = 0; i < f.n; ++i) {
        Polynomial s = Polynomial::constant(f.p, f.n, b[i]);
        for (int j = 0; j < f.n; ++j)
            if (T[i][j] != 0) s = s + Polynomial::variable(f.p, f.n, j).scaled(T[i][j]);
        subs.push_back(std::move(s));
    }
    return f.substitute(subs, f.n);
}

static void collect_monomials(int p, int n, int d, bool exact, int pos, int left,
                              Exponents& cur, std::vector<Exponents>& out) {
    if (pos == n) {
        if (!exact || left == 0) out.push_back(cur);
        return;
    }
    int cap = std::min(left, p - 1);
    for (int e = 0; e <= cap; ++e) {
        cur[pos] = e;
        collect_monomials(p, n, d, exact, pos + 1, left - e, cur, out);
    }
    cur[pos] = 0;
}

std::vector<Exponents> monomials_of_degree(int p, int n, int d) {
    std::vector<Exponents> out;
    Exponents cur(n, 0);
    collect_monomials(p, n, d, true, 0, d, cur, out);
    return out;
}

std::vector<Exponents> monomials_up_to_degree(int p, int n, int d) {
    std::vector<Exponents> out;
    Exponents cur(n, 0);
    collect_monomials(p, n, d, false, 0, d, cur, out);
    return out;
}

Polynomial random_polynomial(int p, int n, int d, std::uint64_t seed) {
    if (d > n * (p - 1))
        throw structural_error("random_polynomial: degree exceeds n*(p-1)");
    SplitMix64 gen(seed);
    Polynomial f(p, n);
    for (const Exponents& e : monomials_up_to_degree(p, n, d)) {
        int c = gen.field_element(p);
        if (c != 0) f.terms.emplace(e, c);
    }
    return f;
}

}  // namespace polystruct
