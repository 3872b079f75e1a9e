// poly.hpp -- reduced multivariate polynomials over F_p and dense truth
// tables.  The sparse monomial map is the canonical carrier for every f, q,
// l, g in the toolkit; truth tables are the brute-force oracle substrate and
// are materialized on demand (capped, see max_table_size).
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "polystruct/field.hpp"
#include "polystruct/linalg.hpp"

namespace polystruct {

// Exponent vector, entries already in [0, p-1] for reduced monomials.
using Exponents = std::vector<int>;

inline int total_degree(const Exponents& e) {
    int d = 0;
    for (int x : e) d += x;
    return d;
}

// x^e with e >= 1 reduces to x^((e-1) mod (p-1) + 1): working modulo x^p - x.
inline int reduce_exponent(int e, int p) {
    if (e <= 0) return 0;
    return (e - 1) % (p - 1) + 1;
}

class Polynomial {
public:
    int p;
    int n;
    // monomial -> coefficient in [1, p); zero coefficients are never stored.
    std::map<Exponents, int> terms;

    Polynomial() : p(2), n(0) {}
    Polynomial(int p_, int n_) : p(p_), n(n_) {}
    static Polynomial zero(int p, int n) { return Polynomial(p, n); }
    static Polynomial constant(int p, int n, int c);
    static Polynomial variable(int p, int n, int i);

    bool is_zero() const { return terms.empty(); }
    // Max total degree over stored terms; 0 for the zero polynomial.
    int degree() const;

    // Adds coeff * x^exps with on-the-fly exponent reduction.
    void add_term(const Exponents& exps, int coeff);

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial scaled(int c) const;
    bool operator==(const Polynomial& o) const = default;

    int evaluate(const Point& x) const;

    // Keeps only terms of exact total degree d / at most d.
    Polynomial homogeneous_part(int d) const;
    Polynomial truncate_degree(int d) const;

    // Substitute variable i by subs[i] (a polynomial in m new variables) for
    // every i; the workhorse behind compose_affine and subspace restriction.
    Polynomial substitute(const std::vector<Polynomial>& subs, int m_vars) const;

    std::string to_string() const;
};

Polynomial reduce_raw(int p, int n,
                      const std::vector<std::pair<Exponents, int>>& raw_terms);

struct TruthTable {
    int p;
    int n;
    std::vector<std::uint8_t> values;  // length p^n, index = encode_point

    TruthTable(int p_, int n_) : p(p_), n(n_), values(pow_ll(p_, n_), 0) {}
    long long size() const { return static_cast<long long>(values.size()); }
    bool operator==(const TruthTable& o) const = default;
};

// Hard cap on dense-table size, default 2^26 entries; the environment
// variable POLYSTRUCT_MAX_TABLE overrides it for power users.
long long max_table_size();

TruthTable to_truth_table(const Polynomial& f);
Polynomial from_truth_table(const TruthTable& t);

// f(Tx + b) for invertible T.
Polynomial compose_affine(const Polynomial& f, const Matrix& T, const Point& b);

// Uniform coefficients over all reduced monomials of degree <= d.
Polynomial random_polynomial(int p, int n, int d, std::uint64_t seed);

// All reduced monomials of degree exactly d / at most d, in lexicographic
// order (deterministic iteration order for random_polynomial and solvers).
std::vector<Exponents> monomials_of_degree(int p, int n, int d);
std::vector<Exponents> monomials_up_to_degree(int p, int n, int d);

}  // namespace polystruct
