// quadform.hpp -- quadratic polynomials as matrices: Dickson canonical form,
// rank, family regularization, disjointification, and strong-regularity
// measurement.
#pragma once

#include <optional>
#include <vector>

#include "polystruct/poly.hpp"
#include "polystruct/subspace.hpp"

namespace polystruct {

struct QuadraticForm {
    int p;
    int n;
    Matrix A;            // upper triangular at p = 2, symmetric at odd p
    LinearForm linear;
    int constant = 0;

    static QuadraticForm from_polynomial(const Polynomial& q);
    Polynomial to_polynomial() const;
    // A + A^t, the associated (symmetric / alternating) bilinear matrix.
    Matrix bilinear() const;
};

struct DicksonForm {
    enum class Shape { char2_pairs, oddchar_squares };
    int p;
    int n;
    Matrix T;                 // invertible change of basis: q(Tz) is canonical
    std::vector<int> alphas;  // coefficients of the pair products / squares
    Shape shape;
    LinearForm residual_linear;
    int constant = 0;

    int rank() const;
    // The canonical polynomial sum a_i z_{2i-1} z_{2i} (+ linear + const) or
    // sum a_i z_i^2 (+ linear + const).
    Polynomial canonical_polynomial() const;
};

DicksonForm dickson_canonicalize(const Polynomial& q);
int rank2(const Polynomial& q);

struct MinRankWitness {
    int r_min;
    std::vector<int> coefficients;  // a nontrivial combination achieving r_min
};

// Minimum rank2 over all p^m - 1 nontrivial combinations.
MinRankWitness min_combination_rank(const std::vector<Polynomial>& qs);

struct RegularizedFamily {
    AffineSubspace V;
    std::vector<int> kept_indices;
    std::vector<Polynomial> kept_restrictions;  // in V's parameters
    int r_min = 0;  // certified min combination rank of the kept restrictions
};

// Iteratively discard a family member participating in a rank <= r nontrivial
// combination, restricting to a subspace where the discarded member becomes a
// span of the rest (plus constants); dim(V) >= n - len(qs) * (r + 1).
RegularizedFamily regularize(const std::vector<Polynomial>& qs, int r);

struct DisjointFamily {
    bool collapsed = false;  // a member degenerated before reaching the shape
    Matrix T;                // basis change applied first: work with q o T
    AffineSubspace V;        // subspace (in the T coordinates) where the shape holds
    std::vector<Polynomial> forms;  // full-variable polynomials, disjoint shape
    std::vector<std::pair<int, int>> designated;  // (a, b) per form; a == b at odd p
};

DisjointFamily disjointify(const std::vector<Polynomial>& qs);

// Exact joint-distribution distance of {Q_j(x0 + sum_{i in I} Y_i)} over all
// index sets I in [5] with 1 <= |I| <= 2 (5 + 10 = 15 per j), as polynomials
// in the 5n variables Y_1..Y_5.
double strongly_regular_gamma(const std::vector<Polynomial>& qs, const Point& x0);

struct RegularityCheck {
    double gamma;
    double bound;       // p^{3m/2 - R/4}
    bool vacuous;       // bound >= 1: says nothing at this scale
    bool holds;         // gamma <= bound (or vacuous)
};

RegularityCheck strong_regularity_bound_check(const std::vector<Polynomial>& qs, int R,
                                              const Point& x0);

// Checks f = F(Q_1..Q_m) exhaustively, then asserts deg(F) <= deg(f)/2.
bool poly_of_disjoint_is_low_degree(const Polynomial& F_poly, const DisjointFamily& family,
                                    const Polynomial& f);

}  // namespace polystruct
