// subspace.hpp -- affine subspaces of F_p^n in canonical form, linear forms,
// polynomial restriction, and coset partitions.
//
// Subspaces are stored as an RREF basis plus an offset normalized to have
// zeros in all pivot coordinates, so two constructions of the same point set
// compare structurally equal.  Restriction introduces fresh parameter
// variables t_1..t_k (never reuses ambient names), which keeps r-fold nested
// restrictions alias-free.
#pragma once

#include <functional>
#include <vector>

#include "polystruct/poly.hpp"

namespace polystruct {

struct LinearForm {
    int p;
    std::vector<int> coefficients;  // length n
    int constant = 0;

    LinearForm() : p(2) {}
    LinearForm(int p_, int n) : p(p_), coefficients(n, 0) {}
    LinearForm(int p_, std::vector<int> coeffs, int c)
        : p(p_), coefficients(std::move(coeffs)), constant(c) {}

    int n() const { return static_cast<int>(coefficients.size()); }
    bool is_homogeneous() const { return constant == 0; }
    bool is_constant() const {
        for (int c : coefficients)
            if (c != 0) return false;
        return true;
    }
    int evaluate(const Point& x) const {
        long long acc = constant;
        for (size_t i = 0; i < coefficients.size(); ++i)
            acc += static_cast<long long>(coefficients[i]) * x[i];
        return static_cast<int>(acc % p);
    }
    LinearForm homogeneous_part() const { return LinearForm(p, coefficients, 0); }
    Polynomial to_polynomial() const;
    // Degree <= 1 polynomial -> form; throws on higher degree.
    static LinearForm from_polynomial(const Polynomial& f);
    bool operator==(const LinearForm& o) const = default;
};

class AffineSubspace {
public:
    int p;
    int n;
    bool empty = false;
    Matrix basis;   // k x n, RREF
    Point offset;   // zeros in pivot coordinates (canonical coset rep)

    static AffineSubspace full_space(int p, int n);
    static AffineSubspace empty_space(int p, int n);
    // Canonicalizes arbitrary generators + offset.
    static AffineSubspace from_span(int p, int n, Matrix generators, Point off);

    int dim() const { return empty ? -1 : static_cast<int>(basis.size()); }
    int codim() const { return n - dim(); }
    bool is_linear() const;
    bool contains(const Point& x) const;
    long long point_count() const { return empty ? 0 : pow_ll(p, dim()); }

    // The ambient point offset + sum_j t_j * basis_j.
    Point point_at(const Point& params) const;
    // Enumerates all points (ambient coordinates) in parameter order.
    void for_each_point(const std::function<void(const Point&)>& fn) const;

    bool operator==(const AffineSubspace& o) const = default;
};

struct SubspacePartition {
    AffineSubspace ambient;
    std::vector<AffineSubspace> cells;
    bool ragged = false;  // cells of unequal dimension
};

// Solution set {x : forms[i](x) = values[i]} (homogeneous parts of the forms
// plus their constants folded into values); Empty marker when inconsistent.
AffineSubspace kernel_of(int p, int n, const std::vector<LinearForm>& forms,
                         const std::vector<int>& values);

// f restricted to V as a polynomial in dim(V) fresh parameters.
Polynomial restrict_to(const Polynomial& f, const AffineSubspace& V);

// A linear form on ambient space, rewritten in V's parameters.
LinearForm restrict_form(const LinearForm& form, const AffineSubspace& V);

// One cell per attained value-vector of the forms on V.
SubspacePartition coset_partition(const AffineSubspace& V,
                                  const std::vector<LinearForm>& forms);

// The linear subspace V - V.
AffineSubspace direction_set(const AffineSubspace& V);

// Given W expressed in V's parameter coordinates, the same set in ambient
// coordinates.  Used when pipelines nest restrictions.
AffineSubspace compose_subspace(const AffineSubspace& V, const AffineSubspace& W_params);

// A parameter-space form lambda(t), rewritten as an ambient form valid on V
// (uses t_j = (x - offset)[pivot_j] on the RREF parametrization).
LinearForm pullback_form(const AffineSubspace& V, const LinearForm& form_params);

}  // namespace polystruct
