#include "polystruct/subspace.hpp"

#include <algorithm>
#include <map>

#include "polystruct/errors.hpp"

namespace polystruct {

Polynomial LinearForm::to_polynomial() const {
    Polynomial f(p, n());
    if (constant != 0) f.add_term(Exponents(n(), 0), constant);
    for (int i = 0; i < n(); ++i) {
        if (coefficients[i] == 0) continue;
        Exponents e(n(), 0);
        e[i] = 1;
        f.add_term(e, coefficients[i]);
    }
    return f;
}

LinearForm LinearForm::from_polynomial(const Polynomial& f) {
    if (f.degree() > 1) throw structural_error("LinearForm: polynomial has degree > 1");
    LinearForm l(f.p, f.n);
    for (const auto& [e, c] : f.terms) {
        if (total_degree(e) == 0) {
            l.constant = c;
        } else {
            for (int i = 0; i < f.n; ++i)
                if (e[i] == 1) l.coefficients[i] = c;
        }
    }
    return l;
}

static std::vector<int> basis_pivots(const Matrix& basis) {
    std::vector<int> pivots;
    for (const auto& row : basis) {
        int c = 0;
        while (c < static_cast<int>(row.size()) && row[c] == 0) ++c;
        pivots.push_back(c);
    }
    return pivots;
}

AffineSubspace AffineSubspace::full_space(int p, int n) {
    AffineSubspace V;
    V.p = p;
    V.n = n;
    V.basis = identity_matrix(n);
    V.offset = Point(n, 0);
    return V;
}

AffineSubspace AffineSubspace::empty_space(int p, int n) {
    AffineSubspace V;
    V.p = p;
    V.n = n;
    V.empty = true;
    V.offset = Point(n, 0);
    return V;
}

AffineSubspace AffineSubspace::from_span(int p, int n, Matrix generators, Point off) {
    PrimeField F(p);
    AffineSubspace V;
    V.p = p;
    V.n = n;
    rref(generators, F);
    V.basis = std::move(generators);
    // Normalize the coset representative: clear every pivot coordinate.
    std::vector<int> pivots = basis_pivots(V.basis);
    for (size_t r = 0; r < V.basis.size(); ++r) {
        int c = off[pivots[r]];
        if (c == 0) continue;
        for (int j = 0; j < n; ++j) off[j] = F.sub(off[j], c * V.basis[r][j] % p);
    }
    V.offset = std::move(off);
    return V;
}

bool AffineSubspace::is_linear() const {
    if (empty) return false;
    for (int c : offset)
        if (c != 0) return false;
    return true;
}

bool AffineSubspace::contains(const Point& x) const {
    if (empty) return false;
    PrimeField F(p);
    Point d(n);
    for (int i = 0; i < n; ++i) d[i] = F.sub(x[i], offset[i]);
    return in_row_space(basis, basis_pivots(basis), d, F);
}

Point AffineSubspace::point_at(const Point& params) const {
    if (empty) throw structural_error("AffineSubspace::point_at on empty subspace");
    PrimeField F(p);
    Point x = offset;
    for (size_t j = 0; j < basis.size(); ++j) {
        if (params[j] == 0) continue;
        for (int i = 0; i < n; ++i) x[i] = F.add(x[i], params[j] * basis[j][i] % p);
    }
    return x;
}

void AffineSubspace::for_each_point(const std::function<void(const Point&)>& fn) const {
    if (empty) return;
    int k = dim();
    Point params(k, 0);
    long long total = pow_ll(p, k);
    for (long long i = 0; i < total; ++i) {
        fn(point_at(params));
        for (int j = 0; j < k; ++j) {
            if (++params[j] < p) break;
            params[j] = 0;
        }
    }
}

AffineSubspace kernel_of(int p, int n, const std::vector<LinearForm>& forms,
                         const std::vector<int>& values) {
    if (forms.size() != values.size())
        throw structural_error("kernel_of: forms/values length mismatch");
    PrimeField F(p);
    Matrix m;
    Point rhs;
    for (size_t i = 0; i < forms.size(); ++i) {
        if (forms[i].n() != n) throw structural_error("kernel_of: form dimension mismatch");
        m.push_back(forms[i].coefficients);
        rhs.push_back(F.sub(values[i], forms[i].constant));
    }
    if (m.empty()) return AffineSubspace::full_space(p, n);
    auto particular = solve(m, rhs, F);
    if (!particular) return AffineSubspace::empty_space(p, n);
    Matrix null = null_space(m, F, n);
    return AffineSubspace::from_span(p, n, std::move(null), std::move(*particular));
}

Polynomial restrict_to(const Polynomial& f, const AffineSubspace& V) {
    if (V.empty) throw structural_error("restrict_to: empty subspace");
    if (f.n != V.n || f.p != V.p) throw structural_error("restrict_to: dimension mismatch");
    int k = V.dim();
    std::vector<Polynomial> subs;
    subs.reserve(f.n);
    for (int i = 0; i < f.n; ++i) {
        Polynomial s = Polynomial::constant(f.p, k, V.offset[i]);
        for (int j = 0; j < k; ++j)
            if (V.basis[j][i] != 0)
                s = s + Polynomial::variable(f.p, k, j).scaled(V.basis[j][i]);
        subs.push_back(std::move(s));
    }
    return f.substitute(subs, k);
}

LinearForm restrict_form(const LinearForm& form, const AffineSubspace& V) {
    if (V.empty) throw structural_error("restrict_form: empty subspace");
    PrimeField F(V.p);
    int k = V.dim();
    LinearForm out(V.p, k);
    out.constant = form.evaluate(V.offset);
    for (int j = 0; j < k; ++j) {
        long long acc = 0;
        for (int i = 0; i < V.n; ++i)
            acc += static_cast<long long>(form.coefficients[i]) * V.basis[j][i];
        out.coefficients[j] = F.reduce(acc);
    }
    return out;
}

SubspacePartition coset_partition(const AffineSubspace& V,
                                  const std::vector<LinearForm>& forms) {
    if (V.empty) throw structural_error("coset_partition: empty subspace");
    PrimeField F(V.p);
    int k = V.dim();
    // The forms become affine forms in V's parameters; cells are parameter-
    // space kernels mapped back to ambient coordinates.
    std::vector<LinearForm> in_params;
    for (const LinearForm& f : forms) in_params.push_back(restrict_form(f, V));

    // Attained value-vectors: the image of an affine map, enumerated from the
    // restricted forms' matrix.
    SubspacePartition part;
    part.ambient = V;
    std::map<std::vector<int>, bool> seen;
    Point params(k, 0);
    long long total = pow_ll(V.p, k);
    for (long long i = 0; i < total; ++i) {
        std::vector<int> val(in_params.size());
        for (size_t t = 0; t < in_params.size(); ++t) val[t] = in_params[t].evaluate(params);
        if (!seen.count(val)) {
            seen[val] = true;
            AffineSubspace cell_params = kernel_of(V.p, k, in_params, val);
            part.cells.push_back(compose_subspace(V, cell_params));
        }
        for (int j = 0; j < k; ++j) {
            if (++params[j] < V.p) break;
            params[j] = 0;
        }
    }
    for (const auto& c : part.cells)
        if (c.dim() != part.cells.front().dim()) part.ragged = true;
    return part;
}

AffineSubspace direction_set(const AffineSubspace& V) {
    if (V.empty) throw structural_error("direction_set: empty subspace");
    return AffineSubspace::from_span(V.p, V.n, V.basis, Point(V.n, 0));
}

AffineSubspace compose_subspace(const AffineSubspace& V, const AffineSubspace& W_params) {
    if (W_params.empty) return AffineSubspace::empty_space(V.p, V.n);
    if (W_params.n != V.dim())
        throw structural_error("compose_subspace: parameter dimension mismatch");
    PrimeField F(V.p);
    Matrix gens;
    for (const auto& trow : W_params.basis) {
        Point dir(V.n, 0);
        for (int j = 0; j < W_params.n; ++j) {
            if (trow[j] == 0) continue;
            for (int i = 0; i < V.n; ++i)
                dir[i] = F.add(dir[i], trow[j] * V.basis[j][i] % V.p);
        }
        gens.push_back(std::move(dir));
    }
    return AffineSubspace::from_span(V.p, V.n, std::move(gens),
                                     V.point_at(W_params.offset));
}

LinearForm pullback_form(const AffineSubspace& V, const LinearForm& form_params) {
    if (V.empty) throw structural_error("pullback_form: empty subspace");
    // On the RREF parametrization with canonical offset, t_j = x[pivot_j].
    std::vector<int> pivots = basis_pivots(V.basis);
    LinearForm out(V.p, V.n);
    out.constant = form_params.constant;
    for (int j = 0; j < V.dim(); ++j)
        out.coefficients[pivots[j]] = form_params.coefficients[j];
    return out;
}

}  // namespace polystruct
