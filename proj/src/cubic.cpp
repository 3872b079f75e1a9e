#include "polystruct/cubic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "polystruct/addcomb.hpp"
#include "polystruct/analytic.hpp"
#include "polystruct/errors.hpp"
#include "polystruct/quadform.hpp"
#include "polystruct/rng.hpp"

namespace polystruct {

Polynomial rank3_reconstruct(const Rank3Certificate& cert) {
    Polynomial acc = cert.q0;
    for (size_t i = 0; i < cert.ells.size(); ++i)
        acc = acc + cert.ells[i].to_polynomial() * cert.qs[i];
    return acc;
}

namespace {

// complete t independent homogeneous forms to an invertible n x n matrix
// whose first t rows are the forms
Matrix complete_to_basis(int p, int n, const std::vector<LinearForm>& forms) {
    PrimeField F(p);
    Matrix S;
    for (const LinearForm& l : forms) S.push_back(l.coefficients);
    if (mat_rank(S, F) != static_cast<int>(forms.size()))
        throw structural_error("dependent linear forms");
    for (int i = 0; i < n && static_cast<int>(S.size()) < n; ++i) {
        Matrix trial = S;
        std::vector<int> e(n, 0);
        e[i] = 1;
        trial.push_back(e);
        if (mat_rank(trial, F) == static_cast<int>(trial.size())) S = std::move(trial);
    }
    return S;
}

struct Assembly {
    std::vector<LinearForm> ells;
    std::vector<Polynomial> qs;
    Polynomial q0;
};

// Given independent homogeneous forms whose joint kernel U satisfies
// deg(f|_U) <= 2, write f = sum l_i q_i + q0 by a basis change that renames
// the forms into leading coordinates and splits off their cofactors.
Assembly assemble_from_forms(const Polynomial& f, const std::vector<LinearForm>& forms) {
    int p = f.p, n = f.n;
    int t = static_cast<int>(forms.size());
    PrimeField F(p);
    Assembly out{{}, {}, Polynomial::zero(p, n)};
    if (t == 0) {
        if (f.degree() > 2)
            throw verification_error("assembly: remainder degree exceeds 2");
        out.q0 = f;
        return out;
    }
    Matrix S = complete_to_basis(p, n, forms);
    auto Sinv = mat_inverse(S, F);
    if (!Sinv) throw structural_error("assembly: singular basis completion");
    Polynomial Fz = compose_affine(f, *Sinv, Point(n, 0));
    // remainder: leading coordinates set to zero
    std::vector<Polynomial> zero_lead;
    for (int i = 0; i < n; ++i)
        zero_lead.push_back(i < t ? Polynomial::zero(p, n)
                                  : Polynomial::variable(p, n, i));
    Polynomial R = Fz.substitute(zero_lead, n);
    if (R.degree() > 2)
        throw verification_error("assembly: kernel restriction has degree > 2");
    Polynomial H = Fz - R;
    std::vector<Polynomial> Q(t, Polynomial::zero(p, n));
    for (const auto& [e, c] : H.terms) {
        int lead = -1;
        for (int i = 0; i < t; ++i)
            if (e[i] > 0) { lead = i; break; }
        if (lead < 0)
            throw verification_error("assembly: residual term misses every form");
        Exponents d = e;
        d[lead] -= 1;
        Q[lead].add_term(d, c);
    }
    for (int i = 0; i < t; ++i) {
        out.ells.emplace_back(p, S[i], 0);
        out.qs.push_back(compose_affine(Q[i], S, Point(n, 0)));
    }
    out.q0 = compose_affine(R, S, Point(n, 0));
    Polynomial check = out.q0;
    for (int i = 0; i < t; ++i)
        check = check + out.ells[i].to_polynomial() * out.qs[i];
    if (!(check == f)) throw verification_error("assembly: reconstruction mismatch");
    return out;
}

// number of r-dimensional subspaces of F_p^n (Gaussian binomial), capped
long long subspace_count(int p, int n, int r, long long cap) {
    // product over i < r of (p^{n-i} - 1) / (p^{i+1} - 1), computed as the
    // standard q-binomial recurrence to stay integral
    std::vector<std::vector<long long>> C(n + 1, std::vector<long long>(r + 1, 0));
    for (int i = 0; i <= n; ++i) {
        C[i][0] = 1;
        for (int j = 1; j <= std::min(i, r); ++j) {
            long long pj = pow_ll(p, j);
            C[i][j] = C[i - 1][j - 1] + ((i - 1 >= j) ? pj * C[i - 1][j] : 0);
            if (C[i][j] > cap) return cap + 1;
        }
    }
    return C[n][r];
}

// enumerate r x n RREF matrices (row spaces = r-dim form spaces); fn returns
// true to stop
bool for_each_form_space(int p, int n, int r,
                         const std::function<bool(const Matrix&)>& fn) {
    std::vector<int> pivots(r);
    std::function<bool(int, int)> choose = [&](int idx, int start) -> bool {
        if (idx == r) {
            // free positions: row i, col j with j > pivots[i], j not a pivot
            std::vector<char> is_pivot(n, 0);
            for (int c : pivots) is_pivot[c] = 1;
            std::vector<std::pair<int, int>> free_pos;
            for (int i = 0; i < r; ++i)
                for (int j = pivots[i] + 1; j < n; ++j)
                    if (!is_pivot[j]) free_pos.emplace_back(i, j);
            Matrix M(r, std::vector<int>(n, 0));
            for (int i = 0; i < r; ++i) M[i][pivots[i]] = 1;
            long long total = pow_ll(p, static_cast<long long>(free_pos.size()));
            for (long long t = 0; t < total; ++t) {
                long long v = t;
                for (auto& [i, j] : free_pos) {
                    M[i][j] = static_cast<int>(v % p);
                    v /= p;
                }
                if (fn(M)) return true;
            }
            return false;
        }
        for (int c = start; c <= n - (r - idx); ++c) {
            pivots[idx] = c;
            if (choose(idx + 1, c + 1)) return true;
        }
        return false;
    };
    return choose(0, 0);
}

// does the degree-3 part of f restrict to degree <= 2 on the kernel of the
// given forms?  basis = kernel basis rows
bool cubic_part_drops(const Polynomial& f3, const Matrix& kernel_basis,
                      const TruthTable* table) {
    int p = f3.p, n = f3.n;
    int d = static_cast<int>(kernel_basis.size());
    // d parameters with exponents <= p-1 cannot reach degree 3
    if (d * (p - 1) < 3) return true;
    if (p == 2 && table) {
        // multilinear coefficient of every parameter triple via subset sums
        for (int a = 0; a < d; ++a)
            for (int b = a + 1; b < d; ++b)
                for (int c = b + 1; c < d; ++c) {
                    int acc = 0;
                    for (int mask = 0; mask < 8; ++mask) {
                        Point x(n, 0);
                        const int rows[3] = {a, b, c};
                        for (int bit = 0; bit < 3; ++bit)
                            if (mask & (1 << bit))
                                for (int j = 0; j < n; ++j)
                                    x[j] ^= kernel_basis[rows[bit]][j];
                        acc ^= table->values[encode_point(x, 2)];
                    }
                    if (acc != 0) return false;
                }
        return true;
    }
    AffineSubspace U = AffineSubspace::from_span(p, n, kernel_basis, Point(n, 0));
    return restrict_to(f3, U).degree() <= 2;
}

// forms spanning the annihilator of a linear subspace
std::vector<LinearForm> vanishing_forms_of(const AffineSubspace& U) {
    PrimeField F(U.p);
    Matrix N = null_space(U.basis, F, U.n);
    std::vector<LinearForm> forms;
    for (auto& row : N) forms.emplace_back(U.p, row, 0);
    return forms;
}

// search for the smallest t <= t_cap such that some codim-t subspace drops
// f to degree <= 2; nullopt when the enumeration guard stops the search
std::optional<std::vector<LinearForm>> minimal_degree_drop(const Polynomial& f,
                                                           int t_cap,
                                                           bool* guard_hit) {
    int p = f.p, n = f.n;
    PrimeField F(p);
    if (guard_hit) *guard_hit = false;
    Polynomial f3 = f.homogeneous_part(3);
    if (f3.is_zero()) return std::vector<LinearForm>{};
    std::optional<TruthTable> table;
    if (p == 2 && pow_ll(p, n) <= (1LL << 20)) table = to_truth_table(f3);
    for (int t = 1; t <= std::min(t_cap, n); ++t) {
        if (subspace_count(p, n, t, 1LL << 24) > (1LL << 24)) {
            if (guard_hit) *guard_hit = true;
            return std::nullopt;
        }
        std::vector<LinearForm> found;
        for_each_form_space(p, n, t, [&](const Matrix& M) {
            Matrix kernel = null_space(M, F, n);
            if (!cubic_part_drops(f3, kernel, table ? &*table : nullptr)) return false;
            found.clear();
            for (const auto& row : M) found.emplace_back(p, row, 0);
            return true;
        });
        if (!found.empty()) return found;
    }
    return std::nullopt;
}

}  // namespace

Rank3Certificate rank3_upper(const Polynomial& g) {
    if (g.degree() > 3) throw structural_error("rank3_upper: degree > 3");
    int p = g.p, n = g.n;
    Rank3Certificate cert;
    cert.q0 = Polynomial::zero(p, n);
    Polynomial rest = g;
    while (true) {
        Polynomial cubic = rest.homogeneous_part(3);
        if (cubic.is_zero()) break;
        // variable covering the most cubic monomials; ties by lowest index
        std::vector<int> cover(n, 0);
        for (const auto& [e, c] : cubic.terms)
            for (int i = 0; i < n; ++i)
                if (e[i] > 0) cover[i] += 1;
        int v = static_cast<int>(std::max_element(cover.begin(), cover.end()) -
                                 cover.begin());
        Polynomial q(p, n);
        for (const auto& [e, c] : cubic.terms) {
            if (e[v] == 0) continue;
            Exponents d = e;
            d[v] -= 1;
            q.add_term(d, c);
        }
        LinearForm ell(p, n);
        ell.coefficients[v] = 1;
        rest = rest - ell.to_polynomial() * q;
        cert.ells.push_back(std::move(ell));
        cert.qs.push_back(std::move(q));
    }
    cert.q0 = rest;
    cert.r = static_cast<int>(cert.ells.size());
    cert.exactness = (cert.r <= 1) ? Rank3Certificate::Exactness::exact
                                   : Rank3Certificate::Exactness::upper_bound;
    if (!(rank3_reconstruct(cert) == g))
        throw verification_error("rank3_upper: reconstruction mismatch");
    return cert;
}

std::optional<Rank3Certificate> rank3_exact(const Polynomial& g, int r_max) {
    if (g.degree() > 3) throw structural_error("rank3_exact: degree > 3");
    if (g.degree() <= 2) {
        Rank3Certificate cert;
        cert.r = 0;
        cert.q0 = g;
        cert.exactness = Rank3Certificate::Exactness::exact;
        return cert;
    }
    bool guard_hit = false;
    auto forms = minimal_degree_drop(g, r_max, &guard_hit);
    if (!forms) {
        if (guard_hit) throw resource_error("rank3_exact: search guard exceeded");
        return std::nullopt;  // exceedance proved by exhaustion
    }
    Assembly a = assemble_from_forms(g, *forms);
    Rank3Certificate cert;
    cert.r = static_cast<int>(forms->size());
    cert.ells = std::move(a.ells);
    cert.qs = std::move(a.qs);
    cert.q0 = std::move(a.q0);
    cert.exactness = Rank3Certificate::Exactness::exact;
    return cert;
}

CommonBasisResult common_linear_basis(const std::vector<Polynomial>& generators, int r) {
    if (generators.empty()) throw structural_error("common_linear_basis: empty space");
    int p = generators[0].p, n = generators[0].n;
    PrimeField F(p);
    int m = static_cast<int>(generators.size());
    int codim_limit = (p == 2 ? 4 : 2) * r;

    CommonBasisResult out;
    out.V = AffineSubspace::full_space(p, n);

    for (int round = 0; round < 4 * n + 4; ++round) {
        int dim = out.V.dim();
        std::vector<Polynomial> cur;
        for (const Polynomial& g : generators) cur.push_back(restrict_to(g, out.V));

        // maximal-rank element of the restricted span (full sweep when small,
        // deterministic sampling otherwise)
        int best_rank = -1;
        Polynomial best = Polynomial::zero(p, dim);
        std::vector<int> best_combo;
        auto consider = [&](const std::vector<int>& c) {
            Polynomial s = Polynomial::zero(p, dim);
            for (int j = 0; j < m; ++j)
                if (c[j] != 0) s = s + cur[j].scaled(c[j]);
            int rk = rank2(s.truncate_degree(2));
            if (rk > best_rank) {
                best_rank = rk;
                best = s;
                best_combo = c;
            }
        };
        if (pow_ll(p, m) <= (1LL << 12)) {
            std::vector<int> c(m, 0);
            for (long long t = 1; t < pow_ll(p, m); ++t) {
                int i = 0;
                while (true) {
                    if (++c[i] < p) break;
                    c[i] = 0;
                    ++i;
                }
                consider(c);
            }
        } else {
            SplitMix64 gen(0x636f6d6d6f6eULL);
            for (int t = 0; t < 1000; ++t) {
                std::vector<int> c(m, 0);
                bool nontrivial = false;
                for (int j = 0; j < m; ++j) {
                    c[j] = gen.field_element(p);
                    nontrivial |= (c[j] != 0);
                }
                if (nontrivial) consider(c);
            }
        }
        if (best_rank <= 0) break;
        if (best_rank > r) {
            std::string combo;
            for (int c : best_combo) combo += std::to_string(c);
            throw structural_error(
                "common_linear_basis: combination (" + combo +
                ") has rank above the promised bound");
        }

        // zero every Dickson pair factor of the maximal element
        DicksonForm d = dickson_canonicalize(best.truncate_degree(2));
        auto Tinv = mat_inverse(d.T, F);
        if (!Tinv) throw verification_error("common_linear_basis: singular T");
        std::vector<LinearForm> zero_forms;
        for (size_t i = 0; i < d.alphas.size(); ++i) {
            if (d.shape == DicksonForm::Shape::char2_pairs) {
                zero_forms.emplace_back(p, (*Tinv)[2 * i], 0);
                zero_forms.emplace_back(p, (*Tinv)[2 * i + 1], 0);
            } else {
                zero_forms.emplace_back(p, (*Tinv)[i], 0);
            }
        }
        AffineSubspace Wp =
            kernel_of(p, dim, zero_forms, std::vector<int>(zero_forms.size(), 0));
        if (Wp.empty) throw verification_error("common_linear_basis: empty kernel");
        for (const LinearForm& l : zero_forms)
            out.ells.push_back(pullback_form(out.V, l));
        out.V = compose_subspace(out.V, Wp);
        if (out.V.dim() == 0) break;
    }

    if (out.V.codim() > codim_limit)
        throw verification_error("common_linear_basis: codimension bound exceeded");
    for (const Polynomial& g : generators) {
        Polynomial res = restrict_to(g, out.V);
        if (res.degree() > 1)
            throw verification_error("common_linear_basis: restriction not linear");
        out.restrictions.push_back(std::move(res));
    }
    return out;
}

Polynomial cubic_reconstruct(const CubicStructure& s) {
    Polynomial acc = Polynomial::zero(s.p, s.n);
    for (size_t i = 0; i < s.ells.size(); ++i)
        acc = acc + s.ells[i].to_polynomial() * s.qs[i];
    if (s.variant == CubicStructure::Variant::u3_form) {
        acc = acc + s.q0;
    } else {
        std::vector<Polynomial> subs;
        for (const LinearForm& l : s.inner_ells) subs.push_back(l.to_polynomial());
        acc = acc + s.g.substitute(subs, s.n);
    }
    return acc;
}

namespace {

struct Folded {
    std::vector<LinearForm> inner;
    Polynomial g;  // in inner.size() variables
};

// express a quadratic as a polynomial g of its own Dickson linear factors
Folded fold_quadratic(const Polynomial& q0) {
    int p = q0.p, n = q0.n;
    PrimeField F(p);
    DicksonForm d = dickson_canonicalize(q0);
    auto Tinv = mat_inverse(d.T, F);
    if (!Tinv) throw verification_error("fold_quadratic: singular T");
    Folded out{{}, Polynomial::zero(p, 0)};
    int s = static_cast<int>(d.alphas.size());
    int slots = (d.shape == DicksonForm::Shape::char2_pairs) ? 2 * s : s;
    for (int i = 0; i < slots; ++i) out.inner.emplace_back(p, (*Tinv)[i], 0);
    // residual linear form pulled back to ambient coordinates
    LinearForm lin(p, n);
    for (int j = 0; j < n; ++j) {
        long long acc = 0;
        for (int i = 0; i < n; ++i)
            acc += static_cast<long long>(d.residual_linear.coefficients[i]) *
                   (*Tinv)[i][j];
        lin.coefficients[j] = F.reduce(acc);
    }
    bool has_lin = !lin.is_constant();
    if (has_lin) out.inner.push_back(lin);
    int c2 = static_cast<int>(out.inner.size());
    Polynomial g(p, c2);
    for (int i = 0; i < s; ++i) {
        Exponents e(c2, 0);
        if (d.shape == DicksonForm::Shape::char2_pairs) {
            e[2 * i] = 1;
            e[2 * i + 1] = 1;
        } else {
            e[i] = 2;
        }
        g.add_term(e, d.alphas[i]);
    }
    if (has_lin) {
        Exponents e(c2, 0);
        e[c2 - 1] = 1;
        g.add_term(e, 1);
    }
    if (d.constant != 0) g.add_term(Exponents(c2, 0), d.constant);
    out.g = g;
    // exact check: g applied to the factors reproduces q0
    std::vector<Polynomial> subs;
    for (const LinearForm& l : out.inner) subs.push_back(l.to_polynomial());
    if (!(g.substitute(subs, n) == q0))
        throw verification_error("fold_quadratic: factor reconstruction mismatch");
    return out;
}

struct PipelineCore {
    std::vector<LinearForm> forms;  // independent forms with deg(f|ker) <= 2
    double delta = 0.0;
    int r_target = 0;
    int bc_k = 0;
    int v_dim = 0;
    int u_dim = 0;
    int pipeline_c = 0;
};

// common stages: derivative rank profile -> dense low-rank direction subspace
// -> common linear basis -> degree-drop subspace, then exact minimization
PipelineCore cubic_pipeline(const Polynomial& f, double delta, double mu_hint) {
    int p = f.p, n = f.n;
    PipelineCore out;
    out.delta = delta;
    if (delta <= 0.0)
        throw threshold_error("norm measurement", "measured value is zero");
    int r = static_cast<int>(
        std::ceil(std::log(2.0 / (delta * delta)) / std::log(static_cast<double>(p))));
    r = std::max(r, 1);
    out.r_target = r;
    if (r > n)
        throw threshold_error("derivative rank profile",
                              "rank threshold exceeds the ambient dimension");

    RealOracle oracle = [&f](const Point& y) {
        return static_cast<double>(rank2(derivative(f, y).truncate_degree(2)));
    };
    SubadditiveResult sub = subadditive_subspace(oracle, p, n, r, mu_hint);
    out.bc_k = sub.cert.k;
    out.v_dim = sub.V.dim();

    std::vector<Polynomial> gens;
    for (const auto& row : sub.V.basis)
        gens.push_back(restrict_to(derivative(f, row), sub.V));
    AffineSubspace U = sub.V;
    if (!gens.empty()) {
        CommonBasisResult cb =
            common_linear_basis(gens, static_cast<int>(sub.bound));
        U = compose_subspace(sub.V, cb.V);
    }
    out.u_dim = U.dim();
    out.pipeline_c = n - U.dim();

    std::vector<LinearForm> pipeline_forms = vanishing_forms_of(U);
    // exact minimization: the smallest subspace-count within the search guard
    std::optional<std::vector<LinearForm>> mini =
        minimal_degree_drop(f, out.pipeline_c, nullptr);
    out.forms = mini ? *mini : pipeline_forms;
    return out;
}

}  // namespace

CubicStructure structure_from_u3(const Polynomial& f) {
    if (f.degree() > 3) throw structural_error("structure_from_u3: degree > 3");
    int p = f.p, n = f.n;
    CubicStructure s;
    s.variant = CubicStructure::Variant::u3_form;
    s.p = p;
    s.n = n;
    if (f.degree() <= 2) {
        s.q0 = f;
        s.g = Polynomial::zero(p, 0);
        s.delta = 1.0;
        return s;
    }
    double delta = gowers_norm_exact(f, 3).value;
    PipelineCore core = cubic_pipeline(f, delta, 0.5 * std::pow(delta, 8));
    Assembly a = assemble_from_forms(f, core.forms);
    s.ells = std::move(a.ells);
    s.qs = std::move(a.qs);
    s.q0 = std::move(a.q0);
    s.g = Polynomial::zero(p, 0);
    s.delta = core.delta;
    s.r_target = core.r_target;
    s.bc_k = core.bc_k;
    s.v_dim = core.v_dim;
    s.u_dim = core.u_dim;
    s.pipeline_c = core.pipeline_c;
    if (!(cubic_reconstruct(s) == f))
        throw verification_error("structure_from_u3: reconstruction mismatch");
    return s;
}

CubicStructure structure_from_bias(const Polynomial& f, double delta_hint) {
    if (f.degree() > 3) throw structural_error("structure_from_bias: degree > 3");
    int p = f.p, n = f.n;
    CubicStructure s;
    s.variant = CubicStructure::Variant::bias_form;
    s.p = p;
    s.n = n;
    if (f.degree() <= 2) {
        Folded fold = fold_quadratic(f);
        s.inner_ells = std::move(fold.inner);
        s.g = std::move(fold.g);
        s.q0 = Polynomial::zero(p, n);
        s.delta = bias_exact(f).value;
        return s;
    }
    double delta = delta_hint > 0.0 ? delta_hint : bias_exact(f).value;
    PipelineCore core = cubic_pipeline(f, delta, 0.5 * delta * delta);
    Assembly a = assemble_from_forms(f, core.forms);
    Folded fold = fold_quadratic(a.q0);
    s.ells = std::move(a.ells);
    s.qs = std::move(a.qs);
    s.q0 = Polynomial::zero(p, n);
    s.inner_ells = std::move(fold.inner);
    s.g = std::move(fold.g);
    s.delta = core.delta;
    s.r_target = core.r_target;
    s.bc_k = core.bc_k;
    s.v_dim = core.v_dim;
    s.u_dim = core.u_dim;
    s.pipeline_c = core.pipeline_c;
    if (!(cubic_reconstruct(s) == f))
        throw verification_error("structure_from_bias: reconstruction mismatch");
    return s;
}

}  // namespace polystruct
