#include "polystruct/quadform.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "polystruct/analytic.hpp"
#include "polystruct/errors.hpp"

namespace polystruct {

QuadraticForm QuadraticForm::from_polynomial(const Polynomial& q) {
    if (q.degree() > 2) throw structural_error("QuadraticForm: degree > 2");
    PrimeField F(q.p);
    QuadraticForm out{q.p, q.n, Matrix(q.n, std::vector<int>(q.n, 0)),
                      LinearForm(q.p, q.n), 0};
    for (const auto& [e, c] : q.terms) {
        int deg = total_degree(e);
        if (deg == 0) {
            out.constant = c;
        } else if (deg == 1) {
            for (int i = 0; i < q.n; ++i)
                if (e[i] == 1) out.linear.coefficients[i] = c;
        } else {
            int a = -1, b = -1;
            for (int i = 0; i < q.n; ++i) {
                if (e[i] == 1) (a < 0 ? a : b) = i;
                if (e[i] == 2) a = b = i;
            }
            if (a == b) {
                // square term: only possible at odd p (x^2 -> x at p = 2)
                out.A[a][a] = c;
            } else if (q.p == 2) {
                out.A[a][b] = c;
            } else {
                int half = F.mul(c, F.inv(2));
                out.A[a][b] = half;
                out.A[b][a] = half;
            }
        }
    }
    return out;
}

Polynomial QuadraticForm::to_polynomial() const {
    Polynomial q(p, n);
    PrimeField F(p);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            int c = (i == j) ? A[i][i] : (p == 2 ? A[i][j] : F.mul(2, A[i][j]));
            if (c == 0) continue;
            Exponents e(n, 0);
            e[i] += 1;
            e[j] += 1;
            q.add_term(e, c);
        }
    for (int i = 0; i < n; ++i)
        if (linear.coefficients[i] != 0) {
            Exponents e(n, 0);
            e[i] = 1;
            q.add_term(e, linear.coefficients[i]);
        }
    if (constant != 0) q.add_term(Exponents(n, 0), constant);
    return q;
}

Matrix QuadraticForm::bilinear() const {
    PrimeField F(p);
    Matrix B(n, std::vector<int>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) B[i][j] = F.add(A[i][j], A[j][i]);
    return B;
}

int DicksonForm::rank() const {
    int r = 0;
    for (int a : alphas) r += (a != 0);
    return r;
}

Polynomial DicksonForm::canonical_polynomial() const {
    Polynomial out(p, n);
    for (size_t i = 0; i < alphas.size(); ++i) {
        if (alphas[i] == 0) continue;
        Exponents e(n, 0);
        if (shape == Shape::char2_pairs) {
            e[2 * i] = 1;
            e[2 * i + 1] = 1;
        } else {
            e[i] = 2;
        }
        out.add_term(e, alphas[i]);
    }
    out = out + residual_linear.to_polynomial();
    if (constant != 0) out.add_term(Exponents(n, 0), constant);
    return out;
}

namespace {

int bilinear_pair(const Matrix& B, const Point& u, const Point& v, const PrimeField& F) {
    long long acc = 0;
    for (size_t i = 0; i < u.size(); ++i) {
        if (u[i] == 0) continue;
        for (size_t j = 0; j < v.size(); ++j)
            acc += static_cast<long long>(u[i]) * B[i][j] % F.p * v[j];
    }
    return F.reduce(acc);
}

}  // namespace

DicksonForm dickson_canonicalize(const Polynomial& q) {
    if (q.degree() > 2) throw structural_error("dickson_canonicalize: degree > 2");
    int p = q.p, n = q.n;
    PrimeField F(p);
    QuadraticForm Q = QuadraticForm::from_polynomial(q);
    Matrix B = Q.bilinear();

    std::vector<Point> processed;  // new basis, in canonical slot order
    std::vector<Point> avail;
    for (int i = 0; i < n; ++i) {
        Point e(n, 0);
        e[i] = 1;
        avail.push_back(std::move(e));
    }

    DicksonForm out;
    out.p = p;
    out.n = n;
    out.residual_linear = LinearForm(p, n);

    if (p == 2) {
        out.shape = DicksonForm::Shape::char2_pairs;
        // symplectic Gram-Schmidt on the alternating form A + A^t
        while (true) {
            int ui = -1, vi = -1;
            for (size_t i = 0; i < avail.size() && ui < 0; ++i)
                for (size_t j = i + 1; j < avail.size(); ++j)
                    if (bilinear_pair(B, avail[i], avail[j], F) != 0) {
                        ui = static_cast<int>(i);
                        vi = static_cast<int>(j);
                        break;
                    }
            if (ui < 0) break;
            Point u = avail[ui], v = avail[vi];
            avail.erase(avail.begin() + vi);
            avail.erase(avail.begin() + ui);
            // make the rest orthogonal to the hyperbolic pair (u, v)
            for (Point& w : avail) {
                int cu = bilinear_pair(B, w, v, F);  // B(w,v): correct with u
                int cv = bilinear_pair(B, w, u, F);  // B(w,u): correct with v
                for (int i = 0; i < n; ++i)
                    w[i] = F.add(w[i], F.add(F.mul(cu, u[i]), F.mul(cv, v[i])));
            }
            processed.push_back(std::move(u));
            processed.push_back(std::move(v));
        }
    } else {
        out.shape = DicksonForm::Shape::oddchar_squares;
        // congruence diagonalization of the symmetric matrix
        while (true) {
            int si = -1;
            for (size_t i = 0; i < avail.size(); ++i)
                if (bilinear_pair(B, avail[i], avail[i], F) != 0) {
                    si = static_cast<int>(i);
                    break;
                }
            if (si < 0) {
                // no square: create one from an off-diagonal pairing
                int ai = -1, bi = -1;
                for (size_t i = 0; i < avail.size() && ai < 0; ++i)
                    for (size_t j = i + 1; j < avail.size(); ++j)
                        if (bilinear_pair(B, avail[i], avail[j], F) != 0) {
                            ai = static_cast<int>(i);
                            bi = static_cast<int>(j);
                            break;
                        }
                if (ai < 0) break;
                for (int i = 0; i < n; ++i)
                    avail[ai][i] = F.add(avail[ai][i], avail[bi][i]);
                si = ai;
            }
            Point u = avail[si];
            avail.erase(avail.begin() + si);
            int quu = bilinear_pair(B, u, u, F);
            int inv = F.inv(quu);
            for (Point& w : avail) {
                int c = F.mul(bilinear_pair(B, w, u, F), inv);
                for (int i = 0; i < n; ++i) w[i] = F.sub(w[i], F.mul(c, u[i]));
            }
            processed.push_back(std::move(u));
        }
    }

    int rank_slots = static_cast<int>(processed.size());
    for (Point& w : avail) processed.push_back(std::move(w));
    // T columns are the new basis vectors
    Matrix T(n, std::vector<int>(n, 0));
    for (int col = 0; col < n; ++col)
        for (int row = 0; row < n; ++row) T[row][col] = processed[col][row];
    out.T = T;

    Polynomial composed = compose_affine(q, T, Point(n, 0));
    // read off the canonical shape; anything off-pattern is a bug
    int pairs = (p == 2) ? rank_slots / 2 : rank_slots;
    out.alphas.assign(pairs, 0);
    for (const auto& [e, c] : composed.terms) {
        int deg = total_degree(e);
        if (deg == 0) {
            out.constant = c;
        } else if (deg == 1) {
            for (int i = 0; i < n; ++i)
                if (e[i] == 1) out.residual_linear.coefficients[i] = c;
        } else {
            int a = -1, b = -1;
            for (int i = 0; i < n; ++i) {
                if (e[i] == 1) (a < 0 ? a : b) = i;
                if (e[i] == 2) a = b = i;
            }
            bool ok;
            if (p == 2) {
                ok = (a != b) && (b == a + 1) && (a % 2 == 0) && (a / 2 < pairs);
                if (ok) out.alphas[a / 2] = c;
            } else {
                ok = (a == b) && (a < pairs);
                if (ok) out.alphas[a] = c;
            }
            if (!ok)
                throw verification_error(
                    "dickson_canonicalize: off-pattern quadratic monomial survived");
        }
    }
    for (int i = 0; i < pairs; ++i)
        if (out.alphas[i] == 0)
            throw verification_error("dickson_canonicalize: vanishing canonical slot");
    return out;
}

int rank2(const Polynomial& q) { return dickson_canonicalize(q).rank(); }

MinRankWitness min_combination_rank(const std::vector<Polynomial>& qs) {
    if (qs.empty()) throw structural_error("min_combination_rank: empty family");
    int p = qs[0].p;
    int m = static_cast<int>(qs.size());
    long long combos = pow_ll(p, m);
    if (combos > (1LL << 20)) throw resource_error("min_combination_rank: p^m > 2^20");
    MinRankWitness best{qs[0].n + 1, {}};
    std::vector<int> c(m, 0);
    for (long long t = 1; t < combos; ++t) {
        int i = 0;
        while (true) {
            if (++c[i] < p) break;
            c[i] = 0;
            ++i;
        }
        Polynomial comb = Polynomial::zero(p, qs[0].n);
        for (int j = 0; j < m; ++j)
            if (c[j] != 0) comb = comb + qs[j].scaled(c[j]);
        int r = rank2(comb.truncate_degree(2));
        if (r < best.r_min) {
            best.r_min = r;
            best.coefficients = c;
            if (r == 0) break;
        }
    }
    return best;
}

namespace {

// Zero set of the Dickson data needed to make s constant on a subspace:
// the homogeneous residual linear form plus one member of each hyperbolic
// pair (char 2) / each square slot (odd p), expressed in the original
// coordinates via rows of T^{-1}.
std::vector<LinearForm> dickson_vanishing_forms(const DicksonForm& d) {
    PrimeField F(d.p);
    auto Tinv = mat_inverse(d.T, F);
    if (!Tinv) throw verification_error("dickson_vanishing_forms: singular T");
    std::vector<LinearForm> forms;
    for (size_t i = 0; i < d.alphas.size(); ++i) {
        // row of T^{-1} for slot z_{2i+1} (char 2) or z_i (odd)
        int row = (d.shape == DicksonForm::Shape::char2_pairs) ? 2 * static_cast<int>(i) + 1
                                                               : static_cast<int>(i);
        forms.emplace_back(d.p, (*Tinv)[row], 0);
    }
    // residual linear form pulled back: l(z) with z = T^{-1} x
    LinearForm lin(d.p, d.n);
    for (int j = 0; j < d.n; ++j) {
        long long acc = 0;
        for (int i = 0; i < d.n; ++i)
            acc += static_cast<long long>(d.residual_linear.coefficients[i]) * (*Tinv)[i][j];
        lin.coefficients[j] = F.reduce(acc);
    }
    if (!lin.is_constant()) forms.push_back(lin);
    return forms;
}

}  // namespace

RegularizedFamily regularize(const std::vector<Polynomial>& qs, int r) {
    if (qs.empty()) throw structural_error("regularize: empty family");
    if (r < 1) throw structural_error("regularize: need r >= 1");
    int p = qs[0].p, n = qs[0].n;
    PrimeField F(p);

    RegularizedFamily out;
    out.V = AffineSubspace::full_space(p, n);
    std::vector<Polynomial> cur = qs;
    std::vector<int> kept(qs.size());
    for (size_t i = 0; i < qs.size(); ++i) kept[i] = static_cast<int>(i);

    while (!cur.empty()) {
        int m = static_cast<int>(cur.size());
        long long combos = pow_ll(p, m);
        if (combos > (1LL << 20)) throw resource_error("regularize: p^m > 2^20");
        // lexicographically first nontrivial combination of rank <= r
        std::vector<int> witness;
        Polynomial combo = Polynomial::zero(p, cur[0].n);
        {
            std::vector<int> c(m, 0);
            for (long long t = 1; t < combos && witness.empty(); ++t) {
                int i = 0;
                while (true) {
                    if (++c[i] < p) break;
                    c[i] = 0;
                    ++i;
                }
                Polynomial s = Polynomial::zero(p, cur[0].n);
                for (int j = 0; j < m; ++j)
                    if (c[j] != 0) s = s + cur[j].scaled(c[j]);
                if (rank2(s.truncate_degree(2)) <= r) {
                    witness = c;
                    combo = s;
                }
            }
        }
        if (witness.empty()) break;  // family is regular on the current subspace

        // discard the highest-index participant; the combination shows it is
        // spanned by the others once the combination is made constant
        int drop = m - 1;
        while (witness[drop] == 0) --drop;
        DicksonForm d = dickson_canonicalize(combo.truncate_degree(2));
        std::vector<LinearForm> vanish = dickson_vanishing_forms(d);
        AffineSubspace W = kernel_of(p, cur[0].n, vanish,
                                     std::vector<int>(vanish.size(), 0));
        if (W.empty || W.dim() == 0)
            break;  // out of room; keep what we have
        out.V = compose_subspace(out.V, W);
        std::vector<Polynomial> next;
        for (int j = 0; j < m; ++j) {
            if (j == drop) continue;
            next.push_back(restrict_to(cur[j], W));
        }
        cur = std::move(next);
        kept.erase(kept.begin() + drop);
    }
    (void)F;
    out.kept_indices = kept;
    out.kept_restrictions = cur;
    if (!cur.empty()) {
        out.r_min = min_combination_rank(cur).r_min;
    }
    return out;
}

namespace {

// coefficient of the monomial x_a x_b (or x_a^2 if a == b) in q
int quad_coeff(const Polynomial& q, int a, int b) {
    Exponents e(q.n, 0);
    e[a] += 1;
    e[b] += 1;
    auto it = q.terms.find(e);
    return it == q.terms.end() ? 0 : it->second;
}

// cofactor of x_v among degree-2 monomials of q, excluding designated vars
LinearForm quad_cofactor_excluding(const Polynomial& q, int v,
                                   const std::set<int>& excluded) {
    LinearForm l(q.p, q.n);
    for (int j = 0; j < q.n; ++j) {
        if (j == v || excluded.count(j)) continue;
        l.coefficients[j] = quad_coeff(q, v, j);
    }
    return l;
}

// substitute x_pivot := -(l - c_pivot x_pivot)/c_pivot into f (so l = 0 holds)
Polynomial eliminate_var(const Polynomial& f, const LinearForm& l, int pivot) {
    PrimeField F(f.p);
    int c = l.coefficients[pivot];
    int inv = F.inv(c);
    Polynomial repl = Polynomial::zero(f.p, f.n);
    for (int j = 0; j < f.n; ++j) {
        if (j == pivot || l.coefficients[j] == 0) continue;
        repl = repl + Polynomial::variable(f.p, f.n, j).scaled(
                          F.neg(F.mul(l.coefficients[j], inv)));
    }
    if (l.constant != 0)
        repl = repl + Polynomial::constant(f.p, f.n, F.neg(F.mul(l.constant, inv)));
    std::vector<Polynomial> subs;
    for (int i = 0; i < f.n; ++i)
        subs.push_back(i == pivot ? repl : Polynomial::variable(f.p, f.n, i));
    return f.substitute(subs, f.n);
}

}  // namespace

DisjointFamily disjointify(const std::vector<Polynomial>& qs) {
    if (qs.empty()) throw structural_error("disjointify: empty family");
    int p = qs[0].p, n = qs[0].n;
    PrimeField F(p);

    DisjointFamily out;
    out.T = identity_matrix(n);
    std::vector<Polynomial> cur = qs;
    std::set<int> designated_vars;
    std::set<int> eliminated_vars;
    std::vector<LinearForm> constraints;

    auto substitute_all = [&](const LinearForm& l, int pivot) {
        for (Polynomial& f : cur) f = eliminate_var(f, l, pivot);
        eliminated_vars.insert(pivot);
        constraints.push_back(l);
    };

    for (size_t k = 0; k < cur.size(); ++k) {
        // choose the designated monomial of q_k among untouched variables
        int a = -1, b = -1;
        auto eligible = [&](int v) {
            return !designated_vars.count(v) && !eliminated_vars.count(v);
        };
        if (p > 2) {
            for (int i = 0; i < n && a < 0; ++i)
                if (eligible(i) && quad_coeff(cur[k], i, i) != 0) a = b = i;
        }
        if (a < 0) {
            for (int i = 0; i < n && a < 0; ++i)
                for (int j = i + 1; j < n; ++j)
                    if (eligible(i) && eligible(j) && quad_coeff(cur[k], i, j) != 0) {
                        a = i;
                        b = j;
                        break;
                    }
        }
        if (a >= 0 && p > 2 && a != b) {
            // odd characteristic prefers a square: shear x_b -> x_b + x_a
            // turns c x_a x_b into c x_a^2 + c x_a x_b
            std::vector<Polynomial> subs;
            for (int i = 0; i < n; ++i) {
                Polynomial s = Polynomial::variable(p, n, i);
                if (i == b) s = s + Polynomial::variable(p, n, a);
                subs.push_back(std::move(s));
            }
            for (Polynomial& f : cur) f = f.substitute(subs, n);
            Matrix Sm = identity_matrix(n);
            Sm[b][a] = 1;
            out.T = mat_mul(out.T, Sm, F);
            // rewrite earlier constraints into the sheared coordinates:
            // l(x) = 0 with x = S z becomes (S^t l)(z) = 0
            for (LinearForm& l : constraints)
                l.coefficients[a] = F.add(l.coefficients[a], l.coefficients[b]);
            b = a;
            if (quad_coeff(cur[k], a, a) == 0) {
                out.collapsed = true;
                break;
            }
        }
        if (a < 0) {
            // no quadratic monomial on free variables: member degenerated
            out.collapsed = true;
            break;
        }
        designated_vars.insert(a);
        designated_vars.insert(b);

        // cancel the designated monomial from every other member
        int lead = quad_coeff(cur[k], a, b);
        for (size_t i = 0; i < cur.size(); ++i) {
            if (i == k) continue;
            int c = quad_coeff(cur[i], a, b);
            if (c != 0) cur[i] = cur[i] - cur[k].scaled(F.mul(c, F.inv(lead)));
        }

        // zero the cofactors of the designated variables everywhere, so no
        // other quadratic monomial touches them
        bool progressed = true;
        while (progressed) {
            progressed = false;
            for (size_t i = 0; i < cur.size() && !progressed; ++i)
                for (int v : (a == b ? std::vector<int>{a} : std::vector<int>{a, b})) {
                    std::set<int> excl = designated_vars;
                    LinearForm cof = quad_cofactor_excluding(cur[i], v, excl);
                    if (i == k) {
                        // keep q_k's own designated monomial
                        cof.coefficients[a] = 0;
                        cof.coefficients[b] = 0;
                    }
                    if (cof.is_constant()) continue;
                    int pivot = -1;
                    for (int j = 0; j < n; ++j)
                        if (cof.coefficients[j] != 0) {
                            pivot = j;
                            break;
                        }
                    substitute_all(cof, pivot);
                    progressed = true;
                    break;
                }
        }
    }

    out.V = kernel_of(p, n, constraints, std::vector<int>(constraints.size(), 0));
    if (!out.collapsed) {
        out.forms = cur;
        // reconstruct designated pair list in member order
        out.designated.clear();
        std::set<int> seen;
        for (const Polynomial& q : cur) {
            bool found = false;
            for (int i = 0; i < n && !found; ++i)
                for (int j = i; j < n && !found; ++j)
                    if (designated_vars.count(i) && designated_vars.count(j) &&
                        !seen.count(i) && !seen.count(j) && quad_coeff(q, i, j) != 0) {
                        out.designated.push_back({i, j});
                        seen.insert(i);
                        seen.insert(j);
                        found = true;
                    }
            if (!found) {
                out.collapsed = true;
                break;
            }
        }
    }
    return out;
}

double strongly_regular_gamma(const std::vector<Polynomial>& qs, const Point& x0) {
    if (qs.empty()) throw structural_error("strongly_regular_gamma: empty family");
    int p = qs[0].p, n = qs[0].n;
    if (static_cast<int>(x0.size()) != n)
        throw structural_error("strongly_regular_gamma: x0 dimension mismatch");
    long long lifted = pow_ll(p, 5 * n);
    if (lifted > max_table_size())
        throw resource_error("strongly_regular_gamma: p^{5n} exceeds table cap");

    // lift each member to Q_j(x0 + sum_{i in I} Y_i) over Y in F^{5n}
    std::vector<std::vector<int>> index_sets;
    for (int i = 0; i < 5; ++i) index_sets.push_back({i});
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j) index_sets.push_back({i, j});

    std::vector<Polynomial> family;
    for (const Polynomial& q : qs)
        for (const auto& I : index_sets) {
            std::vector<Polynomial> subs;
            for (int t = 0; t < n; ++t) {
                Polynomial s = Polynomial::constant(p, 5 * n, x0[t]);
                for (int i : I) s = s + Polynomial::variable(p, 5 * n, i * n + t);
                subs.push_back(std::move(s));
            }
            family.push_back(q.substitute(subs, 5 * n));
        }
    return joint_distribution_distance(family);
}

RegularityCheck strong_regularity_bound_check(const std::vector<Polynomial>& qs, int R,
                                              const Point& x0) {
    RegularityCheck out{};
    out.gamma = strongly_regular_gamma(qs, x0);
    double m = static_cast<double>(qs.size());
    out.bound = std::pow(static_cast<double>(qs[0].p), 1.5 * m - R / 4.0);
    out.vacuous = out.bound >= 1.0;
    out.holds = out.vacuous || out.gamma <= out.bound + 1e-9;
    return out;
}

bool poly_of_disjoint_is_low_degree(const Polynomial& F_poly, const DisjointFamily& family,
                                    const Polynomial& f) {
    int m = static_cast<int>(family.forms.size());
    if (F_poly.n != m) throw structural_error("poly_of_disjoint_is_low_degree: arity");
    bool match = true;
    family.V.for_each_point([&](const Point& x) {
        Point z(m);
        for (int i = 0; i < m; ++i) z[i] = family.forms[i].evaluate(x);
        if (F_poly.evaluate(z) != f.evaluate(x)) match = false;
    });
    if (!match) return false;
    return 2 * F_poly.degree() <= f.degree();
}

}  // namespace polystruct
