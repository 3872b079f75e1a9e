#include "polystruct/quartic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "polystruct/addcomb.hpp"
#include "polystruct/analytic.hpp"
#include "polystruct/errors.hpp"
#include "polystruct/quadform.hpp"
#include "polystruct/rng.hpp"

namespace polystruct {

namespace {

std::string exps_to_string(const Exponents& e) {
    std::string s;
    for (size_t i = 0; i < e.size(); ++i)
        for (int k = 0; k < e[i]; ++k) s += "x" + std::to_string(i + 1);
    return s.empty() ? std::string("1") : s;
}

Matrix complete_rows_to_basis(int p, int n, const Matrix& rows) {
    PrimeField F(p);
    Matrix S = rows;
    if (mat_rank(S, F) != static_cast<int>(rows.size()))
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

// ---------------------------------------------------------------------------
// Affine chart: an embedding t -> M t + off of a parameter space into the
// ambient space.  Pipelines stack restrictions and basis changes onto one
// chart and pull component polynomials back through it at assembly time.
// ---------------------------------------------------------------------------
struct Chart {
    int p;
    int n;       // ambient dimension
    Matrix M;    // n x k embedding matrix, rank k
    Point off;   // ambient offset

    int k() const { return M.empty() ? 0 : static_cast<int>(M[0].size()); }
};

Chart chart_full(int p, int n) {
    Chart c{p, n, identity_matrix(n), Point(n, 0)};
    return c;
}

// Restrict the chart to an affine subspace W given in the current parameters.
Chart chart_restrict(const Chart& c, const AffineSubspace& W) {
    if (W.empty) throw structural_error("chart restriction to an empty subspace");
    PrimeField F(c.p);
    Matrix Bt = transpose(W.basis);  // k x dim(W)
    Chart out{c.p, c.n, mat_mul(c.M, Bt, F), mat_vec(c.M, W.offset, F)};
    for (int i = 0; i < c.n; ++i) out.off[i] = F.add(out.off[i], c.off[i]);
    return out;
}

// Apply a basis change in parameter space: subsequently work with h(T z).
Chart chart_transform(const Chart& c, const Matrix& T) {
    PrimeField F(c.p);
    return Chart{c.p, c.n, mat_mul(c.M, T, F), c.off};
}

// f on ambient space -> f in the chart's parameters.
Polynomial chart_push(const Chart& c, const Polynomial& f) {
    int k = c.k();
    std::vector<Polynomial> subs;
    for (int i = 0; i < c.n; ++i) {
        Polynomial s = Polynomial::constant(c.p, k, c.off[i]);
        for (int j = 0; j < k; ++j)
            if (c.M[i][j] != 0)
                s = s + Polynomial::variable(c.p, k, j).scaled(c.M[i][j]);
        subs.push_back(std::move(s));
    }
    return f.substitute(subs, k);
}

// Left inverse of the embedding matrix: L M = I_k.
Matrix chart_left_inverse(const Chart& c) {
    PrimeField F(c.p);
    Matrix MT = transpose(c.M);  // k x n
    int k = c.k();
    Matrix L;
    for (int i = 0; i < k; ++i) {
        Point e(k, 0);
        e[i] = 1;
        auto v = solve(MT, e, F);
        if (!v) throw verification_error("chart: embedding is not injective");
        L.push_back(*v);
    }
    return L;
}

// P in parameters -> ambient polynomial agreeing with P on the chart image.
Polynomial chart_pull(const Chart& c, const Polynomial& P) {
    PrimeField F(c.p);
    Matrix L = chart_left_inverse(c);
    int k = c.k();
    std::vector<Polynomial> subs;
    for (int i = 0; i < k; ++i) {
        long long dot = 0;
        for (int j = 0; j < c.n; ++j) dot += static_cast<long long>(L[i][j]) * c.off[j];
        Polynomial s = Polynomial::constant(c.p, c.n, F.neg(F.reduce(dot)));
        for (int j = 0; j < c.n; ++j)
            if (L[i][j] != 0)
                s = s + Polynomial::variable(c.p, c.n, j).scaled(L[i][j]);
        subs.push_back(std::move(s));
    }
    return P.substitute(subs, c.n);
}

// Independent affine forms vanishing exactly on the chart image.
std::vector<LinearForm> chart_vanishing(const Chart& c) {
    PrimeField F(c.p);
    Matrix MT = transpose(c.M);  // k x n
    Matrix N = MT.empty() ? identity_matrix(c.n) : null_space(MT, F, c.n);
    std::vector<LinearForm> forms;
    for (const auto& row : N) {
        long long dot = 0;
        for (int j = 0; j < c.n; ++j) dot += static_cast<long long>(row[j]) * c.off[j];
        forms.emplace_back(c.p, row, F.neg(F.reduce(dot)));
    }
    return forms;
}

// Write D (vanishing on the joint zero set of the given independent affine
// forms) as sum forms_i * g_i, exactly.
std::vector<Polynomial> peel_affine(const Polynomial& D,
                                    const std::vector<LinearForm>& forms) {
    int p = D.p, n = D.n;
    PrimeField F(p);
    int k = static_cast<int>(forms.size());
    if (k == 0) {
        if (!D.is_zero())
            throw verification_error("peel: nonzero remainder with no forms");
        return {};
    }
    Matrix rows;
    for (const LinearForm& l : forms) rows.push_back(l.coefficients);
    Matrix S = complete_rows_to_basis(p, n, rows);
    auto Sinv = mat_inverse(S, F);
    if (!Sinv) throw verification_error("peel: singular basis completion");
    Point shift(n, 0);
    for (int i = 0; i < k; ++i) shift[i] = forms[i].constant;
    Point b = mat_vec(*Sinv, shift, F);
    for (int& v : b) v = F.neg(v);
    // y = S x + shift, so D(x) = Dt(y) with Dt = D composed with x = Sinv(y) - Sinv(shift)
    Polynomial Dt = compose_affine(D, *Sinv, b);
    // on the zero set y_1 = ... = y_k = 0, so the remainder there must vanish
    std::vector<Polynomial> zero_lead;
    for (int i = 0; i < n; ++i)
        zero_lead.push_back(i < k ? Polynomial::zero(p, n)
                                  : Polynomial::variable(p, n, i));
    if (!Dt.substitute(zero_lead, n).is_zero())
        throw verification_error("peel: polynomial does not vanish on the subspace");
    std::vector<Polynomial> cof(k, Polynomial::zero(p, n));
    for (const auto& [e, cval] : Dt.terms) {
        int lead = -1;
        for (int i = 0; i < k; ++i)
            if (e[i] > 0) { lead = i; break; }
        if (lead < 0) throw verification_error("peel: term misses every form");
        Exponents d = e;
        d[lead] -= 1;
        cof[lead].add_term(d, cval);
    }
    std::vector<Polynomial> gs;
    Polynomial check = Polynomial::zero(p, n);
    for (int i = 0; i < k; ++i) {
        gs.push_back(compose_affine(cof[i], S, shift));
        check = check + forms[i].to_polynomial() * gs.back();
    }
    if (!(check == D)) throw verification_error("peel: reconstruction mismatch");
    return gs;
}

// Pull a parameter-space polynomial of an RREF-parametrized subspace back to
// ambient coordinates (param j equals ambient coordinate pivot_j minus its
// offset entry).
Polynomial subspace_pull(const AffineSubspace& V, const Polynomial& P) {
    PrimeField F(V.p);
    std::vector<int> pivots;
    for (const auto& row : V.basis) {
        int c = 0;
        while (c < V.n && row[c] == 0) ++c;
        pivots.push_back(c);
    }
    std::vector<Polynomial> subs;
    for (size_t j = 0; j < pivots.size(); ++j) {
        Polynomial s = Polynomial::variable(V.p, V.n, pivots[j]);
        if (V.offset[pivots[j]] != 0)
            s = s + Polynomial::constant(V.p, V.n, F.neg(V.offset[pivots[j]]));
        subs.push_back(std::move(s));
    }
    return P.substitute(subs, V.n);
}

LinearForm scale_form(const LinearForm& l, int a, const PrimeField& F) {
    LinearForm out = l;
    for (int& c : out.coefficients) c = F.mul(c, a);
    out.constant = F.mul(out.constant, a);
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// ModSet and the class calculus
// ---------------------------------------------------------------------------

namespace {

std::vector<int> quad_part_vector(const Polynomial& q,
                                  const std::vector<Exponents>& mons2,
                                  const std::map<Exponents, int>& index2) {
    std::vector<int> v(mons2.size(), 0);
    for (const auto& [e, c] : q.terms) {
        if (total_degree(e) != 2) continue;
        v[index2.at(e)] = c;
    }
    return v;
}

}  // namespace

bool ModSet::add_quadratic(const Polynomial& q) {
    if (q.degree() > 2) throw structural_error("ModSet: quadratic expected");
    if (q.homogeneous_part(2).is_zero()) return false;
    auto mons2 = monomials_of_degree(q.p, q.n, 2);
    std::map<Exponents, int> index2;
    for (size_t i = 0; i < mons2.size(); ++i) index2[mons2[i]] = static_cast<int>(i);
    PrimeField F(q.p);
    Matrix rows;
    for (const Polynomial& old : Qs) rows.push_back(quad_part_vector(old, mons2, index2));
    int before = mat_rank(rows, F);
    rows.push_back(quad_part_vector(q, mons2, index2));
    if (mat_rank(rows, F) == before) return false;
    Qs.push_back(q);
    return true;
}

bool ModSet::add_linear(const LinearForm& l) {
    if (l.is_constant()) return false;
    PrimeField F(l.p);
    Matrix rows;
    for (const LinearForm& old : ells) rows.push_back(old.coefficients);
    int before = mat_rank(rows, F);
    rows.push_back(l.coefficients);
    if (mat_rank(rows, F) == before) return false;
    ells.push_back(l.homogeneous_part());
    return true;
}

namespace {

struct ClassSystem {
    std::vector<Exponents> mons3;
    std::map<Exponents, int> index3;
    Matrix G;          // one row per generator, columns = cubic monomials
    Matrix G_rref;
    std::vector<int> pivots;
    // generator bookkeeping: (kind, i, j): kind 0 = x_j * Qs_i, kind 1 = ells_i * mon2_j
    std::vector<std::array<int, 3>> gens;
    std::vector<Exponents> mons2;
};

std::vector<int> cubic_vector(const Polynomial& f, const ClassSystem& sys) {
    std::vector<int> v(sys.mons3.size(), 0);
    for (const auto& [e, c] : f.terms)
        if (total_degree(e) == 3) v[sys.index3.at(e)] = c;
    return v;
}

Polynomial cubic_from_vector(int p, int n, const std::vector<int>& v,
                             const ClassSystem& sys) {
    Polynomial out(p, n);
    for (size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0) out.add_term(sys.mons3[i], v[i]);
    return out;
}

ClassSystem build_class_system(int p, int n, const ModSet& A) {
    ClassSystem sys;
    sys.mons3 = monomials_of_degree(p, n, 3);
    for (size_t i = 0; i < sys.mons3.size(); ++i)
        sys.index3[sys.mons3[i]] = static_cast<int>(i);
    sys.mons2 = monomials_of_degree(p, n, 2);
    for (int i = 0; i < A.t1(); ++i)
        for (int j = 0; j < n; ++j) {
            Polynomial g = Polynomial::variable(p, n, j) * A.Qs[i];
            sys.G.push_back(cubic_vector(g, sys));
            sys.gens.push_back({0, i, j});
        }
    for (int i = 0; i < A.t2(); ++i) {
        Polynomial lp = A.ells[i].to_polynomial();
        for (size_t j = 0; j < sys.mons2.size(); ++j) {
            Polynomial m(p, n);
            m.add_term(sys.mons2[j], 1);
            sys.G.push_back(cubic_vector(lp * m, sys));
            sys.gens.push_back({1, i, static_cast<int>(j)});
        }
    }
    sys.G_rref = sys.G;
    PrimeField F(p);
    sys.pivots = rref(sys.G_rref, F);
    return sys;
}

std::vector<int> reduce_against(const ClassSystem& sys, std::vector<int> v,
                                const PrimeField& F) {
    for (size_t r = 0; r < sys.G_rref.size(); ++r) {
        int c = v[sys.pivots[r]];
        if (c == 0) continue;
        for (size_t j = 0; j < v.size(); ++j)
            v[j] = F.sub(v[j], F.mul(c, sys.G_rref[r][j]));
    }
    return v;
}

}  // namespace

ClassReduction class_reduce(const Polynomial& f, const ModSet& A) {
    if (f.degree() > 3) throw structural_error("class_reduce: degree > 3 input");
    int p = f.p, n = f.n;
    PrimeField F(p);
    ClassSystem sys = build_class_system(p, n, A);
    std::vector<int> fv = cubic_vector(f, sys);
    std::vector<int> res = reduce_against(sys, fv, F);
    ClassReduction out;
    out.residue = cubic_from_vector(p, n, res, sys);
    out.in_zero_class = out.residue.is_zero();
    // witness combination for the eliminated part
    std::vector<int> target(fv.size());
    for (size_t i = 0; i < fv.size(); ++i) target[i] = F.sub(fv[i], res[i]);
    out.ell_primed.assign(A.t1(), LinearForm(p, n));
    out.Q_primed.assign(A.t2(), Polynomial::zero(p, n));
    if (!sys.G.empty()) {
        auto sol = solve(transpose(sys.G), target, F);
        if (!sol) throw verification_error("class_reduce: witness solve failed");
        for (size_t g = 0; g < sys.gens.size(); ++g) {
            if ((*sol)[g] == 0) continue;
            auto [kind, i, j] = sys.gens[g];
            if (kind == 0)
                out.ell_primed[i].coefficients[j] =
                    F.add(out.ell_primed[i].coefficients[j], (*sol)[g]);
            else
                out.Q_primed[i].add_term(sys.mons2[j], (*sol)[g]);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// rank with triple budget
// ---------------------------------------------------------------------------

Polynomial rank3c_reconstruct(const Rank3cCertificate& cert) {
    Polynomial acc = cert.Q0;
    for (const auto& [l, q] : cert.pairs) acc = acc + l.to_polynomial() * q;
    for (const auto& t : cert.triples)
        acc = acc + t[0].to_polynomial() * t[1].to_polynomial() * t[2].to_polynomial();
    return acc;
}

Rank3cCertificate rank3c_upper(const Polynomial& f, const ModSet& A, int budget) {
    int p = f.p, n = f.n;
    PrimeField F(p);
    ClassReduction red = class_reduce(f, A);
    Polynomial rep = red.residue;
    Rank3cCertificate cert;
    cert.representative = rep;
    cert.Q0 = Polynomial::zero(p, n);
    if (rep.is_zero()) {
        cert.exactness = Rank3cCertificate::Exactness::exact;
        return cert;
    }
    Rank3Certificate base = rank3_upper(rep);
    if (base.r > 1) {
        try {
            auto ex = rank3_exact(rep, std::min(base.r, 3));
            if (ex) base = *ex;
        } catch (const resource_error&) {
            // fall back to the greedy certificate
        }
    }
    // split low-rank quadratic cofactors into triple products within budget
    std::vector<std::pair<int, int>> order;  // (rank, index)
    for (int i = 0; i < base.r; ++i)
        order.emplace_back(rank2(base.qs[i].truncate_degree(2)), i);
    std::sort(order.begin(), order.end());
    int remaining = budget;
    std::vector<char> split(base.r, 0);
    for (auto [s, i] : order) {
        if (s == 0) { split[i] = 1; continue; }  // degenerate cofactor, free
        if (s > 3) continue;
        if (s > remaining) { cert.overflow = true; continue; }
        remaining -= s;
        split[i] = 1;
        DicksonForm d = dickson_canonicalize(base.qs[i].truncate_degree(2));
        auto Tinv = mat_inverse(d.T, F);
        if (!Tinv) throw verification_error("rank3c: singular canonical basis");
        for (size_t j = 0; j < d.alphas.size(); ++j) {
            if (d.alphas[j] == 0) continue;
            if (d.shape == DicksonForm::Shape::char2_pairs)
                cert.triples.push_back({base.ells[i],
                                        scale_form(LinearForm(p, (*Tinv)[2 * j], 0),
                                                   d.alphas[j], F),
                                        LinearForm(p, (*Tinv)[2 * j + 1], 0)});
            else
                cert.triples.push_back({base.ells[i],
                                        scale_form(LinearForm(p, (*Tinv)[j], 0),
                                                   d.alphas[j], F),
                                        LinearForm(p, (*Tinv)[j], 0)});
        }
    }
    for (int i = 0; i < base.r; ++i)
        if (!split[i]) cert.pairs.emplace_back(base.ells[i], base.qs[i]);
    cert.r = static_cast<int>(cert.pairs.size());
    cert.c = static_cast<int>(cert.triples.size());
    Polynomial partial = rank3c_reconstruct(cert);  // Q0 still zero here
    cert.Q0 = rep - partial;
    if (cert.Q0.degree() > 2)
        throw verification_error("rank3c: remainder degree exceeds 2");
    cert.exactness = (cert.r == 0 && cert.c == 0)
                         ? Rank3cCertificate::Exactness::exact
                         : Rank3cCertificate::Exactness::upper_bound;
    if (!(rank3c_reconstruct(cert) == rep))
        throw verification_error("rank3c: reconstruction mismatch");
    return cert;
}

// ---------------------------------------------------------------------------
// derivative basis
// ---------------------------------------------------------------------------

namespace {

int triple_span_dim(const Rank3cCertificate& cert, const PrimeField& F) {
    Matrix rows;
    for (const auto& t : cert.triples)
        for (const LinearForm& l : t) rows.push_back(l.coefficients);
    return mat_rank(rows, F);
}

}  // namespace

DerivativeBasis derivative_basis(const Polynomial& f) {
    if (f.degree() != 4) throw structural_error("derivative_basis: degree 4 expected");
    int p = f.p, n = f.n;
    PrimeField F(p);
    long long N = pow_ll(p, n);
    if (N > (1LL << 14))
        throw resource_error("derivative_basis: ambient space exceeds the sweep cap");

    DerivativeBasis out;
    auto oracle = [&](const Point& y) {
        return static_cast<double>(rank3_upper(derivative(f, y).truncate_degree(3)).r);
    };
    // rank bound with sublevel density at least 1/2
    std::vector<int> ranks(N);
    for (long long i = 0; i < N; ++i)
        ranks[i] = static_cast<int>(oracle(decode_point(i, p, n)));
    int r_prof = 0;
    {
        std::vector<int> sorted = ranks;
        std::sort(sorted.begin(), sorted.end());
        r_prof = sorted[sorted.size() / 2];
    }
    out.profile_r = r_prof;

    // measured norm, metric only
    double ccost = std::pow(static_cast<double>(p), 3.0 * n);
    if (ccost <= static_cast<double>(1LL << 25)) {
        double acc = 0.0;
        for (long long i = 0; i < N; ++i) {
            double u3 = gowers_norm_exact(derivative(f, decode_point(i, p, n)), 3).value;
            acc += std::pow(u3, 8.0);
        }
        out.u4 = std::pow(acc / static_cast<double>(N), 1.0 / 16.0);
    } else {
        out.u4 = gowers_norm_mc(f, 4, 4096, 0x5eedULL).value;
    }

    SubadditiveResult sub = subadditive_subspace(oracle, p, n, r_prof, 0.45);
    out.V = sub.V;
    out.f_V = restrict_to(f, out.V);
    int n1 = out.V.dim();
    if (out.f_V.degree() <= 3) return out;  // all derivatives already quadratic

    std::vector<Polynomial> gens;
    for (int j = 0; j < n1; ++j) {
        Point e(n1, 0);
        e[j] = 1;
        Polynomial g = derivative(out.f_V, e).homogeneous_part(3);
        if (!g.is_zero()) gens.push_back(std::move(g));
    }
    std::vector<Polynomial> candidates = gens;
    for (size_t a = 0; a < gens.size() && candidates.size() < 200; ++a)
        for (size_t b = a + 1; b < gens.size() && candidates.size() < 200; ++b)
            candidates.push_back(gens[a] + gens[b]);

    out.budget = 4;
    int r0 = 0;
    for (const Polynomial& g : candidates)
        r0 = std::max(r0, rank3c_upper(g, out.A, out.budget).r);
    int max_rounds = r0 + 3 * out.budget + 8;

    for (int round = 0; round < max_rounds; ++round) {
        int best_r = 0;
        Rank3cCertificate best;
        for (const Polynomial& g : candidates) {
            Rank3cCertificate c = rank3c_upper(g, out.A, out.budget);
            if (c.r > best_r) {
                best_r = c.r;
                best = c;
            }
        }
        if (best_r == 0) break;
        bool progressed = false;
        for (const auto& [l, q] : best.pairs) progressed |= out.A.add_linear(l);
        for (const auto& [l, q] : best.pairs)
            if (out.A.add_quadratic(q.truncate_degree(2))) { progressed = true; break; }
        if (!progressed)
            throw threshold_error("derivative basis",
                                  "rank reduction round made no progress");
        out.budget = std::min(512, 11 * out.budget + 3 * best_r + out.A.t1());
        ++out.rounds_rank;
        if (round + 1 == max_rounds)
            throw threshold_error("derivative basis", "round guard exhausted");
    }

    // dimension-reduction rounds on the triple-product factors
    for (int round = 0; round < max_rounds; ++round) {
        int best_d = 0;
        Rank3cCertificate best;
        for (const Polynomial& g : candidates) {
            Rank3cCertificate c = rank3c_upper(g, out.A, out.budget);
            if (c.r > 0)
                throw threshold_error("derivative basis",
                                      "rank regressed during dimension reduction");
            int d = triple_span_dim(c, F);
            if (d > best_d) {
                best_d = d;
                best = c;
            }
        }
        if (best_d == 0) break;
        bool progressed = false;
        for (const auto& t : best.triples)
            for (const LinearForm& l : t) progressed |= out.A.add_linear(l);
        if (!progressed)
            throw threshold_error("dimension reduction",
                                  "potential did not decrease");
        int new_max = 0;
        for (const Polynomial& g : candidates)
            new_max = std::max(
                new_max, triple_span_dim(rank3c_upper(g, out.A, out.budget), F));
        if (new_max >= best_d)
            throw threshold_error("dimension reduction",
                                  "potential did not decrease");
        ++out.rounds_dim;
    }

    if (out.A.t2() + out.V.codim() >= n)
        throw threshold_error("derivative basis",
                              "linear basis exceeds the ambient dimension");

    // per-direction certification
    long long N1 = pow_ll(p, n1);
    out.sampled = N1 > (1LL << 14);
    auto check_dir = [&](const Point& y) {
        Polynomial d = derivative(out.f_V, y).truncate_degree(3);
        if (!class_reduce(d, out.A).in_zero_class)
            throw verification_error("derivative basis: direction not covered");
    };
    if (!out.sampled) {
        for (long long i = 0; i < N1; ++i) check_dir(decode_point(i, p, n1));
    } else {
        SplitMix64 gen(0xba5e5ULL);
        for (int t = 0; t < 1000; ++t) {
            Point y(n1);
            for (int& v : y) v = gen.field_element(p);
            check_dir(y);
        }
    }
    return out;
}

DirectionDecomposition decompose_direction(const DerivativeBasis& basis, const Point& y) {
    int p = basis.f_V.p, n = basis.f_V.n;
    PrimeField F(p);
    Polynomial target = derivative(basis.f_V, y);
    ClassSystem sys = build_class_system(p, n, basis.A);
    std::vector<int> tv = cubic_vector(target, sys);
    DirectionDecomposition out;
    out.ell_y.assign(basis.A.t1(), LinearForm(p, n));
    out.Q_y.assign(basis.A.t2(), Polynomial::zero(p, n));
    if (!sys.G.empty()) {
        auto sol = solve(transpose(sys.G), tv, F);
        if (!sol)
            throw verification_error("decompose_direction: direction not in the class");
        for (size_t g = 0; g < sys.gens.size(); ++g) {
            if ((*sol)[g] == 0) continue;
            auto [kind, i, j] = sys.gens[g];
            if (kind == 0)
                out.ell_y[i].coefficients[j] = F.add(out.ell_y[i].coefficients[j], (*sol)[g]);
            else
                out.Q_y[i].add_term(sys.mons2[j], (*sol)[g]);
        }
    }
    Polynomial acc = Polynomial::zero(p, n);
    for (int i = 0; i < basis.A.t1(); ++i)
        acc = acc + out.ell_y[i].to_polynomial() * basis.A.Qs[i];
    for (int i = 0; i < basis.A.t2(); ++i)
        acc = acc + basis.A.ells[i].to_polynomial() * out.Q_y[i];
    out.Q0_y = target - acc;
    if (out.Q0_y.degree() > 2)
        throw verification_error("decompose_direction: remainder degree exceeds 2");
    return out;
}

// ---------------------------------------------------------------------------
// partition
// ---------------------------------------------------------------------------

QuarticPartition partition_degree_drop(const Polynomial& f) {
    int p = f.p, n = f.n;
    PrimeField F(p);
    QuarticPartition out;
    if (f.degree() <= 3) {
        out.V = AffineSubspace::full_space(p, n);
        CellCertificate cell;
        cell.cell = out.V;
        cell.restriction = restrict_to(f, out.V);
        cell.degree = cell.restriction.degree();
        cell.cubic_cert = rank3_upper(cell.restriction);
        out.cells.push_back(std::move(cell));
        return out;
    }
    DerivativeBasis basis = derivative_basis(f);
    out.V = basis.V;

    std::vector<LinearForm> ambient_ells;
    for (const LinearForm& l : basis.A.ells)
        ambient_ells.push_back(pullback_form(out.V, l));
    out.outer_forms = static_cast<int>(ambient_ells.size());

    std::vector<AffineSubspace> cells;
    if (ambient_ells.empty()) {
        cells.push_back(out.V);
    } else {
        for (const AffineSubspace& c : coset_partition(out.V, ambient_ells).cells)
            cells.push_back(c);
    }

    for (const Polynomial& Q : basis.A.Qs) {
        Polynomial Qa = subspace_pull(basis.V, Q);
        std::vector<AffineSubspace> next;
        for (const AffineSubspace& cell : cells) {
            Polynomial qc = restrict_to(Qa, cell).truncate_degree(2);
            if (qc.homogeneous_part(2).is_zero()) {
                next.push_back(cell);
                continue;
            }
            DicksonForm d = dickson_canonicalize(qc);
            auto Tinv = mat_inverse(d.T, F);
            if (!Tinv) throw verification_error("partition: singular canonical basis");
            std::vector<LinearForm> fix;
            for (size_t j = 0; j < d.alphas.size(); ++j) {
                if (d.alphas[j] == 0) continue;
                int row = (d.shape == DicksonForm::Shape::char2_pairs)
                              ? static_cast<int>(2 * j)
                              : static_cast<int>(j);
                fix.push_back(
                    pullback_form(cell, LinearForm(p, (*Tinv)[row], 0)));
            }
            for (const AffineSubspace& sub : coset_partition(cell, fix).cells)
                next.push_back(sub);
            if (next.size() > 4096)
                throw resource_error("partition: cell count guard exceeded");
        }
        cells = std::move(next);
        ++out.rounds;
    }

    for (const AffineSubspace& cell : cells) {
        CellCertificate cc;
        cc.cell = cell;
        cc.restriction = restrict_to(f, cell);
        cc.degree = cc.restriction.degree();
        if (cc.degree > 3)
            throw verification_error("partition: cell restriction has degree > 3");
        cc.cubic_cert = rank3_upper(cc.restriction);
        out.cells.push_back(std::move(cc));
    }

    // exact coverage: every point of V lies in exactly one cell
    if (pow_ll(p, out.V.dim()) <= (1LL << 14)) {
        std::map<long long, int> hits;
        out.V.for_each_point(
            [&](const Point& x) { hits[encode_point(x, p)] = 0; });
        for (const CellCertificate& cc : out.cells)
            cc.cell.for_each_point(
                [&](const Point& x) { hits.at(encode_point(x, p)) += 1; });
        for (const auto& [idx, cnt] : hits)
            if (cnt != 1)
                throw verification_error("partition: coverage is not exact");
    }
    return out;
}

// ---------------------------------------------------------------------------
// structures
// ---------------------------------------------------------------------------

Polynomial quartic_reconstruct(const QuarticStructure& s) {
    Polynomial acc = s.g0;
    for (size_t i = 0; i < s.ells.size(); ++i)
        acc = acc + s.ells[i].to_polynomial() * s.gs[i];
    for (const QuadraticPair& pr : s.pairs) acc = acc + pr.q * pr.q2;
    return acc;
}

namespace {

// Expand a degree <= 2 polynomial F over signature variables into structure
// components: quadratic monomials become q*q' pairs, the rest joins g0.
void expand_fit(const Polynomial& F_poly, const std::vector<Polynomial>& qa,
                QuarticStructure& s) {
    int p = F_poly.p;
    for (const auto& [e, c] : F_poly.terms) {
        int d = total_degree(e);
        if (d == 2) {
            int i = -1, j = -1;
            for (size_t t = 0; t < e.size(); ++t) {
                if (e[t] == 2) { i = j = static_cast<int>(t); }
                if (e[t] == 1) (i < 0 ? i : j) = static_cast<int>(t);
            }
            s.pairs.push_back({qa[i].scaled(c), qa[j]});
        } else if (d == 1) {
            for (size_t t = 0; t < e.size(); ++t)
                if (e[t] == 1) s.g0 = s.g0 + qa[t].scaled(c);
        } else {
            s.g0 = s.g0 + Polynomial::constant(p, s.n, c);
        }
    }
}

void finish_assembly(const Polynomial& f, const Chart& chart, QuarticStructure& s) {
    Polynomial inner = s.g0;
    for (const QuadraticPair& pr : s.pairs) inner = inner + pr.q * pr.q2;
    for (size_t i = 0; i < s.ells.size(); ++i)
        inner = inner + s.ells[i].to_polynomial() * s.gs[i];
    Polynomial D = f - inner;
    std::vector<LinearForm> forms = chart_vanishing(chart);
    std::vector<Polynomial> gs = peel_affine(D, forms);
    for (size_t i = 0; i < forms.size(); ++i) {
        s.ells.push_back(forms[i]);
        s.gs.push_back(gs[i]);
    }
    s.chart_codim = static_cast<int>(forms.size());
    if (!(quartic_reconstruct(s) == f))
        throw verification_error("quartic structure: reconstruction mismatch");
}

}  // namespace

QuarticStructure quartic_bias_structure(const Polynomial& f) {
    int p = f.p, n = f.n;
    PrimeField F(p);
    QuarticStructure s;
    s.variant = QuarticStructure::Variant::bias_form;
    s.p = p;
    s.n = n;
    s.g0 = Polynomial::zero(p, n);
    if (f.degree() <= 3) {
        s.g0 = f;
        return s;
    }
    long long N = pow_ll(p, n);
    if (N > (1LL << 14))
        throw resource_error("bias structure: ambient space exceeds the sweep cap");
    double delta = bias_exact(f).value;
    s.delta = delta;
    // the derivative-bias sublevel set has density >= delta^2/2; the pipeline
    // needs that to be at least one point's worth of mass
    if (delta * delta / 2.0 < 1.0 / static_cast<double>(N))
        throw threshold_error("bias measurement",
                              "measured bias below the pipeline threshold");

    // subspace with a bounded derivative rank profile
    int r = 0;
    for (long long i = 0; i < N; ++i) {
        Point y = decode_point(i, p, n);
        if (bias_exact(derivative(f, y)).value >= delta * delta / 2.0)
            r = std::max(r, rank3_upper(derivative(f, y).truncate_degree(3)).r);
    }
    auto oracle = [&](const Point& y) {
        return static_cast<double>(rank3_upper(derivative(f, y).truncate_degree(3)).r);
    };
    SubadditiveResult sub =
        subadditive_subspace(oracle, p, n, r, delta * delta / 2.0);

    // best coset of the subspace: bias at least delta exists by averaging
    Chart chart = chart_full(p, n);
    AffineSubspace best_coset = sub.V;
    if (sub.V.codim() > 0) {
        if (pow_ll(p, sub.V.codim()) > (1LL << 12))
            throw resource_error("bias structure: coset sweep guard exceeded");
        std::vector<LinearForm> vanish;
        {
            Chart vc = chart_restrict(chart, sub.V);
            vanish = chart_vanishing(vc);
        }
        double best_bias = -1.0;
        long long shifts = pow_ll(p, static_cast<int>(vanish.size()));
        for (long long sh = 0; sh < shifts; ++sh) {
            Point beta = decode_point(sh, p, static_cast<int>(vanish.size()));
            std::vector<int> vals(beta.begin(), beta.end());
            std::vector<LinearForm> hom;
            for (size_t i = 0; i < vanish.size(); ++i) {
                hom.push_back(vanish[i].homogeneous_part());
                vals[i] = F.sub(vals[i], vanish[i].constant);
            }
            AffineSubspace coset = kernel_of(p, n, hom, vals);
            if (coset.empty) continue;
            double b = bias_exact(restrict_to(f, coset)).value;
            if (b > best_bias) {
                best_bias = b;
                best_coset = coset;
            }
        }
    }
    chart = chart_restrict(chart, best_coset);
    Polynomial h = chart_push(chart, f);

    // plurality-decoder approximation by derived linear/quadratic features
    int n1 = chart.k();
    std::vector<Polynomial> feature_qs;
    AffineSubspace U = AffineSubspace::full_space(p, n1);
    bool decoded = false;
    for (int attempt = 0; attempt < 8 && !decoded; ++attempt) {
        int t = 1 << attempt;
        SplitMix64 gen(0xb1a5ULL + 7919ULL * static_cast<std::uint64_t>(t));
        std::vector<LinearForm> feat_l;
        std::vector<Polynomial> feat_q;
        for (int i = 0; i < t; ++i) {
            Point a(n1, 0);
            bool nz = false;
            while (!nz)
                for (int& v : a) nz |= ((v = gen.field_element(p)) != 0);
            Polynomial d = derivative(h, a);
            Rank3Certificate cert = rank3_upper(d.truncate_degree(3));
            if (cert.r > 1) {
                try {
                    auto ex = rank3_exact(d.truncate_degree(3), std::min(cert.r, 3));
                    if (ex) cert = *ex;
                } catch (const resource_error&) {
                }
            }
            for (const LinearForm& l : cert.ells) feat_l.push_back(l);
            for (const Polynomial& q : cert.qs)
                if (!q.homogeneous_part(2).is_zero()) feat_q.push_back(q);
            Polynomial q0 = d.truncate_degree(2);
            if (!q0.homogeneous_part(2).is_zero()) feat_q.push_back(q0);
        }
        // independent subset of the linear features
        Matrix rows;
        std::vector<LinearForm> indep;
        for (const LinearForm& l : feat_l) {
            int before = mat_rank(rows, F);
            rows.push_back(l.coefficients);
            if (mat_rank(rows, F) == before)
                rows.pop_back();
            else
                indep.push_back(l.homogeneous_part());
        }
        int sdim = static_cast<int>(indep.size());
        if (pow_ll(p, sdim) > (1LL << 12)) continue;  // feature blow-up, retry
        long long cosets = pow_ll(p, sdim);
        double best_eps = 2.0;
        AffineSubspace best_U = AffineSubspace::full_space(p, n1);
        for (long long ci = 0; ci < cosets; ++ci) {
            Point beta = decode_point(ci, p, sdim);
            AffineSubspace cand =
                sdim == 0 ? AffineSubspace::full_space(p, n1)
                          : kernel_of(p, n1, indep, std::vector<int>(beta.begin(), beta.end()));
            if (cand.empty) continue;
            Polynomial hc = restrict_to(h, cand);
            std::vector<Polynomial> qc;
            for (const Polynomial& q : feat_q) qc.push_back(restrict_to(q, cand));
            int nc = cand.dim();
            long long M = pow_ll(p, nc);
            std::map<std::vector<int>, std::vector<long long>> buckets;  // key -> counts per value
            std::vector<std::vector<int>> keys(M);
            std::vector<int> vals(M);
            for (long long i = 0; i < M; ++i) {
                Point x = decode_point(i, p, nc);
                std::vector<int> key;
                for (const Polynomial& q : qc) key.push_back(q.evaluate(x));
                auto& b = buckets[key];
                if (b.empty()) b.assign(p, 0);
                int v = hc.evaluate(x);
                b[v] += 1;
                keys[i] = std::move(key);
                vals[i] = v;
            }
            long long wrong = 0;
            for (long long i = 0; i < M; ++i) {
                const auto& b = buckets[keys[i]];
                int argmax = 0;
                for (int v = 1; v < p; ++v)
                    if (b[v] > b[argmax]) argmax = v;
                if (vals[i] != argmax) ++wrong;
            }
            double eps = static_cast<double>(wrong) / static_cast<double>(M);
            if (eps < best_eps) {
                best_eps = eps;
                best_U = cand;
            }
        }
        s.t_directions = t;
        if (best_eps <= std::pow(2.0, -10.0)) {
            decoded = true;
            U = best_U;
            for (const Polynomial& q : feat_q) feature_qs.push_back(restrict_to(q, U));
        }
    }
    if (!decoded)
        throw threshold_error("approximation by derivatives",
                              "plurality decoder missed the target after retries");

    chart = chart_restrict(chart, U);

    // regularize, then disjointify the surviving quadratics
    std::vector<Polynomial> qs;
    for (const Polynomial& q : feature_qs)
        if (!q.homogeneous_part(2).is_zero()) qs.push_back(q.truncate_degree(2));
    std::vector<Polynomial> fit_qs;
    if (!qs.empty()) {
        RegularizedFamily reg = regularize(qs, 2);
        chart = chart_restrict(chart, reg.V);
        std::vector<Polynomial> kept = reg.kept_restrictions;
        for (int pass = 0; pass < 6 && !kept.empty(); ++pass) {
            DisjointFamily fam = disjointify(kept);
            chart = chart_transform(chart, fam.T);
            if (fam.V.codim() == 0) {
                fit_qs = fam.forms;
                break;
            }
            chart = chart_restrict(chart, fam.V);
            std::vector<Polynomial> next;
            for (const Polynomial& q : fam.forms) {
                Polynomial rq = restrict_to(q, fam.V);
                if (!rq.homogeneous_part(2).is_zero()) next.push_back(rq.truncate_degree(2));
            }
            kept = std::move(next);
        }
    }
    s.quadratics_kept = static_cast<int>(fit_qs.size());

    // exact table fit over attained signatures
    Polynomial hw = chart_push(chart, f);
    int n2 = chart.k();
    long long M = pow_ll(p, n2);
    if (M > (1LL << 14))
        throw resource_error("bias structure: fit sweep guard exceeded");
    std::map<std::vector<int>, int> table;
    for (long long i = 0; i < M; ++i) {
        Point x = decode_point(i, p, n2);
        std::vector<int> key;
        for (const Polynomial& q : fit_qs) key.push_back(q.evaluate(x));
        int v = hw.evaluate(x);
        auto it = table.find(key);
        if (it == table.end())
            table[key] = v;
        else if (it->second != v)
            throw verification_error(
                "bias structure: table fit inconsistent, approximation stage insufficient");
    }
    int c2 = static_cast<int>(fit_qs.size());
    std::vector<Exponents> fit_mons = monomials_up_to_degree(p, c2, 2);
    Matrix rowsF;
    std::vector<int> rhs;
    for (const auto& [key, v] : table) {
        std::vector<int> row;
        for (const Exponents& e : fit_mons) {
            int prod = 1;
            for (int t = 0; t < c2; ++t)
                for (int k2 = 0; k2 < e[t]; ++k2) prod = F.mul(prod, key[t]);
            row.push_back(prod);
        }
        rowsF.push_back(std::move(row));
        rhs.push_back(v);
    }
    auto coeffs = solve(rowsF, rhs, F);
    if (!coeffs)
        throw verification_error("bias structure: no quadratic fit over the signatures");
    Polynomial F_poly(p, c2);
    for (size_t i = 0; i < fit_mons.size(); ++i)
        if ((*coeffs)[i] != 0) F_poly.add_term(fit_mons[i], (*coeffs)[i]);

    // assembly
    std::vector<Polynomial> qa;
    for (const Polynomial& q : fit_qs) qa.push_back(chart_pull(chart, q));
    expand_fit(F_poly, qa, s);
    finish_assembly(f, chart, s);
    return s;
}

QuarticStructure quartic_highchar_structure(const Polynomial& f) {
    int p = f.p, n = f.n;
    if (p < 5) throw structural_error("highchar structure: characteristic >= 5 required");
    PrimeField F(p);
    QuarticStructure s;
    s.variant = QuarticStructure::Variant::highchar_form;
    s.p = p;
    s.n = n;
    s.g0 = Polynomial::zero(p, n);
    if (f.degree() <= 3) {
        s.g0 = f;
        return s;
    }

    DerivativeBasis basis = derivative_basis(f);
    s.delta = basis.u4;
    Chart chart = chart_restrict(chart_full(p, n), basis.V);
    int n1 = chart.k();
    if (!basis.A.ells.empty()) {
        AffineSubspace K = kernel_of(p, n1, basis.A.ells,
                                     std::vector<int>(basis.A.ells.size(), 0));
        chart = chart_restrict(chart, K);
    }
    // the basis quadratics, taken through the same kernel restriction
    std::vector<Polynomial> qs;
    {
        std::vector<Polynomial> source = basis.A.Qs;
        if (!basis.A.ells.empty()) {
            AffineSubspace K = kernel_of(p, n1, basis.A.ells,
                                         std::vector<int>(basis.A.ells.size(), 0));
            std::vector<Polynomial> restricted;
            for (const Polynomial& Q : source) restricted.push_back(restrict_to(Q, K));
            source = std::move(restricted);
        }
        for (const Polynomial& Q : source)
            if (!Q.homogeneous_part(2).is_zero()) qs.push_back(Q.truncate_degree(2));
    }

    std::vector<Polynomial> forms;
    std::vector<int> designated;
    if (!qs.empty()) {
        RegularizedFamily reg = regularize(qs, 1);
        chart = chart_restrict(chart, reg.V);
        std::vector<Polynomial> kept = reg.kept_restrictions;
        bool disjoint_ok = kept.empty();
        for (int pass = 0; pass < 6 && !kept.empty(); ++pass) {
            DisjointFamily fam = disjointify(kept);
            chart = chart_transform(chart, fam.T);
            if (fam.V.codim() == 0) {
                forms = fam.forms;
                for (const auto& [a, b] : fam.designated) designated.push_back(a);
                disjoint_ok = true;
                break;
            }
            chart = chart_restrict(chart, fam.V);
            std::vector<Polynomial> next;
            for (const Polynomial& q : fam.forms) {
                Polynomial rq = restrict_to(q, fam.V);
                if (!rq.homogeneous_part(2).is_zero()) next.push_back(rq.truncate_degree(2));
            }
            kept = std::move(next);
        }
        if (!disjoint_ok)
            throw threshold_error("disjointification", "no stable disjoint family");
    }
    s.quadratics_kept = static_cast<int>(forms.size());
    Polynomial h = chart_push(chart, f);
    int n2 = chart.k();

    // eliminate designated square-square monomials by subtracting q_i q_j
    Polynomial fp = h;
    Matrix alpha(forms.size(), std::vector<int>(forms.size(), 0));
    for (size_t i = 0; i < forms.size(); ++i)
        for (size_t j = i; j < forms.size(); ++j) {
            Exponents mono(n2, 0);
            mono[designated[i]] += 2;
            mono[designated[j]] += 2;
            auto it = fp.terms.find(mono);
            if (it == fp.terms.end()) continue;
            int c = it->second;
            alpha[i][j] = c;
            fp = fp - (forms[i] * forms[j]).scaled(c);
        }
    for (size_t i = 0; i < forms.size(); ++i)
        for (size_t j = i; j < forms.size(); ++j) {
            Exponents mono(n2, 0);
            mono[designated[i]] += 2;
            mono[designated[j]] += 2;
            if (fp.terms.count(mono))
                throw threshold_error("monomial elimination",
                                      "monomial " + exps_to_string(mono) + " persists");
        }

    // extract cube cofactors of the designated variables
    std::vector<Polynomial> cube_cof(forms.size(), Polynomial::zero(p, n2));
    Polynomial fpp = fp;
    for (size_t i = 0; i < forms.size(); ++i) {
        int a = designated[i];
        Polynomial cof(p, n2);
        for (const auto& [e, c] : fp.terms) {
            if (e[a] != 3) continue;
            Exponents d = e;
            d[a] = 0;
            cof.add_term(d, c);
        }
        if (cof.degree() > 1)
            throw threshold_error("cube extraction",
                                  "cube cofactor of x" + std::to_string(a + 1) +
                                      " is not linear");
        cube_cof[i] = cof;
        Polynomial cube(p, n2);
        Exponents ce(n2, 0);
        ce[a] = 3;
        cube.add_term(ce, 1);
        fpp = fpp - cube * cof;
    }

    // leading coordinates: designated variables plus the cube cofactors
    Matrix mu;
    for (size_t i = 0; i < forms.size(); ++i) {
        std::vector<int> row(n2, 0);
        row[designated[i]] = 1;
        int before = mat_rank(mu, F);
        mu.push_back(row);
        if (mat_rank(mu, F) == before) mu.pop_back();
    }
    for (const Polynomial& cof : cube_cof) {
        std::vector<int> row(n2, 0);
        for (const auto& [e, c] : cof.terms) {
            if (total_degree(e) != 1) continue;
            for (int t = 0; t < n2; ++t)
                if (e[t] == 1) row[t] = c;
        }
        bool nz = false;
        for (int v : row) nz |= (v != 0);
        if (!nz) continue;
        int before = mat_rank(mu, F);
        mu.push_back(row);
        if (mat_rank(mu, F) == before) mu.pop_back();
    }
    int kmu = static_cast<int>(mu.size());
    Matrix S = kmu > 0 ? complete_rows_to_basis(p, n2, mu) : identity_matrix(n2);
    auto Sinv = mat_inverse(S, F);
    if (!Sinv) throw verification_error("highchar: singular leading basis");
    Polynomial gt = compose_affine(fpp, *Sinv, Point(n2, 0));
    std::vector<Polynomial> lead_cof(kmu, Polynomial::zero(p, n2));
    Polynomial g0t(p, n2);
    for (const auto& [e, c] : gt.terms) {
        if (total_degree(e) <= 3) {
            g0t.add_term(e, c);
            continue;
        }
        int lead = -1;
        for (int i = 0; i < kmu; ++i)
            if (e[i] > 0) { lead = i; break; }
        if (lead < 0)
            throw threshold_error("variable absorption",
                                  "degree-4 monomial " + exps_to_string(e) +
                                      " avoids the bookkeeping forms");
        Exponents d = e;
        d[lead] -= 1;
        lead_cof[lead].add_term(d, c);
    }

    // assemble ambient components
    std::vector<Polynomial> qa;
    for (const Polynomial& q : forms) qa.push_back(chart_pull(chart, q));
    for (size_t i = 0; i < forms.size(); ++i)
        for (size_t j = i; j < forms.size(); ++j)
            if (alpha[i][j] != 0) s.pairs.push_back({qa[i].scaled(alpha[i][j]), qa[j]});
    for (size_t i = 0; i < forms.size(); ++i) {
        if (cube_cof[i].is_zero()) continue;
        Polynomial xi = Polynomial::variable(p, n2, designated[i]);
        Polynomial g = xi * xi * cube_cof[i];  // x_a * (x_a^2 * cofactor)
        s.ells.push_back(LinearForm::from_polynomial(chart_pull(chart, xi)));
        s.gs.push_back(chart_pull(chart, g));
    }
    for (int i = 0; i < kmu; ++i) {
        if (lead_cof[i].is_zero()) continue;
        // y_i = row i of S in the original parameter coordinates
        Polynomial yform = Polynomial::zero(p, n2);
        for (int t = 0; t < n2; ++t)
            if (S[i][t] != 0)
                yform = yform + Polynomial::variable(p, n2, t).scaled(S[i][t]);
        Polynomial g = compose_affine(lead_cof[i], S, Point(n2, 0));
        s.ells.push_back(LinearForm::from_polynomial(chart_pull(chart, yform)));
        s.gs.push_back(chart_pull(chart, g));
    }
    s.g0 = chart_pull(chart, compose_affine(g0t, S, Point(n2, 0)));
    if (s.g0.degree() > 3)
        throw verification_error("highchar: remainder degree exceeds 3");
    finish_assembly(f, chart, s);
    return s;
}

// ---------------------------------------------------------------------------
// symmetric polynomial case study
// ---------------------------------------------------------------------------

Polynomial elementary_symmetric(int p, int n, int k) {
    // dp[j] = sum over j-subsets of the processed prefix
    std::vector<Polynomial> dp;
    for (int j = 0; j <= k; ++j) dp.push_back(Polynomial::zero(p, n));
    dp[0] = Polynomial::constant(p, n, 1);
    for (int i = 0; i < n; ++i) {
        Polynomial xi = Polynomial::variable(p, n, i);
        for (int j = std::min(k, i + 1); j >= 1; --j) dp[j] = dp[j] + dp[j - 1] * xi;
    }
    return dp[k];
}

S4Report s4_case_study(int m) {
    if (m < 1 || m > 3) throw structural_error("case study: m must be in [1, 3]");
    int p = 2, n = 4 * m;
    PrimeField F(p);
    S4Report rep;
    rep.m = m;
    rep.n = n;
    Polynomial S4 = elementary_symmetric(p, n, 4);
    Polynomial S2 = elementary_symmetric(p, n, 2);
    Polynomial S1 = elementary_symmetric(p, n, 1);

    // (1) every derivative decomposes over the degree-2 / degree-1 basis
    ModSet A;
    A.add_quadratic(S2);
    A.add_linear(LinearForm::from_polynomial(S1));
    ClassSystem sys = build_class_system(p, n, A);
    rep.basis_identity = true;
    for (long long i = 0; i < pow_ll(p, n); ++i) {
        Point y = decode_point(i, p, n);
        std::vector<int> v = cubic_vector(derivative(S4, y), sys);
        for (int x : reduce_against(sys, v, F))
            if (x != 0) rep.basis_identity = false;
    }

    // (2) the pairing decomposition of the degree-2 layer, term-exact
    std::vector<LinearForm> ells;
    for (int k = 1; k <= 2 * m; ++k) {
        LinearForm l(p, n);
        for (int i = 1; i <= 2 * k - 1; ++i) l.coefficients[i - 1] = 1;
        ells.push_back(l);
    }
    Polynomial rhs = Polynomial::zero(p, n);
    for (int k = 1; k <= 2 * m; ++k) {
        Polynomial partner = Polynomial::variable(p, n, 2 * k - 1);
        for (int i = 1; i <= 2 * k - 2; ++i)
            partner = partner + Polynomial::variable(p, n, i - 1);
        rhs = rhs + ells[k - 1].to_polynomial() * partner;
    }
    for (int i = 1; i <= m; ++i)
        rhs = rhs + Polynomial::variable(p, n, 4 * i - 4) +
              Polynomial::variable(p, n, 4 * i - 3);
    rep.s2_identity = (rhs == S2);

    // (3) the canonical cell: x = (0, y1, y1, y2, y2, ..., y_{2m-1}, y_{2m-1}, y_{2m})
    AffineSubspace V0 =
        kernel_of(p, n, ells, std::vector<int>(ells.size(), 0));
    Matrix param(2 * m, std::vector<int>(n, 0));
    for (int j = 1; j <= 2 * m - 1; ++j) {
        param[j - 1][2 * j - 1] = 1;
        param[j - 1][2 * j] = 1;
    }
    param[2 * m - 1][n - 1] = 1;
    AffineSubspace V0_explicit = AffineSubspace::from_span(p, n, param, Point(n, 0));
    bool same_space = (V0 == V0_explicit);
    Polynomial restr = restrict_to(S4, V0);
    Polynomial target = Polynomial::zero(p, 2 * m);
    for (int a = 1; a <= 2 * m - 1; ++a)
        for (int b = a + 1; b <= 2 * m - 1; ++b)
            target = target + Polynomial::variable(p, 2 * m, a - 1) *
                                  Polynomial::variable(p, 2 * m, b - 1);
    rep.v0_identity = same_space && (restr == target);

    // (4) all settings of the pairing forms drop the degree to two
    rep.coset_degrees = true;
    for (long long i = 0; i < pow_ll(p, 2 * m); ++i) {
        Point beta = decode_point(i, p, 2 * m);
        AffineSubspace cell =
            kernel_of(p, n, ells, std::vector<int>(beta.begin(), beta.end()));
        int d = restrict_to(S4, cell).degree();
        rep.coset_degree_list.push_back(d);
        if (d > 2) rep.coset_degrees = false;
    }

    if (!(rep.basis_identity && rep.s2_identity && rep.v0_identity && rep.coset_degrees))
        throw verification_error("case study: a structural identity failed");
    return rep;
}

}  // namespace polystruct
