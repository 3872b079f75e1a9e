#include "polystruct/addcomb.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "polystruct/errors.hpp"
#include "polystruct/rng.hpp"

namespace polystruct {

DenseSet DenseSet::empty_set(int p, int n) {
    PrimeField check(p);
    (void)check;
    long long N = pow_ll(p, n);
    if (N > (1LL << 14)) throw resource_error("DenseSet: p^n > 2^14");
    return DenseSet{p, n, std::vector<char>(N, 0)};
}

DenseSet DenseSet::from_indices(int p, int n, const std::vector<long long>& idx) {
    DenseSet s = empty_set(p, n);
    for (long long i : idx) {
        if (i < 0 || i >= s.size()) throw structural_error("DenseSet: index out of range");
        s.members[i] = 1;
    }
    return s;
}

long long DenseSet::count() const {
    long long c = 0;
    for (char m : members) c += (m != 0);
    return c;
}

double DenseSet::density() const {
    return static_cast<double>(count()) / static_cast<double>(size());
}

namespace {

// support of the group convolution of two supports under componentwise
// addition (signs +1/-1 select sum vs difference for the second operand)
std::vector<char> conv_support(int p, int n, const std::vector<char>& a,
                               const std::vector<char>& b, int sign_b) {
    long long N = pow_ll(p, n);
    std::vector<char> out(N, 0);
    std::vector<long long> sa, sb;
    for (long long i = 0; i < N; ++i) {
        if (a[i]) sa.push_back(i);
        if (b[i]) sb.push_back(i);
    }
    for (long long x : sa) {
        Point px = decode_point(x, p, n);
        for (long long y : sb) {
            if (p == 2) {
                out[x ^ y] = 1;
                continue;
            }
            Point py = decode_point(y, p, n);
            Point s(n);
            for (int i = 0; i < n; ++i)
                s[i] = ((px[i] + sign_b * py[i]) % p + p) % p;
            out[encode_point(s, p)] = 1;
        }
    }
    return out;
}

}  // namespace

DenseSet sumset(const DenseSet& A, int k) {
    if (k < 1) throw structural_error("sumset: k >= 1 required");
    std::vector<char> plus = A.members;
    for (int i = 1; i < k; ++i) plus = conv_support(A.p, A.n, plus, A.members, +1);
    DenseSet out{A.p, A.n, conv_support(A.p, A.n, plus, plus, -1)};
    return out;
}

namespace {

// residue-count transform: for every alpha in F_p^n and residue j, the number
// of members x with <alpha, x> = j, computed with exact integer axis passes
std::vector<std::vector<long long>> residue_counts(int p, int n,
                                                   const std::vector<char>& B) {
    long long N = pow_ll(p, n);
    std::vector<std::vector<long long>> T(N, std::vector<long long>(p, 0));
    for (long long x = 0; x < N; ++x) T[x][0] = B[x] ? 1 : 0;
    long long stride = 1;
    for (int axis = 0; axis < n; ++axis) {
        for (long long base = 0; base < N; base += stride * p) {
            for (long long off = 0; off < stride; ++off) {
                std::vector<std::vector<long long>> slot(
                    p, std::vector<long long>(p, 0));
                for (int a = 0; a < p; ++a)
                    for (int d = 0; d < p; ++d) {
                        const auto& src = T[base + off + d * stride];
                        for (int j = 0; j < p; ++j)
                            slot[a][(j + a * d) % p] += src[j];
                    }
                for (int a = 0; a < p; ++a) T[base + off + a * stride] = slot[a];
            }
        }
        stride *= p;
    }
    return T;
}

// |sum_j c_j w^j| with w = e^{2 pi i/p}, from exact integer counts
double residue_magnitude(const std::vector<long long>& c, int p) {
    if (p == 2) return std::abs(static_cast<double>(c[0] - c[1]));
    std::complex<double> acc(0.0, 0.0);
    for (int j = 0; j < p; ++j)
        acc += static_cast<double>(c[j]) *
               std::polar(1.0, 2.0 * M_PI * j / static_cast<double>(p));
    return std::abs(acc);
}

}  // namespace

BCCertificate bogolyubov_chang(const DenseSet& A) {
    int p = A.p, n = A.n;
    long long cnt0 = A.count();
    if (cnt0 == 0) throw structural_error("bogolyubov_chang: empty set");

    BCCertificate cert;
    cert.mu0 = A.density();
    cert.codim_bound =
        std::log(1.0 / (2.0 * cert.mu0)) /
        std::log((p - 0.5) / (p - 1.0));

    AffineSubspace V = AffineSubspace::full_space(p, n);
    std::vector<char> B = A.members;  // indicator in V's parameter space
    int dim = n;
    long long cnt = cnt0;

    while (true) {
        long long N = pow_ll(p, dim);
        if (2 * cnt > N) {
            cert.density_terminal = true;
            cert.k = 1;
            break;
        }
        auto T = residue_counts(p, dim, B);
        // threshold: |hat B(alpha)| >= ((p - 1/2)/p) * mu, i.e.
        // 2p * |sum_j c_j w^j| >= (2p - 1) * cnt; exact at p = 2
        long long best_alpha = -1;
        int best_value = 0;
        long long best_count = -1;
        for (long long a = 1; a < N; ++a) {
            bool large;
            if (p == 2) {
                large = 2 * p * std::llabs(T[a][0] - T[a][1]) >= (2 * p - 1) * cnt;
            } else {
                large = 2 * p * residue_magnitude(T[a], p) >=
                        (2 * p - 1) * static_cast<double>(cnt) - 1e-9;
            }
            if (!large) continue;
            for (int j = 0; j < p; ++j)
                if (T[a][j] > best_count) {
                    best_count = T[a][j];
                    best_alpha = a;
                    best_value = j;
                }
        }
        if (best_alpha < 0) {
            // flat spectrum: terminal k from the final density
            double mu = static_cast<double>(cnt) / static_cast<double>(N);
            double L = std::log(2.0 / mu) /
                       std::log(static_cast<double>(2 * p) /
                                static_cast<double>(2 * p - 1));
            cert.k = std::max(1, static_cast<int>(std::ceil(0.5 * (L + 2.0))));
            break;
        }
        // restrict to the chosen coset
        LinearForm alpha_form(p, decode_point(best_alpha, p, dim), 0);
        AffineSubspace Wp = kernel_of(p, dim, {alpha_form}, {best_value});
        if (Wp.empty || Wp.dim() != dim - 1)
            throw verification_error("bogolyubov_chang: bad hyperplane restriction");
        // density must grow by the increment factor (2p-1)/(2p-2); exact
        // cross-multiplied integer comparison with |coset| = N / p
        if (best_count * (2 * p - 2) * N < (2 * p - 1) * cnt * (N / p))
            throw verification_error("bogolyubov_chang: density increment failed");

        BCStep step;
        step.alpha = pullback_form(V, alpha_form);
        step.value = best_value;
        step.count_before = cnt;
        step.count_after = best_count;
        step.dim_after = dim - 1;

        std::vector<char> newB(pow_ll(p, dim - 1), 0);
        for (long long t = 0; t < pow_ll(p, dim - 1); ++t) {
            Point params = decode_point(t, p, dim - 1);
            Point old = Wp.point_at(params);
            newB[t] = B[encode_point(old, p)];
        }
        V = compose_subspace(V, Wp);
        B = std::move(newB);
        dim -= 1;
        cnt = best_count;
        cert.chain.push_back(std::move(step));
    }

    cert.mu_final = static_cast<double>(cnt) / static_cast<double>(pow_ll(p, dim));
    cert.W = direction_set(V);

    // independent containment check: every w in W lies in kA - kA
    DenseSet S = sumset(A, cert.k);
    bool ok = true;
    cert.W.for_each_point([&](const Point& w) {
        if (!S.contains_index(encode_point(w, p))) ok = false;
    });
    if (!ok) throw verification_error("bogolyubov_chang: W not contained in kA - kA");
    return cert;
}

SubadditiveResult subadditive_subspace(const RealOracle& oracle, int p, int n,
                                       double r, double mu_hint) {
    DenseSet A = DenseSet::empty_set(p, n);
    long long N = A.size();
    for (long long i = 0; i < N; ++i) {
        Point y = decode_point(i, p, n);
        if (oracle(y) <= r + 1e-12) A.members[i] = 1;
    }
    long long cnt = A.count();
    if (static_cast<double>(cnt) < mu_hint * static_cast<double>(N))
        throw threshold_error("subadditive_subspace",
                              "sublevel set density below the provided hint");

    SubadditiveResult out;
    out.cert = bogolyubov_chang(A);
    out.V = out.cert.W;
    out.bound = 2.0 * out.cert.k * r;
    bool ok = true;
    out.V.for_each_point([&](const Point& y) {
        if (oracle(y) > out.bound + 1e-9) ok = false;
    });
    if (!ok)
        throw verification_error("subadditive_subspace: bound violated on V");
    return out;
}

bool check_subadditive(const RealOracle& oracle, int p, int n, int trials,
                       std::uint64_t seed, std::vector<Point>* witness) {
    SplitMix64 gen(seed);
    for (int t = 0; t < trials; ++t) {
        Point u(n), v(n);
        for (int i = 0; i < n; ++i) {
            u[i] = gen.field_element(p);
            v[i] = gen.field_element(p);
        }
        int a = gen.field_element(p);
        Point w(n);
        for (int i = 0; i < n; ++i) w[i] = (a * u[i] + v[i]) % p;
        if (oracle(w) > oracle(u) + oracle(v) + 1e-9) {
            if (witness) *witness = {u, v, Point{a}};
            return false;
        }
    }
    return true;
}

}  // namespace polystruct
