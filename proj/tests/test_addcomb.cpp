// Unit tests for sumsets, the density-increment subspace extraction, and
// subadditive oracles.
#include "doctest.h"

#include <cmath>

#include "polystruct/addcomb.hpp"
#include "polystruct/analytic.hpp"
#include "polystruct/errors.hpp"
#include "polystruct/quadform.hpp"
#include "polystruct/rng.hpp"

using namespace polystruct;

TEST_CASE("sumset of a linear subspace is itself for every k") {
    // A = {x in F_2^4 : x1 = 0, x2 = 0}
    int p = 2, n = 4;
    DenseSet A = DenseSet::empty_set(p, n);
    for (long long i = 0; i < A.size(); ++i) {
        Point x = decode_point(i, p, n);
        if (x[0] == 0 && x[1] == 0) A.members[i] = 1;
    }
    for (int k : {1, 2, 3}) {
        DenseSet S = sumset(A, k);
        CHECK(S.members == A.members);
    }
}

TEST_CASE("difference set of an affine hyperplane is the parallel hyperplane") {
    int p = 2, n = 4;
    DenseSet A = DenseSet::empty_set(p, n);
    for (long long i = 0; i < A.size(); ++i)
        if (decode_point(i, p, n)[0] == 1) A.members[i] = 1;
    DenseSet D = sumset(A, 1);
    for (long long i = 0; i < D.size(); ++i)
        CHECK(D.contains_index(i) == (decode_point(i, p, n)[0] == 0));
}

TEST_CASE("sumset of a singleton is the origin") {
    for (int p : {2, 3}) {
        int n = 3;
        DenseSet A = DenseSet::from_indices(p, n, {encode_point({1, 2 % p, 0}, p)});
        for (int k : {1, 2}) {
            DenseSet S = sumset(A, k);
            CHECK(S.count() == 1);
            CHECK(S.contains_index(0));
        }
    }
}

TEST_CASE("sumset matches brute-force enumeration at odd p") {
    int p = 3, n = 3;
    SplitMix64 gen(77);
    DenseSet A = DenseSet::empty_set(p, n);
    for (long long i = 0; i < A.size(); ++i) A.members[i] = gen.below(3) == 0;
    if (A.count() == 0) A.members[0] = 1;
    DenseSet S = sumset(A, 2);
    // brute force over quadruples a1 + a2 - a3 - a4
    std::vector<char> expect(A.size(), 0);
    std::vector<Point> pts;
    for (long long i = 0; i < A.size(); ++i)
        if (A.members[i]) pts.push_back(decode_point(i, p, n));
    for (auto& a : pts)
        for (auto& b : pts)
            for (auto& c : pts)
                for (auto& d : pts) {
                    Point s(n);
                    for (int t = 0; t < n; ++t)
                        s[t] = ((a[t] + b[t] - c[t] - d[t]) % p + p) % p;
                    expect[encode_point(s, p)] = 1;
                }
    CHECK(S.members == expect);
}

TEST_CASE("full space gives k = 1, trivial chain, full W") {
    int p = 2, n = 5;
    DenseSet A = DenseSet::empty_set(p, n);
    for (auto& m : A.members) m = 1;
    BCCertificate c = bogolyubov_chang(A);
    CHECK(c.k == 1);
    CHECK(c.chain.empty());
    CHECK(c.W == AffineSubspace::full_space(p, n));
    CHECK(c.density_terminal);
}

TEST_CASE("affine hyperplane input yields a large subspace inside A - A") {
    int p = 2, n = 6;
    DenseSet A = DenseSet::empty_set(p, n);
    for (long long i = 0; i < A.size(); ++i)
        if (decode_point(i, p, n)[2] == 1) A.members[i] = 1;
    BCCertificate c = bogolyubov_chang(A);
    CHECK(c.W.codim() <= 1);
    DenseSet S = sumset(A, c.k);
    c.W.for_each_point(
        [&](const Point& w) { CHECK(S.contains_index(encode_point(w, p))); });
}

TEST_CASE("random dense set: certificate k within the stated bound") {
    int p = 2, n = 10;
    SplitMix64 gen(1234);
    DenseSet A = DenseSet::empty_set(p, n);
    long long target = static_cast<long long>(0.3 * static_cast<double>(A.size()));
    while (A.count() < target) A.members[gen.below(A.size())] = 1;
    double mu0 = A.density();
    BCCertificate c = bogolyubov_chang(A);  // membership verified internally
    double kb = std::ceil(0.5 * (std::log(2.0 / mu0) / std::log(2.0 / 1.5) + 2.0));
    CHECK(c.k <= std::max(1, static_cast<int>(kb)));
    CHECK(c.W.codim() <= c.codim_bound + 1e-9);
    // density strictly increases by the increment factor along the chain
    for (const BCStep& s : c.chain) {
        double before = static_cast<double>(s.count_before) /
                        static_cast<double>(pow_ll(p, s.dim_after + 1));
        double after = static_cast<double>(s.count_after) /
                       static_cast<double>(pow_ll(p, s.dim_after));
        CHECK(after >= (2.0 * p - 1.0) / (2.0 * p - 2.0) * before - 1e-12);
    }
}

TEST_CASE("odd-characteristic certificate also verifies") {
    int p = 3, n = 5;
    SplitMix64 gen(99);
    DenseSet A = DenseSet::empty_set(p, n);
    long long target = A.size() / 4;
    while (A.count() < target) A.members[gen.below(A.size())] = 1;
    BCCertificate c = bogolyubov_chang(A);
    DenseSet S = sumset(A, c.k);
    c.W.for_each_point(
        [&](const Point& w) { CHECK(S.contains_index(encode_point(w, p))); });
}

TEST_CASE("constant-zero oracle gives the full space with bound 0") {
    auto oracle = [](const Point&) { return 0.0; };
    SubadditiveResult res = subadditive_subspace(oracle, 2, 5, 0.0, 0.9);
    CHECK(res.V == AffineSubspace::full_space(2, 5));
    CHECK(res.bound == 0.0);
}

TEST_CASE("derivative-rank oracle of a cubic is subadditive and certified") {
    // f = x1 x2 x3: rank2 of the derivative in direction y is a subadditive
    // function of y
    int p = 2, n = 5;
    Polynomial f = reduce_raw(p, n, {{{1, 1, 1, 0, 0}, 1}});
    auto oracle = [&](const Point& y) {
        Polynomial d = derivative(f, y);
        return static_cast<double>(rank2(d.truncate_degree(2)));
    };
    CHECK(check_subadditive(oracle, p, n, 200, 5150));
    SubadditiveResult res = subadditive_subspace(oracle, p, n, 1.0, 0.2);
    CHECK(res.V.dim() >= 1);
    res.V.for_each_point([&](const Point& y) { CHECK(oracle(y) <= res.bound); });
}

TEST_CASE("subadditivity harness rejects a non-subadditive oracle") {
    // indicator-style oracle that is tiny at 0 and huge elsewhere except on
    // two points whose sum breaks the inequality
    int p = 2, n = 3;
    auto oracle = [](const Point& y) {
        int w = 0;
        for (int v : y) w += v;
        return (w <= 1) ? 0.0 : 100.0;
    };
    CHECK(!check_subadditive(oracle, p, n, 500, 7));
}

TEST_CASE("density below the hint raises the threshold diagnostic") {
    auto oracle = [](const Point& y) { return y[0] == 0 ? 0.0 : 10.0; };
    CHECK_THROWS_AS(subadditive_subspace(oracle, 2, 4, 0.5, 0.9), threshold_error);
}
