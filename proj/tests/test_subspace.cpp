// Unit tests for affine subspaces, restriction, and coset partitions.
#include "doctest.h"

#include <set>

#include "polystruct/errors.hpp"
#include "polystruct/rng.hpp"
#include "polystruct/subspace.hpp"

using namespace polystruct;

static LinearForm form(int p, std::vector<int> coeffs, int c = 0) {
    return LinearForm(p, std::move(coeffs), c);
}

TEST_CASE("kernel_of basic cases") {
    AffineSubspace V = kernel_of(2, 3, {form(2, {1, 0, 0})}, {0});
    CHECK(V.dim() == 2);
    CHECK(V.is_linear());

    AffineSubspace E = kernel_of(2, 3, {form(2, {1, 0, 0}), form(2, {1, 0, 0})}, {0, 1});
    CHECK(E.empty);

    // {x1+x2 = 1, x2+x3 = 0} over F_2^3: dim 1 coset, verified by enumeration
    AffineSubspace C =
        kernel_of(2, 3, {form(2, {1, 1, 0}), form(2, {0, 1, 1})}, {1, 0});
    CHECK(C.dim() == 1);
    int members = 0;
    for (long long i = 0; i < 8; ++i) {
        Point x = decode_point(i, 2, 3);
        bool in = ((x[0] + x[1]) % 2 == 1) && ((x[1] + x[2]) % 2 == 0);
        CHECK(C.contains(x) == in);
        members += in;
    }
    CHECK(members == 2);
}

TEST_CASE("canonicalization: same point set, same structure") {
    SplitMix64 gen(11);
    for (int trial = 0; trial < 30; ++trial) {
        int p = (trial % 2) ? 2 : 3;
        int n = 5;
        PrimeField F(p);
        Matrix gens(2, std::vector<int>(n));
        for (auto& row : gens)
            for (int& v : row) v = static_cast<int>(gen.below(p));
        Point off(n);
        for (int& v : off) v = static_cast<int>(gen.below(p));
        AffineSubspace A = AffineSubspace::from_span(p, n, gens, off);

        // new generators: random invertible recombination + offset shifted by
        // a random element of the span
        Matrix gens2 = gens;
        for (int i = 0; i < n; ++i)
            gens2[0][i] = F.add(gens2[0][i], gens2[1][i]);
        Point off2 = off;
        for (int i = 0; i < n; ++i) off2[i] = F.add(off2[i], gens[1][i]);
        AffineSubspace B = AffineSubspace::from_span(p, n, gens2, off2);
        CHECK(A == B);
    }
}

TEST_CASE("restrict_to agrees with f on V and drops degree") {
    SplitMix64 gen(23);
    for (int trial = 0; trial < 15; ++trial) {
        int p = (trial % 2) ? 2 : 3;
        int n = 4;
        Polynomial f = random_polynomial(p, n, 3, gen.next());
        Matrix gens(2, std::vector<int>(n));
        for (auto& row : gens)
            for (int& v : row) v = static_cast<int>(gen.below(p));
        Point off(n);
        for (int& v : off) v = static_cast<int>(gen.below(p));
        AffineSubspace V = AffineSubspace::from_span(p, n, gens, off);
        Polynomial r = restrict_to(f, V);
        CHECK(r.degree() <= std::max(f.degree(), 0));
        // pointwise agreement over the parametrization
        long long cnt = pow_ll(p, V.dim());
        for (long long i = 0; i < cnt; ++i) {
            Point t = decode_point(i, p, V.dim());
            CHECK(r.evaluate(t) == f.evaluate(V.point_at(t)));
        }
    }
}

TEST_CASE("restrict_to simple cases") {
    Polynomial f = reduce_raw(2, 3, {{{1, 1, 1}, 1}});
    AffineSubspace V = kernel_of(2, 3, {form(2, {1, 0, 0})}, {0});
    CHECK(restrict_to(f, V).is_zero());
    AffineSubspace full = AffineSubspace::full_space(2, 3);
    CHECK(restrict_to(f, full) == f);
    CHECK_THROWS_AS(restrict_to(f, AffineSubspace::empty_space(2, 3)), structural_error);
}

TEST_CASE("coset_partition covers and is disjoint") {
    AffineSubspace full = AffineSubspace::full_space(2, 4);
    SubspacePartition part =
        coset_partition(full, {form(2, {1, 1, 0, 0}), form(2, {0, 0, 1, 0})});
    CHECK(part.cells.size() == 4);
    for (const auto& c : part.cells) CHECK(c.dim() == 2);
    // exhaustive classification: each point in exactly one cell
    for (long long i = 0; i < 16; ++i) {
        Point x = decode_point(i, 2, 4);
        int hits = 0;
        for (const auto& c : part.cells) hits += c.contains(x);
        CHECK(hits == 1);
    }

    SubspacePartition single = coset_partition(AffineSubspace::full_space(2, 3),
                                               {form(2, {1, 0, 0})});
    CHECK(single.cells.size() == 2);
    CHECK(single.cells[0].dim() == 2);
}

TEST_CASE("direction_set") {
    AffineSubspace lin = kernel_of(2, 4, {form(2, {1, 0, 0, 0})}, {0});
    CHECK(direction_set(lin) == lin);
    AffineSubspace cos = kernel_of(2, 4, {form(2, {1, 0, 0, 0})}, {1});
    CHECK(direction_set(cos) == lin);

    // random coset: direction set = pairwise differences, exhaustive n=4
    SplitMix64 gen(5);
    Matrix gens(2, std::vector<int>(4));
    for (auto& row : gens)
        for (int& v : row) v = static_cast<int>(gen.below(3));
    Point off = {1, 2, 0, 1};
    AffineSubspace V = AffineSubspace::from_span(3, 4, gens, off);
    AffineSubspace D = direction_set(V);
    std::set<long long> diffs;
    PrimeField F(3);
    V.for_each_point([&](const Point& a) {
        V.for_each_point([&](const Point& b) {
            Point d(4);
            for (int i = 0; i < 4; ++i) d[i] = F.sub(a[i], b[i]);
            diffs.insert(encode_point(d, 3));
        });
    });
    CHECK(static_cast<long long>(diffs.size()) == D.point_count());
    for (long long idx : diffs) CHECK(D.contains(decode_point(idx, 3, 4)));
}

TEST_CASE("pullback_form matches parameter form on V") {
    AffineSubspace V = kernel_of(2, 5, {form(2, {1, 1, 0, 0, 0})}, {1});
    LinearForm lp(2, {1, 0, 1, 0}, 1);
    LinearForm amb = pullback_form(V, lp);
    long long cnt = pow_ll(2, V.dim());
    for (long long i = 0; i < cnt; ++i) {
        Point t = decode_point(i, 2, V.dim());
        CHECK(lp.evaluate(t) == amb.evaluate(V.point_at(t)));
    }
}

TEST_CASE("compose_subspace maps parameter subspaces into ambient space") {
    AffineSubspace V = kernel_of(3, 4, {form(3, {1, 2, 0, 1})}, {2});
    AffineSubspace Wp = kernel_of(3, V.dim(), {form(3, {1, 0, 0})}, {1});
    AffineSubspace W = compose_subspace(V, Wp);
    CHECK(W.dim() == Wp.dim());
    // W's points are exactly {V.point_at(t) : t in Wp}
    std::set<long long> expect;
    Wp.for_each_point([&](const Point& t) { expect.insert(encode_point(V.point_at(t), 3)); });
    std::set<long long> got;
    W.for_each_point([&](const Point& x) { got.insert(encode_point(x, 3)); });
    CHECK(expect == got);
}
