// Unit tests for the degree-4 machinery: class calculus, derivative bases,
// the degree-dropping partition, both structure pipelines, and the symmetric
// polynomial case study.
#include "doctest.h"

#include "polystruct/analytic.hpp"
#include "polystruct/errors.hpp"
#include "polystruct/quartic.hpp"
#include "polystruct/rng.hpp"

using namespace polystruct;

namespace {

Polynomial var(int p, int n, int i) { return Polynomial::variable(p, n, i); }

}  // namespace

TEST_CASE("class_reduce with an empty basis keeps the cubic part") {
    SplitMix64 gen(211);
    Polynomial f = random_polynomial(2, 5, 3, gen.next());
    ModSet A;
    ClassReduction red = class_reduce(f, A);
    CHECK(red.residue == f.homogeneous_part(3));
    CHECK(red.in_zero_class == f.homogeneous_part(3).is_zero());
}

TEST_CASE("class_reduce detects membership over a planted basis") {
    int p = 2, n = 6;
    // f3 = x3 * Q + l * x4x5 with Q = x1x2 + x5x6 and l = x1
    Polynomial Q = var(p, n, 0) * var(p, n, 1) + var(p, n, 4) * var(p, n, 5);
    LinearForm l(p, n);
    l.coefficients[0] = 1;
    Polynomial f = var(p, n, 2) * Q + l.to_polynomial() * var(p, n, 3) * var(p, n, 4);
    ModSet A;
    CHECK(A.add_quadratic(Q));
    CHECK(A.add_linear(l));
    ClassReduction red = class_reduce(f, A);
    CHECK(red.in_zero_class);
    // the witness reconstructs the eliminated cubic part exactly
    Polynomial acc = Polynomial::zero(p, n);
    for (int i = 0; i < A.t1(); ++i)
        acc = acc + red.ell_primed[i].to_polynomial() * A.Qs[i];
    for (int i = 0; i < A.t2(); ++i)
        acc = acc + A.ells[i].to_polynomial() * red.Q_primed[i];
    CHECK(acc.homogeneous_part(3) == f.homogeneous_part(3));
}

TEST_CASE("class_reduce witness is exact on random instances") {
    for (int p : {2, 3}) {
        SplitMix64 gen(221 + p);
        int n = 5;
        ModSet A;
        A.add_quadratic(random_polynomial(p, n, 2, gen.next()));
        LinearForm l(p, n);
        l.coefficients[1] = 1;
        A.add_linear(l);
        for (int trial = 0; trial < 6; ++trial) {
            Polynomial f = random_polynomial(p, n, 3, gen.next());
            ClassReduction red = class_reduce(f, A);
            Polynomial acc = red.residue;
            for (int i = 0; i < A.t1(); ++i)
                acc = acc + red.ell_primed[i].to_polynomial() * A.Qs[i];
            for (int i = 0; i < A.t2(); ++i)
                acc = acc + A.ells[i].to_polynomial() * red.Q_primed[i];
            CHECK(acc.homogeneous_part(3) == f.homogeneous_part(3));
        }
    }
}

TEST_CASE("modset rejects dependent members") {
    int p = 2, n = 4;
    ModSet A;
    Polynomial Q = var(p, n, 0) * var(p, n, 1);
    CHECK(A.add_quadratic(Q));
    CHECK(!A.add_quadratic(Q + Polynomial::constant(p, n, 1)));
    LinearForm l(p, n);
    l.coefficients[2] = 1;
    CHECK(A.add_linear(l));
    CHECK(!A.add_linear(l));
    CHECK(A.t1() == 1);
    CHECK(A.t2() == 1);
}

TEST_CASE("rank3c of a class member is zero and exact") {
    int p = 2, n = 5;
    Polynomial Q = var(p, n, 0) * var(p, n, 1) + var(p, n, 2) * var(p, n, 3);
    ModSet A;
    A.add_quadratic(Q);
    Polynomial f = var(p, n, 4) * Q;
    Rank3cCertificate c = rank3c_upper(f, A, 4);
    CHECK(c.r == 0);
    CHECK(c.c == 0);
    CHECK(c.exactness == Rank3cCertificate::Exactness::exact);
    CHECK(c.representative.is_zero());
}

TEST_CASE("rank3c splits a triple product within budget") {
    int p = 2, n = 4;
    Polynomial f = var(p, n, 0) * var(p, n, 1) * var(p, n, 2);
    ModSet A;
    Rank3cCertificate c = rank3c_upper(f, A, 1);
    CHECK(c.r == 0);
    CHECK(c.c == 1);
    CHECK(rank3c_reconstruct(c) == c.representative);
}

TEST_CASE("rank3c keeps a full-rank cofactor and splits the small one") {
    int p = 2, n = 6;
    // x1 * (x3x4 + x5x6 + x2x3) stays a pair; x2 * x3x4 splits into a triple
    Polynomial Q = var(p, n, 2) * var(p, n, 3) + var(p, n, 4) * var(p, n, 5) +
                   var(p, n, 1) * var(p, n, 2);
    Polynomial f = var(p, n, 0) * Q + var(p, n, 1) * var(p, n, 2) * var(p, n, 3);
    ModSet A;
    Rank3cCertificate c = rank3c_upper(f, A, 2);
    CHECK(c.r + c.c <= 2);
    CHECK(rank3c_reconstruct(c) == c.representative);
    CHECK(c.Q0.degree() <= 2);
}

TEST_CASE("rank3c never increases when the basis grows") {
    for (int p : {2, 3}) {
        SplitMix64 gen(231 + p);
        int n = 5;
        for (int trial = 0; trial < 6; ++trial) {
            Polynomial f = random_polynomial(p, n, 3, gen.next());
            ModSet empty;
            Rank3cCertificate base = rank3c_upper(f, empty, 3);
            ModSet A;
            A.add_quadratic(random_polynomial(p, n, 2, gen.next()));
            LinearForm l(p, n);
            l.coefficients[0] = 1;
            A.add_linear(l);
            Rank3cCertificate wide = rank3c_upper(f, A, 3);
            CHECK(wide.r <= base.r);
        }
    }
}

TEST_CASE("derivative basis covers a one-variable cofactor quartic") {
    int p = 2, n = 6;
    SplitMix64 gen(241);
    // f = x1 * g(x2..x6), g cubic: every derivative decomposes over x1 and one quadratic
    Polynomial g = Polynomial::zero(p, n);
    for (const auto& [e, c] : random_polynomial(p, n, 3, gen.next()).terms)
        if (e[0] == 0) g.add_term(e, c);
    Polynomial f = var(p, n, 0) * g;
    if (f.degree() == 4) {
        DerivativeBasis basis = derivative_basis(f);
        CHECK(basis.A.t1() <= 3);
        CHECK(!basis.sampled);
        // direction decomposition reconstructs the derivative exactly
        SplitMix64 dir(242);
        for (int trial = 0; trial < 5; ++trial) {
            Point y(basis.f_V.n);
            for (int& v : y) v = dir.field_element(p);
            DirectionDecomposition dec = decompose_direction(basis, y);
            Polynomial acc = dec.Q0_y;
            for (int i = 0; i < basis.A.t1(); ++i)
                acc = acc + dec.ell_y[i].to_polynomial() * basis.A.Qs[i];
            for (int i = 0; i < basis.A.t2(); ++i)
                acc = acc + basis.A.ells[i].to_polynomial() * dec.Q_y[i];
            CHECK(acc == derivative(basis.f_V, y));
        }
    }
}

TEST_CASE("derivative basis on the symmetric quartic is small") {
    Polynomial S4 = elementary_symmetric(2, 8, 4);
    DerivativeBasis basis = derivative_basis(S4);
    CHECK(basis.A.t1() <= 2);
    CHECK(basis.A.t2() + basis.V.codim() < 8);
    CHECK(basis.f_V.degree() == 4);
}

TEST_CASE("derivative basis reports a diagnostic on generic quartics") {
    SplitMix64 gen(251);
    int diagnosed = 0;
    for (int trial = 0; trial < 6 && !diagnosed; ++trial) {
        Polynomial f = random_polynomial(2, 8, 4, gen.next());
        if (f.degree() != 4) continue;
        try {
            derivative_basis(f);
        } catch (const threshold_error&) {
            diagnosed = 1;
        }
    }
    CHECK(diagnosed == 1);
}

TEST_CASE("partition of a cubic is the trivial one-cell partition") {
    SplitMix64 gen(261);
    Polynomial f = random_polynomial(2, 5, 3, gen.next());
    QuarticPartition part = partition_degree_drop(f);
    CHECK(part.cells.size() == 1);
    CHECK(part.cells[0].degree <= 3);
    CHECK(part.V.dim() == 5);
}

TEST_CASE("partition drops the symmetric quartic on every cell") {
    Polynomial S4 = elementary_symmetric(2, 8, 4);
    QuarticPartition part = partition_degree_drop(S4);
    CHECK(!part.cells.empty());
    for (const CellCertificate& cell : part.cells) {
        CHECK(cell.degree <= 3);
        CHECK(cell.restriction.degree() <= 3);
    }
}

TEST_CASE("partition drops a planted product of quadratics") {
    int p = 2, n = 8;
    Polynomial Q1 = var(p, n, 0) * var(p, n, 1) + var(p, n, 2) * var(p, n, 3);
    Polynomial Q2 = var(p, n, 4) * var(p, n, 5) + var(p, n, 6) * var(p, n, 7);
    Polynomial f = Q1 * Q2;
    QuarticPartition part = partition_degree_drop(f);
    CHECK(!part.cells.empty());
    for (const CellCertificate& cell : part.cells) CHECK(cell.degree <= 3);
}

TEST_CASE("bias structure of a low-degree input is trivial") {
    SplitMix64 gen(271);
    Polynomial f = random_polynomial(2, 6, 3, gen.next());
    QuarticStructure s = quartic_bias_structure(f);
    CHECK(s.pairs.empty());
    CHECK(quartic_reconstruct(s) == f);
}

TEST_CASE("bias structure recovers a product of two quadratics") {
    int p = 2, n = 8;
    Polynomial Q1 = var(p, n, 0) * var(p, n, 1) + var(p, n, 2) * var(p, n, 3);
    Polynomial Q2 = var(p, n, 4) * var(p, n, 5) + var(p, n, 6) * var(p, n, 7);
    Polynomial f = Q1 * Q2;
    QuarticStructure s = quartic_bias_structure(f);
    CHECK(quartic_reconstruct(s) == f);
    CHECK(s.delta > 0.0);
}

TEST_CASE("bias structure recovers planted linear-times-cubic shapes") {
    int p = 2, n = 8;
    SplitMix64 gen(281);
    int done = 0;
    while (done < 3) {
        // l1 * c1 + q1 * q2 with low-complexity pieces keeps the bias visible
        Polynomial q1 = var(p, n, 2 + gen.below(3)) * var(p, n, 5 + gen.below(3));
        Polynomial q2 = var(p, n, 2 + gen.below(3)) * var(p, n, 5 + gen.below(3));
        Polynomial c1 = var(p, n, 1 + gen.below(4)) * q1;
        Polynomial f = var(p, n, 0) * c1 + q1 * q2;
        if (f.degree() != 4) continue;
        if (bias_exact(f).value < 0.15) continue;
        QuarticStructure s = quartic_bias_structure(f);
        CHECK(quartic_reconstruct(s) == f);
        ++done;
    }
}

TEST_CASE("highchar structure of a product of quadratics over F5") {
    int p = 5, n = 6;
    Polynomial Q1 = var(p, n, 0) * var(p, n, 0) + var(p, n, 2) * var(p, n, 3);
    Polynomial Q2 = var(p, n, 1) * var(p, n, 1) + var(p, n, 4) * var(p, n, 5);
    Polynomial f = Q1 * Q2;
    QuarticStructure s = quartic_highchar_structure(f);
    CHECK(quartic_reconstruct(s) == f);
    CHECK(s.variant == QuarticStructure::Variant::highchar_form);
}

TEST_CASE("highchar structure of a cube-times-linear quartic") {
    int p = 5, n = 4;
    Polynomial f = var(p, n, 0) * var(p, n, 0) * var(p, n, 0) * var(p, n, 1);
    QuarticStructure s = quartic_highchar_structure(f);
    CHECK(quartic_reconstruct(s) == f);
}

TEST_CASE("highchar structure of a low-degree input is trivial") {
    SplitMix64 gen(291);
    Polynomial f = random_polynomial(5, 4, 3, gen.next());
    QuarticStructure s = quartic_highchar_structure(f);
    CHECK(quartic_reconstruct(s) == f);
    CHECK(s.pairs.empty());
}

TEST_CASE("highchar structure rejects small characteristic") {
    Polynomial f = random_polynomial(2, 4, 4, 7);
    CHECK_THROWS_AS(quartic_highchar_structure(f), structural_error);
}

TEST_CASE("elementary symmetric polynomials have the right term count") {
    Polynomial e2 = elementary_symmetric(2, 4, 2);
    CHECK(static_cast<int>(e2.terms.size()) == 6);
    Polynomial e4 = elementary_symmetric(2, 8, 4);
    CHECK(static_cast<int>(e4.terms.size()) == 70);
    CHECK(e4.degree() == 4);
    // evaluation sanity: e2(1,1,0,0) = 1, e2(1,1,1,0) = 3 mod 2 = 1
    CHECK(e2.evaluate({1, 1, 0, 0}) == 1);
    CHECK(e2.evaluate({1, 1, 1, 0}) == 1);
}

TEST_CASE("symmetric case study verifies all identities at m = 1") {
    S4Report rep = s4_case_study(1);
    CHECK(rep.basis_identity);
    CHECK(rep.s2_identity);
    CHECK(rep.v0_identity);
    CHECK(rep.coset_degrees);
    CHECK(static_cast<int>(rep.coset_degree_list.size()) == 4);
}

TEST_CASE("symmetric case study verifies all identities at m = 2") {
    S4Report rep = s4_case_study(2);
    CHECK(rep.basis_identity);
    CHECK(rep.s2_identity);
    CHECK(rep.v0_identity);
    CHECK(rep.coset_degrees);
    CHECK(static_cast<int>(rep.coset_degree_list.size()) == 16);
    for (int d : rep.coset_degree_list) CHECK(d <= 2);
}
