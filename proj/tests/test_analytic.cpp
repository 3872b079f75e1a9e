// Unit tests for bias, Gowers norms, Fourier, and distribution distance.
#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>

#include "polystruct/analytic.hpp"
#include "polystruct/errors.hpp"
#include "polystruct/rng.hpp"

using namespace polystruct;

namespace {

// Brute-force |E w^{D_{y_d}..D_{y_1} f}|^{1/2^d} by literal iteration over
// all direction tuples, as an independent oracle for the library paths.
double gowers_oracle(const Polynomial& f, int d) {
    int p = f.p, n = f.n;
    long long size = pow_ll(p, n);
    long long tuples = 1;
    for (int i = 0; i < d; ++i) tuples *= size;
    std::complex<double> sum = 0.0;
    for (long long t = 0; t < tuples; ++t) {
        long long rest = t;
        std::vector<Point> ys(d);
        for (int k = 0; k < d; ++k) {
            ys[k] = decode_point(rest % size, p, n);
            rest /= size;
        }
        Polynomial g = iterated_derivative(f, ys);
        sum += mean_character(g) ;
    }
    double mean = std::abs(sum / static_cast<double>(tuples));
    return std::pow(mean, 1.0 / (1 << d));
}

}  // namespace

TEST_CASE("derivative basics") {
    Polynomial f = reduce_raw(2, 3, {{{1, 1, 1}, 1}});
    Polynomial d1 = derivative(f, {1, 0, 0});
    CHECK(d1 == reduce_raw(2, 3, {{{0, 1, 1}, 1}}));
    CHECK(derivative(f, {0, 0, 0}).is_zero());
    CHECK(derivative(f, {1, 1, 0}).degree() <= 2);
}

TEST_CASE("iterated derivative") {
    Polynomial q = random_polynomial(2, 4, 2, 3);
    Polynomial dd = iterated_derivative(q, {{1, 0, 1, 0}, {1, 0, 1, 0}});
    CHECK(dd.degree() == 0);
    Polynomial f = reduce_raw(2, 2, {{{1, 1}, 1}});
    CHECK(iterated_derivative(f, {{1, 0}, {0, 1}}) == Polynomial::constant(2, 2, 1));
    CHECK(iterated_derivative(f, {}) == f);
    // symmetric in the directions
    SplitMix64 gen(31);
    for (int trial = 0; trial < 10; ++trial) {
        Polynomial g = random_polynomial(3, 3, 3, gen.next());
        Point a = decode_point(gen.below(27), 3, 3);
        Point b = decode_point(gen.below(27), 3, 3);
        CHECK(iterated_derivative(g, {a, b}) == iterated_derivative(g, {b, a}));
    }
}

TEST_CASE("bias_exact") {
    CHECK(bias_exact(Polynomial::constant(2, 3, 1)).value == doctest::Approx(1.0));
    CHECK(bias_exact(Polynomial::variable(3, 2, 0)).value == doctest::Approx(0.0));
    Polynomial xy = reduce_raw(2, 2, {{{1, 1}, 1}});
    CHECK(bias_exact(xy).value == doctest::Approx(0.5));
}

TEST_CASE("gowers_norm_exact small cases") {
    Polynomial xy = reduce_raw(2, 2, {{{1, 1}, 1}});
    CHECK(gowers_norm_exact(xy, 2).value ==
          doctest::Approx(std::pow(0.25, 0.25)).epsilon(1e-9));
    CHECK(gowers_norm_exact(xy, 1).value == doctest::Approx(bias_exact(xy).value));
    CHECK(gowers_norm_exact(xy, 0).value == doctest::Approx(bias_exact(xy).value));
    CHECK(gowers_norm_exact(xy, 3).value == doctest::Approx(1.0));  // deg <= d-1
}

TEST_CASE("polarization shortcut matches brute force") {
    SplitMix64 gen(77);
    for (int p : {2, 3}) {
        for (int trial = 0; trial < 6; ++trial) {
            int n = 3;
            Polynomial f = random_polynomial(p, n, 2, gen.next());
            if (f.degree() != 2) continue;
            CHECK(gowers_norm_exact(f, 2).value ==
                  doctest::Approx(gowers_oracle(f, 2)).epsilon(1e-9));
        }
    }
    for (int trial = 0; trial < 4; ++trial) {
        Polynomial f = random_polynomial(2, 3, 3, gen.next());
        if (f.degree() != 3) continue;
        CHECK(gowers_norm_exact(f, 3).value ==
              doctest::Approx(gowers_oracle(f, 3)).epsilon(1e-9));
    }
}

TEST_CASE("direct path matches brute force when deg > d") {
    SplitMix64 gen(78);
    for (int trial = 0; trial < 5; ++trial) {
        Polynomial f = random_polynomial(2, 3, 3, gen.next());
        if (f.degree() != 3) continue;
        CHECK(gowers_norm_exact(f, 2).value ==
              doctest::Approx(gowers_oracle(f, 2)).epsilon(1e-9));
    }
}

TEST_CASE("U^d = 1 iff deg <= d-1") {
    SplitMix64 gen(81);
    for (int p : {2, 3}) {
        for (int trial = 0; trial < 8; ++trial) {
            Polynomial f = random_polynomial(p, 3, 3, gen.next());
            for (int d = 2; d <= 4; ++d) {
                double v = gowers_norm_exact(f, d).value;
                if (f.degree() <= d - 1) {
                    CHECK(v == doctest::Approx(1.0));
                } else if (!f.homogeneous_part(d).is_zero() || f.degree() > d) {
                    // nonzero degree-d content: norm must be strictly < 1
                    CHECK(v < 1.0 - 1e-12);
                }
            }
        }
    }
}

TEST_CASE("gowers monte carlo agrees with exact") {
    SplitMix64 gen(99);
    int agree = 0, total = 0;
    for (int trial = 0; trial < 10; ++trial) {
        Polynomial f = random_polynomial(2, 4, 3, gen.next());
        if (f.degree() != 3) continue;
        NormEstimate ex = gowers_norm_exact(f, 3);
        NormEstimate mc = gowers_norm_mc(f, 3, 20000, split_seed(5, trial));
        CHECK(mc.std_error > 0.0);
        double raw_exact = std::pow(ex.value, 8.0);
        ++total;
        if (std::abs(mc.raw_mean_real - raw_exact) <= 3.5 * mc.std_error) ++agree;
        // determinism
        NormEstimate mc2 = gowers_norm_mc(f, 3, 20000, split_seed(5, trial));
        CHECK(mc.value == mc2.value);
    }
    CHECK(agree >= total - 1);  // allow one 3.5-sigma outlier
    Polynomial quad = random_polynomial(2, 4, 2, 123);
    NormEstimate m = gowers_norm_mc(quad, 3, 200, 9);
    CHECK(m.value == doctest::Approx(1.0));
}

TEST_CASE("fourier transform") {
    // indicator of full space: hat(0)=1, rest 0
    {
        std::vector<std::complex<double>> h(16, 1.0);
        auto ft = fourier(h, 2, 4);
        CHECK(std::abs(ft[0] - 1.0) < 1e-9);
        for (int i = 1; i < 16; ++i) CHECK(std::abs(ft[i]) < 1e-9);
    }
    // pure character: unit mass at beta
    for (int p : {2, 3}) {
        int n = 2;
        long long size = pow_ll(p, n);
        Point beta = {1, p - 1};
        std::vector<std::complex<double>> h(size);
        for (long long x = 0; x < size; ++x) {
            Point pt = decode_point(x, p, n);
            int dot = (beta[0] * pt[0] + beta[1] * pt[1]) % p;
            double ang = 2.0 * std::numbers::pi * dot / p;
            h[x] = {std::cos(ang), std::sin(ang)};
        }
        auto ft = fourier(h, p, n);
        long long bidx = encode_point(beta, p);
        for (long long a = 0; a < size; ++a) {
            double want = (a == bidx) ? 1.0 : 0.0;
            CHECK(std::abs(ft[a] - want) < 1e-9);
        }
    }
    // Parseval on a random set indicator
    {
        SplitMix64 gen(13);
        std::vector<std::complex<double>> h(256, 0.0);
        double e2 = 0.0;
        for (int i = 0; i < 256; ++i) {
            h[i] = (gen.below(2) == 1) ? 1.0 : 0.0;
            e2 += std::norm(h[i]);
        }
        e2 /= 256.0;
        auto ft = fourier(h, 2, 8);
        double sum = 0.0;
        for (auto& v : ft) sum += std::norm(v);
        CHECK(sum == doctest::Approx(e2).epsilon(1e-9));
    }
}

TEST_CASE("joint distribution distance") {
    CHECK(joint_distribution_distance({Polynomial::variable(2, 3, 0)}) ==
          doctest::Approx(0.0));
    Polynomial x1 = Polynomial::variable(2, 3, 0);
    CHECK(joint_distribution_distance({x1, x1}) == doctest::Approx(1.0));
}

TEST_CASE("small-bias families are jointly near-uniform") {
    SplitMix64 gen(55);
    PrimeField F(2);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 6, m = 3;
        std::vector<Polynomial> hs;
        for (int i = 0; i < m; ++i) hs.push_back(random_polynomial(2, n, 2, gen.next()));
        // max bias over nontrivial combinations
        double maxbias = 0.0;
        for (int mask = 1; mask < (1 << m); ++mask) {
            Polynomial comb = Polynomial::zero(2, n);
            for (int i = 0; i < m; ++i)
                if (mask >> i & 1) comb = comb + hs[i];
            maxbias = std::max(maxbias, bias_exact(comb).value);
        }
        double gamma = maxbias * std::pow(2.0, 1.5 * m);
        double measured = joint_distribution_distance(hs);
        CHECK(measured <= gamma + 1e-9);
    }
}

TEST_CASE("derivative bias profile") {
    // linear f: every derivative constant, bias 1
    Polynomial lin = Polynomial::variable(2, 3, 0);
    DerivativeBiasProfile prof = derivative_bias_profile(lin);
    CHECK(prof.fraction_above == doctest::Approx(1.0));
    CHECK(prof.mean_inequality_ok);
    CHECK(prof.fraction_inequality_ok);

    Polynomial xy = reduce_raw(2, 2, {{{1, 1}, 1}});
    DerivativeBiasProfile p2 = derivative_bias_profile(xy);
    CHECK(p2.base_bias == doctest::Approx(0.5));
    CHECK(p2.mean_bias >= 0.25 - 1e-9);

    // 15 random cubics: the two profile inequalities never fail
    SplitMix64 gen(21);
    for (int trial = 0; trial < 15; ++trial) {
        Polynomial f = random_polynomial(2, 6, 3, gen.next());
        DerivativeBiasProfile pr = derivative_bias_profile(f);
        CHECK(pr.mean_inequality_ok);
        CHECK(pr.fraction_inequality_ok);
    }
}

TEST_CASE("derivative bias profile CSV header") {
    Polynomial xy = reduce_raw(2, 2, {{{1, 1}, 1}});
    std::string csv = derivative_bias_profile_csv(xy);
    CHECK(csv.substr(0, 21) == "y_index,y_digits,bias");
    CHECK(csv.find("0,00,") != std::string::npos);
}

TEST_CASE("affine invariance of bias and gowers norms") {
    SplitMix64 gen(61);
    for (int trial = 0; trial < 8; ++trial) {
        int p = (trial % 2) ? 3 : 2;
        int n = 3;
        Polynomial f = random_polynomial(p, n, 3, gen.next());
        PrimeField F(p);
        Matrix T;
        do {
            T.assign(n, std::vector<int>(n));
            for (auto& row : T)
                for (int& v : row) v = static_cast<int>(gen.below(p));
        } while (!mat_inverse(T, F));
        Point b(n);
        for (int& v : b) v = static_cast<int>(gen.below(p));
        Polynomial g = compose_affine(f, T, b);
        CHECK(bias_exact(g).value == doctest::Approx(bias_exact(f).value).epsilon(1e-9));
        CHECK(gowers_norm_exact(g, 2).value ==
              doctest::Approx(gowers_norm_exact(f, 2).value).epsilon(1e-9));
    }
}

TEST_CASE("gowers derivative chain inequality at d=3") {
    SplitMix64 gen(71);
    for (int trial = 0; trial < 6; ++trial) {
        Polynomial f = random_polynomial(2, 4, 3, gen.next());
        double lhs = std::pow(gowers_norm_exact(f, 3).value, 8.0);
        long long size = 16;
        double rhs = 0.0;
        for (long long y = 0; y < size; ++y) {
            Polynomial df = derivative(f, decode_point(y, 2, 4));
            rhs += std::pow(gowers_norm_exact(df, 2).value, 4.0);
        }
        rhs /= static_cast<double>(size);
        CHECK(lhs <= rhs + 1e-9);
    }
}
