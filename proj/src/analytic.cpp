#include "polystruct/analytic.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include "polystruct/errors.hpp"
#include "polystruct/rng.hpp"

namespace polystruct {

namespace {

constexpr long long kInnerStepGuard = 1LL << 30;

// w^r for r in [0, p)
std::vector<std::complex<double>> roots_of_unity(int p) {
    std::vector<std::complex<double>> w(p);
    for (int r = 0; r < p; ++r) {
        double ang = 2.0 * std::numbers::pi * r / p;
        w[r] = {std::cos(ang), std::sin(ang)};
    }
    return w;
}

std::complex<double> counts_to_mean(const std::vector<long long>& counts, long long total,
                                    int p) {
    auto w = roots_of_unity(p);
    std::complex<double> acc = 0.0;
    for (int r = 0; r < p; ++r)
        if (counts[r] != 0) acc += w[r] * static_cast<double>(counts[r]);
    return acc / static_cast<double>(total);
}

// Coordinate-wise sum of two encoded points.
long long add_encoded(long long a, long long b, int p, int n) {
    if (p == 2) return a ^ b;
    long long out = 0, mult = 1;
    for (int i = 0; i < n; ++i) {
        out += ((a % p + b % p) % p) * mult;
        a /= p;
        b /= p;
        mult *= p;
    }
    return out;
}

}  // namespace

Polynomial derivative(const Polynomial& f, const Point& y) {
    if (static_cast<int>(y.size()) != f.n)
        throw structural_error("derivative: direction dimension mismatch");
    std::vector<Polynomial> subs;
    subs.reserve(f.n);
    for (int i = 0; i < f.n; ++i)
        subs.push_back(Polynomial::variable(f.p, f.n, i) +
                       Polynomial::constant(f.p, f.n, y[i]));
    return f.substitute(subs, f.n) - f;
}

Polynomial iterated_derivative(const Polynomial& f, const std::vector<Point>& ys) {
    Polynomial g = f;
    for (const Point& y : ys) g = derivative(g, y);
    return g;
}

NormEstimate bias_exact(const Polynomial& f) {
    std::complex<double> mean = mean_character(f);
    NormEstimate e;
    e.value = std::abs(mean);
    e.raw_mean_real = mean.real();
    e.raw_mean_imag = mean.imag();
    return e;
}

std::complex<double> mean_character(const Polynomial& f) {
    TruthTable t = to_truth_table(f);
    std::vector<long long> counts(f.p, 0);
    for (std::uint8_t v : t.values) ++counts[v];
    return counts_to_mean(counts, t.size(), f.p);
}

namespace {

// deg(f) = d shortcut: the d-fold iterated derivative of f is constant in x
// and multilinear in (y_1..y_d).  For fixed y_1..y_{d-1} the expectation over
// (x, y_d) is 1 if the multilinear form vanishes as a function of y_d and 0
// otherwise, so the norm^2^d equals the fraction of (d-1)-tuples for which
// all coordinate slots y_d = e_j vanish.  The slot value for e_j is the
// (d-1)-fold alternating subset sum of D_{e_j} f over the tuple.
NormEstimate gowers_polarization(const Polynomial& f, int d) {
    int p = f.p, n = f.n;
    long long size = pow_ll(p, n);
    long long tuples = 1;
    for (int i = 0; i < d - 1; ++i) {
        tuples *= size;
        if (tuples > kInnerStepGuard)
            throw resource_error("gowers_norm_exact: polarization cost exceeds guard");
    }
    int subsets = 1 << (d - 1);
    if (tuples * subsets > kInnerStepGuard)
        throw resource_error("gowers_norm_exact: polarization cost exceeds guard");

    std::vector<TruthTable> gj;
    gj.reserve(n);
    for (int j = 0; j < n; ++j) {
        Point e(n, 0);
        e[j] = 1;
        gj.push_back(to_truth_table(derivative(f, e)));
    }

    long long zero_tuples = 0;
    if (p == 2 && n <= 32) {
        // pack all n derivative tables into one word per point so a tuple
        // costs 2^{d-1} XORs
        std::vector<std::uint64_t> packed(size, 0);
        for (long long x = 0; x < size; ++x)
            for (int j = 0; j < n; ++j)
                packed[x] |= static_cast<std::uint64_t>(gj[j].values[x]) << j;
        std::vector<long long> ys(d - 1, 0);
        std::vector<long long> pts(subsets);
        for (long long t = 0; t < tuples; ++t) {
            pts[0] = 0;
            std::uint64_t acc = 0;
            for (int s = 0; s < subsets; ++s) {
                if (s > 0) {
                    int low = std::countr_zero(static_cast<unsigned>(s));
                    pts[s] = pts[s & (s - 1)] ^ ys[low];
                }
                acc ^= packed[pts[s]];
            }
            if (acc == 0) ++zero_tuples;
            for (int i = 0; i < d - 1; ++i) {
                if (++ys[i] < size) break;
                ys[i] = 0;
            }
        }
    } else {
        PrimeField F(p);
        std::vector<long long> ys(d - 1, 0);
        std::vector<long long> pts(subsets);
        // (-1)^{d-1-|S|} sign per subset
        std::vector<int> sign(subsets);
        for (int s = 0; s < subsets; ++s)
            sign[s] = ((d - 1 - std::popcount(static_cast<unsigned>(s))) % 2 == 0)
                          ? 1
                          : p - 1;
        for (long long t = 0; t < tuples; ++t) {
            for (int s = 0; s < subsets; ++s) {
                if (s == 0) {
                    pts[s] = 0;
                } else {
                    int low = std::countr_zero(static_cast<unsigned>(s));
                    pts[s] = add_encoded(pts[s & (s - 1)], ys[low], p, n);
                }
            }
            bool all_zero = true;
            for (int j = 0; j < n && all_zero; ++j) {
                int a = 0;
                for (int s = 0; s < subsets; ++s)
                    a = (a + sign[s] * gj[j].values[pts[s]]) % p;
                if (a != 0) all_zero = false;
            }
            if (all_zero) ++zero_tuples;
            for (int i = 0; i < d - 1; ++i) {
                if (++ys[i] < size) break;
                ys[i] = 0;
            }
        }
    }
    NormEstimate e;
    double frac = static_cast<double>(zero_tuples) / static_cast<double>(tuples);
    e.raw_mean_real = frac;
    e.value = std::pow(frac, 1.0 / (1 << d));
    return e;
}

NormEstimate gowers_direct(const Polynomial& f, int d) {
    int p = f.p, n = f.n;
    long long size = pow_ll(p, n);
    long long tuples = 1;
    for (int i = 0; i < d + 1; ++i) {
        tuples *= size;
        if (tuples > kInnerStepGuard)
            throw resource_error(
                "gowers_norm_exact: direct cost exceeds guard; use gowers_norm_mc");
    }
    int subsets = 1 << d;
    TruthTable t = to_truth_table(f);
    std::vector<int> sign(subsets);
    for (int s = 0; s < subsets; ++s)
        sign[s] = ((d - std::popcount(static_cast<unsigned>(s))) % 2 == 0) ? 1 : p - 1;

    std::vector<long long> counts(p, 0);
    // odometer over (y_1..y_d); inner loop over x reuses the subset sums of y
    std::vector<long long> ys(d, 0);
    std::vector<long long> ysum(subsets);
    long long outer = tuples / size;
    for (long long ty = 0; ty < outer; ++ty) {
        for (int s = 0; s < subsets; ++s) {
            if (s == 0) {
                ysum[s] = 0;
            } else {
                int low = std::countr_zero(static_cast<unsigned>(s));
                ysum[s] = add_encoded(ysum[s & (s - 1)], ys[low], p, n);
            }
        }
        for (long long x = 0; x < size; ++x) {
            int acc = 0;
            for (int s = 0; s < subsets; ++s) {
                long long pt = add_encoded(x, ysum[s], p, n);
                acc = (acc + sign[s] * t.values[pt]) % p;
            }
            ++counts[acc];
        }
        for (int i = 0; i < d; ++i) {
            if (++ys[i] < size) break;
            ys[i] = 0;
        }
    }
    std::complex<double> mean = counts_to_mean(counts, tuples, p);
    NormEstimate e;
    e.raw_mean_real = mean.real();
    e.raw_mean_imag = mean.imag();
    e.value = std::pow(std::abs(mean), 1.0 / (1 << d));
    return e;
}

}  // namespace

NormEstimate gowers_norm_exact(const Polynomial& f, int d) {
    if (d < 0) throw structural_error("gowers_norm_exact: negative order");
    if (d <= 1) {
        NormEstimate e = bias_exact(f);
        return e;
    }
    int deg = f.degree();
    if (f.is_zero() || deg <= d - 1) {
        // every d-fold iterated derivative vanishes identically
        NormEstimate e;
        e.value = 1.0;
        e.raw_mean_real = 1.0;
        return e;
    }
    if (deg == d) return gowers_polarization(f, d);
    return gowers_direct(f, d);
}

NormEstimate gowers_norm_mc(const Polynomial& f, int d, long long samples,
                            std::uint64_t seed) {
    if (samples < 100) throw structural_error("gowers_norm_mc: need at least 100 samples");
    int p = f.p, n = f.n;
    SplitMix64 gen(seed);
    int subsets = 1 << d;
    std::vector<int> sign(subsets);
    for (int s = 0; s < subsets; ++s)
        sign[s] = ((d - std::popcount(static_cast<unsigned>(s))) % 2 == 0) ? 1 : p - 1;
    auto w = roots_of_unity(p);

    PrimeField F(p);
    std::complex<double> sum = 0.0;
    double sum_re = 0.0, sum_re2 = 0.0;
    std::vector<Point> ys(d);
    Point x(n), pt(n);
    for (long long it = 0; it < samples; ++it) {
        for (int i = 0; i < n; ++i) x[i] = gen.field_element(p);
        for (int k = 0; k < d; ++k) {
            ys[k].resize(n);
            for (int i = 0; i < n; ++i) ys[k][i] = gen.field_element(p);
        }
        int acc = 0;
        for (int s = 0; s < subsets; ++s) {
            for (int i = 0; i < n; ++i) {
                int v = x[i];
                for (int k = 0; k < d; ++k)
                    if (s >> k & 1) v += ys[k][i];
                pt[i] = v % p;
            }
            acc = (acc + sign[s] * f.evaluate(pt)) % p;
        }
        sum += w[acc];
        sum_re += w[acc].real();
        sum_re2 += w[acc].real() * w[acc].real();
    }
    std::complex<double> mean = sum / static_cast<double>(samples);
    NormEstimate e;
    e.method = NormEstimate::Method::monte_carlo;
    e.samples = samples;
    e.raw_mean_real = mean.real();
    e.raw_mean_imag = mean.imag();
    double var = sum_re2 / samples - (sum_re / samples) * (sum_re / samples);
    e.std_error = std::sqrt(std::max(var, 0.0) / samples);
    // |mean| is a biased-upward estimate of the true (real, nonnegative)
    // expectation near 0; raw_mean_real is the unbiased companion.
    e.value = std::pow(std::abs(mean), 1.0 / (1 << d));
    return e;
}

std::vector<std::complex<double>> fourier(const std::vector<std::complex<double>>& h,
                                          int p, int n) {
    long long size = pow_ll(p, n);
    if (static_cast<long long>(h.size()) != size)
        throw structural_error("fourier: input length is not p^n");
    if (size > (1LL << 22)) throw resource_error("fourier: p^n exceeds 2^22");
    std::vector<std::complex<double>> a = h;
    if (p == 2) {
        for (long long len = 1; len < size; len <<= 1)
            for (long long i = 0; i < size; i += len << 1)
                for (long long j = i; j < i + len; ++j) {
                    auto u = a[j], v = a[j + len];
                    a[j] = u + v;
                    a[j + len] = u - v;
                }
    } else {
        auto w = roots_of_unity(p);
        long long stride = 1;
        std::vector<std::complex<double>> line(p), out(p);
        for (int axis = 0; axis < n; ++axis) {
            long long block = stride * p;
            for (long long base = 0; base < size; base += block)
                for (long long off = 0; off < stride; ++off) {
                    for (int k = 0; k < p; ++k) line[k] = a[base + off + k * stride];
                    for (int e = 0; e < p; ++e) {
                        std::complex<double> acc = 0.0;
                        for (int k = 0; k < p; ++k)
                            acc += line[k] * std::conj(w[e * k % p]);
                        out[e] = acc;
                    }
                    for (int e = 0; e < p; ++e) a[base + off + e * stride] = out[e];
                }
            stride = block;
        }
    }
    double inv = 1.0 / static_cast<double>(size);
    for (auto& v : a) v *= inv;
    return a;
}

double joint_distribution_distance(const std::vector<Polynomial>& hs) {
    if (hs.empty()) throw structural_error("joint_distribution_distance: empty family");
    int p = hs[0].p, n = hs[0].n;
    int m = static_cast<int>(hs.size());
    for (const auto& h : hs)
        if (h.p != p || h.n != n)
            throw structural_error("joint_distribution_distance: mixed dimensions");
    long long size = pow_ll(p, n);
    if (size > max_table_size())
        throw resource_error("joint_distribution_distance: p^n exceeds table cap");
    double pm = std::pow(static_cast<double>(p), m);
    if (m * std::log2(p) > 62)
        throw resource_error("joint_distribution_distance: value-vector space too large");
    long long pm_ll = 1;
    for (int i = 0; i < m; ++i) pm_ll *= p;

    std::vector<TruthTable> tabs;
    tabs.reserve(m);
    for (const auto& h : hs) tabs.push_back(to_truth_table(h));
    std::unordered_map<long long, long long> counts;
    counts.reserve(1 << 12);
    for (long long x = 0; x < size; ++x) {
        long long key = 0;
        for (int i = m - 1; i >= 0; --i) key = key * p + tabs[i].values[x];
        ++counts[key];
    }
    // gamma = max_alpha |cnt(alpha) * p^m - p^n| / p^n, exactly
    long long worst_num = 0;
    for (const auto& [key, cnt] : counts) {
        long long num = std::llabs(cnt * pm_ll - size);
        worst_num = std::max(worst_num, num);
    }
    if (static_cast<long long>(counts.size()) < pm_ll)
        worst_num = std::max(worst_num, size);  // some alpha unattained: |0 - p^-m| p^m = 1
    (void)pm;
    return static_cast<double>(worst_num) / static_cast<double>(size);
}

DerivativeBiasProfile derivative_bias_profile(const Polynomial& f) {
    int p = f.p, n = f.n;
    long long size = pow_ll(p, n);
    if (size * size > (1LL << 26))
        throw resource_error("derivative_bias_profile: p^{2n} exceeds guard");
    TruthTable t = to_truth_table(f);
    DerivativeBiasProfile prof;
    prof.bias.resize(size);
    prof.base_bias = bias_exact(f).value;
    double delta = prof.base_bias;
    double threshold = delta * delta / 2.0;
    long long above = 0;
    double sum = 0.0;
    std::vector<long long> counts(p);
    for (long long y = 0; y < size; ++y) {
        std::fill(counts.begin(), counts.end(), 0);
        for (long long x = 0; x < size; ++x) {
            long long xy = add_encoded(x, y, p, n);
            ++counts[(t.values[xy] - t.values[x] + p) % p];
        }
        double b = std::abs(counts_to_mean(counts, size, p));
        prof.bias[y] = b;
        sum += b;
        if (b > threshold + 1e-12) ++above;
    }
    prof.mean_bias = sum / static_cast<double>(size);
    prof.fraction_above = static_cast<double>(above) / static_cast<double>(size);
    prof.mean_inequality_ok = prof.mean_bias >= delta * delta - 1e-9;
    prof.fraction_inequality_ok = prof.fraction_above > threshold - 1e-9;
    return prof;
}

std::string derivative_bias_profile_csv(const Polynomial& f) {
    DerivativeBiasProfile prof = derivative_bias_profile(f);
    std::ostringstream os;
    os << "y_index,y_digits,bias\n";
    os.precision(17);
    for (long long y = 0; y < static_cast<long long>(prof.bias.size()); ++y) {
        Point digits = decode_point(y, f.p, f.n);
        os << y << ",";
        for (int i = 0; i < f.n; ++i) os << digits[i];
        os << "," << prof.bias[y] << "\n";
    }
    return os.str();
}

}  // namespace polystruct
