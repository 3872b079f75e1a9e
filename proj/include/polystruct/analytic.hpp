// analytic.hpp -- bias, Fourier transform, Gowers norms, discrete
// derivatives, and distribution-closeness measurements.
//
// All exact paths accumulate integer counts per field residue and convert to
// floating complex exactly once at the end, so exact values are rationals
// rendered to double with no accumulation error.
#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "polystruct/poly.hpp"
#include "polystruct/subspace.hpp"

namespace polystruct {

struct NormEstimate {
    double value = 0.0;
    enum class Method { exact, monte_carlo } method = Method::exact;
    long long samples = 0;
    double std_error = 0.0;     // 0 for exact
    double raw_mean_real = 0.0; // pre-root mean of the real part
    double raw_mean_imag = 0.0;
};

// f(x+y) - f(x).
Polynomial derivative(const Polynomial& f, const Point& y);
Polynomial iterated_derivative(const Polynomial& f, const std::vector<Point>& ys);

// |E_x w^{f(x)}| with w = e^{2 pi i / p}, by exact truth-table sweep.
NormEstimate bias_exact(const Polynomial& f);

// Raw complex mean E_x w^{f(x)} (needed where the phase matters).
std::complex<double> mean_character(const Polynomial& f);

// |E_{x,y_1..y_d} w^{D_{y_d}..D_{y_1} f(x)}|^{1/2^d}.  Uses the polarization
// shortcut when deg(f) = d (cost p^{(d-1)n}); direct sum otherwise (cost
// p^{(d+1)n}); guard <= 2^30 inner steps.
NormEstimate gowers_norm_exact(const Polynomial& f, int d);

NormEstimate gowers_norm_mc(const Polynomial& f, int d, long long samples,
                            std::uint64_t seed);

// hat h(alpha) = E_x h(x) * conj(chi_alpha(x)) for all alpha; fast
// Walsh-Hadamard at p = 2, per-axis character DFT otherwise.
std::vector<std::complex<double>> fourier(const std::vector<std::complex<double>>& h,
                                          int p, int n);

// max over alpha in F^m of |Pr[for all i: h_i(x) = alpha_i] - p^-m| * p^m.
double joint_distribution_distance(const std::vector<Polynomial>& hs);

struct DerivativeBiasProfile {
    std::vector<double> bias;     // indexed by encode_point(y)
    double mean_bias = 0.0;
    double base_bias = 0.0;       // bias(f)
    double fraction_above = 0.0;  // fraction of y with bias(D_y f) > delta^2/2
    bool mean_inequality_ok = false;      // mean >= bias(f)^2
    bool fraction_inequality_ok = false;  // fraction > delta^2/2
};

DerivativeBiasProfile derivative_bias_profile(const Polynomial& f);

// CSV with the fixed header y_index,y_digits,bias.
std::string derivative_bias_profile_csv(const Polynomial& f);

}  // namespace polystruct
