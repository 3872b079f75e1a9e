// addcomb.hpp -- additive-combinatorics subroutines: iterated sumsets,
// Fourier-driven density increments producing a subspace inside kA - kA,
// and subadditive-function subspace extraction.
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "polystruct/subspace.hpp"

namespace polystruct {

struct DenseSet {
    int p;
    int n;
    std::vector<char> members;  // length p^n, indexed by encode_point

    static DenseSet empty_set(int p, int n);
    static DenseSet from_indices(int p, int n, const std::vector<long long>& idx);

    long long size() const { return pow_ll(p, n); }
    long long count() const;
    double density() const;
    bool contains_index(long long i) const { return members[i] != 0; }
};

// kA - kA: all a_1 + ... + a_k - a_{k+1} - ... - a_{2k} with a_i in A.
DenseSet sumset(const DenseSet& A, int k);

struct BCStep {
    LinearForm alpha;         // ambient-coordinate hyperplane form
    int value;                // chosen coset alpha(x) = value
    long long count_before;   // |A restricted| before/after the step
    long long count_after;
    int dim_after;
};

struct BCCertificate {
    int k = 1;
    AffineSubspace W;         // linear subspace contained in kA - kA
    std::vector<BCStep> chain;
    double mu0 = 0.0;         // starting density
    double mu_final = 0.0;    // density on the final affine subspace
    double codim_bound = 0.0; // log_{(p-1/2)/(p-1)}(1/(2 mu0))
    bool density_terminal = false;  // stopped because density > 1/2
};

// Density-increment loop: restrict to the best codim-1 coset while some
// nontrivial Fourier coefficient reaches ((p - 1/2)/p) * density; stop when
// the restricted density exceeds 1/2 (k = 1) or the spectrum is flat
// (k from the terminal formula).  W is always re-verified against an
// exhaustively computed kA - kA.
BCCertificate bogolyubov_chang(const DenseSet& A);

using RealOracle = std::function<double(const Point&)>;

struct SubadditiveResult {
    AffineSubspace V;
    double bound = 0.0;  // certified: oracle(y) <= bound for all y in V
    BCCertificate cert;
};

// Sweep the oracle, form the sublevel set {y: oracle(y) <= r}, require its
// density >= mu_hint, run the density-increment extraction, and certify the
// 2kr bound on the resulting subspace by an exhaustive oracle check.
SubadditiveResult subadditive_subspace(const RealOracle& oracle, int p, int n,
                                       double r, double mu_hint);

// Guard harness: random triples must satisfy F(a*u + v) <= F(u) + F(v).
// Returns false (with the first counterexample written to *witness) on
// violation.
bool check_subadditive(const RealOracle& oracle, int p, int n, int trials,
                       std::uint64_t seed, std::vector<Point>* witness = nullptr);

}  // namespace polystruct
