// cubic.hpp -- rank_3 certificates for cubics, common-linear-basis extraction
// for spaces of low-rank quadratics, and the cubic decomposition pipelines
// (biased and high-U3 variants).
#pragma once

#include <optional>
#include <vector>

#include "polystruct/poly.hpp"
#include "polystruct/subspace.hpp"

namespace polystruct {

struct Rank3Certificate {
    int r = 0;
    std::vector<LinearForm> ells;  // r linear forms
    std::vector<Polynomial> qs;    // r quadratics
    Polynomial q0;                 // degree <= 2 remainder
    enum class Exactness { exact, upper_bound } exactness = Exactness::upper_bound;
};

// Reconstruction sum l_i * q_i + q0 of a certificate.
Polynomial rank3_reconstruct(const Rank3Certificate& cert);

// Greedy certificate by iterated variable extraction; always succeeds.
Rank3Certificate rank3_upper(const Polynomial& g);

// Minimal r <= r_max via enumeration of r-dimensional spaces of linear forms
// whose joint kernel reduces g to degree <= 2; nullopt when every r <= r_max
// fails (proof of exceedance by exhaustion).
std::optional<Rank3Certificate> rank3_exact(const Polynomial& g, int r_max);

struct CommonBasisResult {
    AffineSubspace V;
    std::vector<LinearForm> ells;          // ambient forms set to zero
    std::vector<Polynomial> restrictions;  // generators restricted to V, degree <= 1
};

// Subspace V of codim <= 4r (char 2; <= 2r odd p) on which every element of
// the span of the given rank <= r quadratics restricts to degree <= 1.
CommonBasisResult common_linear_basis(const std::vector<Polynomial>& generators, int r);

struct CubicStructure {
    enum class Variant { bias_form, u3_form };
    Variant variant = Variant::u3_form;
    int p = 2;
    int n = 0;
    std::vector<LinearForm> ells;        // c1 linear forms
    std::vector<Polynomial> qs;          // c1 quadratics
    Polynomial q0;                       // u3_form remainder (degree <= 2)
    std::vector<LinearForm> inner_ells;  // bias_form: c2 ambient forms
    Polynomial g;                        // bias_form: polynomial in c2 parameters

    // measured pipeline metrics (recorded, not asserted)
    double delta = 0.0;   // measured bias / U3 norm
    int r_target = 0;     // derivative-rank threshold
    int bc_k = 0;         // sumset parameter of the extraction step
    int v_dim = 0;        // dim of the low-derivative-rank subspace
    int u_dim = 0;        // dim of the degree-drop subspace before minimization
    int pipeline_c = 0;   // codim produced by the pipeline before minimization

    int c1() const { return static_cast<int>(ells.size()); }
    int c2() const { return static_cast<int>(inner_ells.size()); }
};

Polynomial cubic_reconstruct(const CubicStructure& s);

// Pipeline for biased cubics: derivative rank profile -> dense low-rank
// direction subspace -> common linear basis -> assembly, then certificate
// minimization and folding of the quadratic remainder into g over its own
// linear factors.  delta_hint = 0 means "measure exactly".
CubicStructure structure_from_bias(const Polynomial& f, double delta_hint = 0.0);

// Same pipeline driven by the U3 norm; output keeps the plain
// sum l_j q_j + q0 shape.
CubicStructure structure_from_u3(const Polynomial& f);

}  // namespace polystruct
