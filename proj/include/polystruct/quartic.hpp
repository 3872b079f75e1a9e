// quartic.hpp -- degree-4 machinery: the linear/quadratic class calculus,
// derivative-basis extraction, the partition construction that drops a
// quartic to cubics on every cell, the biased-quartic structure pipeline,
// the high-characteristic structure pipeline, and the symmetric-polynomial
// case study.
#pragma once

#include <array>
#include <optional>
#include <vector>

#include "polystruct/cubic.hpp"
#include "polystruct/poly.hpp"
#include "polystruct/subspace.hpp"

namespace polystruct {

// The set A of the class calculus: cubics are considered modulo
// sum ell'_i Q_i + sum ell_i Q'_i + Q'_0 with ell'_i, Q'_i free.
struct ModSet {
    std::vector<Polynomial> Qs;     // t1 quadratics, independent quadratic parts
    std::vector<LinearForm> ells;   // t2 independent homogeneous linear forms

    int t1() const { return static_cast<int>(Qs.size()); }
    int t2() const { return static_cast<int>(ells.size()); }
    // Adds unless dependent on what is already present; returns whether added.
    bool add_quadratic(const Polynomial& q);
    bool add_linear(const LinearForm& l);
};

struct ClassReduction {
    bool in_zero_class = false;
    // canonical representative of the degree-3 part modulo the span generated
    // by A (elimination against a fixed monomial basis)
    Polynomial residue;
    // one witness combination for the eliminated part:
    // f3 - residue = sum ell_primed_i * Qs_i + sum ells_i * Q_primed_i  (degree-3 parts)
    std::vector<LinearForm> ell_primed;
    std::vector<Polynomial> Q_primed;
};

ClassReduction class_reduce(const Polynomial& f, const ModSet& A);

struct Rank3cCertificate {
    int r = 0;
    int c = 0;
    std::vector<std::pair<LinearForm, Polynomial>> pairs;   // r of (ell_i, Q_i)
    std::vector<std::array<LinearForm, 3>> triples;         // c triple products
    Polynomial Q0;                                          // degree <= 2
    Polynomial representative;  // element of [f]_A that the data reconstructs
    bool overflow = false;      // a low-rank cofactor could not be split in budget
    enum class Exactness { exact, upper_bound } exactness = Exactness::upper_bound;
};

Polynomial rank3c_reconstruct(const Rank3cCertificate& cert);

// Certified upper bound on the class rank of [f]_A with triple budget c:
// minimal-drop / greedy certificate on a canonical representative, then
// low-rank quadratic cofactors are split into triple products while the
// budget allows.
Rank3cCertificate rank3c_upper(const Polynomial& f, const ModSet& A, int budget);

struct DerivativeBasis {
    AffineSubspace V;    // ambient subspace with a bounded derivative rank profile
    Polynomial f_V;      // f restricted to V, in dim(V) parameters
    ModSet A;            // the common basis: t1 quadratics + t2 linear forms (parameter space)
    int rounds_rank = 0;  // rounds that adjoined a quadratic
    int rounds_dim = 0;   // rounds that adjoined triple-factor forms
    int budget = 0;       // final triple budget
    double u4 = 0.0;      // measured norm driving the profile (metric only)
    int profile_r = 0;    // rank bound used for the sublevel extraction
    bool sampled = false; // per-direction guarantee sampled rather than exhaustive
};

// Extraction of a common basis for the derivative space of a quartic.
DerivativeBasis derivative_basis(const Polynomial& f);

struct DirectionDecomposition {
    std::vector<LinearForm> ell_y;  // one per A.Qs
    std::vector<Polynomial> Q_y;    // one per A.ells
    Polynomial Q0_y;
};

// Solves Delta_y(f_V) = sum ell_y_i Qs_i + sum ells_i Q_y_i + Q0_y by linear
// algebra over the cubic-part coefficient space; y in V's parameters.
DirectionDecomposition decompose_direction(const DerivativeBasis& basis, const Point& y);

struct CellCertificate {
    AffineSubspace cell;       // ambient coordinates
    Polynomial restriction;    // in cell parameters
    int degree = 0;
    Rank3Certificate cubic_cert;
};

struct QuarticPartition {
    AffineSubspace V;   // the partitioned ambient subspace
    std::vector<CellCertificate> cells;
    int outer_forms = 0;   // linear forms fixed before the quadratic rounds
    int rounds = 0;        // quadratics processed
};

// Partition of the derivative-basis subspace into cells where f restricts to
// degree <= 3: fix the basis linear forms, then per quadratic fix its
// canonical pairing forms cell by cell.
QuarticPartition partition_degree_drop(const Polynomial& f);

struct QuadraticPair {
    Polynomial q;
    Polynomial q2;
};

struct QuarticStructure {
    enum class Variant { bias_form, highchar_form };
    Variant variant = Variant::bias_form;
    int p = 2;
    int n = 0;
    std::vector<LinearForm> ells;    // affine forms (constant folded in)
    std::vector<Polynomial> gs;      // cubic cofactors, one per form
    std::vector<QuadraticPair> pairs;
    Polynomial g0;                   // degree <= 3 remainder

    // pipeline metrics (recorded, not asserted)
    double delta = 0.0;
    int t_directions = 0;     // decoder directions used (bias pipeline)
    int quadratics_kept = 0;  // after regularization / disjointification
    int chart_codim = 0;      // total codimension peeled off in assembly
};

Polynomial quartic_reconstruct(const QuarticStructure& s);

// Biased-quartic pipeline: low-rank-derivative subspace, plurality-decoder
// approximation by derived linear/quadratic features, regularization and
// disjointification, exact low-degree table fit, exact reassembly.
QuarticStructure quartic_bias_structure(const Polynomial& f);

// High-characteristic (p >= 5) pipeline: derivative basis, disjoint
// quadratics, elimination of square-square monomials, cube-cofactor
// extraction, exact reassembly.
QuarticStructure quartic_highchar_structure(const Polynomial& f);

struct S4Report {
    int m = 0;
    int n = 0;
    bool basis_identity = false;    // every derivative lies in the S2/S1 class
    bool s2_identity = false;       // the pairing decomposition of S2, term-exact
    bool v0_identity = false;       // restriction to the canonical cell
    bool coset_degrees = false;     // all cells of the pairing forms drop to degree <= 2
    std::vector<int> coset_degree_list;
};

// Elementary symmetric polynomial of degree k in n variables over F_p.
Polynomial elementary_symmetric(int p, int n, int k);

// Exhaustive verification of the four structural facts about the degree-4
// elementary symmetric polynomial on n = 4m variables over F_2.
S4Report s4_case_study(int m);

}  // namespace polystruct
