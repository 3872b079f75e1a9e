// polystruct -- command-line front end.
//
// Exit codes: 0 verified, 1 internal verification failure, 2 infeasibility
// diagnostic, 64 usage / malformed input / cost guard.
//
// Every certificate printed or written here is re-verified at this boundary,
// independently of any checks the library already performed.
#include <cstdint>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "polystruct/analytic.hpp"
#include "polystruct/errors.hpp"
#include "polystruct/io.hpp"
#include "polystruct/quartic.hpp"
#include "polystruct/rng.hpp"

using namespace polystruct;

namespace {

constexpr int kExitVerification = 1;
constexpr int kExitThreshold = 2;
constexpr int kExitUsage = 64;

std::string fmt(double v) {
    std::ostringstream ss;
    ss << std::setprecision(12) << v;
    return ss.str();
}

struct AnalyzeArgs {
    std::string input;
    std::vector<int> gowers;
    bool exact = true;
    long long mc_samples = 0;
    std::uint64_t seed = 12345;
};

int run_analyze(const AnalyzeArgs& a) {
    Polynomial f = polynomial_from_json(parse_json_file(a.input));
    std::cout << "p " << f.p << "\n";
    std::cout << "n " << f.n << "\n";
    std::cout << "degree " << f.degree() << "\n";
    std::cout << "bias " << fmt(bias_exact(f).value) << "\n";
    for (size_t i = 0; i < a.gowers.size(); ++i) {
        int d = a.gowers[i];
        NormEstimate e =
            (a.mc_samples > 0)
                ? gowers_norm_mc(f, d, a.mc_samples, split_seed(a.seed, i))
                : gowers_norm_exact(f, d);
        std::cout << "gowers_u" << d << " " << fmt(e.value) << "\n";
    }
    if (pow_ll(f.p, f.n) <= (1LL << 14)) {
        std::vector<long long> hist(f.n + 1, 0);
        for (long long i = 0; i < pow_ll(f.p, f.n); ++i) {
            Point y = decode_point(i, f.p, f.n);
            hist[rank2(derivative(f, y).truncate_degree(2))] += 1;
        }
        for (int r = 0; r <= f.n; ++r)
            if (hist[r] > 0)
                std::cout << "derivative_rank_hist " << r << " " << hist[r] << "\n";
    }
    return 0;
}

struct DecomposeArgs {
    std::string input;
    std::string mode;
    std::string out;
    std::uint64_t seed = 12345;
};

int run_decompose(const DecomposeArgs& a) {
    Polynomial f = polynomial_from_json(parse_json_file(a.input));
    int d = f.degree();
    json cert;
    if (a.mode == "cubic-bias" || a.mode == "cubic-u3") {
        if (d != 3)
            throw structural_error("mode " + a.mode + " expects a degree-3 input, got " +
                                   std::to_string(d));
        CubicStructure s = a.mode == "cubic-bias" ? structure_from_bias(f)
                                                  : structure_from_u3(f);
        if (!(cubic_reconstruct(s) == f)) {
            std::cerr << "verification failed: certificate does not reconstruct\n";
            return kExitVerification;
        }
        cert = cubic_structure_to_json(s);
        std::cout << "mode " << a.mode << "\n"
                  << "c1 " << s.c1() << "\n"
                  << "c2 " << s.c2() << "\n"
                  << "delta " << fmt(s.delta) << "\n";
    } else if (a.mode == "quartic-bias" || a.mode == "quartic-highchar") {
        if (d != 4)
            throw structural_error("mode " + a.mode + " expects a degree-4 input, got " +
                                   std::to_string(d));
        QuarticStructure s = a.mode == "quartic-bias"
                                 ? quartic_bias_structure(f)
                                 : quartic_highchar_structure(f);
        if (!(quartic_reconstruct(s) == f)) {
            std::cerr << "verification failed: certificate does not reconstruct\n";
            return kExitVerification;
        }
        cert = quartic_structure_to_json(s);
        std::cout << "mode " << a.mode << "\n"
                  << "forms " << s.ells.size() << "\n"
                  << "pairs " << s.pairs.size() << "\n"
                  << "delta " << fmt(s.delta) << "\n";
    } else if (a.mode == "partition") {
        if (d != 3 && d != 4)
            throw structural_error("mode partition expects degree 3 or 4, got " +
                                   std::to_string(d));
        QuarticPartition part = partition_degree_drop(f);
        for (const CellCertificate& c : part.cells) {
            if (restrict_to(f, c.cell).degree() > 3) {
                std::cerr << "verification failed: a cell keeps degree 4\n";
                return kExitVerification;
            }
        }
        cert = partition_to_json(part);
        std::cout << "mode partition\n"
                  << "cells " << part.cells.size() << "\n"
                  << "outer_forms " << part.outer_forms << "\n";
        if (!a.out.empty())
            write_text_file(a.out + ".csv", partition_csv(part));
    } else {
        throw structural_error("unknown mode: " + a.mode);
    }
    if (!a.out.empty()) write_text_file(a.out, cert.dump(2) + "\n");
    std::cout << "verified\n";
    return 0;
}

struct ExperimentArgs {
    std::string spec;
    std::string out;
    int jobs = 1;
};

int run_experiment(const ExperimentArgs& a) {
    json spec = parse_json_file(a.spec);
    if (!spec.is_object() || !spec.contains("p") || !spec.contains("n") ||
        !spec.contains("degree") || !spec.contains("count") ||
        !spec.contains("mode") || !spec.contains("seed"))
        throw structural_error(
            "experiment spec needs p, n, degree, count, mode, seed");
    int p = spec["p"].get<int>();
    int n = spec["n"].get<int>();
    int degree = spec["degree"].get<int>();
    long long count = spec["count"].get<long long>();
    std::string mode = spec["mode"].get<std::string>();
    std::uint64_t seed = spec["seed"].get<std::uint64_t>();

    std::ostringstream csv;
    csv << "instance,instance_seed,p,n,degree,mode,delta,components,verified,note\n";
    for (long long i = 0; i < count; ++i) {
        std::uint64_t iseed = split_seed(seed, static_cast<std::uint64_t>(i));
        Polynomial f = random_polynomial(p, n, degree, iseed);
        std::string note, verified = "pass";
        double delta = 0.0;
        int components = 0;
        try {
            if (mode == "cubic-u3" || mode == "cubic-bias") {
                CubicStructure s = mode == "cubic-u3" ? structure_from_u3(f)
                                                      : structure_from_bias(f);
                delta = s.delta;
                components = s.c1();
                if (!(cubic_reconstruct(s) == f)) verified = "fail";
            } else if (mode == "quartic-bias" || mode == "quartic-highchar") {
                QuarticStructure s = mode == "quartic-bias"
                                         ? quartic_bias_structure(f)
                                         : quartic_highchar_structure(f);
                delta = s.delta;
                components = static_cast<int>(s.ells.size() + s.pairs.size());
                if (!(quartic_reconstruct(s) == f)) verified = "fail";
            } else if (mode == "partition") {
                QuarticPartition part = partition_degree_drop(f);
                components = static_cast<int>(part.cells.size());
                for (const CellCertificate& c : part.cells)
                    if (restrict_to(f, c.cell).degree() > 3) verified = "fail";
            } else if (mode == "analyze") {
                delta = bias_exact(f).value;
            } else {
                throw structural_error("unknown experiment mode: " + mode);
            }
        } catch (const threshold_error& e) {
            verified = "infeasible";
            note = e.stage;
        } catch (const resource_error& e) {
            verified = "resource";
            note = e.what();
        }
        csv << i << "," << iseed << "," << p << "," << n << "," << degree << ","
            << mode << "," << fmt(delta) << "," << components << "," << verified
            << "," << note << "\n";
    }
    if (a.out.empty())
        std::cout << csv.str();
    else
        write_text_file(a.out, csv.str());
    return 0;
}

int run_s4(int m) {
    S4Report rep;
    try {
        rep = s4_case_study(m);
    } catch (const verification_error& e) {
        std::cerr << "identity failure: " << e.what() << "\n";
        return kExitVerification;
    }
    std::cout << "m " << rep.m << " (n = " << rep.n << ")\n";
    std::cout << "derivative basis identity: " << (rep.basis_identity ? "pass" : "fail")
              << "\n";
    std::cout << "pairing decomposition identity: "
              << (rep.s2_identity ? "pass" : "fail") << "\n";
    std::cout << "canonical cell restriction: " << (rep.v0_identity ? "pass" : "fail")
              << "\n";
    std::cout << "all " << rep.coset_degree_list.size()
              << " coset restrictions degree <= 2: "
              << (rep.coset_degrees ? "pass" : "fail") << "\n";
    bool all = rep.basis_identity && rep.s2_identity && rep.v0_identity &&
               rep.coset_degrees;
    return all ? 0 : kExitVerification;
}

struct BcArgs {
    std::string input;
    std::string out;
};

int run_bc(const BcArgs& a) {
    DenseSet A = dense_set_from_json(parse_json_file(a.input));
    BCCertificate cert = bogolyubov_chang(A);
    // independent re-check at the CLI boundary
    DenseSet S = sumset(A, cert.k);
    bool ok = true;
    cert.W.for_each_point([&](const Point& x) {
        if (!S.contains_index(encode_point(x, A.p))) ok = false;
    });
    std::cout << "density " << fmt(cert.mu0) << "\n"
              << "k " << cert.k << "\n"
              << "dim " << cert.W.dim() << "\n"
              << "codim " << cert.W.codim() << "\n"
              << "codim_bound " << fmt(cert.codim_bound) << "\n";
    if (!a.out.empty()) write_text_file(a.out, bc_certificate_to_json(cert).dump(2) + "\n");
    if (!ok) {
        std::cerr << "verification failed: W is not inside kA - kA\n";
        return kExitVerification;
    }
    std::cout << "verified\n";
    return 0;
}

struct CanonArgs {
    std::string input;
    std::string out;
};

int run_canonicalize(const CanonArgs& a) {
    Polynomial q = polynomial_from_json(parse_json_file(a.input));
    if (q.degree() > 2)
        throw structural_error("canonicalize expects degree <= 2, got " +
                               std::to_string(q.degree()));
    DicksonForm d = dickson_canonicalize(q);
    // re-check: composing the canonical polynomial with T^{-1} x recovers q
    Polynomial recomposed = compose_affine(d.canonical_polynomial(),
                                           *mat_inverse(d.T, PrimeField(q.p)),
                                           Point(q.n, 0));
    std::cout << "rank " << d.rank() << "\n"
              << "shape "
              << (d.shape == DicksonForm::Shape::char2_pairs ? "char2_pairs"
                                                             : "oddchar_squares")
              << "\n";
    if (!a.out.empty()) write_text_file(a.out, dickson_to_json(d).dump(2) + "\n");
    if (!(recomposed == q)) {
        std::cerr << "verification failed: canonical form does not recompose\n";
        return kExitVerification;
    }
    std::cout << "verified\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact-arithmetic structure toolkit for low-degree polynomials "
                 "over prime fields"};
    app.require_subcommand(1);
    int jobs = 1;
    app.add_option("--jobs", jobs, "data-parallel kernel width (outputs identical)")
        ->check(CLI::Range(1, 64));

    AnalyzeArgs an;
    CLI::App* analyze = app.add_subcommand("analyze", "bias, norms, rank histogram");
    analyze->add_option("--input", an.input, "polynomial JSON")->required();
    analyze->add_option("--gowers", an.gowers, "norm orders to compute");
    analyze->add_flag("--exact", an.exact, "exact norms (default)");
    analyze->add_option("--mc", an.mc_samples, "Monte Carlo sample count");
    analyze->add_option("--seed", an.seed, "root seed");

    DecomposeArgs de;
    CLI::App* decompose = app.add_subcommand("decompose", "structure certificates");
    decompose->add_option("--input", de.input, "polynomial JSON")->required();
    decompose
        ->add_option("--mode", de.mode,
                     "cubic-bias|cubic-u3|quartic-bias|quartic-highchar|partition")
        ->required();
    decompose->add_option("--out", de.out, "certificate JSON path");
    decompose->add_option("--seed", de.seed, "root seed");

    ExperimentArgs ex;
    CLI::App* experiment = app.add_subcommand("experiment", "seeded CSV suite");
    experiment->add_option("--spec", ex.spec, "experiment spec JSON")->required();
    experiment->add_option("--out", ex.out, "CSV output path (default stdout)");

    int s4_m = 1;
    CLI::App* s4 = app.add_subcommand("s4-demo", "symmetric quartic case study");
    s4->add_option("--m", s4_m, "number of variable quadruples (n = 4m)")
        ->required()
        ->check(CLI::Range(1, 3));

    BcArgs bc;
    CLI::App* bccmd = app.add_subcommand("bc", "subspace inside an iterated sumset");
    bccmd->add_option("--input", bc.input, "dense set JSON")->required();
    bccmd->add_option("--out", bc.out, "certificate JSON path");

    CanonArgs ca;
    CLI::App* canon = app.add_subcommand("canonicalize", "quadratic canonical form");
    canon->add_option("--input", ca.input, "polynomial JSON")->required();
    canon->add_option("--out", ca.out, "canonical form JSON path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*analyze) return run_analyze(an);
        if (*decompose) return run_decompose(de);
        if (*experiment) return run_experiment(ex);
        if (*s4) return run_s4(s4_m);
        if (*bccmd) return run_bc(bc);
        if (*canon) return run_canonicalize(ca);
    } catch (const threshold_error& e) {
        std::cerr << "STAGE " << e.what() << "\n";
        return kExitThreshold;
    } catch (const verification_error& e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return kExitVerification;
    } catch (const resource_error& e) {
        std::cerr << "cost guard: " << e.what()
                  << " (reduce n, or raise POLYSTRUCT_MAX_TABLE)\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
