#include "polystruct/io.hpp"

#include <fstream>
#include <sstream>

#include "polystruct/errors.hpp"

namespace polystruct {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw structural_error("malformed input: " + what);
}

void check_schema(const json& j, const std::string& what) {
    require(j.is_object(), what + " is not a JSON object");
    if (j.contains("schema"))
        require(j["schema"].is_number_integer() && j["schema"].get<int>() == 1,
                what + " has an unsupported schema version");
}

int get_prime(const json& j, const std::string& what) {
    require(j.contains("p") && j["p"].is_number_integer(), what + " misses \"p\"");
    int p = j["p"].get<int>();
    require(p >= 2 && p <= kMaxPrime, what + " has p out of range");
    PrimeField F(p);  // throws structural_error when p is composite
    (void)F;
    return p;
}

int get_dim(const json& j, const std::string& what) {
    require(j.contains("n") && j["n"].is_number_integer(), what + " misses \"n\"");
    int n = j["n"].get<int>();
    require(n >= 0 && n <= 64, what + " has n out of range");
    return n;
}

}  // namespace

json polynomial_to_json(const Polynomial& f) {
    json terms = json::array();
    for (const auto& [e, c] : f.terms)
        terms.push_back({{"exps", e}, {"coeff", c}});
    return {{"schema", 1}, {"p", f.p}, {"n", f.n}, {"terms", terms}};
}

Polynomial polynomial_from_json(const json& j) {
    check_schema(j, "polynomial");
    int p = get_prime(j, "polynomial");
    int n = get_dim(j, "polynomial");
    require(j.contains("terms") && j["terms"].is_array(), "polynomial misses \"terms\"");
    Polynomial f(p, n);
    for (const json& t : j["terms"]) {
        require(t.is_object() && t.contains("exps") && t.contains("coeff"),
                "polynomial term shape");
        require(t["exps"].is_array() &&
                    static_cast<int>(t["exps"].size()) == n,
                "polynomial term exponent length");
        Exponents e;
        for (const json& x : t["exps"]) {
            require(x.is_number_integer(), "polynomial exponent type");
            int v = x.get<int>();
            require(v >= 0 && v < p, "polynomial exponent out of reduced range");
            e.push_back(v);
        }
        require(t["coeff"].is_number_integer(), "polynomial coefficient type");
        int c = t["coeff"].get<int>();
        require(c >= 0 && c < p, "polynomial coefficient out of range");
        f.add_term(e, c);
    }
    return f;
}

json subspace_to_json(const AffineSubspace& V) {
    return {{"schema", 1}, {"p", V.p}, {"n", V.n}, {"empty", V.empty},
            {"basis", V.basis}, {"offset", V.offset}};
}

AffineSubspace subspace_from_json(const json& j) {
    check_schema(j, "subspace");
    int p = get_prime(j, "subspace");
    int n = get_dim(j, "subspace");
    if (j.contains("empty") && j["empty"].get<bool>())
        return AffineSubspace::empty_space(p, n);
    require(j.contains("basis") && j["basis"].is_array(), "subspace misses \"basis\"");
    Matrix gens;
    for (const json& row : j["basis"]) {
        require(row.is_array() && static_cast<int>(row.size()) == n,
                "subspace basis row length");
        gens.push_back(row.get<std::vector<int>>());
    }
    Point off(n, 0);
    if (j.contains("offset")) {
        require(j["offset"].is_array() && static_cast<int>(j["offset"].size()) == n,
                "subspace offset length");
        off = j["offset"].get<Point>();
    }
    return AffineSubspace::from_span(p, n, gens, off);
}

json dense_set_to_json(const DenseSet& A) {
    std::vector<long long> idx;
    for (long long i = 0; i < A.size(); ++i)
        if (A.contains_index(i)) idx.push_back(i);
    return {{"schema", 1}, {"p", A.p}, {"n", A.n}, {"members", idx}};
}

DenseSet dense_set_from_json(const json& j) {
    check_schema(j, "dense set");
    int p = get_prime(j, "dense set");
    int n = get_dim(j, "dense set");
    require(pow_ll(p, n) <= max_table_size(), "dense set exceeds the table cap");
    require(j.contains("members") && j["members"].is_array(),
            "dense set misses \"members\"");
    std::vector<long long> idx;
    for (const json& x : j["members"]) {
        require(x.is_number_integer(), "dense set member type");
        long long v = x.get<long long>();
        require(v >= 0 && v < pow_ll(p, n), "dense set member out of range");
        idx.push_back(v);
    }
    return DenseSet::from_indices(p, n, idx);
}

std::string truth_table_to_bytes(const TruthTable& t) {
    std::string out = "PSTT";
    out.push_back(static_cast<char>(t.p));
    out.push_back(static_cast<char>(t.n));
    out.push_back(0);
    out.push_back(0);
    for (std::uint8_t v : t.values) out.push_back(static_cast<char>(v));
    return out;
}

TruthTable truth_table_from_bytes(const std::string& bytes) {
    require(bytes.size() >= 8 && bytes.compare(0, 4, "PSTT") == 0,
            "truth table header");
    int p = static_cast<unsigned char>(bytes[4]);
    int n = static_cast<unsigned char>(bytes[5]);
    require(p >= 2 && p <= kMaxPrime, "truth table modulus");
    long long size = pow_ll(p, n);
    require(static_cast<long long>(bytes.size()) == 8 + size, "truth table length");
    TruthTable t(p, n);
    for (long long i = 0; i < size; ++i) {
        int v = static_cast<unsigned char>(bytes[8 + i]);
        require(v < p, "truth table value out of range");
        t.values[i] = static_cast<std::uint8_t>(v);
    }
    return t;
}

json linear_form_to_json(const LinearForm& l) {
    return {{"p", l.p}, {"coefficients", l.coefficients}, {"constant", l.constant}};
}

LinearForm linear_form_from_json(const json& j) {
    require(j.is_object() && j.contains("p") && j.contains("coefficients"),
            "linear form shape");
    LinearForm l(j["p"].get<int>(), j["coefficients"].get<std::vector<int>>(),
                 j.value("constant", 0));
    return l;
}

json dickson_to_json(const DicksonForm& d) {
    return {{"schema", 1},
            {"p", d.p},
            {"n", d.n},
            {"T", d.T},
            {"alphas", d.alphas},
            {"shape", d.shape == DicksonForm::Shape::char2_pairs ? "char2_pairs"
                                                                 : "oddchar_squares"},
            {"rank", d.rank()},
            {"residual_linear", linear_form_to_json(d.residual_linear)},
            {"constant", d.constant}};
}

json cubic_structure_to_json(const CubicStructure& s) {
    json ells = json::array(), qs = json::array(), inner = json::array();
    for (const LinearForm& l : s.ells) ells.push_back(linear_form_to_json(l));
    for (const Polynomial& q : s.qs) qs.push_back(polynomial_to_json(q));
    for (const LinearForm& l : s.inner_ells) inner.push_back(linear_form_to_json(l));
    return {{"schema", 1},
            {"variant", s.variant == CubicStructure::Variant::bias_form ? "bias" : "u3"},
            {"p", s.p},
            {"n", s.n},
            {"c1", s.c1()},
            {"c2", s.c2()},
            {"ells", ells},
            {"qs", qs},
            {"q0", polynomial_to_json(s.q0)},
            {"inner_ells", inner},
            {"g", polynomial_to_json(s.g)},
            {"metrics",
             {{"delta", s.delta},
              {"r_target", s.r_target},
              {"bc_k", s.bc_k},
              {"v_dim", s.v_dim},
              {"u_dim", s.u_dim},
              {"pipeline_c", s.pipeline_c}}}};
}

json quartic_structure_to_json(const QuarticStructure& s) {
    json ells = json::array(), gs = json::array(), pairs = json::array();
    for (const LinearForm& l : s.ells) ells.push_back(linear_form_to_json(l));
    for (const Polynomial& g : s.gs) gs.push_back(polynomial_to_json(g));
    for (const QuadraticPair& pr : s.pairs)
        pairs.push_back({{"q", polynomial_to_json(pr.q)},
                         {"q2", polynomial_to_json(pr.q2)}});
    return {{"schema", 1},
            {"variant",
             s.variant == QuarticStructure::Variant::bias_form ? "bias" : "highchar"},
            {"p", s.p},
            {"n", s.n},
            {"ells", ells},
            {"gs", gs},
            {"pairs", pairs},
            {"g0", polynomial_to_json(s.g0)},
            {"metrics",
             {{"delta", s.delta},
              {"t_directions", s.t_directions},
              {"quadratics_kept", s.quadratics_kept},
              {"chart_codim", s.chart_codim}}}};
}

json partition_to_json(const QuarticPartition& part) {
    json cells = json::array();
    for (const CellCertificate& c : part.cells)
        cells.push_back({{"cell", subspace_to_json(c.cell)},
                         {"dim", c.cell.dim()},
                         {"degree", c.degree},
                         {"restriction", polynomial_to_json(c.restriction)},
                         {"cubic_rank", c.cubic_cert.r}});
    return {{"schema", 1},
            {"V", subspace_to_json(part.V)},
            {"outer_forms", part.outer_forms},
            {"rounds", part.rounds},
            {"cells", cells}};
}

std::string partition_csv(const QuarticPartition& part) {
    std::ostringstream out;
    out << "cell_index,dim,degree_of_restriction\n";
    for (size_t i = 0; i < part.cells.size(); ++i)
        out << i << "," << part.cells[i].cell.dim() << "," << part.cells[i].degree
            << "\n";
    return out.str();
}

json bc_certificate_to_json(const BCCertificate& cert) {
    json chain = json::array();
    for (const BCStep& s : cert.chain)
        chain.push_back({{"alpha", linear_form_to_json(s.alpha)},
                         {"value", s.value},
                         {"count_before", s.count_before},
                         {"count_after", s.count_after},
                         {"dim_after", s.dim_after}});
    return {{"schema", 1},
            {"k", cert.k},
            {"W", subspace_to_json(cert.W)},
            {"chain", chain},
            {"mu0", cert.mu0},
            {"mu_final", cert.mu_final},
            {"codim_bound", cert.codim_bound},
            {"density_terminal", cert.density_terminal}};
}

json s4_report_to_json(const S4Report& rep) {
    return {{"schema", 1},
            {"m", rep.m},
            {"n", rep.n},
            {"basis_identity", rep.basis_identity},
            {"s2_identity", rep.s2_identity},
            {"v0_identity", rep.v0_identity},
            {"coset_degrees", rep.coset_degrees},
            {"coset_degree_list", rep.coset_degree_list}};
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw structural_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw structural_error("cannot write file: " + path);
    out << content;
}

json parse_json_file(const std::string& path) {
    std::string text = read_text_file(path);
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded())
        throw structural_error("malformed JSON in " + path);
    return j;
}

}  // namespace polystruct
