// io.hpp -- serialization: versioned JSON for polynomials, subspaces, dense
// sets, and certificates; the binary truth-table format; CSV emitters.
#pragma once

#include <string>

#include "json.hpp"
#include "polystruct/addcomb.hpp"
#include "polystruct/cubic.hpp"
#include "polystruct/poly.hpp"
#include "polystruct/quadform.hpp"
#include "polystruct/quartic.hpp"
#include "polystruct/subspace.hpp"

namespace polystruct {

using nlohmann::json;

// {"schema":1,"p":..,"n":..,"terms":[{"exps":[..],"coeff":..},..]}
json polynomial_to_json(const Polynomial& f);
Polynomial polynomial_from_json(const json& j);

// {"schema":1,"p":..,"n":..,"basis":[[..]],"offset":[..]}
json subspace_to_json(const AffineSubspace& V);
AffineSubspace subspace_from_json(const json& j);

// {"schema":1,"p":..,"n":..,"members":[indices]}
json dense_set_to_json(const DenseSet& A);
DenseSet dense_set_from_json(const json& j);

// 8-byte header: magic "PSTT", p as u8, n as u8, two zero pad bytes; then
// p^n value bytes in point-encoding order.
std::string truth_table_to_bytes(const TruthTable& t);
TruthTable truth_table_from_bytes(const std::string& bytes);

json linear_form_to_json(const LinearForm& l);
LinearForm linear_form_from_json(const json& j);

json dickson_to_json(const DicksonForm& d);
json cubic_structure_to_json(const CubicStructure& s);
json quartic_structure_to_json(const QuarticStructure& s);
json partition_to_json(const QuarticPartition& part);
// Fixed header cell_index,dim,degree_of_restriction.
std::string partition_csv(const QuarticPartition& part);
json bc_certificate_to_json(const BCCertificate& cert);
json s4_report_to_json(const S4Report& rep);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
// Throws structural_error with a parse diagnostic on malformed input.
json parse_json_file(const std::string& path);

}  // namespace polystruct
