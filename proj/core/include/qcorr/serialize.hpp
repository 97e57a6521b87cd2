#pragma once

#include "qcorr/correlation.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace qcorr {

// All interchange documents use ordered_json so that key order is the
// insertion order below and serialize -> parse -> serialize is
// byte-identical.
using Json = nlohmann::ordered_json;

// Schemas. Complex scalars are [re, im]; a matrix is an array of rows of
// such pairs; a vector is a flat array of pairs.
//
//   QuantumSpace      {"blocks": [n_0, ...]}
//   QuantumFamily     {"P": space, "O": space, "d": int,
//                      "gens": [k][l][i][j][s][t] = matrix}
//   CorrelationTensor {"P": space, "O": space,
//                      "X": [k][k'][l][l'][i][j][i'][j'][s][t][s'][t'] = pair}
//   Realization       {"phi1": family, "phi2": family,
//                      "xi": vector}  or  {"...", "density": matrix}
//   AlgebraElement    array of one matrix per block (space implicit)
//   BlockLinearMap    {"dom": space, "cod": space,
//                      "images": [k][i][j] = element}
Json to_json(const QuantumSpace& space);
Json to_json(const Matrix& m);
Json to_json(const Vector& v);
Json to_json(const AlgebraElement& x);
Json to_json(const QuantumFamily& F);
Json to_json(const CorrelationTensor& T);
Json to_json(const Realization& R);
Json to_json(const BlockLinearMap& m);

// Parsers throw ShapeError whose message starts with the JSON path of the
// offending value, e.g. "$.gens[0][1]: expected an array". path is the
// prefix for the document root.
QuantumSpace space_from_json(const Json& j, const std::string& path = "$");
Matrix matrix_from_json(const Json& j, const std::string& path = "$");
Vector vector_from_json(const Json& j, const std::string& path = "$");
AlgebraElement element_from_json(const Json& j, const QuantumSpace& space,
                                 const std::string& path = "$");
QuantumFamily family_from_json(const Json& j, const std::string& path = "$");
CorrelationTensor correlation_from_json(const Json& j, const std::string& path = "$");
Realization realization_from_json(const Json& j, const std::string& path = "$");
BlockLinearMap map_from_json(const Json& j, const std::string& path = "$");

// The one rendering used everywhere: two-space indent plus a trailing
// newline.
std::string dump_json(const Json& j);

// Reads and parses a file; a syntax error surfaces as ShapeError citing
// the byte offset nlohmann reports.
Json load_json_file(const std::string& filename);

void write_text_file(const std::string& filename, const std::string& text);

}  // namespace qcorr
