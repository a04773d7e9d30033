// io.hpp — Problem-file schema (format "cpmod/1") and JSON helpers.
//
// A problem file fixes the module shape and carries a named table of module
// CP maps by their matrix-unit images:
//
//   {
//     "format": "cpmod/1",
//     "algebra": {"m": 2},
//     "module":  {"k": 2},
//     "H_dim": 2,
//     "K_dim": 4,
//     "maps": { "Phi": { "E_11": [[[re,im], ...], ...], ... }, ... }
//   }
//
// Basis keys "E_rs" are 1-indexed and row-major; matrices are row-major
// nested arrays; complex scalars are two-element [re, im] arrays. The schema
// is strict: unknown fields, missing basis keys, or malformed entries are
// rejected with ProblemFormat. Commutant elements travel in a companion
// format "cpmod-element/1" with fields "T" and "S".

#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cpmod/compare.hpp"

namespace cpmod {

using Json = nlohmann::ordered_json;

struct Problem {
    HilbertModule module;
    Eigen::Index p = 0, q = 0;
    std::vector<std::pair<std::string, ModuleCPMap>> maps;   // file order

    const ModuleCPMap& map(const std::string& name) const;   // throws ProblemFormat
};

// 1-indexed row-major basis key, e.g. "E_12".
std::string basis_key(Eigen::Index r, Eigen::Index s);

Json complex_to_json(const Complex& z);
Complex complex_from_json(const Json& j);

Json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const Json& j);
CMatrix matrix_from_json(const Json& j, Eigen::Index rows, Eigen::Index cols);

Problem problem_from_json(const Json& j);
Json problem_to_json(const Problem& problem);
Problem load_problem(const std::string& path);

CommutantElement element_from_json(const Json& j);
Json element_to_json(const CommutantElement& e);
CommutantElement load_element(const std::string& path);

} // namespace cpmod
