#include "cpmod/io.hpp"

#include <fstream>
#include <set>

namespace cpmod {

namespace {

void require_keys(const Json& j, const std::set<std::string>& keys, const std::string& where) {
    if (!j.is_object())
        throw ProblemFormat(where + ": expected an object");
    for (const auto& item : j.items())
        if (!keys.count(item.key()))
            throw ProblemFormat(where + ": unknown field '" + item.key() + "'");
    for (const auto& key : keys)
        if (!j.contains(key))
            throw ProblemFormat(where + ": missing field '" + key + "'");
}

Eigen::Index integer_field(const Json& j, const std::string& where, Eigen::Index least) {
    if (!j.is_number_integer())
        throw ProblemFormat(where + ": expected an integer");
    const auto v = j.get<long long>();
    if (v < least)
        throw ProblemFormat(where + ": value " + std::to_string(v) + " is below " +
                            std::to_string(least));
    return static_cast<Eigen::Index>(v);
}

} // namespace

const ModuleCPMap& Problem::map(const std::string& name) const {
    for (const auto& [key, value] : maps)
        if (key == name) return value;
    throw ProblemFormat("problem file has no map named '" + name + "'");
}

std::string basis_key(Eigen::Index r, Eigen::Index s) {
    return "E_" + std::to_string(r + 1) + std::to_string(s + 1);
}

Json complex_to_json(const Complex& z) {
    return Json::array({z.real(), z.imag()});
}

Complex complex_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ProblemFormat("complex scalar: expected a [re, im] pair of numbers");
    return {j[0].get<double>(), j[1].get<double>()};
}

Json matrix_to_json(const CMatrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back(complex_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

CMatrix matrix_from_json(const Json& j) {
    if (!j.is_array())
        throw ProblemFormat("matrix: expected an array of rows");
    const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    Eigen::Index cols = 0;
    if (rows > 0) {
        if (!j[0].is_array())
            throw ProblemFormat("matrix: expected an array of rows");
        cols = static_cast<Eigen::Index>(j[0].size());
    }
    CMatrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const Json& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
            throw ProblemFormat("matrix: ragged rows");
        for (Eigen::Index c = 0; c < cols; ++c)
            m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
    }
    return m;
}

CMatrix matrix_from_json(const Json& j, Eigen::Index rows, Eigen::Index cols) {
    CMatrix m = matrix_from_json(j);
    if (rows == 0 && m.rows() == 0) return CMatrix(0, cols);   // [] carries no column count
    if (m.rows() != rows || m.cols() != cols)
        throw ProblemFormat("matrix: expected shape " + std::to_string(rows) + "x" +
                            std::to_string(cols) + ", got " + std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()));
    return m;
}

Problem problem_from_json(const Json& j) {
    require_keys(j, {"format", "algebra", "module", "H_dim", "K_dim", "maps"}, "problem");
    if (!j["format"].is_string() || j["format"].get<std::string>() != "cpmod/1")
        throw ProblemFormat("problem: format tag must be \"cpmod/1\"");
    require_keys(j["algebra"], {"m"}, "algebra");
    require_keys(j["module"], {"k"}, "module");

    Problem problem;
    problem.module.m = integer_field(j["algebra"]["m"], "algebra.m", 1);
    problem.module.k = integer_field(j["module"]["k"], "module.k", 1);
    problem.p = integer_field(j["H_dim"], "H_dim", 0);
    problem.q = integer_field(j["K_dim"], "K_dim", 0);
    if (problem.module.m > 9 || problem.module.k > 9)
        throw ProblemFormat("problem: basis keys encode single-digit indices (k, m <= 9)");

    std::set<std::string> expected;
    for (Eigen::Index r = 0; r < problem.module.k; ++r)
        for (Eigen::Index s = 0; s < problem.module.m; ++s)
            expected.insert(basis_key(r, s));

    if (!j["maps"].is_object())
        throw ProblemFormat("maps: expected an object");
    for (const auto& item : j["maps"].items()) {
        require_keys(item.value(), expected, "maps." + item.key());
        ModuleCPMap map = zero_module_cp_map(problem.module, problem.p, problem.q);
        for (Eigen::Index r = 0; r < problem.module.k; ++r)
            for (Eigen::Index s = 0; s < problem.module.m; ++s)
                map.image(r, s) = matrix_from_json(item.value()[basis_key(r, s)],
                                                   problem.q, problem.p);
        problem.maps.emplace_back(item.key(), std::move(map));
    }
    return problem;
}

Json problem_to_json(const Problem& problem) {
    Json j;
    j["format"] = "cpmod/1";
    j["algebra"] = Json{{"m", problem.module.m}};
    j["module"] = Json{{"k", problem.module.k}};
    j["H_dim"] = problem.p;
    j["K_dim"] = problem.q;
    Json maps = Json::object();
    for (const auto& [name, map] : problem.maps) {
        Json images = Json::object();
        for (Eigen::Index r = 0; r < problem.module.k; ++r)
            for (Eigen::Index s = 0; s < problem.module.m; ++s)
                images[basis_key(r, s)] = matrix_to_json(map.image(r, s));
        maps[name] = std::move(images);
    }
    j["maps"] = std::move(maps);
    return j;
}

namespace {

Json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ProblemFormat("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ProblemFormat("'" + path + "': " + e.what());
    }
}

} // namespace

Problem load_problem(const std::string& path) {
    return problem_from_json(parse_file(path));
}

CommutantElement element_from_json(const Json& j) {
    require_keys(j, {"format", "T", "S"}, "element");
    if (!j["format"].is_string() || j["format"].get<std::string>() != "cpmod-element/1")
        throw ProblemFormat("element: format tag must be \"cpmod-element/1\"");
    CommutantElement e{matrix_from_json(j["T"]), matrix_from_json(j["S"])};
    if (e.T.rows() != e.T.cols() || e.S.rows() != e.S.cols())
        throw ProblemFormat("element: T and S must be square");
    return e;
}

Json element_to_json(const CommutantElement& e) {
    Json j;
    j["format"] = "cpmod-element/1";
    j["T"] = matrix_to_json(e.T);
    j["S"] = matrix_to_json(e.S);
    return j;
}

CommutantElement load_element(const std::string& path) {
    return element_from_json(parse_file(path));
}

} // namespace cpmod
