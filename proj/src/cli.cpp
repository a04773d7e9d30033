#include "cpmod/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <ostream>
#include <string>
#include <vector>

#include "cpmod/io.hpp"
#include "cpmod/oracle.hpp"

namespace cpmod {

namespace {

Json tolerance_json(const TolerancePolicy& tol) {
    Json j;
    j["eq_abs_tol"] = tol.eq_abs_tol;
    j["psd_tol"] = tol.psd_tol;
    j["rank_rel_tol"] = tol.rank_rel_tol;
    return j;
}

Json images_json(const ModuleCPMap& map) {
    Json j = Json::object();
    for (Eigen::Index r = 0; r < map.module.k; ++r)
        for (Eigen::Index s = 0; s < map.module.m; ++s)
            j[basis_key(r, s)] = matrix_to_json(map.image(r, s));
    return j;
}

Json cp_images_json(const CPMap& phi) {
    Json j = Json::object();
    for (Eigen::Index s = 0; s < phi.m; ++s)
        for (Eigen::Index t = 0; t < phi.m; ++t)
            j[basis_key(s, t)] = matrix_to_json(phi.image(s, t));
    return j;
}

Json quintuple_dims_json(const ModuleStinespring& q) {
    Json j;
    j["dH"] = q.dH;
    j["dK"] = q.dK;
    return j;
}

void render_text(const Json& j, std::ostream& out, const std::string& prefix) {
    for (const auto& item : j.items()) {
        const std::string key = prefix.empty() ? item.key() : prefix + "." + item.key();
        if (item.value().is_object())
            render_text(item.value(), out, key);
        else
            out << key << ": " << item.value().dump() << "\n";
    }
}

void emit(const Json& report, const std::string& format, std::ostream& out) {
    if (format == "text")
        render_text(report, out, "");
    else
        out << report.dump(2) << "\n";
}

double basis_identity_residual(const CMatrix& v, const ModuleCPMap& phi, const ModuleCPMap& psi) {
    double worst = 0.0;
    for (std::size_t i = 0; i < phi.images.size(); ++i)
        worst = std::max(worst, max_abs(v * psi.images[i] - phi.images[i]));
    return worst;
}

struct Command {
    std::string file;
    std::string map_a;
    std::string map_b;
    std::string element_file;
    std::string mode = "complete";
    std::uint64_t seed = 0;
    int samples = 64;
};

int cmd_validate(const Command& c, const TolerancePolicy& tol, Json& report) {
    const Problem problem = load_problem(c.file);
    const ModuleCPMap& map = problem.map(c.map_a);
    const ValidationReport v = validate_module_cp(map, tol);
    report["verdicts"]["valid"] = v.is_valid;
    report["verdicts"]["underlying_completely_positive"] = v.underlying_cp;
    report["verdicts"]["nondegenerate"] = is_nondegenerate_map(map, tol);
    report["certificates"]["underlying"] = cp_images_json(v.underlying);
    report["certificates"]["choi"] = matrix_to_json(choi(v.underlying).value);
    report["residuals"]["consistency"] = v.residual;
    return v.is_valid ? 0 : 1;
}

int cmd_stinespring(const Command& c, const TolerancePolicy& tol, bool verify, Json& report) {
    const Problem problem = load_problem(c.file);
    const ModuleCPMap& map = problem.map(c.map_a);
    const ModuleStinespring q = construct_stinespring(map, tol);
    report["certificates"]["dims"] = quintuple_dims_json(q);
    report["certificates"]["V"] = matrix_to_json(q.V);
    report["certificates"]["W"] = matrix_to_json(q.W);
    Json pi_x = Json::object();
    for (Eigen::Index r = 0; r < q.module.k; ++r)
        for (Eigen::Index s = 0; s < q.module.m; ++s)
            pi_x[basis_key(r, s)] = matrix_to_json(q.piX(r, s));
    report["certificates"]["pi_X"] = std::move(pi_x);
    Json pi_phi = Json::object();
    for (Eigen::Index s = 0; s < q.pi_phi.m; ++s)
        for (Eigen::Index t = 0; t < q.pi_phi.m; ++t)
            pi_phi[basis_key(s, t)] = matrix_to_json(q.pi_phi.pi(s, t));
    report["certificates"]["pi_phi"] = std::move(pi_phi);

    double fact = 0.0;
    for (std::size_t i = 0; i < map.images.size(); ++i)
        fact = std::max(fact, max_abs(map.images[i] - q.W.adjoint() * q.piX_images[i] * q.V));
    report["residuals"]["factorization"] = fact;
    report["residuals"]["coisometry"] =
        max_abs(q.W * q.W.adjoint() - CMatrix::Identity(q.dK, q.dK));
    if (verify)
        report["oracle"]["factorization"] = verify_factorization(q, map, SampleConfig{});
    return 0;
}

int cmd_compare(const Command& c, const TolerancePolicy& tol, bool verify, Json& report) {
    const Problem problem = load_problem(c.file);
    const ModuleCPMap& a = problem.map(c.map_a);
    const ModuleCPMap& b = problem.map(c.map_b);
    const bool eq = equivalent(a, b, tol);
    report["verdicts"]["equivalent"] = eq;
    if (eq) {
        const CMatrix v = connecting_partial_isometry(a, b, tol);
        report["certificates"]["V"] = matrix_to_json(v);
        report["residuals"]["intertwining"] = basis_identity_residual(v, a, b);
    }
    if (verify)
        report["oracle"]["equivalence_pointwise"] = verify_equivalence_pointwise(a, b, SampleConfig{});
    return eq ? 0 : 1;
}

int cmd_dominates(const Command& c, const TolerancePolicy& tol, Json& report) {
    const Problem problem = load_problem(c.file);
    const ModuleCPMap& a = problem.map(c.map_a);
    const ModuleCPMap& b = problem.map(c.map_b);
    const DominationMode mode = c.mode == "pointwise" ? DominationMode::pointwise_sampled
                                                      : DominationMode::complete;
    const DominationVerdict v = dominates(a, b, mode, tol, c.seed, c.samples);
    report["verdicts"]["dominated"] = v.dominated;
    report["verdicts"]["mode"] = c.mode;
    if (mode == DominationMode::pointwise_sampled) {
        report["verdicts"]["seed"] = c.seed;
        report["verdicts"]["samples"] = c.samples;
    }
    report["residuals"]["least_eigenvalue"] = v.margin;
    return v.dominated ? 0 : 1;
}

int cmd_rn(const Command& c, const TolerancePolicy& tol, bool verify, Json& report) {
    const Problem problem = load_problem(c.file);
    const ModuleCPMap& a = problem.map(c.map_a);
    const ModuleCPMap& b = problem.map(c.map_b);
    const RNDerivative d = rn_derivative(a, b, tol);
    report["verdicts"]["dominated"] = true;
    report["certificates"]["Delta1"] = matrix_to_json(d.Delta1);
    report["certificates"]["Delta2"] = matrix_to_json(d.Delta2);
    report["certificates"]["J"] = matrix_to_json(d.J);
    report["certificates"]["I"] = matrix_to_json(d.Imap);
    report["residuals"]["J_norm"] = operator_norm(d.J);
    report["residuals"]["I_norm"] = operator_norm(d.Imap);
    if (verify) {
        const ModuleStinespring q = construct_stinespring(b, tol);
        const ModuleCPMap compressed =
            compress(q, commutant_element_sqrt(CommutantElement{d.Delta1, d.Delta2}, tol), tol);
        report["oracle"]["equivalence_pointwise"] =
            verify_equivalence_pointwise(a, compressed, SampleConfig{});
    }
    return 0;
}

int cmd_compress(const Command& c, const TolerancePolicy& tol, Json& report) {
    const Problem problem = load_problem(c.file);
    const ModuleCPMap& map = problem.map(c.map_a);
    const CommutantElement e = load_element(c.element_file);
    const ModuleStinespring q = construct_stinespring(map, tol);
    const ModuleCPMap result = compress(q, e, tol);
    const ValidationReport v = validate_module_cp(result, tol);
    report["verdicts"]["valid"] = v.is_valid;
    report["certificates"]["images"] = images_json(result);
    report["residuals"]["consistency"] = v.residual;
    return v.is_valid ? 0 : 1;
}

int cmd_commutant(const Command& c, const TolerancePolicy& tol, Json& report) {
    const Problem problem = load_problem(c.file);
    const ModuleStinespring q = construct_stinespring(problem.map(c.map_a), tol);
    const CommutantBasis basis = commutant(q, tol);
    report["certificates"]["dims"] = quintuple_dims_json(q);
    report["certificates"]["dimension"] = basis.dimension();
    Json elements = Json::array();
    for (const CommutantElement& e : basis.elements) {
        Json pair;
        pair["T"] = matrix_to_json(e.T);
        pair["S"] = matrix_to_json(e.S);
        elements.push_back(std::move(pair));
    }
    report["certificates"]["basis"] = std::move(elements);
    return 0;
}

int cmd_purity(const Command& c, const TolerancePolicy& tol, Json& report) {
    const Problem problem = load_problem(c.file);
    const PurityReport v = is_pure(problem.map(c.map_a), tol);
    report["verdicts"]["pure"] = v.pure;
    report["certificates"]["commutant_dim"] = v.commutant_dim;
    return v.pure ? 0 : 1;
}

int cmd_reconstruct(const Command& c, const TolerancePolicy& tol, bool verify, Json& report) {
    const Problem problem = load_problem(c.file);
    const ModuleCPMap& a = problem.map(c.map_a);
    const ModuleCPMap& b = problem.map(c.map_b);
    const RNDerivative d = rn_derivative(a, b, tol);
    const ModuleStinespring q = construct_stinespring(b, tol);
    const Reconstruction rec = reconstruct_stinespring(q, d, tol);
    const QuintupleEquivalence eqv =
        quintuples_unitarily_equivalent(rec.quintuple, construct_stinespring(a, tol), tol);
    report["verdicts"]["unitarily_equivalent"] = eqv.equivalent;
    report["certificates"]["dims"] = quintuple_dims_json(rec.quintuple);
    report["certificates"]["U1"] = matrix_to_json(eqv.witness.U1);
    report["certificates"]["U2"] = matrix_to_json(eqv.witness.U2);
    report["residuals"]["witness"] = eqv.witness.max_residual;
    for (const std::string& w : rec.warnings)
        report["warnings"].push_back(w);
    if (verify)
        report["oracle"]["factorization"] = verify_factorization(rec.quintuple, a, SampleConfig{});
    return eqv.equivalent ? 0 : 1;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"comparison toolkit for completely positive maps on Hilbert C*-modules"};
    app.require_subcommand(1);
    app.fallthrough();

    double tol_value = TolerancePolicy{}.eq_abs_tol;
    std::string format = "json";
    bool verify = false;
    app.add_option("--tol", tol_value, "entrywise equality tolerance; the others scale with it");
    app.add_option("--format", format, "report format")->check(CLI::IsMember({"json", "text"}));
    app.add_flag("--verify", verify, "run sampled oracle checks and report their residuals");

    Command c;
    auto* validate = app.add_subcommand("validate", "check that a map is a module CP map");
    validate->add_option("file", c.file)->required();
    validate->add_option("map", c.map_a)->required();

    auto* stinespring = app.add_subcommand("stinespring", "build the Stinespring quintuple");
    stinespring->add_option("file", c.file)->required();
    stinespring->add_option("map", c.map_a)->required();

    auto* compare = app.add_subcommand("compare", "equivalence and connecting partial isometry");
    compare->add_option("file", c.file)->required();
    compare->add_option("mapA", c.map_a)->required();
    compare->add_option("mapB", c.map_b)->required();

    auto* dom = app.add_subcommand("dominates", "decide mapA =< mapB");
    dom->add_option("file", c.file)->required();
    dom->add_option("mapA", c.map_a)->required();
    dom->add_option("mapB", c.map_b)->required();
    dom->add_option("--mode", c.mode)->check(CLI::IsMember({"complete", "pointwise"}));
    dom->add_option("--seed", c.seed);
    dom->add_option("--samples", c.samples)->check(CLI::PositiveNumber);

    auto* rn = app.add_subcommand("rn", "Radon-Nikodym derivative of mapA with respect to mapB");
    rn->add_option("file", c.file)->required();
    rn->add_option("mapA", c.map_a)->required();
    rn->add_option("mapB", c.map_b)->required();

    auto* compress_cmd = app.add_subcommand("compress", "compress a map by a commutant element");
    compress_cmd->add_option("file", c.file)->required();
    compress_cmd->add_option("map", c.map_a)->required();
    compress_cmd->add_option("--element", c.element_file, "cpmod-element/1 file with T and S")
        ->required();

    auto* comm = app.add_subcommand("commutant", "orthonormal basis of the dilation commutant");
    comm->add_option("file", c.file)->required();
    comm->add_option("map", c.map_a)->required();

    auto* purity = app.add_subcommand("purity", "purity via the commutant dimension");
    purity->add_option("file", c.file)->required();
    purity->add_option("map", c.map_a)->required();

    auto* reconstruct = app.add_subcommand("reconstruct",
                                           "recover mapA's quintuple from mapB's via the derivative");
    reconstruct->add_option("file", c.file)->required();
    reconstruct->add_option("mapA", c.map_a)->required();
    reconstruct->add_option("mapB", c.map_b)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    TolerancePolicy tol;
    try {
        tol = scaled_tolerances(tol_value);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    Json report;
    report["command"] = app.get_subcommands().front()->get_name();
    Json args = Json::array();
    for (int i = 1; i < argc; ++i) args.push_back(std::string(argv[i]));
    report["arguments"] = std::move(args);
    report["tolerance"] = tolerance_json(tol);
    report["verdicts"] = Json::object();
    report["certificates"] = Json::object();
    report["residuals"] = Json::object();
    report["warnings"] = Json::array();

    int code = 2;
    try {
        if (app.got_subcommand(validate)) code = cmd_validate(c, tol, report);
        else if (app.got_subcommand(stinespring)) code = cmd_stinespring(c, tol, verify, report);
        else if (app.got_subcommand(compare)) code = cmd_compare(c, tol, verify, report);
        else if (app.got_subcommand(dom)) code = cmd_dominates(c, tol, report);
        else if (app.got_subcommand(rn)) code = cmd_rn(c, tol, verify, report);
        else if (app.got_subcommand(compress_cmd)) code = cmd_compress(c, tol, report);
        else if (app.got_subcommand(comm)) code = cmd_commutant(c, tol, report);
        else if (app.got_subcommand(purity)) code = cmd_purity(c, tol, report);
        else if (app.got_subcommand(reconstruct)) code = cmd_reconstruct(c, tol, verify, report);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    emit(report, format, out);
    return code;
}

} // namespace cpmod
