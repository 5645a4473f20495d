// centra: exact center algebras, direct-sum decomposition, symmetric
// equivalence and Jacobian-span reconstruction for multilinear forms over Q.
//
// Exit codes: 0 ok, 2 input parse error, 3 mathematical precondition violated,
// 4 invalid witness, 5 randomized splitting retry limit.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "centra/center.hpp"
#include "centra/decomp.hpp"
#include "centra/equiv.hpp"
#include "centra/io.hpp"
#include "centra/multiform.hpp"
#include "centra/polyjet.hpp"
#include "centra/rng.hpp"

namespace {

using centra::io::json;

void emit(const json& j, const std::string& output_path) {
    if (output_path.empty()) {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream out(output_path);
    if (!out) throw centra::parse_error("FileNotFound", "cannot write '" + output_path + "'");
    out << j.dump(2) << "\n";
}

int run_center(const std::string& input, const std::string& output) {
    const centra::MultiForm f = centra::io::read_tensor_file(input);
    const centra::CenterBasis cb = centra::center_basis(f);
    json basis = json::array();
    for (const auto& m : cb.basis) basis.push_back(centra::io::matrix_to_json(m));
    emit(json{{"dim", cb.dim()},
              {"basis", std::move(basis)},
              {"is_central", cb.dim() == 1},
              {"commutes", centra::center_commutes(cb)},
              {"closed_under_product", centra::center_closed_under_product(cb)},
              {"contains_identity", cb.contains_identity},
              {"nondegenerate", centra::is_nondegenerate(f)}},
         output);
    return 0;
}

int run_decompose(const std::string& input, std::uint64_t seed, bool verify,
                  const std::string& output) {
    const centra::MultiForm f = centra::io::read_tensor_file(input);
    const centra::DecompositionCertificate cert = centra::decompose(f, seed);
    json j = centra::io::certificate_to_json(cert);
    if (verify) j["verified"] = centra::verify_certificate(f, cert);
    emit(j, output);
    return 0;
}

int run_density(centra::Index n, int d, centra::Index r, int trials, long bound,
                std::uint64_t seed, const std::string& output) {
    if (trials < 1) throw centra::precondition_error("BadTrials", "need trials >= 1");
    centra::Rng rng(seed);
    int central = 0, nondeg = 0;
    for (int t = 0; t < trials; ++t) {
        const centra::MultiForm f = centra::random_form(n, d, r, bound, rng.next());
        if (centra::is_nondegenerate(f)) ++nondeg;
        if (centra::is_central(f)) ++central;
    }
    const centra::Rational fc(central, trials), fn(nondeg, trials);
    emit(json{{"n", n},
              {"d", d},
              {"target_dim", r},
              {"trials", trials},
              {"bound", bound},
              {"seed", seed},
              {"fraction_central", fc.to_double()},
              {"fraction_central_exact", fc.str()},
              {"fraction_nondegenerate", fn.to_double()},
              {"fraction_nondegenerate_exact", fn.str()}},
         output);
    return 0;
}

int run_torelli(const std::string& f_path, const std::string& g_path, std::uint64_t seed,
                const std::string& output) {
    const centra::HomogPoly f = centra::io::read_poly_file(f_path);
    const centra::HomogPoly g = centra::io::read_poly_file(g_path);
    const centra::TorelliCertificate cert = centra::torelli_reconstruct(f, g, seed);
    json j = centra::io::torelli_to_json(cert);
    j["verified"] = centra::verify_torelli(f, g, cert);
    emit(j, output);
    return 0;
}

int run_equiv_normalize(const std::string& delta_path, const std::string& theta_path,
                        const std::string& witness_path, std::uint64_t seed,
                        const std::string& output) {
    const centra::MultiForm delta = centra::io::read_tensor_file(delta_path);
    const centra::MultiForm theta = centra::io::read_tensor_file(theta_path);
    const centra::EquivalenceWitness w = centra::io::read_witness_file(witness_path);
    const centra::NormalizedEquivalence nz = centra::normalize(delta, theta, w, seed);
    json j = centra::io::normalized_to_json(nz);
    // round-trip check of the emitted certificate
    const centra::MultiForm lhs = centra::apply_target(delta, w.psi);
    const centra::MultiForm rhs = nz.scalar * centra::transform_modes(
        theta, std::vector<centra::RatMatrix>(static_cast<size_t>(theta.order()), nz.phi));
    j["verified"] = lhs == rhs;
    emit(j, output);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact center algebras and decompositions of multilinear forms over Q"};
    app.require_subcommand(1);

    std::string input, input2, input3, output;
    std::uint64_t seed = 0;
    bool verify = false;
    centra::Index n = 2, r = 1;
    int d = 3, trials = 100;
    long bound = 9;

    auto* c_center = app.add_subcommand("center", "center algebra of a tensor file");
    c_center->add_option("tensor", input, "TensorFile JSON")->required();
    c_center->add_option("--output", output, "write the report to a file");

    auto* c_dec = app.add_subcommand("decompose", "direct-sum decomposition certificate");
    c_dec->add_option("tensor", input, "TensorFile JSON")->required();
    c_dec->add_option("--seed", seed, "random seed for the idempotent splitter");
    c_dec->add_flag("--verify", verify, "re-verify the certificate before emitting");
    c_dec->add_option("--output", output, "write the certificate to a file");

    auto* c_den = app.add_subcommand("density", "fraction of central forms among random ones");
    c_den->add_option("--n", n, "dimension")->required();
    c_den->add_option("--d", d, "order")->required();
    c_den->add_option("--r", r, "target dimension (default 1)");
    c_den->add_option("--trials", trials, "number of samples")->required();
    c_den->add_option("--bound", bound, "entries drawn from [-bound, bound]")->required();
    c_den->add_option("--seed", seed, "random seed");
    c_den->add_option("--output", output, "write the report to a file");

    auto* c_tor = app.add_subcommand("torelli", "recover g = c*f(Bx) from equal Jacobian spans");
    c_tor->add_option("f", input, "PolyFile JSON for f")->required();
    c_tor->add_option("g", input2, "PolyFile JSON for g")->required();
    c_tor->add_option("--seed", seed, "random seed");
    c_tor->add_option("--output", output, "write the certificate to a file");

    auto* c_eq = app.add_subcommand("equiv-normalize",
                                    "normalize a symmetric-equivalence witness to (a, phi)");
    c_eq->add_option("delta", input, "TensorFile JSON for Delta")->required();
    c_eq->add_option("theta", input2, "TensorFile JSON for Theta")->required();
    c_eq->add_option("witness", input3, "witness JSON (phis, psi)")->required();
    c_eq->add_option("--seed", seed, "random seed");
    c_eq->add_option("--output", output, "write the result to a file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_center->parsed()) return run_center(input, output);
        if (c_dec->parsed()) return run_decompose(input, seed, verify, output);
        if (c_den->parsed()) return run_density(n, d, r, trials, bound, seed, output);
        if (c_tor->parsed()) return run_torelli(input, input2, seed, output);
        if (c_eq->parsed()) return run_equiv_normalize(input, input2, input3, seed, output);
    } catch (const centra::parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const centra::witness_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const centra::retry_limit_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    } catch (const centra::precondition_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
