// JSON input/output: tensor files, polynomial files, witnesses, certificates.
// Rationals cross the boundary as "p/q" strings, indices as 1-based.
#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "centra/decomp.hpp"
#include "centra/equiv.hpp"
#include "centra/errors.hpp"
#include "centra/multiform.hpp"
#include "centra/polyjet.hpp"
#include "centra/rational.hpp"

namespace centra::io {

using nlohmann::json;

inline Rational rational_from_json(const json& j) {
    if (j.is_string()) {
        try {
            return Rational::from_string(j.get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw parse_error("BadRational", e.what());
        }
    }
    if (j.is_number_integer()) return Rational(static_cast<long>(j.get<long long>()));
    throw parse_error("BadRational", "rationals must be strings like \"p/q\" or integers");
}

inline json rational_to_json(const Rational& r) { return json(r.str()); }

inline RatMatrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty())
        throw parse_error("BadMatrix", "matrix must be a non-empty array of rows");
    const Index rows = static_cast<Index>(j.size());
    const Index cols = static_cast<Index>(j.at(0).size());
    RatMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        const json& row = j.at(static_cast<size_t>(i));
        if (!row.is_array() || static_cast<Index>(row.size()) != cols)
            throw parse_error("BadMatrix", "ragged matrix rows");
        for (Index c = 0; c < cols; ++c) m(i, c) = rational_from_json(row.at(static_cast<size_t>(c)));
    }
    return m;
}

inline json matrix_to_json(const RatMatrix& m) {
    json rows = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back(rational_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

/// TensorFile: {"order": d, "dim": n, "target_dim": r,
///              "entries": [{"idx": [1-based...], "val": ["p/q", ...]}]}.
/// Omitted entries are zero; duplicate idx is rejected.
inline MultiForm tensor_from_json(const json& j) {
    if (!j.is_object()) throw parse_error("BadTensor", "tensor file must be a JSON object");
    if (!j.contains("order") || !j.contains("dim"))
        throw parse_error("BadTensor", "tensor file needs \"order\" and \"dim\"");
    const int d = j.at("order").get<int>();
    const Index n = j.at("dim").get<Index>();
    const Index r = j.value("target_dim", Index{1});
    if (d < 3) throw parse_error("BadTensor", "order must be >= 3");
    if (n < 1 || r < 1) throw parse_error("BadTensor", "dim and target_dim must be >= 1");
    MultiForm f(n, d, r);
    std::vector<bool> seen(static_cast<size_t>(f.entries_per_component()), false);
    for (const json& rec : j.value("entries", json::array())) {
        if (!rec.contains("idx") || !rec.contains("val"))
            throw parse_error("BadTensor", "entry records need \"idx\" and \"val\"");
        const auto& jidx = rec.at("idx");
        if (!jidx.is_array() || static_cast<int>(jidx.size()) != d)
            throw parse_error("BadTensor", "idx must list exactly d indices");
        std::vector<Index> idx(static_cast<size_t>(d));
        for (int t = 0; t < d; ++t) {
            const Index onebased = jidx.at(static_cast<size_t>(t)).get<Index>();
            if (onebased < 1 || onebased > n)
                throw parse_error("BadTensor", "index out of range (indices are 1-based)");
            idx[static_cast<size_t>(t)] = onebased - 1;
        }
        const Index flat = f.flat(idx);
        if (seen[static_cast<size_t>(flat)])
            throw parse_error("BadTensor", "duplicate idx in tensor file");
        seen[static_cast<size_t>(flat)] = true;
        const auto& jval = rec.at("val");
        if (!jval.is_array() || static_cast<Index>(jval.size()) != r)
            throw parse_error("BadTensor", "val must list exactly target_dim rationals");
        for (Index c = 0; c < r; ++c)
            f.entry_flat(c, flat) = rational_from_json(jval.at(static_cast<size_t>(c)));
    }
    return f;
}

inline json tensor_to_json(const MultiForm& f) {
    json entries = json::array();
    std::vector<Index> idx(static_cast<size_t>(f.order()));
    for (Index flat = 0; flat < f.entries_per_component(); ++flat) {
        bool nonzero = false;
        for (Index c = 0; c < f.target_dim(); ++c) nonzero |= !f.entry_flat(c, flat).is_zero();
        if (!nonzero) continue;
        Index tmp = flat;
        for (int pos = f.order() - 1; pos >= 0; --pos) {
            idx[static_cast<size_t>(pos)] = tmp % f.dim() + 1;
            tmp /= f.dim();
        }
        json vals = json::array();
        for (Index c = 0; c < f.target_dim(); ++c)
            vals.push_back(rational_to_json(f.entry_flat(c, flat)));
        entries.push_back(json{{"idx", idx}, {"val", std::move(vals)}});
    }
    return json{{"order", f.order()},
                {"dim", f.dim()},
                {"target_dim", f.target_dim()},
                {"entries", std::move(entries)}};
}

/// PolyFile: {"nvars": n, "degree": d,
///            "terms": [{"exps": [e_1..e_n], "coef": "p/q"}]}.
inline HomogPoly poly_from_json(const json& j) {
    if (!j.is_object()) throw parse_error("BadPoly", "polynomial file must be a JSON object");
    if (!j.contains("nvars") || !j.contains("degree"))
        throw parse_error("BadPoly", "polynomial file needs \"nvars\" and \"degree\"");
    const Index n = j.at("nvars").get<Index>();
    const int d = j.at("degree").get<int>();
    if (n < 1 || d < 0) throw parse_error("BadPoly", "nvars must be >= 1 and degree >= 0");
    HomogPoly f(n, d);
    for (const json& rec : j.value("terms", json::array())) {
        if (!rec.contains("exps") || !rec.contains("coef"))
            throw parse_error("BadPoly", "term records need \"exps\" and \"coef\"");
        const auto& je = rec.at("exps");
        if (!je.is_array() || static_cast<Index>(je.size()) != n)
            throw parse_error("BadPoly", "exps must list one exponent per variable");
        std::vector<int> exps(static_cast<size_t>(n));
        int sum = 0;
        for (Index t = 0; t < n; ++t) {
            exps[static_cast<size_t>(t)] = je.at(static_cast<size_t>(t)).get<int>();
            if (exps[static_cast<size_t>(t)] < 0) throw parse_error("BadPoly", "negative exponent");
            sum += exps[static_cast<size_t>(t)];
        }
        if (sum != d) throw parse_error("BadPoly", "exponents do not sum to the degree");
        if (!f.coeff(exps).is_zero()) throw parse_error("BadPoly", "duplicate exps in polynomial file");
        f.set_coeff(exps, rational_from_json(rec.at("coef")));
    }
    return f;
}

inline json poly_to_json(const HomogPoly& f) {
    json terms = json::array();
    for (const auto& [e, c] : f.terms())
        terms.push_back(json{{"exps", e}, {"coef", rational_to_json(c)}});
    return json{{"nvars", f.nvars()}, {"degree", f.degree()}, {"terms", std::move(terms)}};
}

/// Witness: {"phis": [matrix, ...], "psi": matrix}.
inline EquivalenceWitness witness_from_json(const json& j) {
    if (!j.is_object() || !j.contains("phis") || !j.contains("psi"))
        throw parse_error("BadWitness", "witness file needs \"phis\" and \"psi\"");
    EquivalenceWitness w;
    for (const json& m : j.at("phis")) w.phis.push_back(matrix_from_json(m));
    w.psi = matrix_from_json(j.at("psi"));
    return w;
}

inline json witness_to_json(const EquivalenceWitness& w) {
    json phis = json::array();
    for (const auto& m : w.phis) phis.push_back(matrix_to_json(m));
    return json{{"phis", std::move(phis)}, {"psi", matrix_to_json(w.psi)}};
}

inline json certificate_to_json(const DecompositionCertificate& c) {
    json blocks = json::array();
    for (size_t i = 0; i < c.blocks.size(); ++i) {
        blocks.push_back(json{{"dim", c.block_dims[i]},
                              {"indecomposable", c.flags[i].indecomposable},
                              {"absolutely_indecomposable", c.flags[i].absolutely_indecomposable},
                              {"residue_degree", c.flags[i].residue_degree},
                              {"tensor", tensor_to_json(c.blocks[i])}});
    }
    json idems = json::array();
    for (const auto& e : c.idempotents.elements) idems.push_back(matrix_to_json(e));
    return json{{"p", matrix_to_json(c.p)},
                {"block_dims", c.block_dims},
                {"radical_dim", c.radical_dim},
                {"idempotents", std::move(idems)},
                {"blocks", std::move(blocks)}};
}

inline json normalized_to_json(const NormalizedEquivalence& n) {
    return json{{"a", rational_to_json(n.scalar)},
                {"phi", matrix_to_json(n.phi)},
                {"root", matrix_to_json(n.root)}};
}

inline json torelli_to_json(const TorelliCertificate& c) {
    return json{{"c", rational_to_json(c.c)}, {"B", matrix_to_json(c.b)}, {"exact", c.exact}};
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("FileNotFound", "cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw parse_error("BadJson", e.what());
    }
}

inline MultiForm read_tensor_file(const std::string& path) {
    try {
        return tensor_from_json(load_json_file(path));
    } catch (const json::exception& e) {
        throw parse_error("BadTensor", e.what());
    }
}

inline HomogPoly read_poly_file(const std::string& path) {
    try {
        return poly_from_json(load_json_file(path));
    } catch (const json::exception& e) {
        throw parse_error("BadPoly", e.what());
    }
}

inline EquivalenceWitness read_witness_file(const std::string& path) {
    try {
        return witness_from_json(load_json_file(path));
    } catch (const json::exception& e) {
        throw parse_error("BadWitness", e.what());
    }
}

}  // namespace centra::io
