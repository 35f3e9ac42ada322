#pragma once

// ProblemFile: the JSON wire format for states, POVMs and projectors.
// Complex numbers are [re, im] pairs, matrices row-major; this is the one
// bit-exact interchange format of the project.

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "entrolab/matrix.hpp"
#include "entrolab/quantum.hpp"
#include "entrolab/relations.hpp"

namespace entrolab {

struct ProblemFile {
    std::string version = "1";
    std::map<std::string, DensityOperator> states;
    std::map<std::string, Povm> povms;
    std::map<std::string, Matrix> projectors;
};

namespace io {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

inline Complex parse_complex(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ParseError("complex numbers are [re, im] pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline Matrix parse_matrix(const json& j) {
    if (!j.is_array() || j.empty()) throw ParseError("matrix must be a non-empty array of rows");
    const auto rows = static_cast<Index>(j.size());
    const auto cols = static_cast<Index>(j[0].size());
    Matrix m(rows, cols);
    for (Index r = 0; r < rows; ++r) {
        const auto& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Index>(row.size()) != cols)
            throw ParseError("matrix rows have inconsistent lengths");
        for (Index c = 0; c < cols; ++c)
            m(r, c) = parse_complex(row[static_cast<std::size_t>(c)]);
    }
    return m;
}

inline Vector parse_vector(const json& j) {
    if (!j.is_array() || j.empty()) throw ParseError("vector must be a non-empty array");
    Vector v(static_cast<Index>(j.size()));
    for (Index i = 0; i < v.size(); ++i) v(i) = parse_complex(j[static_cast<std::size_t>(i)]);
    return v;
}

inline DimSignature parse_dims(const json& j) {
    if (!j.is_array() || j.empty()) throw ParseError("dims must be a non-empty integer array");
    std::vector<Index> dims;
    for (const auto& d : j) {
        if (!d.is_number_integer()) throw ParseError("dims must be integers");
        dims.push_back(d.get<Index>());
    }
    return default_signature(dims);
}

inline ordered_json complex_json(const Complex& z) {
    return ordered_json::array({z.real(), z.imag()});
}

inline ordered_json matrix_json(const Matrix& m) {
    ordered_json rows = ordered_json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        ordered_json row = ordered_json::array();
        for (Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace io

inline ProblemFile parse_problem(const nlohmann::json& j) {
    using io::parse_dims;
    using io::parse_matrix;
    using io::parse_vector;

    if (!j.is_object()) throw ParseError("problem file must be a JSON object");
    ProblemFile p;
    if (j.contains("version")) p.version = j.at("version").get<std::string>();

    if (j.contains("states")) {
        for (const auto& [name, body] : j.at("states").items()) {
            const DimSignature dims = parse_dims(body.at("dims"));
            if (body.contains("vector")) {
                p.states.emplace(name, pure_state(parse_vector(body.at("vector")), dims));
            } else if (body.contains("matrix")) {
                p.states.emplace(name, validate_state(parse_matrix(body.at("matrix")), dims));
            } else {
                throw ParseError("state '" + name + "' needs a matrix or a vector");
            }
        }
    }
    if (j.contains("povms")) {
        for (const auto& [name, body] : j.at("povms").items()) {
            std::string subsystem = "A";
            if (body.contains("subsystem")) subsystem = body.at("subsystem").get<std::string>();
            std::vector<Matrix> elements;
            for (const auto& e : body.at("elements")) elements.push_back(parse_matrix(e));
            p.povms.emplace(name, validate_povm(std::move(elements), std::move(subsystem)));
        }
    }
    if (j.contains("projectors")) {
        for (const auto& [name, body] : j.at("projectors").items()) {
            const Matrix m = parse_matrix(body.contains("matrix") ? body.at("matrix") : body);
            p.projectors.emplace(name, detail::checked_projector(m, m.rows()));
        }
    }
    return p;
}

inline ProblemFile parse_problem_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    try {
        return parse_problem(j);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed problem file: ") + e.what());
    }
}

inline nlohmann::ordered_json problem_json(const ProblemFile& p) {
    using io::matrix_json;
    nlohmann::ordered_json j;
    j["version"] = p.version;
    nlohmann::ordered_json states = nlohmann::ordered_json::object();
    for (const auto& [name, state] : p.states) {
        nlohmann::ordered_json s;
        s["dims"] = state.dims.dims();
        s["matrix"] = matrix_json(state.matrix);
        states[name] = std::move(s);
    }
    j["states"] = std::move(states);
    nlohmann::ordered_json povms = nlohmann::ordered_json::object();
    for (const auto& [name, povm] : p.povms) {
        nlohmann::ordered_json v;
        v["subsystem"] = povm.subsystem;
        nlohmann::ordered_json elements = nlohmann::ordered_json::array();
        for (const Matrix& e : povm.elements) elements.push_back(matrix_json(e));
        v["elements"] = std::move(elements);
        povms[name] = std::move(v);
    }
    j["povms"] = std::move(povms);
    if (!p.projectors.empty()) {
        nlohmann::ordered_json projectors = nlohmann::ordered_json::object();
        for (const auto& [name, m] : p.projectors) {
            nlohmann::ordered_json v;
            v["matrix"] = matrix_json(m);
            projectors[name] = std::move(v);
        }
        j["projectors"] = std::move(projectors);
    }
    return j;
}

}  // namespace entrolab
