#pragma once

// Overlap constants, verification of the uncertainty relations (tripartite,
// bipartite, state-dependent, and their Tsallis-generalized forms), and the
// equality-case explorer built on the Petz recovery map.

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "entrolab/entropy.hpp"
#include "entrolab/matrix.hpp"
#include "entrolab/quantum.hpp"

namespace entrolab {

// ---------------------------------------------------------------------------
// Overlap constants
// ---------------------------------------------------------------------------

struct OverlapWitness {
    double value = 0.0;
    std::size_t j = 0;  // X outcome attaining the maximum (smallest on ties)
    std::size_t k = 0;  // Z outcome
};

namespace detail {

inline Matrix checked_projector(const Matrix& pi, Index d) {
    if (pi.rows() != d || pi.cols() != d)
        throw DimMismatch("projector dimension does not match the POVM");
    if (hermitian_deviation(pi) > 1e-9 || max_abs(Matrix(pi * pi - pi)) > 1e-9)
        throw NotProjector("Pi^2 deviates from Pi by " +
                           std::to_string(max_abs(Matrix(pi * pi - pi))));
    return pi;
}

}  // namespace detail

// c(X,Z;Pi) = max_{j,k} || sqrt(Z_k) Pi sqrt(X_j) ||_inf^2, Pi = 1 if absent.
inline OverlapWitness overlap_c_witness(const Povm& x, const Povm& z,
                                        const std::optional<Matrix>& pi = {}) {
    const Index d = x.dim();
    if (z.dim() != d) throw DimMismatch("POVMs act on different dimensions");
    const Matrix proj = pi ? detail::checked_projector(*pi, d) : Matrix(Matrix::Identity(d, d));

    std::vector<Matrix> root_x, root_z;
    for (const Matrix& e : x.elements) root_x.push_back(mat_sqrt(e));
    for (const Matrix& e : z.elements) root_z.push_back(mat_sqrt(e));

    OverlapWitness best;
    best.value = -1.0;
    for (std::size_t j = 0; j < root_x.size(); ++j)
        for (std::size_t k = 0; k < root_z.size(); ++k) {
            const double n = operator_norm(Matrix(root_z[k] * proj * root_x[j]));
            if (n * n > best.value) best = {n * n, j, k};
        }
    return best;
}

inline double overlap_c(const Povm& x, const Povm& z, const std::optional<Matrix>& pi = {}) {
    return overlap_c_witness(x, z, pi).value;
}

struct TraceWitness {
    double value = 0.0;
    std::size_t j = 0;
};

// c'(X;Pi) = max_j Tr(X_j Pi), Pi = 1 if absent.
inline TraceWitness overlap_c_prime_witness(const Povm& x, const std::optional<Matrix>& pi = {}) {
    const Index d = x.dim();
    const Matrix proj = pi ? detail::checked_projector(*pi, d) : Matrix(Matrix::Identity(d, d));
    TraceWitness best;
    best.value = -1.0;
    for (std::size_t j = 0; j < x.elements.size(); ++j) {
        const double t = Matrix(x.elements[j] * proj).trace().real();
        if (t > best.value) best = {t, j};
    }
    return best;
}

inline double overlap_c_prime(const Povm& x, const std::optional<Matrix>& pi = {}) {
    return overlap_c_prime_witness(x, pi).value;
}

// ---------------------------------------------------------------------------
// Relation reports
// ---------------------------------------------------------------------------

struct RelationReport {
    std::string relation;  // eq1 | eq2 | eq3 | eq1-generalized | ...
    std::string spec;      // entropy spec (pair) used
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;  // lhs - rhs; >= -tolerance when the relation holds
    double constant = 0.0;  // the overlap constant entering rhs
    std::string inputs;     // dims and seeds of the instance
};

namespace detail {

inline std::string instance_digest(const DensityOperator& rho, const Povm& x, const Povm* z) {
    std::ostringstream os;
    os << rho.dims.to_string() << ";X:" << x.outcomes();
    if (z) os << ";Z:" << z->outcomes();
    return os.str();
}

// H_K(X|B) after measuring `povm` on its subsystem of `rho`, conditioning on
// `cond`.
inline double measured_conditional_entropy(const EntropySpec& spec, const DensityOperator& rho,
                                           const Povm& povm, const std::string& cond,
                                           const OptimizerConfig& cfg,
                                           const std::string& register_base) {
    const DensityOperator measured =
        measurement_channel(povm, rho, povm.subsystem, register_base);
    const std::string reg = measured.dims.label(0);
    const DensityOperator marginal = reduced(measured, {reg, cond});
    return conditional_entropy(spec, marginal, {cond}, cfg);
}

// Dual-side entropy H_W(Z|C): closed form when the pair has one, otherwise
// numeric through a purification.
inline double dual_side_entropy(const DualPair& pair, const DensityOperator& rho, const Povm& z,
                                const std::string& cond, const OptimizerConfig& cfg) {
    const DensityOperator measured = measurement_channel(z, rho, z.subsystem, "Z");
    const std::string reg = measured.dims.label(0);
    const DensityOperator marginal = reduced(measured, {reg, cond});
    if (pair.dual) return conditional_entropy(*pair.dual, marginal, {cond}, cfg);
    return dual_entropy(pair.primal, marginal, {cond}, cfg);
}

}  // namespace detail

// H_K(X|B) + H_W(Z|C) >= log2(1/c(X,Z;Pi)) for any state rho_ABC.
inline RelationReport verify_tripartite(const DualPair& pair, const DensityOperator& rho,
                                        const Povm& x, const Povm& z,
                                        const std::optional<Matrix>& pi = {},
                                        const OptimizerConfig& cfg = {},
                                        const std::string& b_label = "B",
                                        const std::string& c_label = "C") {
    const double h_xb = detail::measured_conditional_entropy(pair.primal, rho, x, b_label, cfg, "X");
    const double h_zc = detail::dual_side_entropy(pair, rho, z, c_label, cfg);
    const double c = overlap_c(x, z, pi);
    RelationReport r;
    r.relation = "eq1";
    r.spec = pair.name();
    r.lhs = h_xb + h_zc;
    r.rhs = std::log2(1.0 / c);
    r.slack = r.lhs - r.rhs;
    r.constant = c;
    r.inputs = detail::instance_digest(rho, x, &z);
    return r;
}

// H_K(X|B) >= log2(1/c(X;Pi)) with c(X) = c(X, {1}).
inline RelationReport verify_bipartite(const EntropySpec& spec, const DensityOperator& rho,
                                       const Povm& x, const std::optional<Matrix>& pi = {},
                                       const OptimizerConfig& cfg = {},
                                       const std::string& b_label = "B") {
    const double h_xb = detail::measured_conditional_entropy(spec, rho, x, b_label, cfg, "X");
    const Povm trivial{{Matrix::Identity(x.dim(), x.dim())}, x.subsystem};
    const double c = overlap_c(x, trivial, pi);
    RelationReport r;
    r.relation = "eq2";
    r.spec = spec.name();
    r.lhs = h_xb;
    r.rhs = std::log2(1.0 / c);
    r.slack = r.lhs - r.rhs;
    r.constant = c;
    r.inputs = detail::instance_digest(rho, x, nullptr);
    return r;
}

// H_K(X|B) >= log2(1/c'(X;Pi)) + H_K(A|B).
inline RelationReport verify_state_dependent(const EntropySpec& spec, const DensityOperator& rho,
                                             const Povm& x, const std::optional<Matrix>& pi = {},
                                             const OptimizerConfig& cfg = {},
                                             const std::string& b_label = "B") {
    const double h_xb = detail::measured_conditional_entropy(spec, rho, x, b_label, cfg, "X");
    const double h_ab = conditional_entropy(spec, rho, {b_label}, cfg);
    const double cp = overlap_c_prime(x, pi);
    RelationReport r;
    r.relation = "eq3";
    r.spec = spec.name();
    r.lhs = h_xb;
    r.rhs = std::log2(1.0 / cp) + h_ab;
    r.slack = r.lhs - r.rhs;
    r.constant = cp;
    r.inputs = detail::instance_digest(rho, x, nullptr);
    return r;
}

// ---------------------------------------------------------------------------
// Tsallis-generalized relations: D(S||cT) = f(c) D(S||T) + g(c) with
// f(c) = c^(1-alpha), g(c) = (1 - f(c)) / (1 - alpha).
//
// Carrying this scaling through the tripartite proof chain (and, identically,
// rearranging the Renyi relations through the bridge identity) puts f(c) on
// the measured-side entropy:
//     f(c) H_T,a(X|B) + H_T,2-a(Z|C) >= g(c),
//     f(c) H_T,a(X|B)                >= g(c),
//     f(c') H_T,a(X|B)               >= g(c') + H_T,a(A|B).
// For a < 1 (where f <= 1 on c <= 1) these imply the weaker forms with f
// moved or dropped; for a > 1 only these forms hold.
// ---------------------------------------------------------------------------

inline double tsallis_f(double c, double alpha) { return std::pow(c, 1.0 - alpha); }
inline double tsallis_g(double c, double alpha) {
    return (1.0 - tsallis_f(c, alpha)) / (1.0 - alpha);
}

// f(c) H_T(X|B) + H_TW(Z|C) >= g(c)
inline RelationReport verify_generalized_tripartite(const EntropySpec& spec,
                                                    const DensityOperator& rho, const Povm& x,
                                                    const Povm& z,
                                                    const std::optional<Matrix>& pi = {},
                                                    const OptimizerConfig& cfg = {},
                                                    const std::string& b_label = "B",
                                                    const std::string& c_label = "C") {
    if (spec.family != Family::tsallis)
        throw DomainError("generalized relations are implemented for the Tsallis family");
    const DualPair pair = DualPair::of(spec);
    const double h_xb = detail::measured_conditional_entropy(spec, rho, x, b_label, cfg, "X");
    const double h_zc = detail::dual_side_entropy(pair, rho, z, c_label, cfg);
    const double c = overlap_c(x, z, pi);
    RelationReport r;
    r.relation = "eq1-generalized";
    r.spec = pair.name();
    r.lhs = tsallis_f(c, spec.alpha) * h_xb + h_zc;
    r.rhs = tsallis_g(c, spec.alpha);
    r.slack = r.lhs - r.rhs;
    r.constant = c;
    r.inputs = detail::instance_digest(rho, x, &z);
    return r;
}

// f(c(X)) H_T(X|B) >= g(c(X))
inline RelationReport verify_generalized_bipartite(const EntropySpec& spec,
                                                   const DensityOperator& rho, const Povm& x,
                                                   const std::optional<Matrix>& pi = {},
                                                   const OptimizerConfig& cfg = {},
                                                   const std::string& b_label = "B") {
    if (spec.family != Family::tsallis)
        throw DomainError("generalized relations are implemented for the Tsallis family");
    const double h_xb = detail::measured_conditional_entropy(spec, rho, x, b_label, cfg, "X");
    const Povm trivial{{Matrix::Identity(x.dim(), x.dim())}, x.subsystem};
    const double c = overlap_c(x, trivial, pi);
    RelationReport r;
    r.relation = "eq2-generalized";
    r.spec = spec.name();
    r.lhs = tsallis_f(c, spec.alpha) * h_xb;
    r.rhs = tsallis_g(c, spec.alpha);
    r.slack = r.lhs - r.rhs;
    r.constant = c;
    r.inputs = detail::instance_digest(rho, x, nullptr);
    return r;
}

// f(c'(X)) H_T(X|B) >= g(c'(X)) + H_T(A|B)
inline RelationReport verify_generalized_state_dependent(const EntropySpec& spec,
                                                         const DensityOperator& rho,
                                                         const Povm& x,
                                                         const std::optional<Matrix>& pi = {},
                                                         const OptimizerConfig& cfg = {},
                                                         const std::string& b_label = "B") {
    if (spec.family != Family::tsallis)
        throw DomainError("generalized relations are implemented for the Tsallis family");
    const double h_xb = detail::measured_conditional_entropy(spec, rho, x, b_label, cfg, "X");
    const double h_ab = conditional_entropy(spec, rho, {b_label}, cfg);
    const double cp = overlap_c_prime(x, pi);
    RelationReport r;
    r.relation = "eq3-generalized";
    r.spec = spec.name();
    r.lhs = tsallis_f(cp, spec.alpha) * h_xb;
    r.rhs = tsallis_g(cp, spec.alpha) + h_ab;
    r.slack = r.lhs - r.rhs;
    r.constant = cp;
    r.inputs = detail::instance_digest(rho, x, nullptr);
    return r;
}

// ---------------------------------------------------------------------------
// Equality case / Petz recovery explorer
// ---------------------------------------------------------------------------

struct PetzDiagnostics {
    std::string channel;  // description of the dephasing step being reversed
    double recovered_s_deviation = 0.0;  // || (Ehat o E)(S) - S ||_1
    double recovered_t_deviation = 0.0;  // || (Ehat o E)(T) - T ||_1
    double saturation_gap = 0.0;         // slack of the von Neumann tripartite relation
};

// For pure rho_ABC and rank-1 projective MUBs X, Z, builds the proof's
// dephasing channel E: w -> sum_k (Z_k (x) 1) w (Z_k (x) 1) on AB, the Petz
// recovery map of (E, T) with T = sum_j X_j rho_AB X_j, and reports how well
// the recovery undoes E on S = rho_AB and on T, next to the relation's slack.
inline PetzDiagnostics equality_explorer(const DensityOperator& rho, const Povm& x, const Povm& z,
                                         const OptimizerConfig& cfg = {},
                                         const std::string& b_label = "B",
                                         const std::string& c_label = "C") {
    if (!is_pure(rho)) throw NotPure("equality_explorer needs a pure tripartite state");
    for (const Povm* povm : {&x, &z})
        for (const Matrix& e : povm->elements) {
            if (std::abs(e.trace().real() - 1.0) > 1e-8 || max_abs(Matrix(e * e - e)) > 1e-8)
                throw NotProjectiveRankOne("POVM element is not a rank-1 projector");
        }

    const std::string target = x.subsystem;
    const DensityOperator s_ab = reduced(rho, {target, b_label});

    Matrix t = Matrix::Zero(s_ab.matrix.rows(), s_ab.matrix.cols());
    std::vector<Matrix> kraus;
    for (const Matrix& e : x.elements) {
        const Matrix full = embed(e, {target}, s_ab.dims);
        t += full * s_ab.matrix * full;
    }
    for (const Matrix& e : z.elements) kraus.push_back(embed(e, {target}, s_ab.dims));
    const Channel dephase{kraus};

    const Matrix et = apply_channel(dephase, t);
    const Matrix et_inv_root = mat_pow(et, -0.5);
    const Matrix t_root = mat_sqrt(t);
    const auto recover = [&](const Matrix& w) {
        return Matrix(t_root *
                      apply_channel_adjoint(dephase, Matrix(et_inv_root * w * et_inv_root)) *
                      t_root);
    };

    PetzDiagnostics d;
    d.channel = "Z-basis dephasing on " + target + " against T = sum_j X_j rho X_j";
    d.recovered_s_deviation =
        trace_norm(recover(apply_channel(dephase, s_ab.matrix)) - s_ab.matrix);
    d.recovered_t_deviation = trace_norm(recover(et) - t);
    d.saturation_gap =
        verify_tripartite(DualPair::of(EntropySpec::von_neumann()), rho, x, z, {}, cfg,
                          b_label, c_label)
            .slack;
    return d;
}

}  // namespace entrolab
