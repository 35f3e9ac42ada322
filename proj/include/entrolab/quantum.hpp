#pragma once

// States, POVMs, channels, purification, measurement constructions, mutually
// unbiased bases, and seeded random sampling. Samplers take an explicit
// generator; there is no hidden global state.

#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "entrolab/matrix.hpp"
#include "entrolab/rng.hpp"

namespace entrolab {

inline constexpr double kStateTol = 1e-10;

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

struct DensityOperator {
    Matrix matrix;
    DimSignature dims;
};

struct Povm {
    std::vector<Matrix> elements;
    std::string subsystem = "A";

    Index dim() const { return elements.empty() ? 0 : elements.front().rows(); }
    std::size_t outcomes() const { return elements.size(); }
};

struct Channel {
    std::vector<Matrix> kraus;
};

struct Isometry {
    Matrix matrix;  // output dim x input dim, orthonormal columns
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

inline DensityOperator validate_state(Matrix m, DimSignature dims, double tol = kStateTol) {
    if (m.rows() != m.cols() || m.rows() != dims.total())
        throw DimMismatch("state matrix is " + std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()) + ", signature " + dims.to_string());
    const double herm = hermitian_deviation(m);
    if (herm > tol) throw NotPSD("state not Hermitian, deviation " + std::to_string(herm));
    const Eigensystem es = eig_hermitian(m, std::max(tol, kHermitianTol));
    if (es.values.size() > 0 && es.values(0) < -tol)
        throw NotPSD("state has eigenvalue " + std::to_string(es.values(0)));
    const double tr = m.trace().real();
    if (std::abs(tr - 1.0) > tol)
        throw TraceNotOne("state trace = " + std::to_string(tr));
    return DensityOperator{std::move(m), std::move(dims)};
}

inline Povm validate_povm(std::vector<Matrix> elements, std::string subsystem = "A",
                          double tol = kStateTol) {
    if (elements.empty()) throw InvalidShape("POVM needs at least one element");
    const Index d = elements.front().rows();
    Matrix sum = Matrix::Zero(d, d);
    for (std::size_t j = 0; j < elements.size(); ++j) {
        const Matrix& e = elements[j];
        if (e.rows() != d || e.cols() != d)
            throw DimMismatch("POVM element " + std::to_string(j) + " has wrong shape");
        if (hermitian_deviation(e) > tol)
            throw NotPSD("POVM element " + std::to_string(j) + " not Hermitian");
        const Eigensystem es = eig_hermitian(e, std::max(tol, kHermitianTol));
        if (es.values.size() > 0 && es.values(0) < -tol)
            throw NotPSD("POVM element " + std::to_string(j) + " has eigenvalue " +
                         std::to_string(es.values(0)));
        sum += e;
    }
    const double dev = max_abs(sum - Matrix::Identity(d, d));
    if (dev > tol)
        throw NotResolutionOfIdentity("POVM elements sum deviates from identity by " +
                                      std::to_string(dev));
    return Povm{std::move(elements), std::move(subsystem)};
}

inline Channel validate_channel(std::vector<Matrix> kraus, double tol = kStateTol) {
    if (kraus.empty()) throw InvalidShape("channel needs at least one Kraus operator");
    const Index din = kraus.front().cols();
    const Index dout = kraus.front().rows();
    Matrix sum = Matrix::Zero(din, din);
    for (const Matrix& k : kraus) {
        if (k.cols() != din || k.rows() != dout)
            throw DimMismatch("Kraus operators must share input and output dimensions");
        sum += k.adjoint() * k;
    }
    const double dev = max_abs(sum - Matrix::Identity(din, din));
    if (dev > tol)
        throw NotResolutionOfIdentity("sum K^dag K deviates from identity by " +
                                      std::to_string(dev));
    return Channel{std::move(kraus)};
}

inline Isometry validate_isometry(Matrix v, double tol = kStateTol) {
    if (v.rows() < v.cols()) throw InvalidShape("isometry must not shrink the space");
    const double dev = max_abs(Matrix(v.adjoint() * v) - Matrix::Identity(v.cols(), v.cols()));
    if (dev > tol) throw NotIsometry("V^dag V deviates from identity by " + std::to_string(dev));
    return Isometry{std::move(v)};
}

// ---------------------------------------------------------------------------
// Basic constructions
// ---------------------------------------------------------------------------

inline DensityOperator pure_state(const Vector& amplitudes, DimSignature dims) {
    if (amplitudes.size() != dims.total())
        throw DimMismatch("amplitude vector does not match signature " + dims.to_string());
    const double n = amplitudes.norm();
    if (n <= 0.0) throw InvalidShape("zero amplitude vector");
    const Vector psi = amplitudes / n;
    return DensityOperator{psi * psi.adjoint(), std::move(dims)};
}

inline DensityOperator reduced(const DensityOperator& rho, const std::vector<std::string>& keep) {
    return DensityOperator{partial_trace(rho.matrix, rho.dims, keep), rho.dims.keep(keep)};
}

inline bool is_pure(const DensityOperator& rho, double tol = 1e-9) {
    const Eigensystem es = eig_hermitian(rho.matrix);
    return es.values(es.values.size() - 1) >= 1.0 - tol;
}

// sum_i |ii>/sqrt(d) on two d-dimensional subsystems.
inline DensityOperator maximally_entangled(Index d, const std::string& label_a = "A",
                                           const std::string& label_b = "B") {
    Vector psi = Vector::Zero(d * d);
    for (Index i = 0; i < d; ++i) psi(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
    return pure_state(psi, DimSignature{{label_a, d}, {label_b, d}});
}

// Rank-1 projective POVM from the columns of a unitary.
inline Povm projective_povm(const Matrix& basis, std::string subsystem = "A") {
    std::vector<Matrix> elements;
    elements.reserve(static_cast<std::size_t>(basis.cols()));
    for (Index j = 0; j < basis.cols(); ++j) {
        const Vector v = basis.col(j);
        elements.push_back(v * v.adjoint());
    }
    return validate_povm(std::move(elements), std::move(subsystem));
}

// Computational basis and its discrete-Fourier partner; every squared overlap
// between the two bases equals 1/d.
inline std::pair<Povm, Povm> mub_pair(Index d, const std::string& subsystem = "A") {
    if (d < 2) throw InvalidShape("mub_pair needs dimension >= 2");
    const Matrix comp = Matrix::Identity(d, d);
    Matrix fourier(d, d);
    const double norm = 1.0 / std::sqrt(static_cast<double>(d));
    for (Index j = 0; j < d; ++j)
        for (Index k = 0; k < d; ++k) {
            const double phase = 2.0 * std::numbers::pi * static_cast<double>(j * k) /
                                 static_cast<double>(d);
            fourier(j, k) = norm * Complex(std::cos(phase), std::sin(phase));
        }
    return {projective_povm(comp, subsystem), projective_povm(fourier, subsystem)};
}

inline Matrix apply_channel(const Channel& e, const Matrix& m) {
    Matrix out = Matrix::Zero(e.kraus.front().rows(), e.kraus.front().rows());
    for (const Matrix& k : e.kraus) out += k * m * k.adjoint();
    return out;
}

// Adjoint map: sum_k K^dag (.) K.
inline Matrix apply_channel_adjoint(const Channel& e, const Matrix& m) {
    Matrix out = Matrix::Zero(e.kraus.front().cols(), e.kraus.front().cols());
    for (const Matrix& k : e.kraus) out += k.adjoint() * m * k;
    return out;
}

// ---------------------------------------------------------------------------
// Purification
// ---------------------------------------------------------------------------

// Spectral purification with a minimal purifier (dimension = rank).
inline DensityOperator purify(const DensityOperator& rho, const std::string& purifier_label = "D",
                              double rank_cutoff = 1e-12) {
    const Eigensystem es = eig_hermitian(rho.matrix);
    const Index n = es.values.size();
    std::vector<Index> kept;
    for (Index i = 0; i < n; ++i)
        if (es.values(i) > rank_cutoff) kept.push_back(i);
    if (kept.empty()) throw NotPSD("purify: state has no positive eigenvalues");
    const Index rank = static_cast<Index>(kept.size());

    Vector psi = Vector::Zero(n * rank);
    for (Index r = 0; r < rank; ++r) {
        const double amp = std::sqrt(es.values(kept[static_cast<std::size_t>(r)]));
        for (Index a = 0; a < n; ++a)
            psi(a * rank + r) = amp * es.vectors(a, kept[static_cast<std::size_t>(r)]);
    }
    psi /= psi.norm();
    const DimSignature dims = rho.dims.appended(rho.dims.fresh_label(purifier_label), rank);
    return DensityOperator{psi * psi.adjoint(), dims};
}

// ---------------------------------------------------------------------------
// Measurement constructions
// ---------------------------------------------------------------------------

// sum_j |j><j|_X (x) Tr_target((X_j (x) 1) rho): the POVM's classical register
// replaces the measured subsystem and is placed first.
inline DensityOperator measurement_channel(const Povm& x, const DensityOperator& rho,
                                           const std::string& target,
                                           const std::string& register_label = "X") {
    if (x.dim() != rho.dims.dim_of(target))
        throw DimMismatch("POVM dimension " + std::to_string(x.dim()) +
                          " does not match subsystem " + target);
    const auto rest = rho.dims.complement({target});
    const DimSignature rest_dims = rho.dims.keep(rest);
    const Index dr = rest_dims.total();
    const Index outcomes = static_cast<Index>(x.outcomes());

    DimSignature out_dims;
    out_dims.append(rho.dims.drop({target}).fresh_label(register_label), outcomes);
    for (std::size_t i = 0; i < rest_dims.size(); ++i)
        out_dims.append(rest_dims.label(i), rest_dims.dim(i));

    Matrix out = Matrix::Zero(outcomes * dr, outcomes * dr);
    for (Index j = 0; j < outcomes; ++j) {
        const Matrix full = embed(x.elements[static_cast<std::size_t>(j)], {target}, rho.dims);
        out.block(j * dr, j * dr, dr, dr) =
            partial_trace(Matrix(full * rho.matrix), rho.dims, rest);
    }
    return DensityOperator{std::move(out), std::move(out_dims)};
}

// V_X = sum_j |j>_X (x) |j>_X' (x) sqrt(X_j), an isometry H_A -> H_X (x) H_X' (x) H_A.
inline Isometry measurement_isometry(const Povm& x) {
    const Index d = x.dim();
    const Index n = static_cast<Index>(x.outcomes());
    Matrix v = Matrix::Zero(n * n * d, d);
    for (Index j = 0; j < n; ++j)
        v.block((j * n + j) * d, 0, d, d) = mat_sqrt(x.elements[static_cast<std::size_t>(j)]);
    return Isometry{std::move(v)};
}

// ---------------------------------------------------------------------------
// Seeded random sampling
// ---------------------------------------------------------------------------

inline Matrix ginibre(Index rows, Index cols, Rng& rng) {
    Matrix g(rows, cols);
    for (Index r = 0; r < rows; ++r)
        for (Index c = 0; c < cols; ++c) g(r, c) = rng.complex_normal();
    return g;
}

// Haar-distributed isometry from the QR decomposition of a Ginibre matrix.
inline Isometry random_isometry(Index d_in, Index d_out, Rng& rng) {
    if (d_out < d_in) throw InvalidShape("random_isometry: output dimension too small");
    const Matrix g = ginibre(d_out, d_in, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(d_out, d_in);
    const Matrix r = qr.matrixQR().topLeftCorner(d_in, d_in);
    for (Index i = 0; i < d_in; ++i) {
        const Complex rii = r(i, i);
        if (std::abs(rii) > 1e-14) q.col(i) *= rii / std::abs(rii);
    }
    return Isometry{std::move(q)};
}

inline Matrix random_unitary(Index d, Rng& rng) { return random_isometry(d, d, rng).matrix; }

// Partial trace of a Haar-random pure state over a rank-sized ancilla
// (Ginibre construction).
inline DensityOperator random_state(DimSignature dims, Index rank, Rng& rng) {
    const Index n = dims.total();
    if (rank < 1 || rank > n)
        throw InvalidShape("random_state: rank " + std::to_string(rank) + " for dimension " +
                           std::to_string(n));
    const Matrix g = ginibre(n, rank, rng);
    Matrix m = g * g.adjoint();
    m /= m.trace().real();
    m = 0.5 * (m + m.adjoint());
    return DensityOperator{std::move(m), std::move(dims)};
}

// Random POVM: Wishart elements normalized by the symmetric square-root
// sandwich S^{-1/2} G_j G_j^dag S^{-1/2}, S = sum_j G_j G_j^dag.
inline Povm random_povm(Index d, Index n_outcomes, Rng& rng, std::string subsystem = "A") {
    if (n_outcomes < 1) throw InvalidShape("random_povm: need at least one outcome");
    std::vector<Matrix> raw;
    raw.reserve(static_cast<std::size_t>(n_outcomes));
    Matrix sum = Matrix::Zero(d, d);
    for (Index j = 0; j < n_outcomes; ++j) {
        const Matrix g = ginibre(d, d, rng);
        raw.push_back(g * g.adjoint());
        sum += raw.back();
    }
    const Matrix norm = mat_pow(sum, -0.5);
    std::vector<Matrix> elements;
    elements.reserve(raw.size());
    for (const Matrix& a : raw) {
        Matrix e = norm * a * norm;
        elements.push_back(0.5 * (e + e.adjoint()));
    }
    return Povm{std::move(elements), std::move(subsystem)};
}

// Stinespring form: Kraus blocks of a Haar-random isometry into
// environment (x) output.
inline Channel random_channel(Index d_in, Index d_out, Index n_kraus, Rng& rng) {
    if (n_kraus < 1 || d_out * n_kraus < d_in)
        throw InvalidShape("random_channel: d_out * n_kraus must cover d_in");
    const Isometry v = random_isometry(d_in, d_out * n_kraus, rng);
    std::vector<Matrix> kraus;
    kraus.reserve(static_cast<std::size_t>(n_kraus));
    for (Index k = 0; k < n_kraus; ++k)
        kraus.push_back(v.matrix.block(k * d_out, 0, d_out, d_in));
    return Channel{std::move(kraus)};
}

}  // namespace entrolab
