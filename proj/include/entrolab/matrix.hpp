#pragma once

// Dense complex linear-algebra kernel: Hermitian eigendecomposition, matrix
// functions on the support, norms, tensor/direct-sum composition, partial
// trace and operator embedding over labelled subsystem signatures, fidelity.
//
// Everything here is a pure function of its arguments; values are freely
// shareable across threads.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "entrolab/errors.hpp"

namespace entrolab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

// Support cutoffs are relative to the largest absolute eigenvalue; the
// xi -> 0 limits in the entropy definitions are realized by projecting onto
// the eigenspace above this threshold.
inline constexpr double kSupportCutoff = 1e-10;
inline constexpr double kHermitianTol = 1e-9;

// ---------------------------------------------------------------------------
// DimSignature: ordered, labelled subsystem dimensions
// ---------------------------------------------------------------------------

class DimSignature {
public:
    DimSignature() = default;

    DimSignature(std::initializer_list<std::pair<std::string, Index>> subs) {
        for (const auto& [label, dim] : subs) append(label, dim);
    }

    static DimSignature single(std::string label, Index dim) {
        DimSignature s;
        s.append(std::move(label), dim);
        return s;
    }

    void append(std::string label, Index dim) {
        if (dim < 1) throw InvalidShape("subsystem '" + label + "' has dimension " + std::to_string(dim));
        if (has(label)) throw InvalidShape("duplicate subsystem label '" + label + "'");
        labels_.push_back(std::move(label));
        dims_.push_back(dim);
    }

    DimSignature appended(std::string label, Index dim) const {
        DimSignature s = *this;
        s.append(std::move(label), dim);
        return s;
    }

    std::size_t size() const { return labels_.size(); }
    const std::string& label(std::size_t i) const { return labels_[i]; }
    Index dim(std::size_t i) const { return dims_[i]; }
    const std::vector<Index>& dims() const { return dims_; }
    const std::vector<std::string>& labels() const { return labels_; }

    Index total() const {
        Index n = 1;
        for (Index d : dims_) n *= d;
        return n;
    }

    bool has(const std::string& label) const {
        return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
    }

    std::size_t position(const std::string& label) const {
        auto it = std::find(labels_.begin(), labels_.end(), label);
        if (it == labels_.end()) throw DimMismatch("no subsystem labelled '" + label + "'");
        return static_cast<std::size_t>(it - labels_.begin());
    }

    Index dim_of(const std::string& label) const { return dims_[position(label)]; }

    // Sub-signature with only the given labels, kept in signature order.
    DimSignature keep(const std::vector<std::string>& labels) const {
        DimSignature s;
        for (std::size_t i = 0; i < size(); ++i)
            if (contains(labels, labels_[i])) s.append(labels_[i], dims_[i]);
        if (s.size() != labels.size()) throw DimMismatch("unknown label in subsystem selection");
        return s;
    }

    DimSignature drop(const std::vector<std::string>& labels) const {
        DimSignature s;
        for (std::size_t i = 0; i < size(); ++i)
            if (!contains(labels, labels_[i])) s.append(labels_[i], dims_[i]);
        return s;
    }

    // Complement of `labels` within this signature, in signature order.
    std::vector<std::string> complement(const std::vector<std::string>& labels) const {
        std::vector<std::string> out;
        for (const auto& l : labels_)
            if (!contains(labels, l)) out.push_back(l);
        return out;
    }

    // A label not yet present: base, base', base'', ...
    std::string fresh_label(const std::string& base) const {
        std::string l = base;
        while (has(l)) l += "'";
        return l;
    }

    std::string to_string() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < size(); ++i) {
            if (i) os << "*";
            os << labels_[i] << ":" << dims_[i];
        }
        return os.str();
    }

    friend bool operator==(const DimSignature& a, const DimSignature& b) {
        return a.labels_ == b.labels_ && a.dims_ == b.dims_;
    }

private:
    static bool contains(const std::vector<std::string>& v, const std::string& s) {
        return std::find(v.begin(), v.end(), s) != v.end();
    }

    std::vector<std::string> labels_;
    std::vector<Index> dims_;
};

// Default labels A, B, C, ... for positional dimension lists.
inline DimSignature default_signature(const std::vector<Index>& dims) {
    static const char* names[] = {"A", "B", "C", "D", "E", "F", "G", "H"};
    DimSignature s;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        std::string label = i < 8 ? names[i] : "S" + std::to_string(i);
        s.append(label, dims[i]);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Hermitian eigendecomposition
// ---------------------------------------------------------------------------

struct Eigensystem {
    RealVector values;  // ascending
    Matrix vectors;     // orthonormal columns, matching order
};

inline double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double hermitian_deviation(const Matrix& m) {
    return max_abs(m - m.adjoint());
}

// Largest |eigenvalue| of a Hermitian matrix, from its spectrum.
inline double spectral_scale(const RealVector& values) {
    if (values.size() == 0) return 0.0;
    return std::max(std::abs(values(0)), std::abs(values(values.size() - 1)));
}

inline Eigensystem eig_hermitian(const Matrix& h, double tol = kHermitianTol) {
    if (h.rows() != h.cols()) throw DimMismatch("eig_hermitian: matrix is not square");
    const double dev = hermitian_deviation(h);
    if (dev > tol)
        throw NotHermitian("max |H - H^dag| entry = " + std::to_string(dev));

    Eigen::SelfAdjointEigenSolver<Matrix> solver((0.5 * (h + h.adjoint())).eval());
    if (solver.info() != Eigen::Success)
        throw ConvergenceFailure("Hermitian eigensolver did not converge");

    Eigensystem es{solver.eigenvalues(), solver.eigenvectors()};

    // Deterministic phase: first significant component of each column made
    // real and positive.
    for (Index c = 0; c < es.vectors.cols(); ++c) {
        const double colmax = es.vectors.col(c).cwiseAbs().maxCoeff();
        for (Index r = 0; r < es.vectors.rows(); ++r) {
            const Complex v = es.vectors(r, c);
            if (std::abs(v) > 1e-8 * colmax) {
                es.vectors.col(c) *= std::conj(v) / std::abs(v);
                break;
            }
        }
    }
    return es;
}

// ---------------------------------------------------------------------------
// Matrix functions on the support
// ---------------------------------------------------------------------------

// V diag(values) V^dag.
inline Matrix spectral_assemble(const Matrix& vectors, const RealVector& values) {
    Matrix scaled = vectors;
    for (Index i = 0; i < values.size(); ++i) scaled.col(i) *= values(i);
    return scaled * vectors.adjoint();
}

// V f(L) V^dag with f applied to eigenvalues above the (relative) support
// cutoff; eigenvalues at or below the cutoff map to 0.
inline Matrix matrix_function(const Matrix& h, const std::function<double(double)>& f,
                              double support_cutoff = kSupportCutoff) {
    const Eigensystem es = eig_hermitian(h);
    const double cut = support_cutoff * spectral_scale(es.values);
    if (es.values.size() > 0 && es.values(0) < -std::max(cut, support_cutoff))
        throw NotPSD("matrix_function: eigenvalue " + std::to_string(es.values(0)) +
                     " below -cutoff");
    RealVector mapped(es.values.size());
    for (Index i = 0; i < es.values.size(); ++i) {
        if (es.values(i) > cut) {
            const double y = f(es.values(i));
            if (!std::isfinite(y))
                throw DomainError("matrix_function: f undefined on retained eigenvalue " +
                                  std::to_string(es.values(i)));
            mapped(i) = y;
        } else {
            mapped(i) = 0.0;
        }
    }
    return spectral_assemble(es.vectors, mapped);
}

inline Matrix mat_sqrt(const Matrix& h, double cutoff = kSupportCutoff) {
    return matrix_function(h, [](double x) { return std::sqrt(x); }, cutoff);
}

// Support pseudo-power: negative exponents invert on the support only.
inline Matrix mat_pow(const Matrix& h, double p, double cutoff = kSupportCutoff) {
    return matrix_function(h, [p](double x) { return std::pow(x, p); }, cutoff);
}

inline Matrix mat_log2(const Matrix& h, double cutoff = kSupportCutoff) {
    return matrix_function(h, [](double x) { return std::log2(x); }, cutoff);
}

inline Matrix support_projector(const Matrix& h, double cutoff = kSupportCutoff) {
    return matrix_function(h, [](double) { return 1.0; }, cutoff);
}

// ---------------------------------------------------------------------------
// Norms and fidelity
// ---------------------------------------------------------------------------

// Largest singular value.
inline double operator_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

// Sum of singular values.
inline double trace_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues().sum();
}

namespace detail {

// Eigenvalues of a PSD operator, validated and clamped at zero.
inline RealVector psd_eigenvalues(const Eigensystem& es, const char* who,
                                  double tol = 1e-8) {
    const double scale = std::max(1.0, spectral_scale(es.values));
    if (es.values.size() > 0 && es.values(0) < -tol * scale)
        throw NotPSD(std::string(who) + ": eigenvalue " + std::to_string(es.values(0)));
    return es.values.cwiseMax(0.0);
}

}  // namespace detail

// Tr sqrt(sqrt(S) T sqrt(S)); the fidelity between (sub)normalized states.
// Evaluated as the nuclear norm of sqrt(S) sqrt(T), whose singular values
// carry eigensolver noise only linearly (no terminal square root of noise on
// null directions).
inline double fidelity_trace(const Matrix& s, const Matrix& t) {
    if (s.rows() != t.rows() || s.cols() != t.cols())
        throw DimMismatch("fidelity_trace: shape mismatch");
    const Eigensystem es_s = eig_hermitian(s, 1e-8);
    const Eigensystem es_t = eig_hermitian(t, 1e-8);
    const RealVector vals_s = detail::psd_eigenvalues(es_s, "fidelity_trace(S)");
    const RealVector vals_t = detail::psd_eigenvalues(es_t, "fidelity_trace(T)");

    const auto clamped_root = [](const Eigensystem& es, const RealVector& vals) {
        const double cut = kSupportCutoff * spectral_scale(vals);
        RealVector roots(vals.size());
        for (Index i = 0; i < vals.size(); ++i)
            roots(i) = vals(i) > cut ? std::sqrt(vals(i)) : 0.0;
        return spectral_assemble(es.vectors, roots);
    };
    return trace_norm(clamped_root(es_s, vals_s) * clamped_root(es_t, vals_t));
}

// ---------------------------------------------------------------------------
// Composition
// ---------------------------------------------------------------------------

// Kronecker product, left factor as the slow index.
inline Matrix tensor(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline Matrix direct_sum(const Matrix& a, const Matrix& b) {
    Matrix out = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    out.topLeftCorner(a.rows(), a.cols()) = a;
    out.bottomRightCorner(b.rows(), b.cols()) = b;
    return out;
}

namespace detail {

// For each flat index over `sig`, the flat index of its selected digits and
// of its unselected digits (first subsystem slowest, matching tensor()).
struct SplitIndex {
    std::vector<Index> selected;
    std::vector<Index> rest;
    Index selected_total = 1;
    Index rest_total = 1;
};

inline SplitIndex split_indices(const DimSignature& sig, const std::vector<bool>& select) {
    const Index n = sig.total();
    SplitIndex out;
    out.selected.resize(static_cast<std::size_t>(n));
    out.rest.resize(static_cast<std::size_t>(n));
    for (std::size_t p = 0; p < sig.size(); ++p)
        (select[p] ? out.selected_total : out.rest_total) *= sig.dim(p);
    for (Index idx = 0; idx < n; ++idx) {
        Index rem = idx, sel = 0, rest = 0;
        // decompose slow-to-fast
        Index stride = n;
        for (std::size_t p = 0; p < sig.size(); ++p) {
            stride /= sig.dim(p);
            const Index digit = rem / stride;
            rem %= stride;
            if (select[p])
                sel = sel * sig.dim(p) + digit;
            else
                rest = rest * sig.dim(p) + digit;
        }
        out.selected[static_cast<std::size_t>(idx)] = sel;
        out.rest[static_cast<std::size_t>(idx)] = rest;
    }
    return out;
}

inline std::vector<bool> selection_mask(const DimSignature& sig,
                                        const std::vector<std::string>& labels) {
    std::vector<bool> mask(sig.size(), false);
    for (const auto& l : labels) mask[sig.position(l)] = true;
    return mask;
}

}  // namespace detail

// Trace out every subsystem not in `keep`; kept subsystems stay in signature
// order. Preserves the trace.
inline Matrix partial_trace(const Matrix& m, const DimSignature& sig,
                            const std::vector<std::string>& keep) {
    if (m.rows() != m.cols() || m.rows() != sig.total())
        throw DimMismatch("partial_trace: matrix size " + std::to_string(m.rows()) +
                          " does not match signature " + sig.to_string());
    const auto mask = detail::selection_mask(sig, keep);
    const auto split = detail::split_indices(sig, mask);
    Matrix out = Matrix::Zero(split.selected_total, split.selected_total);
    const Index n = sig.total();
    for (Index r = 0; r < n; ++r) {
        const Index kr = split.selected[static_cast<std::size_t>(r)];
        const Index tr = split.rest[static_cast<std::size_t>(r)];
        for (Index c = 0; c < n; ++c) {
            if (split.rest[static_cast<std::size_t>(c)] != tr) continue;
            out(kr, split.selected[static_cast<std::size_t>(c)]) += m(r, c);
        }
    }
    return out;
}

// Embed an operator acting on the subsystems `labels` (in signature order)
// into the full space, identity on the rest.
inline Matrix embed(const Matrix& op, const std::vector<std::string>& labels,
                    const DimSignature& sig) {
    const auto mask = detail::selection_mask(sig, labels);
    const auto split = detail::split_indices(sig, mask);
    if (op.rows() != op.cols() || op.rows() != split.selected_total)
        throw DimMismatch("embed: operator size does not match selected subsystems");
    const Index n = sig.total();
    Matrix out = Matrix::Zero(n, n);
    for (Index r = 0; r < n; ++r) {
        const Index sr = split.selected[static_cast<std::size_t>(r)];
        const Index tr = split.rest[static_cast<std::size_t>(r)];
        for (Index c = 0; c < n; ++c) {
            if (split.rest[static_cast<std::size_t>(c)] != tr) continue;
            out(r, c) = op(sr, split.selected[static_cast<std::size_t>(c)]);
        }
    }
    return out;
}

// Reorder subsystems: returns P such that P m P^dag has the subsystems in
// `new_order` (a permutation of the signature's labels).
inline Matrix permutation_matrix(const DimSignature& sig,
                                 const std::vector<std::string>& new_order) {
    if (new_order.size() != sig.size())
        throw DimMismatch("permutation_matrix: order must list every label once");
    DimSignature target;
    for (const auto& l : new_order) target.append(l, sig.dim_of(l));

    const Index n = sig.total();
    Matrix p = Matrix::Zero(n, n);
    std::vector<Index> digit(sig.size());
    for (Index idx = 0; idx < n; ++idx) {
        Index rem = idx, stride = n;
        for (std::size_t q = 0; q < sig.size(); ++q) {
            stride /= sig.dim(q);
            digit[q] = rem / stride;
            rem %= stride;
        }
        Index tgt = 0;
        for (std::size_t q = 0; q < new_order.size(); ++q) {
            const std::size_t src = sig.position(new_order[q]);
            tgt = tgt * sig.dim(src) + digit[src];
        }
        p(tgt, idx) = 1.0;
    }
    return p;
}

inline Matrix identity(Index n) { return Matrix::Identity(n, n); }

}  // namespace entrolab
