#pragma once

// Relative entropy families, conditional entropies in both conditioning
// modes, dual entropies via purification, and the sigma_B optimizer with an
// independent brute-force oracle for qubit conditioning.
//
// Conventions: all logarithms are base 2 (entropies in bits); the xi -> 0
// limits in the definitions are realized by support projection, and +infinity
// is returned (not thrown) when a divergence's support condition fails.

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "entrolab/matrix.hpp"
#include "entrolab/quantum.hpp"
#include "entrolab/rng.hpp"

namespace entrolab {

// Relative support mass of S outside supp(T) above which the divergence is
// reported as +infinity.
inline constexpr double kSupportLeakTol = 1e-9;

// ---------------------------------------------------------------------------
// Entropy selector
// ---------------------------------------------------------------------------

enum class Family { von_neumann, renyi, renyi0, min_rel, max_rel, tsallis };
enum class Conditioning { fixed_marginal, optimized };

struct EntropySpec {
    Family family = Family::von_neumann;
    Conditioning conditioning = Conditioning::fixed_marginal;
    double alpha = 1.0;

    EntropySpec() = default;

    EntropySpec(Family f, Conditioning c, double a = 1.0) : family(f), conditioning(c), alpha(a) {
        if (f == Family::renyi || f == Family::tsallis) {
            const bool ok = (a > 0.0 && a < 1.0) || (a > 1.0 && a <= 2.0);
            if (!ok)
                throw DomainError("alpha = " + std::to_string(a) +
                                  " outside (0,1) u (1,2]");
        }
    }

    static EntropySpec von_neumann() {
        return {Family::von_neumann, Conditioning::fixed_marginal};
    }
    static EntropySpec renyi(double a, Conditioning c = Conditioning::fixed_marginal) {
        return {Family::renyi, c, a};
    }
    static EntropySpec renyi_zero(Conditioning c = Conditioning::optimized) {
        return {Family::renyi0, c};
    }
    static EntropySpec min_rel(Conditioning c = Conditioning::optimized) {
        return {Family::min_rel, c};
    }
    static EntropySpec max_rel(Conditioning c = Conditioning::optimized) {
        return {Family::max_rel, c};
    }
    static EntropySpec tsallis(double a, Conditioning c = Conditioning::fixed_marginal) {
        return {Family::tsallis, c, a};
    }

    bool optimized() const { return conditioning == Conditioning::optimized; }
    bool uses_alpha() const { return family == Family::renyi || family == Family::tsallis; }

    std::string name() const {
        std::ostringstream os;
        switch (family) {
            case Family::von_neumann: os << "vonneumann"; break;
            case Family::renyi: os << "renyi"; break;
            case Family::renyi0: os << "renyi0"; break;
            case Family::min_rel: os << "min"; break;
            case Family::max_rel: os << "max"; break;
            case Family::tsallis: os << "tsallis"; break;
        }
        if (uses_alpha()) os << "(" << alpha << ")";
        os << (optimized() ? "|opt" : "|fixed");
        return os.str();
    }

    friend bool operator==(const EntropySpec& a, const EntropySpec& b) {
        return a.family == b.family && a.conditioning == b.conditioning &&
               (!a.uses_alpha() || a.alpha == b.alpha);
    }
};

struct ExtendedReal {
    double value = 0.0;
    bool infinite = false;

    static ExtendedReal finite(double v) { return {v, false}; }
    static ExtendedReal infinity() { return {0.0, true}; }
    double as_double() const {
        return infinite ? std::numeric_limits<double>::infinity() : value;
    }
};

// The usual named entropies map onto (family, conditioning) as follows:
//   H        = (von_neumann, fixed)       H_alpha   = (renyi, fixed)
//   H_min    = (min, optimized)           H_max     = (max, optimized)
//   Hhat_min = (min, fixed)               Hhat_alpha= (renyi, optimized)
//   Hhat_0   = (renyi0, optimized)        H_T,alpha = (tsallis, fixed)
// The closed-form dual of a spec, when one exists.
inline std::optional<EntropySpec> dual_spec(const EntropySpec& s) {
    const bool fixed = !s.optimized();
    const auto near = [](double a, double b) { return std::abs(a - b) < 1e-12; };
    switch (s.family) {
        case Family::von_neumann:
            if (fixed) return EntropySpec::von_neumann();
            break;
        case Family::renyi:
            if (fixed) {
                if (near(s.alpha, 2.0))
                    return EntropySpec::renyi_zero(Conditioning::fixed_marginal);
                return EntropySpec::renyi(2.0 - s.alpha);
            }
            break;
        case Family::renyi0:
            if (fixed) return EntropySpec::renyi(2.0);
            return EntropySpec::min_rel(Conditioning::fixed_marginal);
        case Family::min_rel:
            if (fixed) return EntropySpec::renyi_zero(Conditioning::optimized);
            return EntropySpec::max_rel(Conditioning::optimized);
        case Family::max_rel:
            if (!fixed) return EntropySpec::min_rel(Conditioning::optimized);
            break;
        case Family::tsallis:
            if (fixed && !near(s.alpha, 2.0)) return EntropySpec::tsallis(2.0 - s.alpha);
            break;
    }
    return std::nullopt;
}

// A primal spec together with its dual; `dual` empty means the dual has no
// closed form and is evaluated numerically through a purification.
struct DualPair {
    EntropySpec primal;
    std::optional<EntropySpec> dual;

    static DualPair of(const EntropySpec& p) { return {p, dual_spec(p)}; }

    std::string name() const {
        return primal.name() + "+" + (dual ? dual->name() : "numeric");
    }
};

// ---------------------------------------------------------------------------
// Relative entropies
// ---------------------------------------------------------------------------

namespace detail {

struct SpectralPair {
    Eigensystem s;
    Eigensystem t;
    RealVector s_vals;  // clamped at 0
    RealVector t_vals;
    double s_cut = 0.0;
    double t_cut = 0.0;
    double trace_s = 0.0;
    Eigen::MatrixXd overlap2;  // |<s_i|t_j>|^2

    // S-mass outside supp(T), relative to Tr S.
    double support_leak() const {
        double leak = 0.0;
        for (Index i = 0; i < s_vals.size(); ++i) {
            if (s_vals(i) <= s_cut) continue;
            double inside = 0.0;
            for (Index j = 0; j < t_vals.size(); ++j)
                if (t_vals(j) > t_cut) inside += overlap2(i, j);
            leak += s_vals(i) * std::max(0.0, 1.0 - inside);
        }
        return leak / trace_s;
    }
};

inline SpectralPair spectral_pair(const Matrix& s, const Matrix& t) {
    if (s.rows() != t.rows() || s.cols() != t.cols() || s.rows() != s.cols())
        throw DimMismatch("relative entropy arguments must be square and same size");
    SpectralPair p;
    p.s = eig_hermitian(s, 1e-8);
    p.t = eig_hermitian(t, 1e-8);
    p.s_vals = psd_eigenvalues(p.s, "relative_entropy(S)");
    p.t_vals = psd_eigenvalues(p.t, "relative_entropy(T)");
    p.s_cut = kSupportCutoff * spectral_scale(p.s_vals);
    p.t_cut = kSupportCutoff * spectral_scale(p.t_vals);
    p.trace_s = p.s_vals.sum();
    if (p.trace_s <= 0.0) throw ZeroFirstArgument("Tr S = " + std::to_string(p.trace_s));
    p.overlap2 = (p.s.vectors.adjoint() * p.t.vectors).cwiseAbs2();
    return p;
}

// Tr(S^a T^(1-a)) with support pseudo-powers.
inline double power_trace(const SpectralPair& p, double alpha) {
    double q = 0.0;
    for (Index i = 0; i < p.s_vals.size(); ++i) {
        if (p.s_vals(i) <= p.s_cut) continue;
        const double la = std::pow(p.s_vals(i), alpha);
        for (Index j = 0; j < p.t_vals.size(); ++j) {
            if (p.t_vals(j) <= p.t_cut) continue;
            q += la * std::pow(p.t_vals(j), 1.0 - alpha) * p.overlap2(i, j);
        }
    }
    return q;
}

}  // namespace detail

// D_K(S||T) for the selected family; spec.conditioning is ignored here.
inline ExtendedReal relative_entropy(const EntropySpec& spec, const Matrix& s, const Matrix& t) {
    using detail::spectral_pair;
    const auto p = spectral_pair(s, t);

    switch (spec.family) {
        case Family::von_neumann: {
            if (p.support_leak() > kSupportLeakTol) return ExtendedReal::infinity();
            double s_log_s = 0.0;
            for (Index i = 0; i < p.s_vals.size(); ++i)
                if (p.s_vals(i) > p.s_cut) s_log_s += p.s_vals(i) * std::log2(p.s_vals(i));
            double s_log_t = 0.0;
            for (Index j = 0; j < p.t_vals.size(); ++j) {
                if (p.t_vals(j) <= p.t_cut) continue;
                double mass = 0.0;
                for (Index i = 0; i < p.s_vals.size(); ++i)
                    if (p.s_vals(i) > p.s_cut) mass += p.s_vals(i) * p.overlap2(i, j);
                s_log_t += mass * std::log2(p.t_vals(j));
            }
            return ExtendedReal::finite((s_log_s - s_log_t) / p.trace_s);
        }
        case Family::renyi: {
            if (spec.alpha > 1.0 && p.support_leak() > kSupportLeakTol)
                return ExtendedReal::infinity();
            const double q = detail::power_trace(p, spec.alpha);
            if (q <= 0.0) return ExtendedReal::infinity();
            return ExtendedReal::finite(std::log2(q) / (spec.alpha - 1.0));
        }
        case Family::renyi0: {
            double q = 0.0;
            for (Index i = 0; i < p.s_vals.size(); ++i) {
                if (p.s_vals(i) <= p.s_cut) continue;
                for (Index j = 0; j < p.t_vals.size(); ++j)
                    if (p.t_vals(j) > p.t_cut) q += p.t_vals(j) * p.overlap2(i, j);
            }
            if (q <= 0.0) return ExtendedReal::infinity();
            return ExtendedReal::finite(-std::log2(q));
        }
        case Family::min_rel: {
            if (p.support_leak() > kSupportLeakTol) return ExtendedReal::infinity();
            // smallest lambda with S <= lambda T, via the support pseudo-inverse
            RealVector inv_root = RealVector::Zero(p.t_vals.size());
            for (Index j = 0; j < p.t_vals.size(); ++j)
                if (p.t_vals(j) > p.t_cut) inv_root(j) = 1.0 / std::sqrt(p.t_vals(j));
            const Matrix root = spectral_assemble(p.t.vectors, inv_root);
            const Matrix w = root * s * root;
            const Eigensystem es = eig_hermitian((0.5 * (w + w.adjoint())).eval(), 1e-7);
            const double lam = es.values(es.values.size() - 1);
            if (lam <= 0.0) return ExtendedReal::infinity();
            return ExtendedReal::finite(std::log2(lam));
        }
        case Family::max_rel: {
            const double f = fidelity_trace(s, t);
            if (f <= 1e-150) return ExtendedReal::infinity();
            return ExtendedReal::finite(-2.0 * std::log2(f));
        }
        case Family::tsallis: {
            if (spec.alpha > 1.0 && p.support_leak() > kSupportLeakTol)
                return ExtendedReal::infinity();
            const double q = detail::power_trace(p, spec.alpha);
            return ExtendedReal::finite((q - 1.0) / (spec.alpha - 1.0));
        }
    }
    throw DomainError("unreachable entropy family");
}

// D_K(S||T) - D_K(E(S)||E(T)); nonnegative by the data processing inequality.
inline double check_data_processing(const EntropySpec& spec, const Matrix& s, const Matrix& t,
                                    const Channel& e) {
    const ExtendedReal before = relative_entropy(spec, s, t);
    const ExtendedReal after =
        relative_entropy(spec, apply_channel(e, s), apply_channel(e, t));
    if (before.infinite && after.infinite) return 0.0;
    if (before.infinite) return std::numeric_limits<double>::infinity();
    if (after.infinite) return -std::numeric_limits<double>::infinity();
    return before.value - after.value;
}

// ---------------------------------------------------------------------------
// Derivative-free maximization over density operators
// ---------------------------------------------------------------------------

struct OptimizerConfig {
    int restarts = 8;
    int max_iters = 2000;      // function-evaluation budget per restart
    double tolerance = 1e-12;  // simplex value-spread stop
    bool restrict_support = true;
    std::uint64_t seed = 0xC0FFEEULL;
};

struct SigmaOptimum {
    Matrix sigma;
    double value = -std::numeric_limits<double>::infinity();
    int evaluations = 0;
};

namespace detail {

using ParamObjective = std::function<double(const std::vector<double>&)>;

struct SearchState {
    std::vector<double> x;
    double f = std::numeric_limits<double>::infinity();
    int evals = 0;
};

// Standard Nelder-Mead on R^n, minimizing.
inline void nelder_mead(const ParamObjective& f, SearchState& st, double step, double ftol,
                        int max_evals) {
    const std::size_t n = st.x.size();
    std::vector<std::vector<double>> xs(n + 1, st.x);
    std::vector<double> fs(n + 1);
    fs[0] = st.f;
    for (std::size_t i = 0; i < n; ++i) {
        xs[i + 1][i] += step;
        fs[i + 1] = f(xs[i + 1]);
        ++st.evals;
    }
    std::vector<std::size_t> order(n + 1);
    int evals = 0;
    while (evals < max_evals) {
        for (std::size_t i = 0; i <= n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
        const std::size_t best = order[0], worst = order[n], second = order[n - 1];
        if (std::isfinite(fs[worst]) && fs[worst] - fs[best] < ftol) break;

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (std::size_t d = 0; d < n; ++d) centroid[d] += xs[i][d];
        }
        for (double& c : centroid) c /= static_cast<double>(n);

        auto blend = [&](double coeff) {
            std::vector<double> y(n);
            for (std::size_t d = 0; d < n; ++d)
                y[d] = centroid[d] + coeff * (xs[worst][d] - centroid[d]);
            return y;
        };

        const auto reflected = blend(-1.0);
        const double fr = f(reflected);
        ++evals;
        if (fr < fs[order[0]]) {
            const auto expanded = blend(-2.0);
            const double fe = f(expanded);
            ++evals;
            if (fe < fr) {
                xs[worst] = expanded;
                fs[worst] = fe;
            } else {
                xs[worst] = reflected;
                fs[worst] = fr;
            }
        } else if (fr < fs[second]) {
            xs[worst] = reflected;
            fs[worst] = fr;
        } else {
            const auto contracted = blend(fr < fs[worst] ? -0.5 : 0.5);
            const double fc = f(contracted);
            ++evals;
            if (fc < std::min(fr, fs[worst])) {
                xs[worst] = contracted;
                fs[worst] = fc;
            } else {
                // shrink towards the best vertex
                for (std::size_t i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    for (std::size_t d = 0; d < n; ++d)
                        xs[i][d] = xs[best][d] + 0.5 * (xs[i][d] - xs[best][d]);
                    fs[i] = f(xs[i]);
                    ++evals;
                }
            }
        }
    }
    st.evals += evals;
    std::size_t best = 0;
    for (std::size_t i = 1; i <= n; ++i)
        if (fs[i] < fs[best]) best = i;
    st.x = xs[best];
    st.f = fs[best];
}

// Compass (coordinate pattern) search; robust polish for the nonsmooth
// max-eigenvalue objectives where the simplex tends to stall.
inline void compass_search(const ParamObjective& f, SearchState& st, double h0, double hmin,
                           int max_evals) {
    const std::size_t n = st.x.size();
    double h = h0;
    int evals = 0;
    while (h >= hmin && evals < max_evals) {
        bool improved = false;
        for (std::size_t d = 0; d < n && evals < max_evals; ++d) {
            for (const double sign : {+1.0, -1.0}) {
                std::vector<double> y = st.x;
                y[d] += sign * h;
                const double fy = f(y);
                ++evals;
                if (fy < st.f) {
                    st.x = y;
                    st.f = fy;
                    improved = true;
                    break;
                }
            }
        }
        if (!improved) h *= 0.5;
    }
    st.evals += evals;
}

}  // namespace detail

// Maximize objective(sigma) over density operators of dimension d, with
// sigma = L L^dag / Tr(L L^dag) parameterized by a complex lower-triangular L
// (real diagonal), searched by Nelder-Mead with random restarts and a
// pattern-search polish. Deterministic given (config.seed, config).
inline SigmaOptimum maximize_over_sigma(const std::function<double(const Matrix&)>& objective,
                                        Index d, const OptimizerConfig& cfg = {}) {
    if (d < 1) throw InvalidShape("maximize_over_sigma: dimension must be positive");
    if (d == 1) {
        Matrix one = Matrix::Identity(1, 1);
        return SigmaOptimum{one, objective(one), 1};
    }

    const auto sigma_from = [](const std::vector<double>& p, Index dim) {
        Matrix l = Matrix::Zero(dim, dim);
        std::size_t idx = 0;
        for (Index i = 0; i < dim; ++i) l(i, i) = p[idx++];
        for (Index i = 0; i < dim; ++i)
            for (Index j = 0; j < i; ++j) {
                l(i, j) = Complex(p[idx], p[idx + 1]);
                idx += 2;
            }
        Matrix sigma = l * l.adjoint();
        const double tr = sigma.trace().real();
        if (!(tr > 1e-300)) return Matrix(Matrix::Zero(dim, dim));
        sigma /= tr;
        return sigma;
    };
    const auto params_of = [](const Matrix& sigma, Index dim) {
        Eigen::LLT<Matrix> llt(
            Matrix(sigma + 1e-12 * sigma.trace().real() * Matrix::Identity(dim, dim)));
        const Matrix l = llt.matrixL();
        std::vector<double> p(static_cast<std::size_t>(dim * dim), 0.0);
        std::size_t idx = 0;
        for (Index i = 0; i < dim; ++i) p[idx++] = l(i, i).real();
        for (Index i = 0; i < dim; ++i)
            for (Index j = 0; j < i; ++j) {
                p[idx++] = l(i, j).real();
                p[idx++] = l(i, j).imag();
            }
        return p;
    };
    const auto penalize = [&sigma_from](const std::function<double(const Matrix&)>& f,
                                        Index dim) {
        return detail::ParamObjective([&f, &sigma_from, dim](const std::vector<double>& p) {
            const Matrix sigma = sigma_from(p, dim);
            if (sigma.size() == 0 || sigma.trace().real() <= 0.0)
                return std::numeric_limits<double>::infinity();
            const double v = f(sigma);
            if (std::isnan(v)) return std::numeric_limits<double>::infinity();
            return -v;
        });
    };

    // Cheap global probes from every restart point, then a staged
    // shrinking-simplex polish of the incumbent; the restarted simplex tracks
    // the nonsmooth max-eigenvalue ridges far better than a single long run.
    const int nm_budget = std::max(cfg.max_iters, 200);
    const int probe_budget = std::max(nm_budget / 4, 150);
    int total_evals = 0;

    const auto staged_polish = [&](const detail::ParamObjective& f, detail::SearchState& st) {
        for (const double step : {0.1, 0.01, 1e-3, 1e-4, 1e-5})
            detail::nelder_mead(f, st, step, cfg.tolerance, nm_budget);
        detail::compass_search(f, st, 3e-5, 1e-11, nm_budget / 2);
    };

    const detail::ParamObjective penalized = penalize(objective, d);
    detail::SearchState best;
    for (int restart = 0; restart < std::max(cfg.restarts, 1); ++restart) {
        detail::SearchState st;
        st.x.assign(static_cast<std::size_t>(d * d), 0.0);
        if (restart == 0) {
            for (Index i = 0; i < d; ++i) st.x[static_cast<std::size_t>(i)] = 1.0;
        } else {
            Rng rng(Rng::derive(cfg.seed, static_cast<std::uint64_t>(restart)));
            for (auto& p : st.x) p = rng.normal();
        }
        st.f = penalized(st.x);
        st.evals = 1;
        detail::nelder_mead(penalized, st, restart == 0 ? 0.5 : 0.8, 1e-10, probe_budget);
        total_evals += st.evals;
        if (st.f < best.f) {
            best.x = st.x;
            best.f = st.f;
        }
    }
    if (best.x.empty() || !std::isfinite(best.f))
        throw OptimizerFailure("no restart produced a finite objective value after " +
                               std::to_string(total_evals) + " evaluations");
    staged_polish(penalized, best);
    total_evals += best.evals;

    SigmaOptimum out;
    out.value = -best.f;
    out.sigma = sigma_from(best.x, d);

    // Boundary polish: when the maximizer sits on a face of the cone, the
    // full-rank parameterization approaches it only asymptotically. Retry on
    // the dominant eigenspaces of the incumbent and keep any improvement;
    // incumbents that sit well inside the cone skip this.
    for (Index keep = d - 1; keep >= 1; --keep) {
        const Eigensystem es = eig_hermitian(
            (0.5 * (out.sigma + out.sigma.adjoint())).eval(), 1e-7);
        if (es.values(0) >= 0.05) break;
        Matrix u(d, keep);
        for (Index c = 0; c < keep; ++c) u.col(c) = es.vectors.col(d - 1 - c);
        const std::function<double(const Matrix&)> reduced = [&objective, u](const Matrix& s) {
            return objective(Matrix(u * s * u.adjoint()));
        };
        Matrix start = u.adjoint() * out.sigma * u;
        start = 0.5 * (start + start.adjoint());
        const double tr = start.trace().real();
        if (!(tr > 1e-12)) continue;
        start /= tr;

        Matrix trimmed_sigma;
        double trimmed_value;
        if (keep == 1) {
            trimmed_sigma = Matrix::Identity(1, 1);
            trimmed_value = reduced(trimmed_sigma);
            ++total_evals;
        } else {
            const detail::ParamObjective reduced_pen = penalize(reduced, keep);
            detail::SearchState st;
            st.x = params_of(start, keep);
            st.f = reduced_pen(st.x);
            st.evals = 1;
            if (!std::isfinite(st.f)) continue;
            detail::nelder_mead(reduced_pen, st, 0.2, 1e-10, probe_budget);
            staged_polish(reduced_pen, st);
            total_evals += st.evals;
            trimmed_sigma = sigma_from(st.x, keep);
            trimmed_value = -st.f;
        }
        if (std::isfinite(trimmed_value) && trimmed_value > out.value) {
            out.value = trimmed_value;
            out.sigma = u * trimmed_sigma * u.adjoint();
        } else {
            break;  // lower ranks only lose support mass once a trim fails
        }
    }

    out.evaluations = total_evals;
    return out;
}

// Exhaustive grid over the qubit Bloch ball |r| <= 1 - 1e-6; test-side ground
// truth for maximize_over_sigma.
inline SigmaOptimum bloch_grid_oracle(const std::function<double(const Matrix&)>& objective,
                                      int resolution, Index d = 2) {
    if (d != 2) throw UnsupportedDimension("bloch_grid_oracle handles qubit conditioning only");
    if (resolution < 1) throw InvalidShape("resolution must be positive");
    const double radius = 1.0 - 1e-6;
    SigmaOptimum best;
    const auto coord = [&](int i) {
        return resolution == 1 ? 0.0
                               : -radius + 2.0 * radius * static_cast<double>(i) /
                                               static_cast<double>(resolution - 1);
    };
    for (int ix = 0; ix < resolution; ++ix)
        for (int iy = 0; iy < resolution; ++iy)
            for (int iz = 0; iz < resolution; ++iz) {
                const double x = coord(ix), y = coord(iy), z = coord(iz);
                if (x * x + y * y + z * z > radius * radius) continue;
                Matrix sigma(2, 2);
                sigma << Complex(0.5 * (1.0 + z), 0.0), Complex(0.5 * x, -0.5 * y),
                    Complex(0.5 * x, 0.5 * y), Complex(0.5 * (1.0 - z), 0.0);
                const double v = objective(sigma);
                ++best.evaluations;
                if (std::isfinite(v) && v > best.value) {
                    best.value = v;
                    best.sigma = sigma;
                }
            }
    if (!std::isfinite(best.value))
        throw OptimizerFailure("grid produced no finite objective value");
    return best;
}

// ---------------------------------------------------------------------------
// Conditional entropies
// ---------------------------------------------------------------------------

namespace detail {

// (1/2^K) log2 Tr(M^(2^K)) by repeated squaring; a smooth upper bound on
// log2 lambda_max(M) with gap at most log2(rank M)/2^K.
inline double log2_power_trace(Matrix m, int squarings) {
    double acc = 0.0;
    for (int k = 0; k < squarings; ++k) {
        const double t = m.trace().real();
        if (!(t > 0.0)) return -std::numeric_limits<double>::infinity();
        m /= t;
        m = Matrix(m * m);
        acc = 2.0 * (acc + std::log2(t));
    }
    const double t = m.trace().real();
    if (!(t > 0.0)) return -std::numeric_limits<double>::infinity();
    return std::ldexp(acc + std::log2(t), -squarings);
}

// -D_K(rho_AB || 1 (x) sigma) as a fast function of sigma, with the state
// compressed onto A (x) supp(rho_B) when support restriction is on (licensed
// by the support-restriction lemma). All spectral data of the first argument
// is precomputed; each evaluation costs one small eigendecomposition plus,
// for the min/max families, one eigendecomposition of the compressed state
// space.
class ConditionalObjective {
public:
    ConditionalObjective(const EntropySpec& spec, const DensityOperator& rho,
                         const std::vector<std::string>& condition_on, bool restrict_support)
        : spec_(spec) {
        const DimSignature cond_sig = rho.dims.keep(condition_on);
        const auto a_labels = rho.dims.complement(condition_on);
        std::vector<std::string> order = a_labels;
        for (const auto& l : cond_sig.labels()) order.push_back(l);

        const Matrix perm = permutation_matrix(rho.dims, order);
        Matrix s = perm * rho.matrix * perm.adjoint();
        s = 0.5 * (s + s.adjoint());

        DimSignature perm_sig;
        for (const auto& l : order) perm_sig.append(l, rho.dims.dim_of(l));
        d_b_ = cond_sig.total();
        d_a_ = perm_sig.total() / d_b_;

        Matrix rho_b = partial_trace(s, perm_sig, cond_sig.labels());
        rho_b = 0.5 * (rho_b + rho_b.adjoint());

        if (restrict_support) {
            const Eigensystem es_b = eig_hermitian(rho_b);
            const double cut = kSupportCutoff * spectral_scale(es_b.values);
            std::vector<Index> kept;
            for (Index i = 0; i < es_b.values.size(); ++i)
                if (es_b.values(i) > cut) kept.push_back(i);
            r_ = static_cast<Index>(kept.size());
            basis_ = Matrix(d_b_, r_);
            for (Index c = 0; c < r_; ++c)
                basis_.col(c) = es_b.vectors.col(kept[static_cast<std::size_t>(c)]);
            const Matrix w = tensor(Matrix::Identity(d_a_, d_a_), basis_);
            s_ = w.adjoint() * s * w;
            s_ = 0.5 * (s_ + s_.adjoint());
            rho_b_ = basis_.adjoint() * rho_b * basis_;
        } else {
            r_ = d_b_;
            basis_ = Matrix::Identity(d_b_, d_b_);
            s_ = std::move(s);
            rho_b_ = std::move(rho_b);
        }

        es_s_ = eig_hermitian(s_, 1e-8);
        s_vals_ = psd_eigenvalues(es_s_, "conditional entropy state");
        s_cut_ = kSupportCutoff * spectral_scale(s_vals_);
        trace_s_ = s_vals_.sum();

        switch (spec_.family) {
            case Family::von_neumann: {
                h_term_ = 0.0;
                for (Index i = 0; i < s_vals_.size(); ++i)
                    if (s_vals_(i) > s_cut_) h_term_ += s_vals_(i) * std::log2(s_vals_(i));
                break;
            }
            case Family::renyi:
            case Family::tsallis: {
                c_alpha_ = marginal_of_power(spec_.alpha);
                break;
            }
            case Family::renyi0: {
                c_alpha_ = marginal_of_power(0.0);  // support projector
                break;
            }
            case Family::min_rel:
                break;
            case Family::max_rel: {
                RealVector roots(s_vals_.size());
                for (Index i = 0; i < s_vals_.size(); ++i)
                    roots(i) = s_vals_(i) > s_cut_ ? std::sqrt(s_vals_(i)) : 0.0;
                root_s_ = spectral_assemble(es_s_.vectors, roots);
                break;
            }
        }
    }

    Index sigma_dim() const { return r_; }
    Index d_a() const { return d_a_; }

    // State compressed onto A (x) supp(rho_B), conditioning subsystems last.
    const Matrix& compressed_state() const { return s_; }
    const Eigensystem& state_eigensystem() const { return es_s_; }
    const RealVector& state_eigenvalues() const { return s_vals_; }
    double state_cutoff() const { return s_cut_; }

    // Exact objective.
    double operator()(const Matrix& sigma) const { return eval(sigma, false); }

    // Search objective: identical except that the min family's nonsmooth
    // largest eigenvalue is replaced by the smooth power-trace bound, whose
    // maximizer is within 2^-27 log2(dim) of the true one in value.
    double search(const Matrix& sigma) const { return eval(sigma, true); }

    // Back to the original conditioning basis.
    Matrix expand(const Matrix& sigma) const { return basis_ * sigma * basis_.adjoint(); }

private:
    // sigma in the (possibly support-restricted) conditioning basis.
    double eval(const Matrix& sigma, bool surrogate_search) const {
        Eigensystem es = eig_hermitian((0.5 * (sigma + sigma.adjoint())).eval(), 1e-7);
        RealVector nu = es.values.cwiseMax(0.0);
        const double tr = nu.sum();
        if (!(tr > 0.0)) return -std::numeric_limits<double>::infinity();
        nu /= tr;
        const double nu_cut = kSupportCutoff * spectral_scale(nu);

        const bool needs_support = spec_.family == Family::von_neumann ||
                                   spec_.family == Family::min_rel ||
                                   ((spec_.family == Family::renyi ||
                                     spec_.family == Family::tsallis) &&
                                    spec_.alpha > 1.0);
        // <u_k| rho_B |u_k>
        RealVector weights(nu.size());
        for (Index k = 0; k < nu.size(); ++k)
            weights(k) = std::max(
                0.0, es.vectors.col(k).dot(Vector(rho_b_ * es.vectors.col(k))).real());
        if (needs_support) {
            double inside = 0.0;
            for (Index k = 0; k < nu.size(); ++k)
                if (nu(k) > nu_cut) inside += weights(k);
            if (1.0 - inside / trace_s_ > kSupportLeakTol)
                return -std::numeric_limits<double>::infinity();
        }

        switch (spec_.family) {
            case Family::von_neumann: {
                double s_log_t = 0.0;
                for (Index k = 0; k < nu.size(); ++k)
                    if (nu(k) > nu_cut) s_log_t += weights(k) * std::log2(nu(k));
                return -(h_term_ - s_log_t) / trace_s_;
            }
            case Family::renyi:
            case Family::tsallis: {
                double q = 0.0;
                for (Index k = 0; k < nu.size(); ++k) {
                    if (nu(k) <= nu_cut) continue;
                    const double w =
                        es.vectors.col(k).dot(Vector(c_alpha_ * es.vectors.col(k))).real();
                    q += std::pow(nu(k), 1.0 - spec_.alpha) * w;
                }
                if (spec_.family == Family::tsallis) return -(q - 1.0) / (spec_.alpha - 1.0);
                if (q <= 0.0) return -std::numeric_limits<double>::infinity();
                return -std::log2(q) / (spec_.alpha - 1.0);
            }
            case Family::renyi0: {
                double q = 0.0;
                for (Index k = 0; k < nu.size(); ++k) {
                    if (nu(k) <= nu_cut) continue;
                    const double w =
                        es.vectors.col(k).dot(Vector(c_alpha_ * es.vectors.col(k))).real();
                    q += nu(k) * std::max(w, 0.0);
                }
                if (q <= 0.0) return -std::numeric_limits<double>::infinity();
                return std::log2(q);
            }
            case Family::min_rel: {
                RealVector inv_root(nu.size());
                for (Index k = 0; k < nu.size(); ++k)
                    inv_root(k) = nu(k) > nu_cut ? 1.0 / std::sqrt(nu(k)) : 0.0;
                const Matrix w = tensor(Matrix::Identity(d_a_, d_a_),
                                        spectral_assemble(es.vectors, inv_root));
                const Matrix m = w * s_ * w;
                if (surrogate_search) return -log2_power_trace(m, 27);
                const Eigensystem esm = eig_hermitian((0.5 * (m + m.adjoint())).eval(), 1e-7);
                const double lam = esm.values(esm.values.size() - 1);
                if (lam <= 0.0) return -std::numeric_limits<double>::infinity();
                return -std::log2(lam);
            }
            case Family::max_rel: {
                double fid = 0.0;
                if (surrogate_search) {
                    // eigenvalue route: ~1e-8 accurate, a third of the cost
                    const Matrix t = tensor(Matrix::Identity(d_a_, d_a_),
                                            spectral_assemble(es.vectors, nu));
                    const Matrix m = root_s_ * t * root_s_;
                    const Eigensystem esm =
                        eig_hermitian((0.5 * (m + m.adjoint())).eval(), 1e-7);
                    for (Index i = 0; i < esm.values.size(); ++i)
                        fid += std::sqrt(std::max(esm.values(i), 0.0));
                } else {
                    RealVector root_nu(nu.size());
                    for (Index k = 0; k < nu.size(); ++k)
                        root_nu(k) = nu(k) > nu_cut ? std::sqrt(nu(k)) : 0.0;
                    const Matrix root_t = tensor(Matrix::Identity(d_a_, d_a_),
                                                 spectral_assemble(es.vectors, root_nu));
                    fid = trace_norm(Matrix(root_s_ * root_t));
                }
                if (fid <= 1e-150) return -std::numeric_limits<double>::infinity();
                return 2.0 * std::log2(fid);
            }
        }
        return -std::numeric_limits<double>::infinity();
    }

    // Tr_A(S^p) in the compressed space.
    Matrix marginal_of_power(double p) const {
        RealVector powered(s_vals_.size());
        for (Index i = 0; i < s_vals_.size(); ++i) {
            if (s_vals_(i) > s_cut_)
                powered(i) = p == 0.0 ? 1.0 : std::pow(s_vals_(i), p);
            else
                powered(i) = 0.0;
        }
        const Matrix sp = spectral_assemble(es_s_.vectors, powered);
        DimSignature sig{{"a", d_a_}, {"b", r_}};
        return partial_trace(sp, sig, {"b"});
    }

    EntropySpec spec_;
    Index d_a_ = 1;
    Index d_b_ = 1;
    Index r_ = 1;
    Matrix basis_;   // d_b x r support basis of rho_B
    Matrix s_;       // compressed state, conditioning subsystems last
    Matrix rho_b_;   // compressed marginal
    Eigensystem es_s_;
    RealVector s_vals_;
    double s_cut_ = 0.0;
    double trace_s_ = 1.0;
    double h_term_ = 0.0;  // Tr S log2 S
    Matrix c_alpha_;       // Tr_A(S^alpha) resp. Tr_A(Pi_S)
    Matrix root_s_;
};

}  // namespace detail

namespace detail {

// Orthonormal basis of Hermitian d x d matrices under <A,B> = Tr(AB).
inline std::vector<Matrix> hermitian_basis(Index d) {
    std::vector<Matrix> basis;
    basis.reserve(static_cast<std::size_t>(d * d));
    const double inv_root2 = 1.0 / std::sqrt(2.0);
    for (Index i = 0; i < d; ++i) {
        Matrix e = Matrix::Zero(d, d);
        e(i, i) = 1.0;
        basis.push_back(e);
    }
    for (Index i = 0; i < d; ++i)
        for (Index j = i + 1; j < d; ++j) {
            Matrix e = Matrix::Zero(d, d);
            e(i, j) = inv_root2;
            e(j, i) = inv_root2;
            basis.push_back(e);
            Matrix f = Matrix::Zero(d, d);
            f(i, j) = Complex(0.0, -inv_root2);
            f(j, i) = Complex(0.0, inv_root2);
            basis.push_back(f);
        }
    return basis;
}

// maximize objective . v subject to f0 + sum_i v_i f[i] >= 0, by damped-Newton
// log-barrier path following. The constraint matrices are Hermitian; blocks
// may be packed block-diagonally. Returns the final interior iterate, whose
// objective value lies within (matrix size)/t_final of the optimum.
struct AffineSdp {
    Matrix f0;
    std::vector<Matrix> f;
    Eigen::VectorXd objective;
    Eigen::VectorXd start;  // strictly feasible
};

inline Eigen::VectorXd solve_affine_sdp(const AffineSdp& p) {
    const Index n = p.f0.rows();
    const auto m = static_cast<Index>(p.f.size());
    Eigen::VectorXd v = p.start;

    const auto constraint = [&](const Eigen::VectorXd& y) {
        Matrix w = p.f0;
        for (Index i = 0; i < m; ++i) w += y(i) * p.f[i];
        return w;
    };
    const auto factor = [&](const Eigen::VectorXd& y) -> std::optional<Eigen::LLT<Matrix>> {
        Eigen::LLT<Matrix> llt(constraint(y));
        if (llt.info() != Eigen::Success) return std::nullopt;
        return llt;
    };

    std::vector<Matrix> w_inv_f(static_cast<std::size_t>(m));
    double t = 1.0 / std::max(1.0, p.objective.cwiseAbs().maxCoeff());
    const double t_max = 1.0e13 * static_cast<double>(n);
    while (t < t_max) {
        for (int newton = 0; newton < 50; ++newton) {
            const auto llt = factor(v);
            if (!llt) break;
            const Matrix w_inv = llt->solve(Matrix::Identity(n, n));
            Eigen::VectorXd g(m);
            for (Index i = 0; i < m; ++i) {
                w_inv_f[static_cast<std::size_t>(i)] = w_inv * p.f[i];
                g(i) = -t * p.objective(i) -
                       w_inv_f[static_cast<std::size_t>(i)].trace().real();
            }
            Eigen::MatrixXd hess(m, m);
            for (Index i = 0; i < m; ++i)
                for (Index j = i; j < m; ++j) {
                    const double hij = (w_inv_f[static_cast<std::size_t>(i)] *
                                        w_inv_f[static_cast<std::size_t>(j)])
                                           .trace()
                                           .real();
                    hess(i, j) = hij;
                    hess(j, i) = hij;
                }
            Eigen::LDLT<Eigen::MatrixXd> solver(
                hess + 1e-13 * std::max(1.0, hess.trace()) *
                           Eigen::MatrixXd::Identity(m, m));
            const Eigen::VectorXd step = solver.solve(-g);
            const double decrement = std::sqrt(std::max(0.0, -g.dot(step)));

            double stepsize = decrement > 0.25 ? 1.0 / (1.0 + decrement) : 1.0;
            Eigen::VectorXd cand = v + stepsize * step;
            int backtracks = 0;
            while (backtracks < 40 && !factor(cand)) {
                stepsize *= 0.5;
                cand = v + stepsize * step;
                ++backtracks;
            }
            if (backtracks >= 40) break;
            v = cand;
            if (decrement < 0.05) break;
        }
        t *= 8.0;
    }
    return v;
}

// The optimized min-entropy inner problem in its feasibility form,
//     minimize Tr Z  subject to  1_A (x) Z >= S.
// The nonsmooth largest eigenvalue defeats the simplex search at tolerances
// below ~1e-5 once the conditioning dimension exceeds 2; the barrier of the
// same problem is smooth and self-concordant, and a handful of Newton steps
// per stage tracks it to machine precision. The Bloch-grid oracle and the
// duality suite check the result independently.
struct SigmaSolution {
    Matrix sigma;
    double value = 0.0;
};

inline SigmaSolution min_entropy_barrier(const Matrix& s_in, Index d_a, Index r) {
    const double scale = spectral_scale(eig_hermitian(s_in, 1e-7).values);
    if (!(scale > 0.0)) throw ZeroFirstArgument("min-entropy barrier: zero state");
    const auto basis = hermitian_basis(r);
    const Matrix eye_a = Matrix::Identity(d_a, d_a);

    AffineSdp sdp;
    sdp.f0 = -s_in / scale;
    sdp.f.reserve(basis.size());
    sdp.objective.resize(static_cast<Index>(basis.size()));
    for (std::size_t k = 0; k < basis.size(); ++k) {
        sdp.f.push_back(tensor(eye_a, basis[k]));
        sdp.objective(static_cast<Index>(k)) = -basis[k].trace().real();  // maximize -Tr Z
    }
    sdp.start = Eigen::VectorXd::Zero(static_cast<Index>(basis.size()));
    for (Index i = 0; i < r; ++i) sdp.start(i) = 1.05;  // Z0 = 1.05 * lambda_max * 1

    const Eigen::VectorXd v = solve_affine_sdp(sdp);
    Matrix z = Matrix::Zero(r, r);
    for (std::size_t k = 0; k < basis.size(); ++k) z += v(static_cast<Index>(k)) * basis[k];
    const double tr = z.trace().real();

    SigmaSolution out;
    out.sigma = z / tr;
    out.value = -std::log2(tr * scale);
    return out;
}

// The optimized max-entropy inner problem compressed onto supp(S), where with
// S = V Lambda V^dag the fidelity to 1 (x) sigma becomes F(Lambda, G(sigma)),
// G(sigma) = V^dag (1 (x) sigma) V linear in sigma, and the maximization over
// sigma is the joint semidefinite program
//     maximize Re Tr X  s.t.  [[Lambda, X], [X^dag, G(sigma)]] >= 0,
//     sigma >= 0, Tr sigma = 1.
inline SigmaSolution max_entropy_barrier(const Eigensystem& es_s, const RealVector& s_vals,
                                         double s_cut, Index d_a, Index r) {
    std::vector<Index> supp;
    for (Index i = 0; i < s_vals.size(); ++i)
        if (s_vals(i) > s_cut) supp.push_back(i);
    const auto k = static_cast<Index>(supp.size());
    if (k == 0) throw ZeroFirstArgument("max-entropy barrier: zero state");
    Matrix v_supp(s_vals.size(), k);
    RealVector lambda(k);
    for (Index c = 0; c < k; ++c) {
        v_supp.col(c) = es_s.vectors.col(supp[static_cast<std::size_t>(c)]);
        lambda(c) = s_vals(supp[static_cast<std::size_t>(c)]);
    }

    const Index block = 2 * k + r;  // [[Lambda, X], [X^dag, G]] (+) sigma
    const Matrix eye_a = Matrix::Identity(d_a, d_a);
    const auto g_of = [&](const Matrix& sigma) {
        return Matrix(v_supp.adjoint() * tensor(eye_a, sigma) * v_supp);
    };

    AffineSdp sdp;
    sdp.f0 = Matrix::Zero(block, block);
    for (Index i = 0; i < k; ++i) sdp.f0(i, i) = lambda(i);
    const Matrix g_base = g_of(Matrix::Identity(r, r) / static_cast<double>(r));
    sdp.f0.block(k, k, k, k) = g_base;
    sdp.f0.block(2 * k, 2 * k, r, r) =
        Matrix::Identity(r, r) / static_cast<double>(r);

    std::vector<double> objective;
    // X entries: Re X_ij and Im X_ij
    for (Index i = 0; i < k; ++i)
        for (Index j = 0; j < k; ++j) {
            Matrix fre = Matrix::Zero(block, block);
            fre(i, k + j) = 1.0;
            fre(k + j, i) = 1.0;
            sdp.f.push_back(fre);
            objective.push_back(i == j ? 1.0 : 0.0);
            Matrix fim = Matrix::Zero(block, block);
            fim(i, k + j) = Complex(0.0, 1.0);
            fim(k + j, i) = Complex(0.0, -1.0);
            sdp.f.push_back(fim);
            objective.push_back(0.0);
        }
    // sigma on the unit-trace slice: traceless Hermitian directions
    const auto basis = hermitian_basis(r);
    std::vector<Matrix> traceless;
    for (Index i = 0; i + 1 < r; ++i) {
        Matrix e = Matrix::Zero(r, r);
        e(i, i) = 1.0;
        e(r - 1, r - 1) = -1.0;
        traceless.push_back(e);
    }
    for (std::size_t b = static_cast<std::size_t>(r); b < basis.size(); ++b)
        traceless.push_back(basis[b]);
    for (const Matrix& dir : traceless) {
        Matrix f = Matrix::Zero(block, block);
        f.block(k, k, k, k) = g_of(dir);
        f.block(2 * k, 2 * k, r, r) = dir;
        sdp.f.push_back(f);
        objective.push_back(0.0);
    }
    sdp.objective = Eigen::Map<Eigen::VectorXd>(objective.data(),
                                                static_cast<Index>(objective.size()));
    sdp.start = Eigen::VectorXd::Zero(static_cast<Index>(objective.size()));

    const Eigen::VectorXd v = solve_affine_sdp(sdp);
    double fid = 0.0;
    for (Index i = 0; i < k; ++i) fid += v(2 * (i * k + i));
    Matrix sigma = Matrix::Identity(r, r) / static_cast<double>(r);
    const Index x_params = 2 * k * k;
    for (std::size_t l = 0; l < traceless.size(); ++l)
        sigma += v(x_params + static_cast<Index>(l)) * traceless[l];
    sigma = 0.5 * (sigma + sigma.adjoint());

    SigmaSolution out;
    out.sigma = sigma / sigma.trace().real();
    out.value = fid > 0.0 ? 2.0 * std::log2(fid) : -std::numeric_limits<double>::infinity();
    return out;
}

}  // namespace detail

// H_K(A|B) where A is everything not conditioned on. Fixed mode evaluates
// -D_K(rho || 1 (x) rho_B); optimized mode maximizes over sigma_B on the
// support of rho_B.
inline double conditional_entropy(const EntropySpec& spec, const DensityOperator& rho,
                                  const std::vector<std::string>& condition_on,
                                  const OptimizerConfig& cfg = {}) {
    if (!spec.optimized()) {
        const Matrix marginal = partial_trace(rho.matrix, rho.dims, condition_on);
        const Matrix t = embed(marginal, condition_on, rho.dims);
        const ExtendedReal d = relative_entropy(spec, rho.matrix, t);
        if (d.infinite)
            throw DomainError("conditional entropy diverged; the state violates the "
                              "support condition numerically");
        return -d.value;
    }
    const detail::ConditionalObjective objective(spec, rho, condition_on, cfg.restrict_support);
    if (objective.sigma_dim() == 1) return objective(Matrix::Identity(1, 1));
    if (spec.family == Family::min_rel) {
        const auto sol = detail::min_entropy_barrier(objective.compressed_state(),
                                                     objective.d_a(), objective.sigma_dim());
        const double exact = objective(sol.sigma);
        return std::isfinite(exact) ? std::max(exact, sol.value) : sol.value;
    }
    if (spec.family == Family::max_rel) {
        Index support = 0;
        for (Index i = 0; i < objective.state_eigenvalues().size(); ++i)
            if (objective.state_eigenvalues()(i) > objective.state_cutoff()) ++support;
        const Index r = objective.sigma_dim();
        // The fidelity program has 2k^2 + r^2 - 1 variables; Newton is exact
        // and fast while the state rank k is small (in particular for every
        // marginal of a pure tripartite state), and the simplex search takes
        // over for high-rank states where slack margins are generous.
        if (2 * support * support + r * r - 1 <= 60) {
            const auto sol = detail::max_entropy_barrier(
                objective.state_eigensystem(), objective.state_eigenvalues(),
                objective.state_cutoff(), objective.d_a(), r);
            const double exact = objective(sol.sigma);
            return std::isfinite(exact) ? std::max(exact, sol.value) : sol.value;
        }
    }
    const SigmaOptimum opt = maximize_over_sigma(
        [&objective](const Matrix& sigma) { return objective.search(sigma); },
        objective.sigma_dim(), cfg);
    // exact value at the point the search settled on
    const double value = objective(opt.sigma);
    return std::isfinite(value) ? value : opt.value;
}

// The entropy dual to `spec`, evaluated at (A-side | condition_on):
// purify, trace out the conditioning system, and condition on the purifier.
// Independent of the purification choice by local-isometry invariance.
inline double dual_entropy(const EntropySpec& spec, const DensityOperator& rho,
                           const std::vector<std::string>& condition_on,
                           const OptimizerConfig& cfg = {}) {
    const DensityOperator pure = purify(rho, "E");
    const std::string purifier = pure.dims.label(pure.dims.size() - 1);
    std::vector<std::string> keep = rho.dims.complement(condition_on);
    keep.push_back(purifier);
    const DensityOperator marginal = reduced(pure, keep);
    return -conditional_entropy(spec, marginal, {purifier}, cfg);
}

}  // namespace entrolab
