#ifndef HODGEFIR_FILTERING_HPP
#define HODGEFIR_FILTERING_HPP

#include <cmath>
#include <utility>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "complex.hpp"
#include "errors.hpp"
#include "spectral.hpp"

namespace hodgefir {

/// FIR filter h0*I + h1*L1 + ... + h_{L-1}*L1^{L-1}.
struct FirFilter {
    Vec coeffs;  // length L >= 1
    int length() const { return static_cast<int>(coeffs.size()); }
};

/// Subspace-varying filter h0*I + sum alpha_l (L1_lower)^l + sum beta_l (L1_upper)^l.
/// alpha/beta may be empty; their entries weight powers starting at 1.
struct SvFilter {
    double h0 = 0.0;
    Vec alpha;
    Vec beta;
    int total_length() const {
        return 1 + static_cast<int>(alpha.size()) + static_cast<int>(beta.size());
    }
};

/// Response values aligned with a Spectrum's eigenvalue order.
using FrequencyResponse = Vec;

/// Arithmetic-work counter for the diagnostics mode; counts scalar
/// multiply-adds performed inside sparse shift products.
struct FilterStats {
    long long multiply_adds = 0;
};

namespace detail {

inline Vec sparse_shift(const SparseMat& m, const Vec& x, FilterStats* stats) {
    if (m.cols() != x.size()) throw DimensionMismatch("shift dimension mismatch");
    Vec y = Vec::Zero(m.rows());
    for (int k = 0; k < m.outerSize(); ++k)
        for (SparseMat::InnerIterator it(m, k); it; ++it)
            y(it.row()) += it.value() * x(it.col());
    if (stats) stats->multiply_adds += m.nonZeros();
    return y;
}

}  // namespace detail

/// One L1 shift, split into its lower and upper halves (Eq.-style local
/// neighborhood aggregation; computed as two sparse products).
inline std::pair<EdgeFlow, EdgeFlow> shift(const HodgeLaplacians& lap,
                                           const EdgeFlow& f,
                                           FilterStats* stats = nullptr) {
    return {{detail::sparse_shift(lap.l1_lower, f.values, stats)},
            {detail::sparse_shift(lap.l1_upper, f.values, stats)}};
}

/// Apply an FIR filter by the shift recursion f^(l) = L1 f^(l-1), Horner
/// style; no dense power of L1 is ever formed, so the cost is O(L * nnz(L1)).
inline EdgeFlow apply_fir(const FirFilter& h, const HodgeLaplacians& lap,
                          const EdgeFlow& f, FilterStats* stats = nullptr) {
    const int L = h.length();
    Vec acc = h.coeffs(L - 1) * f.values;
    for (int l = L - 2; l >= 0; --l)
        acc = detail::sparse_shift(lap.l1, acc, stats) + h.coeffs(l) * f.values;
    return {acc};
}

/// Apply a subspace-varying filter via two independent Horner recursions,
/// one in the lower and one in the upper Laplacian.
inline EdgeFlow apply_sv(const SvFilter& h, const HodgeLaplacians& lap,
                         const EdgeFlow& f, FilterStats* stats = nullptr) {
    Vec out = h.h0 * f.values;
    auto branch = [&](const Vec& coeffs, const SparseMat& m) {
        const int L = static_cast<int>(coeffs.size());
        if (L == 0) return;
        Vec acc = coeffs(L - 1) * f.values;
        for (int l = L - 2; l >= 0; --l)
            acc = detail::sparse_shift(m, acc, stats) + coeffs(l) * f.values;
        out += detail::sparse_shift(m, acc, stats);  // powers start at 1
    };
    branch(h.alpha, lap.l1_lower);
    branch(h.beta, lap.l1_upper);
    return {out};
}

inline double polyval(const Vec& coeffs, double x) {
    double r = 0.0;
    for (int l = static_cast<int>(coeffs.size()) - 1; l >= 0; --l) r = r * x + coeffs(l);
    return r;
}

inline FrequencyResponse response_fir(const FirFilter& h, const Spectrum& s) {
    Vec r(s.eigenvalues.size());
    for (int i = 0; i < r.size(); ++i) r(i) = polyval(h.coeffs, s.eigenvalues(i));
    return r;
}

/// Frequency response of the SV filter: h0 at harmonic frequencies,
/// h0 + sum alpha_l lambda^l at gradient ones, h0 + sum beta_l lambda^l at
/// curl ones.
inline FrequencyResponse response_sv(const SvFilter& h, const Spectrum& s) {
    Vec r(s.eigenvalues.size());
    for (int i = 0; i < r.size(); ++i) {
        double lambda = s.eigenvalues(i);
        double v = h.h0;
        if (s.labels[i] == FrequencyLabel::Gradient)
            v += lambda * polyval(h.alpha, lambda);
        else if (s.labels[i] == FrequencyLabel::Curl)
            v += lambda * polyval(h.beta, lambda);
        r(i) = v;
    }
    return r;
}

enum class LaplacianChoice { Full, Lower };

/// Baseline regularized inverse (I + mu*L)^-1 f, solved as an SPD system.
inline EdgeFlow apply_regularized_inverse(const HodgeLaplacians& lap,
                                          LaplacianChoice which, double mu,
                                          const EdgeFlow& f) {
    const SparseMat& l = which == LaplacianChoice::Full ? lap.l1 : lap.l1_lower;
    if (l.rows() != f.values.size())
        throw DimensionMismatch("flow length does not match Laplacian");
    SparseMat sys(l.rows(), l.cols());
    sys.setIdentity();
    sys += mu * l;
    Eigen::SimplicialLDLT<SparseMat> solver(sys);
    if (solver.info() != Eigen::Success)
        throw EigensolverFailure("regularized inverse factorization failed");
    return {solver.solve(f.values)};
}

}  // namespace hodgefir

#endif
