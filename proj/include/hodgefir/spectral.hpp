#ifndef HODGEFIR_SPECTRAL_HPP
#define HODGEFIR_SPECTRAL_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "complex.hpp"
#include "errors.hpp"

namespace hodgefir {

using Mat = Eigen::MatrixXd;

enum class FrequencyLabel { Gradient, Curl, Harmonic };

inline const char* label_name(FrequencyLabel l) {
    switch (l) {
        case FrequencyLabel::Gradient: return "Gradient";
        case FrequencyLabel::Curl: return "Curl";
        default: return "Harmonic";
    }
}

/// Full eigendecomposition of L1 with every eigenpair tagged as a gradient,
/// curl or harmonic frequency. Eigenvalues ascend; eigenvector columns are
/// orthonormal and sign-normalized (first nonzero component positive).
struct Spectrum {
    Vec eigenvalues;
    Mat eigenvectors;
    std::vector<FrequencyLabel> labels;
    std::vector<int> q_gradient, q_curl, q_harmonic;
    double tol_zero = 0.0;
};

/// Projections of a flow onto the three eigenvector groups.
struct HodgeEmbedding {
    Vec gradient;
    Vec curl;
    Vec harmonic;
};

inline void sign_normalize_columns(Mat& u, double eps = 1e-9) {
    for (int j = 0; j < u.cols(); ++j)
        for (int i = 0; i < u.rows(); ++i)
            if (std::abs(u(i, j)) > eps) {
                if (u(i, j) < 0) u.col(j) = -u.col(j);
                break;
            }
}

/// Label a single normalized eigenpair by its divergence and curl measures
/// ||B1 u||^2 and ||B2^T u||^2. After the degeneracy rotation performed by
/// eigendecompose, exactly one of the two is ~lambda and the other ~0; if
/// both remain large the rotation failed and we refuse to guess.
inline FrequencyLabel classify(const Vec& u, double lambda,
                               const IncidencePair& inc, double tol_zero) {
    if (lambda < tol_zero) return FrequencyLabel::Harmonic;
    double div2 = (inc.b1 * u).squaredNorm();
    double curl2 = (SparseMat(inc.b2.transpose()) * u).squaredNorm();
    double tol = std::max(tol_zero, 1e-10) * u.squaredNorm();
    if (div2 > tol && curl2 > tol)
        throw AmbiguousEigenvector(
            "eigenvector has both divergence " + std::to_string(div2) +
            " and curl " + std::to_string(curl2) + " at lambda=" + std::to_string(lambda));
    return div2 >= curl2 ? FrequencyLabel::Gradient : FrequencyLabel::Curl;
}

/// Eigendecompose L1 and classify every frequency.
///
/// Within a degenerate eigenspace that mixes gradient and curl directions the
/// eigenbasis of L1 is not unique; we rotate each eigenvalue cluster so every
/// basis vector is purely gradient or purely curl (diagonalize the lower
/// Laplacian restricted to the cluster).
inline Spectrum eigendecompose(const HodgeLaplacians& lap, const IncidencePair& inc,
                               double tol_zero_rel = 1e-8) {
    const int n = static_cast<int>(lap.l1.rows());
    Eigen::SelfAdjointEigenSolver<Mat> es(Mat(lap.l1));
    if (es.info() != Eigen::Success)
        throw EigensolverFailure("L1 eigendecomposition did not converge");
    Spectrum s;
    s.eigenvalues = es.eigenvalues();
    s.eigenvectors = es.eigenvectors();
    double scale = std::max(s.eigenvalues.cwiseAbs().maxCoeff(), 1.0);
    s.tol_zero = tol_zero_rel * scale;

    Mat l1_lower(lap.l1_lower);
    double cluster_tol = 1e-8 * scale;
    int i = 0;
    while (i < n) {
        int j = i + 1;
        while (j < n && s.eigenvalues(j) - s.eigenvalues(i) < cluster_tol) ++j;
        int m = j - i;
        if (m > 1 && s.eigenvalues(i) >= s.tol_zero) {
            Mat q = s.eigenvectors.middleCols(i, m);
            Eigen::SelfAdjointEigenSolver<Mat> sub(q.transpose() * l1_lower * q);
            if (sub.info() != Eigen::Success)
                throw EigensolverFailure("cluster rotation failed");
            s.eigenvectors.middleCols(i, m) = q * sub.eigenvectors();
        }
        i = j;
    }
    sign_normalize_columns(s.eigenvectors);

    s.labels.resize(n);
    for (int k = 0; k < n; ++k) {
        s.labels[k] = classify(s.eigenvectors.col(k), s.eigenvalues(k), inc, s.tol_zero);
        switch (s.labels[k]) {
            case FrequencyLabel::Gradient: s.q_gradient.push_back(k); break;
            case FrequencyLabel::Curl: s.q_curl.push_back(k); break;
            case FrequencyLabel::Harmonic: s.q_harmonic.push_back(k); break;
        }
    }
    return s;
}

/// Simplicial Fourier transform and its inverse.
inline Vec sft(const Spectrum& s, const EdgeFlow& f) {
    if (f.values.size() != s.eigenvectors.rows())
        throw DimensionMismatch("flow length does not match spectrum");
    return s.eigenvectors.transpose() * f.values;
}

inline EdgeFlow isft(const Spectrum& s, const Vec& coeffs) {
    if (coeffs.size() != s.eigenvectors.cols())
        throw DimensionMismatch("coefficient length does not match spectrum");
    return {s.eigenvectors * coeffs};
}

inline HodgeEmbedding embed(const Spectrum& s, const EdgeFlow& f) {
    Vec tilde = sft(s, f);
    HodgeEmbedding e;
    auto pick = [&](const std::vector<int>& idx) {
        Vec v(idx.size());
        for (size_t k = 0; k < idx.size(); ++k) v(k) = tilde(idx[k]);
        return v;
    };
    e.gradient = pick(s.q_gradient);
    e.curl = pick(s.q_curl);
    e.harmonic = pick(s.q_harmonic);
    return e;
}

/// Orthogonal projection U_S U_S^T f onto one Hodge subspace.
inline EdgeFlow project(const Spectrum& s, const EdgeFlow& f, FrequencyLabel sub) {
    Vec tilde = sft(s, f);
    Vec kept = Vec::Zero(tilde.size());
    for (int k = 0; k < tilde.size(); ++k)
        if (s.labels[k] == sub) kept(k) = tilde(k);
    return isft(s, kept);
}

}  // namespace hodgefir

#endif
