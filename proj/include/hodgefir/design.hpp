#ifndef HODGEFIR_DESIGN_HPP
#define HODGEFIR_DESIGN_HPP

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "complex.hpp"
#include "errors.hpp"
#include "filtering.hpp"
#include "spectral.hpp"

namespace hodgefir {

/// Desired frequency response, one target per eigenvalue index of a Spectrum.
struct DesignSpec {
    Vec targets;

    static DesignSpec uniform(const Spectrum& s, double g) {
        return {Vec::Constant(s.eigenvalues.size(), g)};
    }
    /// Per-subspace targets, e.g. gradient-preserving = (1, 0, 0).
    static DesignSpec by_label(const Spectrum& s, double gradient, double curl,
                               double harmonic) {
        Vec t(s.eigenvalues.size());
        for (int i = 0; i < t.size(); ++i)
            switch (s.labels[i]) {
                case FrequencyLabel::Gradient: t(i) = gradient; break;
                case FrequencyLabel::Curl: t(i) = curl; break;
                case FrequencyLabel::Harmonic: t(i) = harmonic; break;
            }
        return {t};
    }
};

struct DesignReport {
    double residual = 0.0;   // ||Phi h - g|| recomputed after the solve
    double condition = 0.0;  // singular-value ratio of the LS system
    int rank = 0;
    bool rank_deficient = false;
    std::vector<std::string> warnings;
};

namespace detail {

struct DistinctNode {
    double lambda;
    double target;
};

/// Collapse duplicate eigenvalues (relative clustering) and average their
/// targets; conflicting targets inside one cluster are recorded as a warning,
/// since the response at a shared frequency cannot be controlled separately.
inline std::vector<DistinctNode> distinct_nodes(const Vec& lambdas, const Vec& targets,
                                                const std::vector<int>& idx,
                                                DesignReport& report) {
    std::vector<DistinctNode> nodes;
    double scale = std::max(lambdas.size() ? lambdas.cwiseAbs().maxCoeff() : 1.0, 1.0);
    double tol = 1e-8 * scale;
    size_t i = 0;
    while (i < idx.size()) {
        size_t j = i + 1;
        double lo = lambdas(idx[i]);
        while (j < idx.size() && lambdas(idx[j]) - lo < tol) ++j;
        double tmin = targets(idx[i]), tmax = tmin, tsum = 0.0;
        for (size_t k = i; k < j; ++k) {
            double t = targets(idx[k]);
            tmin = std::min(tmin, t);
            tmax = std::max(tmax, t);
            tsum += t;
        }
        if (tmax - tmin > 1e-12)
            report.warnings.push_back(
                "conflicting targets at eigenvalue " + std::to_string(lo) +
                "; averaged");
        nodes.push_back({lambdas(idx[i]), tsum / double(j - i)});
        i = j;
    }
    return nodes;
}

/// Rank-revealing min-norm least squares. Normal equations are avoided on
/// purpose (Vandermonde conditioning).
inline Vec solve_ls(const Mat& a, const Vec& b, DesignReport& report) {
    Eigen::CompleteOrthogonalDecomposition<Mat> cod(a);
    report.rank = static_cast<int>(cod.rank());
    report.rank_deficient = report.rank < std::min(a.rows(), a.cols());
    Eigen::JacobiSVD<Mat> svd(a);
    const auto& sv = svd.singularValues();
    double smin = sv(sv.size() - 1);
    report.condition = smin > 0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
    Vec x = cod.solve(b);
    report.residual = (a * x - b).norm();
    return x;
}

}  // namespace detail

/// Least-squares FIR design over the distinct eigenvalues of the spectrum.
/// With weight_by_multiplicity the Vandermonde system keeps one row per
/// eigenvalue index (repeated eigenvalues weight the fit), matching the
/// N1-row formulation.
inline std::pair<FirFilter, DesignReport> design_fir(const Spectrum& s,
                                                     const DesignSpec& spec,
                                                     int length,
                                                     bool weight_by_multiplicity = false) {
    if (length < 1) throw Error("filter length must be >= 1");
    if (spec.targets.size() != s.eigenvalues.size())
        throw DimensionMismatch("design spec does not match spectrum");
    DesignReport report;
    std::vector<int> all(s.eigenvalues.size());
    for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    std::vector<detail::DistinctNode> nodes;
    if (weight_by_multiplicity) {
        for (int i : all) nodes.push_back({s.eigenvalues(i), spec.targets(i)});
        DesignReport scan;  // still surface conflicting targets
        detail::distinct_nodes(s.eigenvalues, spec.targets, all, scan);
        report.warnings = scan.warnings;
    } else {
        nodes = detail::distinct_nodes(s.eigenvalues, spec.targets, all, report);
    }
    Mat phi(nodes.size(), length);
    Vec g(nodes.size());
    for (size_t i = 0; i < nodes.size(); ++i) {
        double p = 1.0;
        for (int j = 0; j < length; ++j) {
            phi(i, j) = p;
            p *= nodes[i].lambda;
        }
        g(i) = nodes[i].target;
    }
    FirFilter h{detail::solve_ls(phi, g, report)};
    return {h, report};
}

/// Least-squares SV design: all-ones first column, a gradient Vandermonde
/// block over distinct gradient frequencies, a curl block over distinct curl
/// frequencies, and a single harmonic row when the harmonic space is
/// nontrivial.
inline std::pair<SvFilter, DesignReport> design_sv(const Spectrum& s,
                                                   const DesignSpec& spec,
                                                   int l1, int l2,
                                                   bool weight_by_multiplicity = false) {
    if (l1 < 0 || l2 < 0) throw Error("SV branch lengths must be >= 0");
    if (spec.targets.size() != s.eigenvalues.size())
        throw DimensionMismatch("design spec does not match spectrum");
    DesignReport report;
    auto collect = [&](const std::vector<int>& idx) {
        if (weight_by_multiplicity) {
            std::vector<detail::DistinctNode> nodes;
            for (int i : idx) nodes.push_back({s.eigenvalues(i), spec.targets(i)});
            DesignReport scan;
            detail::distinct_nodes(s.eigenvalues, spec.targets, idx, scan);
            for (auto& w : scan.warnings) report.warnings.push_back(w);
            return nodes;
        }
        return detail::distinct_nodes(s.eigenvalues, spec.targets, idx, report);
    };
    auto grad = collect(s.q_gradient);
    auto curl = collect(s.q_curl);

    int rows = static_cast<int>(grad.size() + curl.size());
    bool harmonic_row = !s.q_harmonic.empty();
    double harmonic_target = 0.0;
    if (harmonic_row) {
        double tmin = spec.targets(s.q_harmonic.front()), tmax = tmin, tsum = 0.0;
        for (int i : s.q_harmonic) {
            tmin = std::min(tmin, spec.targets(i));
            tmax = std::max(tmax, spec.targets(i));
            tsum += spec.targets(i);
        }
        if (tmax - tmin > 1e-12)
            report.warnings.push_back("conflicting harmonic targets; averaged");
        harmonic_target = tsum / double(s.q_harmonic.size());
        rows += 1;
    }

    Mat phi = Mat::Zero(rows, 1 + l1 + l2);
    Vec g(rows);
    int r = 0;
    if (harmonic_row) {
        phi(r, 0) = 1.0;
        g(r++) = harmonic_target;
    }
    for (const auto& n : grad) {
        phi(r, 0) = 1.0;
        double p = n.lambda;
        for (int j = 0; j < l1; ++j) {
            phi(r, 1 + j) = p;
            p *= n.lambda;
        }
        g(r++) = n.target;
    }
    for (const auto& n : curl) {
        phi(r, 0) = 1.0;
        double p = n.lambda;
        for (int j = 0; j < l2; ++j) {
            phi(r, 1 + l1 + j) = p;
            p *= n.lambda;
        }
        g(r++) = n.target;
    }
    Vec x = detail::solve_ls(phi, g, report);
    SvFilter h;
    h.h0 = x(0);
    h.alpha = x.segment(1, l1);
    h.beta = x.segment(1 + l1, l2);
    return {h, report};
}

/// Data-driven FIR fit: stack [f, L1 f, ..., L1^{L-1} f] per training pair
/// and solve for the coefficients in one least-squares system.
inline std::pair<FirFilter, DesignReport> fit_fir_from_data(
    const HodgeLaplacians& lap, const std::vector<std::pair<EdgeFlow, EdgeFlow>>& pairs,
    int length) {
    if (length < 1) throw Error("filter length must be >= 1");
    if (pairs.empty()) throw Error("need at least one training pair");
    const int n = static_cast<int>(lap.l1.rows());
    Mat a(n * pairs.size(), length);
    Vec b(n * pairs.size());
    for (size_t p = 0; p < pairs.size(); ++p) {
        if (pairs[p].first.values.size() != n || pairs[p].second.values.size() != n)
            throw DimensionMismatch("training pair dimension mismatch");
        Vec f = pairs[p].first.values;
        for (int l = 0; l < length; ++l) {
            a.block(p * n, l, n, 1) = f;
            if (l + 1 < length) f = detail::sparse_shift(lap.l1, f, nullptr);
        }
        b.segment(p * n, n) = pairs[p].second.values;
    }
    DesignReport report;
    FirFilter h{detail::solve_ls(a, b, report)};
    if (report.rank < length)
        report.warnings.push_back("rank-deficient training data; min-norm solution");
    return {h, report};
}

/// Data-driven SV fit with columns [f | L1l f .. L1l^L1 f | L1u f .. L1u^L2 f].
inline std::pair<SvFilter, DesignReport> fit_sv_from_data(
    const HodgeLaplacians& lap, const std::vector<std::pair<EdgeFlow, EdgeFlow>>& pairs,
    int l1, int l2) {
    if (l1 < 0 || l2 < 0) throw Error("SV branch lengths must be >= 0");
    if (pairs.empty()) throw Error("need at least one training pair");
    const int n = static_cast<int>(lap.l1.rows());
    const int cols = 1 + l1 + l2;
    Mat a(n * pairs.size(), cols);
    Vec b(n * pairs.size());
    for (size_t p = 0; p < pairs.size(); ++p) {
        if (pairs[p].first.values.size() != n || pairs[p].second.values.size() != n)
            throw DimensionMismatch("training pair dimension mismatch");
        const Vec& f = pairs[p].first.values;
        a.block(p * n, 0, n, 1) = f;
        Vec g = f;
        for (int l = 0; l < l1; ++l) {
            g = detail::sparse_shift(lap.l1_lower, g, nullptr);
            a.block(p * n, 1 + l, n, 1) = g;
        }
        g = f;
        for (int l = 0; l < l2; ++l) {
            g = detail::sparse_shift(lap.l1_upper, g, nullptr);
            a.block(p * n, 1 + l1 + l, n, 1) = g;
        }
        b.segment(p * n, n) = pairs[p].second.values;
    }
    DesignReport report;
    Vec x = detail::solve_ls(a, b, report);
    if (report.rank < cols)
        report.warnings.push_back("rank-deficient training data; min-norm solution");
    SvFilter h;
    h.h0 = x(0);
    h.alpha = x.segment(1, l1);
    h.beta = x.segment(1 + l1, l2);
    return {h, report};
}

}  // namespace hodgefir

#endif
