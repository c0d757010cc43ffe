#ifndef HODGEFIR_EXPERIMENTS_HPP
#define HODGEFIR_EXPERIMENTS_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include "complex.hpp"
#include "design.hpp"
#include "errors.hpp"
#include "filtering.hpp"
#include "spectral.hpp"

namespace hodgefir {

/// Normalized RMSE: ||estimate - truth|| / ||truth||.
inline double nrmse(const Vec& estimate, const Vec& truth) {
    double denom = truth.norm();
    if (denom == 0.0) throw ZeroReference("NRMSE reference has zero norm");
    return (estimate - truth).norm() / denom;
}

inline double nrmse(const EdgeFlow& estimate, const EdgeFlow& truth) {
    return nrmse(estimate.values, truth.values);
}

/// The 7-node / 10-edge / 3-triangle toy complex. The same topology ships as
/// data/toy.json for the CLI; keep the two in sync.
inline SimplicialComplex toy_complex() {
    std::vector<std::string> nodes{"1", "2", "3", "4", "5", "6", "7"};
    std::vector<std::array<std::string, 2>> edges{
        {"1", "2"}, {"1", "3"}, {"1", "4"}, {"2", "3"}, {"3", "4"},
        {"4", "5"}, {"3", "6"}, {"5", "6"}, {"5", "7"}, {"6", "7"}};
    std::vector<std::array<std::string, 3>> triangles{
        {"1", "2", "3"}, {"1", "3", "4"}, {"5", "6", "7"}};
    return build_complex(nodes, edges, triangles);
}

/// Sioux Falls road network: 24 nodes, 38 undirected edges, and its two
/// 3-cliques {10,16,17} and {20,21,22} as triangles. Also shipped as
/// data/siouxfalls.json.
inline SimplicialComplex sioux_falls_complex() {
    std::vector<std::string> nodes;
    for (int i = 1; i <= 24; ++i) nodes.push_back(std::to_string(i));
    const int raw[38][2] = {
        {1, 2},   {1, 3},   {2, 6},   {3, 4},   {3, 12},  {4, 5},   {4, 11},
        {5, 6},   {5, 9},   {6, 8},   {7, 8},   {7, 18},  {8, 9},   {8, 16},
        {9, 10},  {10, 11}, {10, 15}, {10, 16}, {10, 17}, {11, 12}, {11, 14},
        {12, 13}, {13, 24}, {14, 15}, {14, 23}, {15, 19}, {15, 22}, {16, 17},
        {16, 18}, {17, 19}, {18, 20}, {19, 20}, {20, 21}, {20, 22}, {21, 22},
        {21, 24}, {22, 23}, {23, 24}};
    std::vector<std::array<std::string, 2>> edges;
    for (auto& e : raw)
        edges.push_back({std::to_string(e[0]), std::to_string(e[1])});
    std::vector<std::array<std::string, 3>> triangles{
        {"10", "16", "17"}, {"20", "21", "22"}};
    return build_complex(nodes, edges, triangles);
}

/// Autoregressive flow model: one step maps f to the solution of
/// (0.5 I + 0.3 L1_lower + L1_upper + 0.5 L1_upper^2) x = f.
/// The system matrix is SPD (eigenvalues >= 0.5) and factored once.
class ArModel {
  public:
    explicit ArModel(const HodgeLaplacians& lap) {
        const auto n = lap.l1.rows();
        SparseMat eye(n, n);
        eye.setIdentity();
        SparseMat upper2 = lap.l1_upper * lap.l1_upper;
        system_ = 0.5 * eye + 0.3 * lap.l1_lower + lap.l1_upper + 0.5 * upper2;
        solver_.compute(system_);
        if (solver_.info() != Eigen::Success)
            throw EigensolverFailure("AR system factorization failed");
    }

    EdgeFlow step(const EdgeFlow& f) const {
        if (f.values.size() != system_.rows())
            throw DimensionMismatch("flow length does not match AR model");
        return {solver_.solve(f.values)};
    }

    const SparseMat& system_matrix() const { return system_; }

  private:
    SparseMat system_;
    Eigen::SimplicialLDLT<SparseMat> solver_;
};

inline EdgeFlow ar_step(const ArModel& model, const EdgeFlow& f) {
    return model.step(f);
}

inline Vec gaussian_vector(std::mt19937_64& rng, int n, double sigma = 1.0) {
    std::normal_distribution<double> dist(0.0, sigma);
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = dist(rng);
    return v;
}

/// One result row: a configuration, a metric name, a value.
struct ReportRow {
    std::map<std::string, std::string> config;
    std::string metric;
    double value;
};

struct ExperimentReport {
    std::map<std::string, std::string> meta;  // seed, calibrated sigma, ...
    std::vector<ReportRow> rows;

    double find(const std::string& metric,
                const std::map<std::string, std::string>& config) const {
        for (const auto& r : rows)
            if (r.metric == metric && r.config == config) return r.value;
        throw Error("report row not found: " + metric);
    }
};

enum class FilterFamily { Fir, Sv };

/// Everything the harnesses need about one complex, computed once.
struct ComplexContext {
    SimplicialComplex sc;
    IncidencePair inc;
    HodgeLaplacians lap;
    Spectrum spectrum;

    explicit ComplexContext(SimplicialComplex c) : sc(std::move(c)) {
        inc = incidence(sc);
        lap = laplacians(inc);
        spectrum = eigendecompose(lap, inc);
    }
};

inline FrequencyLabel component_label(const std::string& name) {
    if (name == "gradient") return FrequencyLabel::Gradient;
    if (name == "curl") return FrequencyLabel::Curl;
    if (name == "harmonic") return FrequencyLabel::Harmonic;
    throw Error("unknown component '" + name + "'");
}

/// Design an SV extraction filter at a given total length, trying every
/// (L1, L2) split and keeping the smallest design residual.
inline std::pair<SvFilter, DesignReport> design_sv_best_split(
    const Spectrum& s, const DesignSpec& spec, int total_length) {
    if (total_length < 1) throw Error("total length must be >= 1");
    std::pair<SvFilter, DesignReport> best;
    bool have = false;
    for (int l1 = 0; l1 + 1 <= total_length; ++l1) {
        int l2 = total_length - 1 - l1;
        auto cand = design_sv(s, spec, l1, l2);
        if (!have || cand.second.residual < best.second.residual) {
            best = cand;
            have = true;
        }
    }
    return best;
}

/// Sub-component extraction: filter the flow with all-ones SFT coefficients
/// and compare against the exact subspace projection.
inline ExperimentReport run_extraction(const ComplexContext& ctx,
                                       FrequencyLabel component,
                                       const std::vector<int>& lengths) {
    ExperimentReport report;
    EdgeFlow f = isft(ctx.spectrum, Vec::Ones(ctx.sc.num_edges()));
    EdgeFlow truth = project(ctx.spectrum, f, component);
    DesignSpec spec = DesignSpec::by_label(
        ctx.spectrum, component == FrequencyLabel::Gradient ? 1.0 : 0.0,
        component == FrequencyLabel::Curl ? 1.0 : 0.0,
        component == FrequencyLabel::Harmonic ? 1.0 : 0.0);
    report.meta["component"] = label_name(component);
    for (int L : lengths) {
        auto [fir, fir_rep] = design_fir(ctx.spectrum, spec, L);
        EdgeFlow fir_out = apply_fir(fir, ctx.lap, f);
        report.rows.push_back({{{"family", "fir"}, {"length", std::to_string(L)}},
                               "nrmse",
                               nrmse(fir_out, truth)});
        auto [sv, sv_rep] = design_sv_best_split(ctx.spectrum, spec, L);
        EdgeFlow sv_out = apply_sv(sv, ctx.lap, f);
        report.rows.push_back({{{"family", "sv"}, {"length", std::to_string(L)}},
                               "nrmse",
                               nrmse(sv_out, truth)});
    }
    return report;
}

/// Find sigma such that the mean input NRMSE over the given unit-noise draws
/// matches `target` (bisection; the error is monotone in sigma).
inline double calibrate_noise_sigma(const std::vector<Vec>& unit_noise,
                                    const Vec& f0, double target,
                                    double tol = 0.005) {
    auto mean_err = [&](double sigma) {
        double sum = 0.0;
        for (const auto& n : unit_noise) sum += (sigma * n).norm() / f0.norm();
        return sum / double(unit_noise.size());
    };
    double lo = 0.0, hi = 1.0;
    while (mean_err(hi) < target) hi *= 2.0;
    while (hi - lo > 1e-12) {
        double mid = 0.5 * (lo + hi);
        double e = mean_err(mid);
        if (std::abs(e - target) < tol) return mid;
        (e < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Gradient-flow denoising: f0 = B1^T U0 1 (node signal that is all-ones in
/// the graph frequency domain), corrupted with white noise calibrated to a
/// mean input NRMSE of `input_error`. Compares the two regularized baselines
/// against the gradient-preserving FIR(L=4) and SV(L1=L2=1) filters.
inline ExperimentReport run_denoising(const ComplexContext& ctx, int trials,
                                      std::uint64_t seed,
                                      double input_error = 0.46, double mu = 0.5) {
    if (trials < 1) throw Error("need at least one trial");
    ExperimentReport report;
    const int n1 = ctx.sc.num_edges();

    Eigen::SelfAdjointEigenSolver<Mat> es0(Mat(ctx.lap.l0));
    if (es0.info() != Eigen::Success)
        throw EigensolverFailure("L0 eigendecomposition did not converge");
    Mat u0 = es0.eigenvectors();
    sign_normalize_columns(u0);
    Vec v = u0 * Vec::Ones(u0.cols());
    Vec f0 = SparseMat(ctx.inc.b1.transpose()) * v;

    std::mt19937_64 rng(seed);
    std::vector<Vec> unit_noise;
    for (int t = 0; t < trials; ++t) unit_noise.push_back(gaussian_vector(rng, n1));
    double sigma = calibrate_noise_sigma(unit_noise, f0, input_error);
    report.meta["sigma"] = std::to_string(sigma);
    report.meta["seed"] = std::to_string(seed);

    DesignSpec grad_spec = DesignSpec::by_label(ctx.spectrum, 1.0, 0.0, 0.0);
    auto [fir, fir_rep] = design_fir(ctx.spectrum, grad_spec, 4);
    auto [sv, sv_rep] = design_sv(ctx.spectrum, grad_spec, 1, 1);

    double e_in = 0, e_full = 0, e_lower = 0, e_fir = 0, e_sv = 0;
    for (const auto& n : unit_noise) {
        EdgeFlow noisy{f0 + sigma * n};
        e_in += nrmse(noisy.values, f0);
        e_full += nrmse(
            apply_regularized_inverse(ctx.lap, LaplacianChoice::Full, mu, noisy).values, f0);
        e_lower += nrmse(
            apply_regularized_inverse(ctx.lap, LaplacianChoice::Lower, mu, noisy).values, f0);
        e_fir += nrmse(apply_fir(fir, ctx.lap, noisy).values, f0);
        e_sv += nrmse(apply_sv(sv, ctx.lap, noisy).values, f0);
    }
    double t = double(trials);
    report.rows.push_back({{{"method", "input"}}, "mean_nrmse", e_in / t});
    report.rows.push_back({{{"method", "regularized-full"}}, "mean_nrmse", e_full / t});
    report.rows.push_back({{{"method", "regularized-lower"}}, "mean_nrmse", e_lower / t});
    report.rows.push_back({{{"method", "fir-l4"}}, "mean_nrmse", e_fir / t});
    report.rows.push_back({{{"method", "sv-l1l1"}}, "mean_nrmse", e_sv / t});
    return report;
}

/// One-step flow prediction under the AR model. For each total length, fits
/// an FIR filter of that length and, for lengths >= 2, every SV split,
/// keeping the split with the best test error. Errors are NRMSE over the
/// concatenated one-step predictions of the whole test trajectory (per-step
/// averaging available via `per_step_mean`).
inline ExperimentReport run_prediction(const ComplexContext& ctx,
                                       const std::vector<int>& l_totals,
                                       const std::vector<std::uint64_t>& seeds,
                                       int train_pairs = 20, int test_len = 80,
                                       bool per_step_mean = false) {
    ExperimentReport report;
    ArModel model(ctx.lap);
    const int n1 = ctx.sc.num_edges();

    auto trajectory_error = [&](auto&& predict, const std::vector<Vec>& traj) {
        if (per_step_mean) {
            double sum = 0.0;
            for (size_t t = 0; t + 1 < traj.size(); ++t)
                sum += nrmse(predict(traj[t]), traj[t + 1]);
            return sum / double(traj.size() - 1);
        }
        double num = 0.0, den = 0.0;
        for (size_t t = 0; t + 1 < traj.size(); ++t) {
            num += (predict(traj[t]) - traj[t + 1]).squaredNorm();
            den += traj[t + 1].squaredNorm();
        }
        if (den == 0.0) throw ZeroReference("test trajectory has zero norm");
        return std::sqrt(num / den);
    };

    std::map<int, std::vector<double>> e1, e2;
    std::map<int, std::pair<int, int>> best_split;
    for (std::uint64_t seed : seeds) {
        std::mt19937_64 rng(seed);
        std::vector<std::pair<EdgeFlow, EdgeFlow>> pairs;
        for (int s = 0; s < train_pairs; ++s) {
            EdgeFlow fin{gaussian_vector(rng, n1)};
            pairs.emplace_back(fin, model.step(fin));
        }
        std::vector<Vec> traj{gaussian_vector(rng, n1)};
        for (int t = 0; t < test_len; ++t)
            traj.push_back(model.step({traj.back()}).values);

        for (int L : l_totals) {
            auto [fir, fir_rep] = fit_fir_from_data(ctx.lap, pairs, L);
            e1[L].push_back(trajectory_error(
                [&](const Vec& f) { return apply_fir(fir, ctx.lap, {f}).values; }, traj));
            if (L < 2) continue;
            double best = 0.0;
            bool have = false;
            for (int a = 0; a + 1 <= L; ++a) {
                int b = L - 1 - a;
                auto [sv, sv_rep] = fit_sv_from_data(ctx.lap, pairs, a, b);
                double err = trajectory_error(
                    [&](const Vec& f) { return apply_sv(sv, ctx.lap, {f}).values; }, traj);
                if (!have || err < best) {
                    best = err;
                    have = true;
                    best_split[L] = {a, b};
                }
            }
            e2[L].push_back(best);
        }
    }
    for (int L : l_totals) {
        auto mean = [](const std::vector<double>& v) {
            double s = 0.0;
            for (double x : v) s += x;
            return s / double(v.size());
        };
        report.rows.push_back(
            {{{"family", "fir"}, {"l_total", std::to_string(L)}}, "nrmse", mean(e1[L])});
        if (e2.count(L)) {
            report.rows.push_back(
                {{{"family", "sv"}, {"l_total", std::to_string(L)}}, "nrmse", mean(e2[L])});
            report.meta["sv_split_l" + std::to_string(L)] =
                std::to_string(best_split[L].first) + "+" +
                std::to_string(best_split[L].second);
        }
    }
    report.meta["train_pairs"] = std::to_string(train_pairs);
    report.meta["test_len"] = std::to_string(test_len);
    return report;
}

}  // namespace hodgefir

#endif
