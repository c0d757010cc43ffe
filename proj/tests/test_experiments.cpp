#include <catch2/catch_amalgamated.hpp>

#include <random>

#include <hodgefir/hodgefir.hpp>

#include "test_util.hpp"

using namespace hodgefir;
using Catch::Approx;

TEST_CASE("nrmse") {
    Vec truth(3);
    truth << 1.0, -2.0, 2.0;
    CHECK(nrmse(truth, truth) == 0.0);
    CHECK(nrmse(Vec::Zero(3).eval(), truth) == 1.0);
    CHECK(nrmse((2.0 * truth).eval(), truth) == 1.0);
    CHECK_THROWS_AS(nrmse(truth, Vec::Zero(3).eval()), ZeroReference);
}

TEST_CASE("bundled complexes") {
    auto toy = toy_complex();
    CHECK(toy.num_nodes() == 7);
    CHECK(toy.num_edges() == 10);
    CHECK(toy.num_triangles() == 3);
    auto inc = incidence(toy);
    CHECK(test_util::betti_one(toy, inc) == 1);

    auto sf = sioux_falls_complex();
    CHECK(sf.num_nodes() == 24);
    CHECK(sf.num_edges() == 38);
    CHECK(sf.num_triangles() == 2);

    SECTION("data files agree with the builders") {
        auto toy_file = read_complex_json(std::string(HODGEFIR_DATA_DIR) + "/toy.json");
        CHECK(toy_file.edges == toy.edges);
        CHECK(toy_file.triangles == toy.triangles);
        auto sf_file =
            read_complex_json(std::string(HODGEFIR_DATA_DIR) + "/siouxfalls.json");
        CHECK(sf_file.edges == sf.edges);
        CHECK(sf_file.triangles == sf.triangles);
    }
}

TEST_CASE("AR model") {
    ComplexContext ctx(sioux_falls_complex());
    ArModel model(ctx.lap);

    SECTION("zero maps to zero, norms at most double") {
        CHECK(model.step({Vec::Zero(38)}).values.cwiseAbs().maxCoeff() == 0.0);
        std::mt19937_64 rng(5);
        for (int i = 0; i < 5; ++i) {
            Vec f = test_util::random_vec(rng, 38);
            CHECK(model.step({f}).values.norm() <= 2.0 * f.norm() + 1e-12);
        }
    }

    SECTION("harmonic eigenvectors are scaled by 2") {
        REQUIRE_FALSE(ctx.spectrum.q_harmonic.empty());
        Vec u = ctx.spectrum.eigenvectors.col(ctx.spectrum.q_harmonic.front());
        CHECK((ar_step(model, {u}).values - 2.0 * u).cwiseAbs().maxCoeff() < 1e-9);
    }

    SECTION("system matrix is SPD with eigenvalues >= 0.5") {
        Eigen::SelfAdjointEigenSolver<Mat> es(Mat(model.system_matrix()));
        CHECK(es.eigenvalues().minCoeff() >= 0.5 - 1e-10);
    }
}

TEST_CASE("extraction harness") {
    ComplexContext ctx(toy_complex());

    SECTION("exact-order design reproduces the projection for all components") {
        for (auto c : {FrequencyLabel::Gradient, FrequencyLabel::Curl,
                       FrequencyLabel::Harmonic}) {
            auto report = run_extraction(ctx, c, {10});
            CHECK(report.find("nrmse", {{"family", "fir"}, {"length", "10"}}) <= 1e-6);
            CHECK(report.find("nrmse", {{"family", "sv"}, {"length", "10"}}) <= 1e-6);
        }
    }

    SECTION("SV at most FIR error for gradient extraction, errors shrink with length") {
        std::vector<int> lengths{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
        auto report = run_extraction(ctx, FrequencyLabel::Gradient, lengths);
        for (int L : lengths) {
            double fir = report.find("nrmse", {{"family", "fir"},
                                               {"length", std::to_string(L)}});
            double sv =
                report.find("nrmse", {{"family", "sv"}, {"length", std::to_string(L)}});
            CHECK(sv <= fir + 1e-9);
        }
    }
}

TEST_CASE("denoising harness") {
    ComplexContext ctx(toy_complex());
    auto report = run_denoising(ctx, 100, 42);

    double input = report.find("mean_nrmse", {{"method", "input"}});
    CHECK(input == Approx(0.46).margin(0.01));

    double sv = report.find("mean_nrmse", {{"method", "sv-l1l1"}});
    double fir = report.find("mean_nrmse", {{"method", "fir-l4"}});
    double reg_full = report.find("mean_nrmse", {{"method", "regularized-full"}});
    double reg_lower = report.find("mean_nrmse", {{"method", "regularized-lower"}});

    CHECK(sv < fir);
    CHECK(fir < input);
    CHECK(reg_full > input);
    CHECK(reg_lower > input);

    SECTION("deterministic given the seed") {
        auto report2 = run_denoising(ctx, 100, 42);
        CHECK(report2.find("mean_nrmse", {{"method", "sv-l1l1"}}) == sv);
    }

    SECTION("noiseless limit: errors drop to the design-leakage floor") {
        // the fixed short filters keep a response-deviation floor; a
        // full-order exact design drives the noiseless error to zero
        auto tiny = run_denoising(ctx, 5, 1, 1e-9);

        Eigen::SelfAdjointEigenSolver<Mat> es0(Mat(ctx.lap.l0));
        Mat u0 = es0.eigenvectors();
        sign_normalize_columns(u0);
        Vec f0 = SparseMat(ctx.inc.b1.transpose()) * (u0 * Vec::Ones(u0.cols()));

        DesignSpec grad = DesignSpec::by_label(ctx.spectrum, 1.0, 0.0, 0.0);
        auto [sv, svr] = design_sv(ctx.spectrum, grad, 1, 1);
        double sv_floor = nrmse(apply_sv(sv, ctx.lap, {f0}).values, f0);
        // the sigma calibration stops within an absolute tolerance of 0.005 on
        // the input error, so a little residual noise remains above the floor
        CHECK(tiny.find("mean_nrmse", {{"method", "sv-l1l1"}}) ==
              Approx(sv_floor).margin(1e-2));

        auto [exact, exr] = design_fir(ctx.spectrum, grad, 10);
        CHECK(nrmse(apply_fir(exact, ctx.lap, {f0}).values, f0) < 1e-6);
    }
}

TEST_CASE("prediction harness") {
    ComplexContext ctx(sioux_falls_complex());
    auto report = run_prediction(ctx, {1, 3, 10}, {7});

    double e1_1 = report.find("nrmse", {{"family", "fir"}, {"l_total", "1"}});
    double e1_10 = report.find("nrmse", {{"family", "fir"}, {"l_total", "10"}});
    CHECK(e1_10 < e1_1);

    // SV undefined at L_total = 1
    CHECK_THROWS_AS(report.find("nrmse", {{"family", "sv"}, {"l_total", "1"}}), Error);
    CHECK_NOTHROW(report.find("nrmse", {{"family", "sv"}, {"l_total", "10"}}));

    SECTION("longer filters reach lower training residual on the same data") {
        ArModel model(ctx.lap);
        std::mt19937_64 rng(7);
        std::vector<std::pair<EdgeFlow, EdgeFlow>> pairs;
        for (int s = 0; s < 20; ++s) {
            EdgeFlow fin{test_util::random_vec(rng, 38)};
            pairs.emplace_back(fin, model.step(fin));
        }
        auto [h3, r3] = fit_fir_from_data(ctx.lap, pairs, 3);
        auto [h10, r10] = fit_fir_from_data(ctx.lap, pairs, 10);
        CHECK(r10.residual < r3.residual);
    }
}
