// Command-line front end: build/validate complexes, dump spectra, design,
// fit and apply edge-flow filters, and run the experiment harnesses.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <hodgefir/hodgefir.hpp>

namespace fs = std::filesystem;
using namespace hodgefir;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

struct Options {
    std::string complex_path;
    std::string out_path;
    std::string report_path;
    std::string filter_path;
    std::string flow_path;
    std::string spec_path;
    std::string pairs_dir;
    std::string eigvec_path;
    std::string family = "fir";
    std::string format = "csv";
    std::string component = "gradient";
    int length = 1;
    int l1 = 0, l2 = 0;
    int trials = 100;
    int max_l_total = 10;
    std::uint64_t seed = 0;
    int num_seeds = 10;
    double mu = 0.5;
    double tol_zero = 1e-8;
    double input_error = 0.46;
    bool weight_by_multiplicity = false;
    bool per_step_mean = false;
};

ComplexContext load_context(const Options& opt) {
    SimplicialComplex sc = read_complex_json(opt.complex_path);
    ComplexContext ctx(std::move(sc));
    if (opt.tol_zero != 1e-8)
        ctx.spectrum = eigendecompose(ctx.lap, ctx.inc, opt.tol_zero);
    return ctx;
}

void cmd_build(const Options& opt) {
    SimplicialComplex sc = read_complex_json(opt.complex_path);
    write_complex_json(opt.out_path, sc);
    std::cout << "nodes=" << sc.num_nodes() << " edges=" << sc.num_edges()
              << " triangles=" << sc.num_triangles() << "\n";
}

// List every 3-clique of the edge graph; adding them to the complex stays a
// user decision.
void cmd_fill_triangles(const Options& opt) {
    SimplicialComplex sc = read_complex_json(opt.complex_path);
    json out = json::array();
    for (int u = 0; u < sc.num_nodes(); ++u)
        for (int v = u + 1; v < sc.num_nodes(); ++v) {
            if (sc.find_edge(u, v) < 0) continue;
            for (int w = v + 1; w < sc.num_nodes(); ++w)
                if (sc.find_edge(u, w) >= 0 && sc.find_edge(v, w) >= 0)
                    out.push_back({sc.nodes[u], sc.nodes[v], sc.nodes[w]});
        }
    if (opt.out_path.empty())
        std::cout << out.dump(2) << "\n";
    else
        atomic_write(opt.out_path, [&](std::ostream& o) { o << out.dump(2) << "\n"; });
}

void cmd_spectrum(const Options& opt) {
    auto ctx = load_context(opt);
    write_spectrum_csv(opt.out_path.empty() ? "spectrum.csv" : opt.out_path,
                       ctx.spectrum);
    if (!opt.eigvec_path.empty()) write_eigenvectors_csv(opt.eigvec_path, ctx.spectrum);
}

void cmd_design(const Options& opt) {
    auto ctx = load_context(opt);
    DesignSpec spec = read_design_spec_json(opt.spec_path, ctx.spectrum);
    AnyFilter filter;
    DesignReport report;
    if (opt.family == "fir") {
        auto [h, r] = design_fir(ctx.spectrum, spec, opt.length,
                                 opt.weight_by_multiplicity);
        filter = h;
        report = r;
    } else if (opt.family == "sv") {
        auto [h, r] = design_sv(ctx.spectrum, spec, opt.l1, opt.l2,
                                opt.weight_by_multiplicity);
        filter = h;
        report = r;
    } else {
        throw Error("unknown filter family '" + opt.family + "'");
    }
    write_filter_json(opt.out_path, filter);
    if (!opt.report_path.empty()) write_design_report_json(opt.report_path, report);
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << "residual=" << report.residual << "\n";
}

std::vector<std::pair<EdgeFlow, EdgeFlow>> load_pairs(const fs::path& dir,
                                                      const SimplicialComplex& sc) {
    std::vector<std::pair<EdgeFlow, EdgeFlow>> pairs;
    std::vector<fs::path> inputs;
    for (const auto& entry : fs::directory_iterator(dir)) {
        auto name = entry.path().filename().string();
        if (name.size() > 7 && name.ends_with("_in.csv")) inputs.push_back(entry.path());
    }
    std::sort(inputs.begin(), inputs.end());
    for (const auto& in_path : inputs) {
        auto out_path = in_path.parent_path() /
                        (in_path.filename().string().substr(
                             0, in_path.filename().string().size() - 7) +
                         "_out.csv");
        if (!fs::exists(out_path))
            throw IoError("missing pair file '" + out_path.string() + "'");
        pairs.emplace_back(read_flow_csv(in_path, sc), read_flow_csv(out_path, sc));
    }
    if (pairs.empty()) throw IoError("no *_in.csv pairs found in '" + dir.string() + "'");
    return pairs;
}

void cmd_fit(const Options& opt) {
    auto ctx = load_context(opt);
    auto pairs = load_pairs(opt.pairs_dir, ctx.sc);
    AnyFilter filter;
    DesignReport report;
    if (opt.family == "fir") {
        auto [h, r] = fit_fir_from_data(ctx.lap, pairs, opt.length);
        filter = h;
        report = r;
    } else if (opt.family == "sv") {
        auto [h, r] = fit_sv_from_data(ctx.lap, pairs, opt.l1, opt.l2);
        filter = h;
        report = r;
    } else {
        throw Error("unknown filter family '" + opt.family + "'");
    }
    write_filter_json(opt.out_path, filter);
    if (!opt.report_path.empty()) write_design_report_json(opt.report_path, report);
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << "residual=" << report.residual << "\n";
}

void cmd_apply(const Options& opt) {
    SimplicialComplex sc = read_complex_json(opt.complex_path);
    auto lap = laplacians(incidence(sc));
    EdgeFlow f = read_flow_csv(opt.flow_path, sc);
    AnyFilter filter = read_filter_json(opt.filter_path);
    EdgeFlow out = std::holds_alternative<FirFilter>(filter)
                       ? apply_fir(std::get<FirFilter>(filter), lap, f)
                       : apply_sv(std::get<SvFilter>(filter), lap, f);
    write_flow_csv(opt.out_path, sc, out);
}

void cmd_response(const Options& opt) {
    auto ctx = load_context(opt);
    AnyFilter filter = read_filter_json(opt.filter_path);
    FrequencyResponse r = std::holds_alternative<FirFilter>(filter)
                              ? response_fir(std::get<FirFilter>(filter), ctx.spectrum)
                              : response_sv(std::get<SvFilter>(filter), ctx.spectrum);
    atomic_write(opt.out_path, [&](std::ostream& out) {
        out << "eigenvalue,label,response\n";
        for (int i = 0; i < r.size(); ++i)
            out << ctx.spectrum.eigenvalues(i) << ","
                << label_name(ctx.spectrum.labels[i]) << "," << r(i) << "\n";
    });
}

void emit_report(const Options& opt, const ExperimentReport& report,
                 const std::string& curve_name) {
    fs::path dir = opt.out_path.empty() ? "." : opt.out_path;
    fs::create_directories(dir);
    write_report_csv(dir / "report.csv", report);
    write_report_json(dir / "report.json", report);
    // plot-ready curve: one column per family over the length axis
    std::map<std::string, std::map<int, double>> curves;
    for (const auto& row : report.rows) {
        auto fam = row.config.find("family");
        if (fam == row.config.end()) continue;
        auto len = row.config.count("length") ? row.config.at("length")
                                              : row.config.count("l_total")
                                                    ? row.config.at("l_total")
                                                    : "";
        if (!len.empty()) curves[fam->second][std::stoi(len)] = row.value;
    }
    if (!curves.empty())
        atomic_write(dir / ("curve_" + curve_name + ".csv"), [&](std::ostream& out) {
            out << "length";
            for (const auto& [fam, _] : curves) out << "," << fam;
            out << "\n";
            std::set<int> lengths;
            for (const auto& [_, c] : curves)
                for (const auto& [l, __] : c) lengths.insert(l);
            for (int l : lengths) {
                out << l;
                for (const auto& [_, c] : curves) {
                    auto it = c.find(l);
                    out << ",";
                    if (it != c.end()) out << it->second;
                }
                out << "\n";
            }
        });
}

void cmd_experiment(const Options& opt, const std::string& which) {
    auto ctx = load_context(opt);
    if (which == "extract") {
        std::vector<int> lengths;
        for (int l = 1; l <= opt.max_l_total; ++l) lengths.push_back(l);
        auto report = run_extraction(ctx, component_label(opt.component), lengths);
        report.meta["seed"] = std::to_string(opt.seed);
        emit_report(opt, report, "extraction_" + opt.component);
    } else if (which == "denoise") {
        auto report =
            run_denoising(ctx, opt.trials, opt.seed, opt.input_error, opt.mu);
        emit_report(opt, report, "denoising");
    } else if (which == "predict") {
        std::vector<int> l_totals;
        for (int l = 1; l <= opt.max_l_total; ++l) l_totals.push_back(l);
        std::vector<std::uint64_t> seeds;
        for (int s = 0; s < opt.num_seeds; ++s) seeds.push_back(opt.seed + s);
        auto report = run_prediction(ctx, l_totals, seeds, 20, 80, opt.per_step_mean);
        report.meta["seed"] = std::to_string(opt.seed);
        emit_report(opt, report, "prediction");
    } else {
        throw Error("unknown experiment '" + which + "'");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Edge-flow filtering on simplicial complexes"};
    app.require_subcommand(1);
    Options opt;

    app.add_option("--seed", opt.seed, "RNG seed");
    app.add_option("--tol-zero", opt.tol_zero, "relative zero-eigenvalue tolerance");
    app.add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));

    auto add_complex = [&](CLI::App* c) {
        c->add_option("--complex", opt.complex_path, "complex JSON file")
            ->required()
            ->check(CLI::ExistingFile);
    };

    auto* build = app.add_subcommand("build", "validate and canonicalize a complex");
    add_complex(build);
    build->add_option("--out", opt.out_path, "output complex JSON")->required();

    auto* fill = app.add_subcommand("fill-triangles", "list all 3-cliques");
    add_complex(fill);
    fill->add_option("--out", opt.out_path, "output JSON (stdout if omitted)");

    auto* spectrum = app.add_subcommand("spectrum", "eigenvalues and labels");
    add_complex(spectrum);
    spectrum->add_option("--out", opt.out_path, "output CSV")->required();
    spectrum->add_option("--eigenvectors", opt.eigvec_path, "dump eigenvector matrix");

    auto* design = app.add_subcommand("design", "least-squares filter design");
    add_complex(design);
    design->add_option("--spec", opt.spec_path, "design spec JSON")
        ->required()
        ->check(CLI::ExistingFile);
    design->add_option("--family", opt.family, "fir|sv")
        ->check(CLI::IsMember({"fir", "sv"}));
    design->add_option("--length", opt.length, "FIR length");
    design->add_option("--l1", opt.l1, "SV lower length");
    design->add_option("--l2", opt.l2, "SV upper length");
    design->add_flag("--weight-by-multiplicity", opt.weight_by_multiplicity,
                     "keep one Vandermonde row per eigenvalue index");
    design->add_option("--out", opt.out_path, "output filter JSON")->required();
    design->add_option("--report", opt.report_path, "design report JSON");

    auto* fit = app.add_subcommand("fit", "fit a filter from flow pairs");
    add_complex(fit);
    fit->add_option("--pairs", opt.pairs_dir, "directory of *_in.csv / *_out.csv")
        ->required()
        ->check(CLI::ExistingDirectory);
    fit->add_option("--family", opt.family, "fir|sv")
        ->check(CLI::IsMember({"fir", "sv"}));
    fit->add_option("--length", opt.length, "FIR length");
    fit->add_option("--l1", opt.l1, "SV lower length");
    fit->add_option("--l2", opt.l2, "SV upper length");
    fit->add_option("--out", opt.out_path, "output filter JSON")->required();
    fit->add_option("--report", opt.report_path, "fit report JSON");

    auto* apply = app.add_subcommand("apply", "apply a filter to a flow");
    add_complex(apply);
    apply->add_option("--filter", opt.filter_path, "filter JSON")
        ->required()
        ->check(CLI::ExistingFile);
    apply->add_option("--flow", opt.flow_path, "flow CSV")
        ->required()
        ->check(CLI::ExistingFile);
    apply->add_option("--out", opt.out_path, "output flow CSV")->required();

    auto* response = app.add_subcommand("response", "frequency response of a filter");
    add_complex(response);
    response->add_option("--filter", opt.filter_path, "filter JSON")
        ->required()
        ->check(CLI::ExistingFile);
    response->add_option("--out", opt.out_path, "output CSV")->required();

    auto* experiment = app.add_subcommand("experiment", "run an experiment harness");
    experiment->require_subcommand(1);
    std::vector<CLI::App*> exps;
    for (const char* name : {"extract", "denoise", "predict"}) {
        auto* e = experiment->add_subcommand(name);
        add_complex(e);
        e->add_option("--out", opt.out_path, "output directory")->required();
        e->add_option("--seed", opt.seed, "RNG seed");
        exps.push_back(e);
    }
    exps[0]->add_option("--component", opt.component, "gradient|curl|harmonic")
        ->check(CLI::IsMember({"gradient", "curl", "harmonic"}));
    exps[0]->add_option("--max-length", opt.max_l_total, "largest filter length");
    exps[1]->add_option("--trials", opt.trials, "number of noise trials");
    exps[1]->add_option("--input-error", opt.input_error, "calibrated input NRMSE");
    exps[1]->add_option("--mu", opt.mu, "regularization weight of the baselines");
    exps[2]->add_option("--max-length", opt.max_l_total, "largest total length");
    exps[2]->add_option("--num-seeds", opt.num_seeds, "seeds to average over");
    exps[2]->add_flag("--per-step-mean", opt.per_step_mean,
                      "average per-step NRMSE instead of concatenated NRMSE");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitUsage;
    }

    try {
        if (build->parsed()) cmd_build(opt);
        else if (fill->parsed()) cmd_fill_triangles(opt);
        else if (spectrum->parsed()) cmd_spectrum(opt);
        else if (design->parsed()) cmd_design(opt);
        else if (fit->parsed()) cmd_fit(opt);
        else if (apply->parsed()) cmd_apply(opt);
        else if (response->parsed()) cmd_response(opt);
        else if (experiment->parsed())
            cmd_experiment(opt, experiment->get_subcommands().front()->get_name());
    } catch (const EigensolverFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const AmbiguousEigenvector& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return 0;
}
