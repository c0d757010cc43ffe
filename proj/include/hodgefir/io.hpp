#ifndef HODGEFIR_IO_HPP
#define HODGEFIR_IO_HPP

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "complex.hpp"
#include "design.hpp"
#include "errors.hpp"
#include "experiments.hpp"
#include "filtering.hpp"
#include "spectral.hpp"

namespace hodgefir {

using nlohmann::json;

/// Write a file atomically: stream into a sibling temp file, then rename.
inline void atomic_write(const std::filesystem::path& path,
                         const std::function<void(std::ostream&)>& writer) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
        writer(out);
        if (!out) throw IoError("write to '" + tmp.string() + "' failed");
    }
    std::filesystem::rename(tmp, path);
}

inline std::string json_id(const json& j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer()) return std::to_string(j.get<long long>());
    throw IoError("node identifier must be a string or integer");
}

/// Complex file: {"nodes": [...], "edges": [[u,v],...], "triangles": [[u,v,w],...]}.
inline SimplicialComplex read_complex_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open complex file '" + path.string() + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IoError("invalid JSON in '" + path.string() + "': " + e.what());
    }
    std::vector<std::string> nodes;
    for (const auto& n : j.at("nodes")) nodes.push_back(json_id(n));
    std::vector<std::array<std::string, 2>> edges;
    for (const auto& e : j.at("edges")) {
        if (e.size() != 2) throw IoError("edge must have two endpoints");
        edges.push_back({json_id(e[0]), json_id(e[1])});
    }
    std::vector<std::array<std::string, 3>> triangles;
    if (j.contains("triangles"))
        for (const auto& t : j["triangles"]) {
            if (t.size() != 3) throw IoError("triangle must have three vertices");
            triangles.push_back({json_id(t[0]), json_id(t[1]), json_id(t[2])});
        }
    return build_complex(nodes, edges, triangles);
}

inline void write_complex_json(const std::filesystem::path& path,
                               const SimplicialComplex& sc) {
    json j;
    j["nodes"] = sc.nodes;
    j["edges"] = json::array();
    for (const auto& e : sc.edges)
        j["edges"].push_back({sc.nodes[e[0]], sc.nodes[e[1]]});
    j["triangles"] = json::array();
    for (const auto& t : sc.triangles)
        j["triangles"].push_back({sc.nodes[t[0]], sc.nodes[t[1]], sc.nodes[t[2]]});
    atomic_write(path, [&](std::ostream& out) { out << j.dump(2) << "\n"; });
}

/// Flow file: CSV with header `u,v,value`. Unknown edges are an error;
/// edges of the complex missing from the file default to 0 with a warning.
inline EdgeFlow read_flow_csv(const std::filesystem::path& path,
                              const SimplicialComplex& sc,
                              std::ostream& warn = std::cerr) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open flow file '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty flow file");
    Vec values = Vec::Zero(sc.num_edges());
    std::vector<bool> seen(sc.num_edges(), false);
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string u, v, val;
        if (!std::getline(ss, u, ',') || !std::getline(ss, v, ',') ||
            !std::getline(ss, val))
            throw IoError("malformed flow row at line " + std::to_string(lineno));
        auto iu = sc.node_index.find(u), iv = sc.node_index.find(v);
        if (iu == sc.node_index.end() || iv == sc.node_index.end())
            throw IoError("flow row references unknown node at line " +
                          std::to_string(lineno));
        int e = sc.find_edge(iu->second, iv->second);
        if (e < 0)
            throw IoError("flow row references unknown edge (" + u + "," + v +
                          ") at line " + std::to_string(lineno));
        double x = std::stod(val);
        // flow given against the reference orientation flips sign
        values(e) = (iu->second < iv->second) ? x : -x;
        seen[e] = true;
    }
    for (int e = 0; e < sc.num_edges(); ++e)
        if (!seen[e])
            warn << "warning: edge (" << sc.nodes[sc.edges[e][0]] << ","
                 << sc.nodes[sc.edges[e][1]] << ") missing from flow file, set to 0\n";
    return {values};
}

inline void write_flow_csv(const std::filesystem::path& path,
                           const SimplicialComplex& sc, const EdgeFlow& f) {
    atomic_write(path, [&](std::ostream& out) {
        out << "u,v,value\n";
        for (int e = 0; e < sc.num_edges(); ++e)
            out << sc.nodes[sc.edges[e][0]] << "," << sc.nodes[sc.edges[e][1]] << ","
                << f.values(e) << "\n";
    });
}

using AnyFilter = std::variant<FirFilter, SvFilter>;

/// Filter file: {"h":[...]} for FIR or {"h0":..,"alpha":[...],"beta":[...]}
/// for SV. A file carrying both shapes is rejected.
inline AnyFilter read_filter_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open filter file '" + path.string() + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IoError("invalid JSON in '" + path.string() + "': " + e.what());
    }
    bool fir = j.contains("h");
    bool sv = j.contains("h0") || j.contains("alpha") || j.contains("beta");
    if (fir == sv)
        throw IoError("filter file must contain either 'h' or 'h0'/'alpha'/'beta'");
    auto to_vec = [](const json& a) {
        Vec v(a.size());
        for (size_t i = 0; i < a.size(); ++i) v(i) = a[i].get<double>();
        return v;
    };
    if (fir) {
        FirFilter h{to_vec(j["h"])};
        if (h.length() < 1) throw IoError("FIR filter needs at least one coefficient");
        return h;
    }
    SvFilter h;
    h.h0 = j.value("h0", 0.0);
    if (j.contains("alpha")) h.alpha = to_vec(j["alpha"]);
    if (j.contains("beta")) h.beta = to_vec(j["beta"]);
    return h;
}

inline void write_filter_json(const std::filesystem::path& path, const AnyFilter& f) {
    json j;
    if (std::holds_alternative<FirFilter>(f)) {
        const auto& h = std::get<FirFilter>(f).coeffs;
        j["h"] = std::vector<double>(h.data(), h.data() + h.size());
    } else {
        const auto& h = std::get<SvFilter>(f);
        j["h0"] = h.h0;
        j["alpha"] = std::vector<double>(h.alpha.data(), h.alpha.data() + h.alpha.size());
        j["beta"] = std::vector<double>(h.beta.data(), h.beta.data() + h.beta.size());
    }
    atomic_write(path, [&](std::ostream& out) { out << j.dump(2) << "\n"; });
}

/// Design-spec file: either per-label targets
/// {"gradient":1.0,"curl":0.0,"harmonic":0.0} or per-index overrides under
/// "targets": {"3": 0.5, ...}. Per-index entries win over label defaults.
inline DesignSpec read_design_spec_json(const std::filesystem::path& path,
                                        const Spectrum& s) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open spec file '" + path.string() + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IoError("invalid JSON in '" + path.string() + "': " + e.what());
    }
    DesignSpec spec = DesignSpec::by_label(s, j.value("gradient", 0.0),
                                           j.value("curl", 0.0),
                                           j.value("harmonic", 0.0));
    if (j.contains("targets"))
        for (auto& [key, val] : j["targets"].items()) {
            int idx = std::stoi(key);
            if (idx < 0 || idx >= spec.targets.size())
                throw IoError("target index " + key + " out of range");
            spec.targets(idx) = val.get<double>();
        }
    return spec;
}

inline void write_design_report_json(const std::filesystem::path& path,
                                     const DesignReport& r) {
    json j;
    j["residual"] = r.residual;
    j["condition"] = r.condition;
    j["rank"] = r.rank;
    j["rank_deficient"] = r.rank_deficient;
    j["warnings"] = r.warnings;
    atomic_write(path, [&](std::ostream& out) { out << j.dump(2) << "\n"; });
}

inline void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& s) {
    atomic_write(path, [&](std::ostream& out) {
        out << "index,eigenvalue,label\n";
        for (int i = 0; i < s.eigenvalues.size(); ++i)
            out << i << "," << s.eigenvalues(i) << "," << label_name(s.labels[i])
                << "\n";
    });
}

inline void write_eigenvectors_csv(const std::filesystem::path& path, const Spectrum& s) {
    atomic_write(path, [&](std::ostream& out) {
        for (int i = 0; i < s.eigenvectors.rows(); ++i) {
            for (int j = 0; j < s.eigenvectors.cols(); ++j)
                out << (j ? "," : "") << s.eigenvectors(i, j);
            out << "\n";
        }
    });
}

inline void write_report_csv(const std::filesystem::path& path,
                             const ExperimentReport& report) {
    std::vector<std::string> keys;
    for (const auto& row : report.rows)
        for (const auto& [k, v] : row.config)
            if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
    std::sort(keys.begin(), keys.end());
    atomic_write(path, [&](std::ostream& out) {
        for (const auto& k : keys) out << k << ",";
        out << "metric,value\n";
        for (const auto& row : report.rows) {
            for (const auto& k : keys) {
                auto it = row.config.find(k);
                out << (it == row.config.end() ? "" : it->second) << ",";
            }
            out << row.metric << "," << row.value << "\n";
        }
    });
}

inline void write_report_json(const std::filesystem::path& path,
                              const ExperimentReport& report) {
    json j;
    j["meta"] = report.meta;
    j["rows"] = json::array();
    for (const auto& row : report.rows)
        j["rows"].push_back(
            {{"config", row.config}, {"metric", row.metric}, {"value", row.value}});
    atomic_write(path, [&](std::ostream& out) { out << j.dump(2) << "\n"; });
}

}  // namespace hodgefir

#endif
