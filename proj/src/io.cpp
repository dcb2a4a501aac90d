#include "mcone/io.hpp"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace mcone::io {

namespace {

nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValueError("cannot open file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValueError("cannot parse JSON in " + path + ": " + e.what());
    }
    return j;
}

} // namespace

nlohmann::json matrix_to_json(const DistanceMatrix& m) {
    return nlohmann::json{{"order", m.order()}, {"upper", m.upper()}};
}

DistanceMatrix matrix_from_json(const nlohmann::json& j, double tolerance) {
    if (!j.is_object() || !j.contains("order") || !j.contains("upper"))
        throw StructuralError("matrix JSON must be an object with 'order' and 'upper'");
    const int order = j.at("order").get<int>();
    std::vector<double> upper = j.at("upper").get<std::vector<double>>();
    return DistanceMatrix::from_upper(order, std::move(upper), tolerance);
}

DistanceMatrix read_matrix_json(const std::string& path, double tolerance) {
    return matrix_from_json(load_json(path), tolerance);
}

void write_matrix_json(const std::string& path, const DistanceMatrix& m) {
    atomic_write_text(path, matrix_to_json(m).dump(2) + "\n");
}

DistanceMatrix read_matrix_csv(const std::string& path, double tolerance) {
    std::ifstream in(path);
    if (!in) throw ValueError("cannot open file: " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ValueError("cannot parse CSV cell '" + cell + "' in " + path);
            }
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw StructuralError("CSV matrix is empty: " + path);
    return DistanceMatrix::from_full(rows, tolerance);
}

nlohmann::json triple_to_json(const MetricTriple& t) {
    return nlohmann::json{{"label", t.label},
                          {"order", t.space.order()},
                          {"upper", t.space.upper()},
                          {"weights", t.weights}};
}

MetricTriple triple_from_json(const nlohmann::json& j, double tolerance) {
    if (!j.is_object() || !j.contains("order") || !j.contains("upper") || !j.contains("weights"))
        throw StructuralError("triple JSON must contain 'order', 'upper' and 'weights'");
    MetricTriple t{DistanceMatrix::from_upper(j.at("order").get<int>(),
                                              j.at("upper").get<std::vector<double>>(), tolerance),
                   j.at("weights").get<std::vector<double>>(),
                   j.value("label", std::string{})};
    t.validate();
    return t;
}

MetricTriple read_triple_json(const std::string& path, double tolerance) {
    return triple_from_json(load_json(path), tolerance);
}

void write_triple_json(const std::string& path, const MetricTriple& t) {
    atomic_write_text(path, triple_to_json(t).dump(2) + "\n");
}

void write_samples_jsonl(const std::string& path, const EmpiricalMatrixDistribution& E) {
    std::string out;
    for (const auto& s : E.samples) {
        out += matrix_to_json(s).dump();
        out += '\n';
    }
    atomic_write_text(path, out);
}

void write_histogram_csv(const std::string& path, const std::vector<double>& values, int bins) {
    if (bins < 1) throw StructuralError("histogram: bins must be >= 1");
    std::ostringstream os;
    os << "bin_left,bin_right,count\n";
    if (values.empty()) {
        os << "0,0,0\n";
        atomic_write_text(path, os.str());
        return;
    }
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it;
    double hi = *hi_it;
    if (hi <= lo) hi = lo + 1.0;
    const double width = (hi - lo) / bins;
    std::vector<long long> counts(bins, 0);
    for (double v : values) {
        int idx = static_cast<int>((v - lo) / width);
        idx = std::clamp(idx, 0, bins - 1);
        ++counts[idx];
    }
    os.precision(17);
    for (int b = 0; b < bins; ++b) {
        os << lo + b * width << ',' << lo + (b + 1) * width << ',' << counts[b] << '\n';
    }
    atomic_write_text(path, os.str());
}

void atomic_write_text(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path dir = target.parent_path();
    if (dir.empty()) dir = ".";
    fs::path tmp = dir / (target.filename().string() + ".tmp." +
                          std::to_string(static_cast<unsigned long>(::getpid())));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ValueError("cannot write file: " + tmp.string());
        out << content;
    }
    fs::rename(tmp, target);
}

nlohmann::json manifest_to_json(const Manifest& m) {
    return nlohmann::json{{"command", m.command},  {"argv", m.argv},
                          {"config", m.config},    {"seed", m.seed},
                          {"artifact_paths", m.artifact_paths}, {"version", m.version}};
}

void write_manifest(const std::string& path, const Manifest& m) {
    atomic_write_text(path, manifest_to_json(m).dump(2) + "\n");
}

} // namespace mcone::io
