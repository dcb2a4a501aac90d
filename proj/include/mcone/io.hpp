#ifndef MCONE_IO_HPP
#define MCONE_IO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "mcone/distance_matrix.hpp"
#include "mcone/matrix_distribution.hpp"

namespace mcone::io {

inline constexpr const char* kToolVersion = "0.1.0";

/// Matrix file schema: {"order": n, "upper": [r12, r13, r23, r14, ...]}
/// with the upper triangle grouped column by column.
nlohmann::json matrix_to_json(const DistanceMatrix& m);
DistanceMatrix matrix_from_json(const nlohmann::json& j,
                                double tolerance = DistanceMatrix::kDefaultTolerance);

DistanceMatrix read_matrix_json(const std::string& path,
                                double tolerance = DistanceMatrix::kDefaultTolerance);
void write_matrix_json(const std::string& path, const DistanceMatrix& m);

/// Full square matrix as comma-separated rows; symmetry is checked.
DistanceMatrix read_matrix_csv(const std::string& path,
                               double tolerance = DistanceMatrix::kDefaultTolerance);

/// Triple file schema: {"label", "order", "upper", "weights"}.
nlohmann::json triple_to_json(const MetricTriple& t);
MetricTriple triple_from_json(const nlohmann::json& j,
                              double tolerance = DistanceMatrix::kDefaultTolerance);
MetricTriple read_triple_json(const std::string& path,
                              double tolerance = DistanceMatrix::kDefaultTolerance);
void write_triple_json(const std::string& path, const MetricTriple& t);

/// One sampled matrix per line, each in the matrix JSON schema.
void write_samples_jsonl(const std::string& path, const EmpiricalMatrixDistribution& E);

/// CSV with header bin_left,bin_right,count; totals are preserved. An
/// empty value list produces a single zero-count bin.
void write_histogram_csv(const std::string& path, const std::vector<double>& values, int bins);

/// Writes through a temporary file in the same directory plus rename.
void atomic_write_text(const std::string& path, const std::string& content);

/// Every CLI run records what it did and how to reproduce it.
struct Manifest {
    std::string command;
    std::vector<std::string> argv;
    nlohmann::json config;
    std::uint64_t seed = 0;
    std::vector<std::string> artifact_paths;
    std::string version = kToolVersion;
};

nlohmann::json manifest_to_json(const Manifest& m);
void write_manifest(const std::string& path, const Manifest& m);

} // namespace mcone::io

#endif
