#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "netpop/diagnostics.hpp"
#include "netpop/graph.hpp"
#include "netpop/inference.hpp"
#include "netpop/metrics.hpp"
#include "netpop/models.hpp"

namespace netpop {

// All vertex indices in files are 1-based.

LabelledGraph parse_adjacency_csv(std::istream& in);
LabelledGraph read_adjacency_csv(const std::filesystem::path& path);
void write_adjacency_csv(const LabelledGraph& g, std::ostream& out);

/// One JSON object per line: {"id": string, "n": int, "edges": [[i, j], ...]}.
GraphPopulation parse_population(std::istream& in);
GraphPopulation read_population(const std::filesystem::path& path);
void write_population(const GraphPopulation& pop, std::ostream& out);
void write_population(const GraphPopulation& pop, const std::filesystem::path& path);

nlohmann::json edges_json(const LabelledGraph& g);
LabelledGraph graph_from_edges_json(std::size_t n_vertices, const nlohmann::json& edges);

/// Header line with the model, vertex count, config hash and acceptance
/// counters, then one line per kept sample.
void write_trace(const Trace& trace, std::ostream& out);
void write_trace(const Trace& trace, const std::filesystem::path& path);
Trace parse_trace(std::istream& in);
Trace read_trace(const std::filesystem::path& path);

/// Rows of 17-significant-digit values, no header.
void write_distance_csv(const DistanceMatrix& d, std::ostream& out);
/// Header id,x,y,... then one row per member.
void write_mds_csv(const Matrix& coords, const GraphPopulation& pop, std::ostream& out);

nlohmann::ordered_json summary_json(const PosteriorSummary& s);
void write_exact_distribution(const ExactDistribution& d, std::ostream& out);
void write_gamma_profile_csv(const std::vector<GammaProfileRow>& rows, std::ostream& out);

/// Writes `text` to `path`, creating parent directories.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace netpop
