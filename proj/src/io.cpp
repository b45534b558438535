#include "netpop/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "netpop/error.hpp"

namespace netpop {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  return out;
}

std::string line_prefix(std::size_t line) { return "line " + std::to_string(line) + ": "; }

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

LabelledGraph parse_adjacency_csv(std::istream& in) {
  AdjacencyMatrix m;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    std::vector<int> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      cell = trim(cell);
      if (cell == "0" || cell == "1") {
        row.push_back(cell == "1");
      } else {
        throw Error(ErrorCode::ParseError, line_prefix(lineno) + "adjacency entries must be 0 or 1, got '" + cell + "'");
      }
    }
    m.push_back(std::move(row));
  }
  if (m.empty()) throw Error(ErrorCode::ParseError, "empty adjacency matrix");
  return from_adjacency(m);
}

LabelledGraph read_adjacency_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_adjacency_csv(in);
}

void write_adjacency_csv(const LabelledGraph& g, std::ostream& out) {
  for (const auto& row : to_adjacency(g)) {
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << row[j];
    out << '\n';
  }
}

json edges_json(const LabelledGraph& g) {
  json e = json::array();
  for (auto [i, j] : g.edges()) e.push_back({i + 1, j + 1});
  return e;
}

LabelledGraph graph_from_edges_json(std::size_t n_vertices, const json& edges) {
  if (!edges.is_array()) throw Error(ErrorCode::SchemaError, "field 'edges' must be an array");
  LabelledGraph g(n_vertices);
  for (const auto& e : edges) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
      throw Error(ErrorCode::ParseError, "edge entries must be pairs of integers");
    const auto i = e[0].get<long long>();
    const auto j = e[1].get<long long>();
    if (i == j) throw Error(ErrorCode::ParseError, "self-loop [" + std::to_string(i) + "," + std::to_string(j) + "]");
    const auto n = static_cast<long long>(n_vertices);
    if (i < 1 || j < 1 || i > n || j > n)
      throw Error(ErrorCode::ParseError,
                  "edge [" + std::to_string(i) + "," + std::to_string(j) + "] outside 1.." + std::to_string(n));
    g.set_edge(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1));
  }
  return g;
}

GraphPopulation parse_population(std::istream& in) {
  GraphPopulation pop;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::ParseError, line_prefix(lineno) + "invalid JSON");
    }
    if (!obj.is_object()) throw Error(ErrorCode::ParseError, line_prefix(lineno) + "expected a JSON object");
    if (!obj.contains("n")) throw Error(ErrorCode::SchemaError, line_prefix(lineno) + "missing field 'n'");
    if (!obj["n"].is_number_integer() || obj["n"].get<long long>() < 1)
      throw Error(ErrorCode::SchemaError, line_prefix(lineno) + "field 'n' must be a positive integer");
    if (!obj.contains("edges")) throw Error(ErrorCode::SchemaError, line_prefix(lineno) + "missing field 'edges'");
    std::optional<std::string> id;
    if (obj.contains("id")) {
      if (!obj["id"].is_string()) throw Error(ErrorCode::SchemaError, line_prefix(lineno) + "field 'id' must be a string");
      id = obj["id"].get<std::string>();
    }
    const auto n = static_cast<std::size_t>(obj["n"].get<long long>());
    if (!pop.empty() && n != pop.n_vertices())
      throw Error(ErrorCode::SchemaError, line_prefix(lineno) + "field 'n' is " + std::to_string(n) +
                                              " but earlier graphs have " + std::to_string(pop.n_vertices()));
    try {
      pop.add(graph_from_edges_json(n, obj["edges"]), std::move(id));
    } catch (const Error& e) {
      throw Error(e.code(), line_prefix(lineno) + e.what());
    }
  }
  return pop;
}

GraphPopulation read_population(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_population(in);
}

void write_population(const GraphPopulation& pop, std::ostream& out) {
  for (std::size_t k = 0; k < pop.size(); ++k) {
    ojson obj;
    obj["id"] = pop.id(k) ? *pop.id(k) : "g" + std::to_string(k + 1);
    obj["n"] = pop[k].n_vertices();
    obj["edges"] = edges_json(pop[k]);
    out << obj.dump() << '\n';
  }
}

void write_population(const GraphPopulation& pop, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_population(pop, out);
}

void write_trace(const Trace& trace, std::ostream& out) {
  ojson header;
  header["type"] = "header";
  header["model"] = trace.model;
  header["n_vertices"] = trace.n_vertices;
  char hash[24];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(trace.config_hash()));
  header["config_hash"] = hash;
  header["config"] = trace.config_text;
  ojson counters = ojson::array();
  for (const auto& c : trace.counters)
    counters.push_back(ojson{{"name", c.name}, {"proposed", c.proposed}, {"accepted", c.accepted}});
  header["counters"] = counters;
  out << header.dump() << '\n';
  for (const auto& s : trace.samples) {
    ojson line;
    line["iter"] = s.iter;
    ojson e = ojson::array();
    for (auto [i, j] : s.mode.edges()) e.push_back({i + 1, j + 1});
    line["edges"] = e;
    line["param"] = s.param;
    line["log_kernel"] = s.log_kernel;
    out << line.dump() << '\n';
  }
}

void write_trace(const Trace& trace, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_trace(trace, out);
}

Trace parse_trace(std::istream& in) {
  Trace trace;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  std::string expected_hash;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error&) {
      throw Error(ErrorCode::ParseError, line_prefix(lineno) + "invalid JSON");
    }
    try {
      if (!have_header) {
        if (obj.value("type", "") != "header")
          throw Error(ErrorCode::SchemaError, line_prefix(lineno) + "first line must be the trace header");
        trace.model = obj.at("model").get<std::string>();
        trace.n_vertices = obj.at("n_vertices").get<std::size_t>();
        trace.config_text = obj.at("config").get<std::string>();
        expected_hash = obj.at("config_hash").get<std::string>();
        for (const auto& c : obj.at("counters"))
          trace.counters.push_back(
              {c.at("name").get<std::string>(), c.at("proposed").get<std::size_t>(), c.at("accepted").get<std::size_t>()});
        have_header = true;
        continue;
      }
      TraceSample s;
      s.iter = obj.at("iter").get<std::size_t>();
      s.mode = graph_from_edges_json(trace.n_vertices, obj.at("edges"));
      s.param = obj.at("param").get<double>();
      s.log_kernel = obj.at("log_kernel").get<double>();
      trace.samples.push_back(std::move(s));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::SchemaError, line_prefix(lineno) + e.what());
    } catch (const Error& e) {
      throw Error(e.code(), line_prefix(lineno) + e.what());
    }
  }
  if (!have_header) throw Error(ErrorCode::EmptyTrace, "trace file has no header");
  char hash[24];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(trace.config_hash()));
  if (expected_hash != hash) throw Error(ErrorCode::SchemaError, "field 'config_hash' does not match 'config'");
  return trace;
}

Trace read_trace(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_trace(in);
}

void write_distance_csv(const DistanceMatrix& d, std::ostream& out) {
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = 0; j < d.size(); ++j) out << (j ? "," : "") << format17(d(i, j));
    out << '\n';
  }
}

void write_mds_csv(const Matrix& coords, const GraphPopulation& pop, std::ostream& out) {
  static const char* names[] = {"x", "y", "z"};
  out << "id";
  for (Eigen::Index c = 0; c < coords.cols(); ++c)
    out << ',' << (c < 3 ? std::string(names[c]) : "x" + std::to_string(c + 1));
  out << '\n';
  for (Eigen::Index r = 0; r < coords.rows(); ++r) {
    const auto k = static_cast<std::size_t>(r);
    out << (k < pop.size() && pop.id(k) ? *pop.id(k) : "g" + std::to_string(k + 1));
    for (Eigen::Index c = 0; c < coords.cols(); ++c) out << ',' << format17(coords(r, c));
    out << '\n';
  }
}

ojson summary_json(const PosteriorSummary& s) {
  ojson freq = ojson::array();
  for (const auto& [g, f] : s.frequencies) {
    ojson e = ojson::array();
    for (auto [i, j] : g.edges()) e.push_back({i + 1, j + 1});
    freq.push_back(ojson{{"edges", e}, {"frequency", f}});
  }
  ojson out;
  out["n_vertices"] = s.mode.n_vertices();
  ojson mode = ojson::array();
  for (auto [i, j] : s.mode.edges()) mode.push_back({i + 1, j + 1});
  out["mode_edges"] = mode;
  out["param_mean"] = s.param_mean;
  out["level"] = s.level;
  out["interval"] = {s.lower, s.upper};
  out["frequencies"] = freq;
  return out;
}

void write_exact_distribution(const ExactDistribution& d, std::ostream& out) {
  for (std::size_t k = 0; k < d.space.size(); ++k) {
    ojson line;
    ojson e = ojson::array();
    for (auto [i, j] : d.space[k].edges()) e.push_back({i + 1, j + 1});
    line["edges"] = e;
    line["log_prob"] = d.log_probs[k];
    out << line.dump() << '\n';
  }
}

void write_gamma_profile_csv(const std::vector<GammaProfileRow>& rows, std::ostream& out) {
  out << "gamma,whisker_low,q1,median,q3,whisker_high,min,max,mean\n";
  for (const auto& r : rows)
    out << format17(r.gamma) << ',' << format17(r.whisker_low) << ',' << format17(r.q1) << ','
        << format17(r.median) << ',' << format17(r.q3) << ',' << format17(r.whisker_high) << ','
        << format17(r.min) << ',' << format17(r.max) << ',' << format17(r.mean) << '\n';
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace netpop
