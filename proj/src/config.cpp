#include "netpop/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "netpop/error.hpp"
#include "netpop/inference.hpp"
#include "netpop/io.hpp"

namespace netpop {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::optional<double> to_real(const std::string& s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<std::uint64_t> to_u64(const std::string& s) {
  std::uint64_t v = 0;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end) return std::nullopt;
  return v;
}

/// Returns an error description, or an empty string when the value is fine.
using Check = std::function<std::string(const std::string&)>;

Check real_in(double lo, double hi, bool lo_open, bool hi_open) {
  return [=](const std::string& s) -> std::string {
    auto v = to_real(s);
    if (!v) return "expected a number";
    const bool ok = (lo_open ? *v > lo : *v >= lo) && (hi_open ? *v < hi : *v <= hi);
    if (!ok) {
      std::ostringstream os;
      os << "must lie in " << (lo_open ? '(' : '[') << lo << ", " << hi << (hi_open ? ')' : ']');
      return os.str();
    }
    return "";
  };
}

Check positive() { return real_in(0.0, kInf, true, true); }

Check integer_at_least(std::uint64_t lo) {
  return [=](const std::string& s) -> std::string {
    auto v = to_u64(s);
    if (!v) return "expected a non-negative integer";
    if (*v < lo) return "must be at least " + std::to_string(lo);
    return "";
  };
}

Check choice(std::vector<std::string> options) {
  return [options = std::move(options)](const std::string& s) -> std::string {
    if (std::find(options.begin(), options.end(), s) != options.end()) return "";
    std::string all;
    for (const auto& o : options) all += (all.empty() ? "" : "|") + o;
    return "must be one of " + all;
  };
}

Check list_of(Check each) {
  return [each = std::move(each)](const std::string& s) -> std::string {
    const auto items = split_list(s);
    if (items.empty()) return "expected a comma-separated list";
    for (const auto& item : items)
      if (auto err = each(item); !err.empty()) return "entry '" + item + "' " + err;
    return "";
  };
}

Check statistic_name() {
  return [](const std::string& s) -> std::string {
    if (s == "edges" || s == "mean-degree") return "";
    if (s.size() > 1 && s[0] == 'q') {
      auto v = to_real(s.substr(1));
      if (v && *v >= 0.0 && *v <= 1.0) return "";
    }
    return "must be edges, mean-degree or q<level> with level in [0, 1]";
  };
}

Check any() {
  return [](const std::string&) { return std::string(); };
}

struct KeySpec {
  Check check;
  std::string fallback;
};

const std::map<std::string, KeySpec>& key_table() {
  static const std::map<std::string, KeySpec> table = {
      // inputs and outputs
      {"input", {any(), ""}},
      {"g0", {any(), ""}},
      {"out", {any(), ""}},
      {"threads", {integer_at_least(1), "1"}},
      // model
      {"model", {choice({"cer-cer", "sn-sn"}), "cer-cer"}},
      {"metric", {choice({"hamming", "diffusion"}), "hamming"}},
      {"t", {positive(), "1"}},
      {"phi", {choice({"identity", "square"}), "identity"}},
      {"alpha0", {real_in(0.0, 0.5, true, true), "0.01"}},
      {"gamma0", {positive(), "0.01"}},
      {"beta_a", {positive(), "1"}},
      {"beta_b", {positive(), "9"}},
      {"gamma_prior", {choice({"exponential", "uniform", "matched-beta"}), "exponential"}},
      {"gamma_rate", {positive(), "1"}},
      {"gamma_kappa", {positive(), "10"}},
      {"alpha_tilde", {real_in(0.0, 0.5, true, true), ""}},
      {"level", {real_in(0.0, 1.0, true, true), "0.95"}},
      // sampler
      {"n_samples", {integer_at_least(1), "250"}},
      {"burn_in", {integer_at_least(0), "10000"}},
      {"lag", {integer_at_least(1), "5"}},
      {"tau", {real_in(0.0, 1.0, true, true), ""}},
      {"kernel_mix_weight", {real_in(0.0, 1.0, false, false), "0.8"}},
      {"upsilon", {list_of(real_in(0.0, 0.5, true, true)), "0.005,0.02,0.08"}},
      {"gamma_upsilon", {list_of(positive()), ""}},
      {"aux_inner_steps", {integer_at_least(1), ""}},
      {"seed", {integer_at_least(0), "1"}},
      // simulate
      {"generator", {choice({"ER", "SBM", "SW", "RGG"}), "ER"}},
      {"n_vertices", {integer_at_least(2), "50"}},
      {"count", {integer_at_least(1), "10"}},
      {"sim_model", {choice({"cer", "snf", "generator"}), "cer"}},
      {"sim_alpha", {real_in(0.0, 0.5, true, true), "0.01"}},
      {"sim_gamma", {positive(), "4.59511985013459"}},
      // diagnostics
      {"statistics", {list_of(statistic_name()), "q0.1,q0.5,q0.9"}},
      {"ppc_draws", {integer_at_least(100), "200"}},
      {"chi2_bins", {integer_at_least(2), "5"}},
      {"chi2_model_draws", {integer_at_least(1), "500"}},
      {"chi2_posterior_draws", {integer_at_least(1), "100"}},
      {"profile_gammas", {list_of(positive()), ""}},
      {"profile_draws", {integer_at_least(1), "50"}},
      // mds
      {"dim", {integer_at_least(1), "2"}},
      // experiments
      {"study", {choice({"concentration", "majority", "prediction", "robustness"}), "concentration"}},
      {"sample_sizes", {list_of(integer_at_least(1)), "3,5,7,10"}},
      {"replications", {integer_at_least(1), "20"}},
      {"epsilons", {list_of(positive()), "1,2,3"}},
      {"delta", {real_in(0.0, 1.0, true, true), "0.05"}},
      {"data_alpha", {real_in(0.0, 0.5, false, true), "0.01"}},
      {"data_gamma", {positive(), "4.59511985013459"}},
      {"test_size", {integer_at_least(1), "20"}},
      {"predictive_draws", {integer_at_least(1), "250"}},
      {"persist_p", {real_in(0.0, 1.0, false, false), "0.9"}},
      {"flip_p", {real_in(0.0, 1.0, false, false), "0.1"}},
      {"misspecifications", {list_of(choice({"none", "metric", "dependence"})), "none,metric,dependence"}},
      {"nominal", {real_in(0.0, 1.0, true, true), "0.05"}},
      {"snf_steps", {integer_at_least(1), ""}},
  };
  return table;
}

const KeySpec& spec_for(const std::string& key) {
  const auto& table = key_table();
  auto it = table.find(key);
  if (it == table.end()) throw Error(ErrorCode::UnknownKey, "unknown configuration key '" + key + "'");
  return it->second;
}

}  // namespace

RunConfig RunConfig::parse(std::string_view text) {
  RunConfig cfg;
  std::stringstream ss{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": expected key = value");
    cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) { return parse(read_text_file(path)); }

RunConfig RunConfig::from_manifest(const std::filesystem::path& path) {
  nlohmann::json m;
  try {
    m = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::parse_error&) {
    throw Error(ErrorCode::ParseError, "manifest " + path.string() + " is not valid JSON");
  }
  if (!m.contains("config") || !m["config"].is_object())
    throw Error(ErrorCode::SchemaError, "manifest is missing field 'config'");
  RunConfig cfg;
  for (const auto& [k, v] : m["config"].items()) {
    if (!v.is_string()) throw Error(ErrorCode::SchemaError, "manifest config value for '" + k + "' must be a string");
    cfg.set(k, v.get<std::string>());
  }
  return cfg;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  const auto& spec = spec_for(key);
  const std::string v = trim(value);
  if (auto err = spec.check(v); !err.empty())
    throw Error(ErrorCode::InvalidConfig, "configuration key '" + key + "' " + err + " (got '" + v + "')");
  values_[key] = v;
}

void RunConfig::set_assignment(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw Error(ErrorCode::ParseError, "expected key=value, got '" + assignment + "'");
  set(trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

bool RunConfig::has(const std::string& key) const {
  const auto& spec = spec_for(key);
  return values_.count(key) || !spec.fallback.empty();
}

std::string RunConfig::get(const std::string& key) const {
  const auto& spec = spec_for(key);
  if (auto it = values_.find(key); it != values_.end()) return it->second;
  return spec.fallback;
}

double RunConfig::get_real(const std::string& key) const {
  auto v = to_real(get(key));
  if (!v) throw Error(ErrorCode::InvalidConfig, "configuration key '" + key + "' has no value");
  return *v;
}

std::size_t RunConfig::get_size(const std::string& key) const { return static_cast<std::size_t>(get_u64(key)); }

std::uint64_t RunConfig::get_u64(const std::string& key) const {
  auto v = to_u64(get(key));
  if (!v) throw Error(ErrorCode::InvalidConfig, "configuration key '" + key + "' has no value");
  return *v;
}

std::vector<double> RunConfig::get_reals(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : split_list(get(key))) out.push_back(*to_real(item));
  return out;
}

std::vector<std::size_t> RunConfig::get_sizes(const std::string& key) const {
  std::vector<std::size_t> out;
  for (const auto& item : split_list(get(key))) out.push_back(static_cast<std::size_t>(*to_u64(item)));
  return out;
}

std::vector<std::string> RunConfig::get_list(const std::string& key) const { return split_list(get(key)); }

std::optional<double> RunConfig::get_optional_real(const std::string& key) const {
  return has(key) ? std::optional<double>(get_real(key)) : std::nullopt;
}

std::optional<std::size_t> RunConfig::get_optional_size(const std::string& key) const {
  return has(key) ? std::optional<std::size_t>(get_size(key)) : std::nullopt;
}

std::string RunConfig::canonical() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + "=" + v + "\n";
  return out;
}

std::uint64_t RunConfig::hash() const { return fnv1a64(canonical()); }

std::vector<std::string> RunConfig::known_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, _] : key_table()) keys.push_back(k);
  return keys;
}

}  // namespace netpop
