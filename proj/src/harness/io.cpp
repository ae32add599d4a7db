#include "ufb/io.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "ufb/errors.hpp"

namespace ufb::io {

namespace {

std::string num(double v) { return fmt::format("{:.17g}", v); }

std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t k = 0; k < std::min(byte, text.size()); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return fmt::format("line {}, column {}", line, col);
}

const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw ConfigError(fmt::format("{}: expected an object", where));
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(fmt::format("{}.{}: missing required field", where, key));
  return *it;
}

double as_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(fmt::format("{}: expected a number, got {}", where, j.type_name()));
  return j.get<double>();
}

std::string as_string(const json& j, const std::string& where) {
  if (!j.is_string()) throw ConfigError(fmt::format("{}: expected a string, got {}", where, j.type_name()));
  return j.get<std::string>();
}

long long as_integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ConfigError(fmt::format("{}: expected an integer, got {}", where, j.type_name()));
  return j.get<long long>();
}

std::vector<double> as_real_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(fmt::format("{}: expected an array of numbers", where));
  std::vector<double> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(as_number(j[k], fmt::format("{}[{}]", where, k)));
  return out;
}

json taps_to_json(const LaurentPoly& h) {
  json arr = json::array();
  if (h.is_zero()) return arr;
  for (int p = 0; p >= h.lowest_power(); --p) arr.push_back(h.coeff(p).real());
  return arr;
}

std::string csv_label(std::size_t p, std::size_t q) { return fmt::format("\"a_{{{},{}}}\"", p + 1, q + 1); }

}  // namespace

json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("{}: JSON syntax error at {}: {}", origin, line_col(text, e.byte), e.what()));
  }
}

json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str(), path.string());
}

FilterBankSpec bank_from_json(const json& j, const std::string& where) {
  const long long M = as_integer(require(j, "M", where), where + ".M");
  const long long d = j.contains("d") ? as_integer(j["d"], where + ".d") : 0;
  const json& filters = require(j, "filters", where);
  if (!filters.is_array() || filters.empty())
    throw ConfigError(fmt::format("{}.filters: expected a non-empty array of tap arrays", where));
  std::vector<LaurentPoly> hs;
  for (std::size_t k = 0; k < filters.size(); ++k) {
    const auto taps = as_real_list(filters[k], fmt::format("{}.filters[{}]", where, k));
    if (taps.empty()) throw ConfigError(fmt::format("{}.filters[{}]: empty filter", where, k));
    hs.push_back(LaurentPoly::from_taps(taps));
  }
  try {
    return FilterBankSpec(static_cast<int>(M), std::move(hs), static_cast<int>(d));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(fmt::format("{}: {}", where, e.what()));
  }
}

json bank_to_json(const FilterBankSpec& fb) {
  json filters = json::array();
  for (const auto& h : fb.filters()) {
    if (!h.is_real()) throw ConfigError("bank_to_json: complex filter coefficients have no JSON form");
    filters.push_back(taps_to_json(h));
  }
  return {{"M", fb.decimation()}, {"d", fb.delay()}, {"filters", filters}};
}

InputModel input_from_json(const json& j, const std::string& where) {
  InputModel m;
  if (!j.is_object()) throw ConfigError(fmt::format("{}: expected an object", where));
  if (j.contains("variance")) m.variance = as_number(j["variance"], where + ".variance");
  if (!(m.variance > 0.0)) throw ConfigError(fmt::format("{}.variance: must be > 0", where));
  const std::string model = j.contains("model") ? as_string(j["model"], where + ".model") : "white";
  if (model == "white") {
    m.kind = InputKind::White;
  } else if (model == "shaped") {
    m.kind = InputKind::Shaped;
    const auto g = as_real_list(require(j, "shaping", where), where + ".shaping");
    m.shaping = LaurentPoly::from_taps(g);
    if (m.shaping.is_zero()) throw ConfigError(fmt::format("{}.shaping: all-zero shaping filter", where));
  } else {
    throw ConfigError(fmt::format("{}.model: expected \"white\" or \"shaped\", got \"{}\"", where, model));
  }
  return m;
}

json input_to_json(const InputModel& m) {
  json j{{"model", m.kind == InputKind::White ? "white" : "shaped"}, {"variance", m.variance}};
  if (m.kind == InputKind::Shaped) j["shaping"] = taps_to_json(m.shaping);
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  ExperimentConfig cfg{.bank = bank_from_json(require(j, "bank", "config"), "bank")};
  const ExperimentConfig defaults = experiment1_config();
  cfg.adaptive = defaults.adaptive;
  cfg.iterations = defaults.iterations;
  cfg.seed = defaults.seed;
  if (j.contains("input")) cfg.input = input_from_json(j["input"]);
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ConfigError("seed: expected a non-negative integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("algorithm")) {
    const auto a = as_string(j["algorithm"], "algorithm");
    if (a == "nlms")
      cfg.adaptive.rule = UpdateRule::Nlms;
    else if (a == "lms")
      cfg.adaptive.rule = UpdateRule::Lms;
    else
      throw ConfigError(fmt::format("algorithm: expected \"lms\" or \"nlms\", got \"{}\"", a));
  }
  if (j.contains("step")) cfg.adaptive.step = as_number(j["step"], "step");
  if (!(cfg.adaptive.step > 0.0)) throw ConfigError("step: must be > 0");
  if (j.contains("tap_len")) {
    const auto t = as_integer(j["tap_len"], "tap_len");
    if (t < 1) throw ConfigError("tap_len: must be >= 1");
    cfg.adaptive.tap_len = static_cast<std::size_t>(t);
  }
  if (j.contains("iterations")) {
    const auto n = as_integer(j["iterations"], "iterations");
    if (n < 0) throw ConfigError("iterations: must be >= 0");
    cfg.iterations = static_cast<std::size_t>(n);
  }
  if (j.contains("snapshots")) {
    const json& s = j["snapshots"];
    if (!s.is_array()) throw ConfigError("snapshots: expected an array of iteration counts");
    for (std::size_t k = 0; k < s.size(); ++k) {
      const auto v = as_integer(s[k], fmt::format("snapshots[{}]", k));
      if (v < 0) throw ConfigError(fmt::format("snapshots[{}]: must be >= 0", k));
      cfg.snapshots.push_back(static_cast<std::size_t>(v));
    }
  }
  if (j.contains("normalization")) {
    const auto n = as_string(j["normalization"], "normalization");
    if (n == "per_channel")
      cfg.adaptive.normalization = NlmsNormalization::PerChannel;
    else if (n == "joint")
      cfg.adaptive.normalization = NlmsNormalization::Joint;
    else
      throw ConfigError(fmt::format("normalization: expected \"per_channel\" or \"joint\", got \"{}\"", n));
  }
  if (j.contains("eps")) cfg.adaptive.eps = as_number(j["eps"], "eps");
  if (j.contains("per_component_trace")) {
    if (!j["per_component_trace"].is_boolean()) throw ConfigError("per_component_trace: expected true or false");
    cfg.per_component_trace = j["per_component_trace"].get<bool>();
  }
  return cfg;
}

json config_to_json(const ExperimentConfig& cfg) {
  return {{"bank", bank_to_json(cfg.bank)},
          {"input", input_to_json(cfg.input)},
          {"seed", cfg.seed},
          {"algorithm", cfg.adaptive.rule == UpdateRule::Nlms ? "nlms" : "lms"},
          {"step", cfg.adaptive.step},
          {"tap_len", cfg.adaptive.tap_len},
          {"iterations", cfg.iterations},
          {"snapshots", cfg.snapshots},
          {"normalization", cfg.adaptive.normalization == NlmsNormalization::PerChannel ? "per_channel" : "joint"},
          {"eps", cfg.adaptive.eps},
          {"per_component_trace", cfg.per_component_trace}};
}

json wiener_to_json(const WienerSolution& ws) {
  json entries = json::array();
  json reduced = json::array();
  for (std::size_t i = 0; i < ws.rows(); ++i) {
    json row = json::array();
    json rrow = json::array();
    for (std::size_t j = 0; j < ws.cols(); ++j) {
      row.push_back({{"num", ws.A(i, j).num().to_text()}, {"den", ws.A(i, j).den().to_text()}});
      rrow.push_back(ws.reduced_num(i, j).to_text());
    }
    entries.push_back(row);
    reduced.push_back(rrow);
  }
  json poles = json::array();
  for (const auto& p : ws.poles) poles.push_back({p.real(), p.imag()});
  return {{"M", ws.rows()},
          {"L", ws.cols()},
          {"delta", ws.delta.to_text()},
          {"entries", entries},
          {"stable", ws.stable},
          {"poles", poles},
          {"reduced", {{"den", ws.reduced_den.to_text()}, {"num", reduced}}}};
}

json metrics_to_json(const ExperimentResult& res) {
  const auto& m = res.metrics;
  json j{{"tap_distance", m.tap_distance},
         {"max_tap_abs_diff", m.max_tap_abs_diff},
         {"steady_state_mse", m.steady_state_mse},
         {"reconstruction_mse", m.reconstruction_mse},
         {"initial_mse", m.initial_mse},
         {"desired_power", m.desired_power},
         {"wiener_truncation", m.wiener_truncation},
         {"iterations", res.trace.iterations()},
         {"seed", res.config.seed},
         {"generator", kGeneratorName},
         {"kernel_backend", res.kernel_backend},
         {"wiener_stable", res.wiener.stable}};
  if (res.comparison) {
    json pairs = json::array();
    for (const auto& pc : res.comparison->pairs)
      pairs.push_back({{"label", fmt::format("a_{{{},{}}}", pc.p + 1, pc.q + 1)}, {"relative_diff", pc.relative_diff}});
    j["pairs"] = pairs;
  }
  return j;
}

void write_trace_csv(std::ostream& os, const AdaptationTrace& trace) {
  os << "iteration,squared_error";
  for (std::size_t p = 0; p < trace.component_error.size(); ++p) os << ",e_" << p << "^2";
  os << '\n';
  for (std::size_t n = 0; n < trace.squared_error.size(); ++n) {
    os << (n + 1) << ',' << num(trace.squared_error[n]);
    for (const auto& comp : trace.component_error) os << ',' << num(comp[n]);
    os << '\n';
  }
}

void write_trace_db_csv(std::ostream& os, const AdaptationTrace& trace, double reference_power) {
  os << "iteration,normalized_db\n";
  const auto db = trace.normalized_db(reference_power);
  for (std::size_t n = 0; n < db.size(); ++n) os << (n + 1) << ',' << num(db[n]) << '\n';
}

void write_tap_table_csv(std::ostream& os, const TapTable& taps) {
  bool complex_taps = false;
  for (const auto& c : taps.raw()) complex_taps |= c.imag() != 0.0;
  bool first = true;
  for (std::size_t p = 0; p < taps.outputs(); ++p)
    for (std::size_t q = 0; q < taps.inputs(); ++q) {
      os << (first ? "" : ",") << csv_label(p, q);
      if (complex_taps) os << ',' << fmt::format("\"a_{{{},{}}}.im\"", p + 1, q + 1);
      first = false;
    }
  os << '\n';
  for (std::size_t m = 0; m < taps.tap_len(); ++m) {
    first = true;
    for (std::size_t p = 0; p < taps.outputs(); ++p)
      for (std::size_t q = 0; q < taps.inputs(); ++q) {
        os << (first ? "" : ",") << num(taps.at(p, q, m).real());
        if (complex_taps) os << ',' << num(taps.at(p, q, m).imag());
        first = false;
      }
    os << '\n';
  }
}

void write_blocked_signal_csv(std::ostream& os, const BlockedSignal& s, const std::string& prefix) {
  const bool real = s.is_real();
  os << 'n';
  for (std::size_t i = 0; i < s.dim(); ++i) {
    if (real)
      os << ',' << prefix << i;
    else
      os << ',' << prefix << i << "_re," << prefix << i << "_im";
  }
  os << '\n';
  for (std::size_t n = 0; n < s.size(); ++n) {
    os << n;
    for (const auto& c : s[n]) {
      os << ',' << num(c.real());
      if (!real) os << ',' << num(c.imag());
    }
    os << '\n';
  }
}

void write_residual_csv(std::ostream& os, const ReconstructionReport& rep) {
  os << "grid_angle,residual\n";
  for (std::size_t k = 0; k < rep.angles.size(); ++k) os << num(rep.angles[k]) << ',' << num(rep.residuals[k]) << '\n';
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
  out << content;
}

template <typename Fn>
std::string render(Fn&& fn) {
  std::ostringstream os;
  fn(os);
  return os.str();
}

}  // namespace

void write_result_dir(const ExperimentResult& res, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file(dir / "trace.csv", render([&](std::ostream& os) { write_trace_csv(os, res.trace); }));
  if (res.metrics.desired_power > 0.0)
    write_file(dir / "trace_db.csv",
               render([&](std::ostream& os) { write_trace_db_csv(os, res.trace, res.metrics.desired_power); }));
  for (const auto& snap : res.trace.snapshots)
    write_file(dir / fmt::format("taps_iter{}.csv", snap.iteration),
               render([&](std::ostream& os) { write_tap_table_csv(os, snap.taps); }));
  write_file(dir / fmt::format("taps_iter{}.csv", res.trace.iterations()),
             render([&](std::ostream& os) { write_tap_table_csv(os, res.final_taps); }));
  if (res.wiener.stable)
    write_file(dir / "wiener_taps.csv", render([&](std::ostream& os) { write_tap_table_csv(os, res.wiener_taps); }));
  write_file(dir / "wiener.json", wiener_to_json(res.wiener).dump(2) + "\n");
  write_file(dir / "metrics.json", metrics_to_json(res).dump(2) + "\n");
  write_file(dir / "config.json", config_to_json(res.config).dump(2) + "\n");
}

void prepare_output_dir(const std::filesystem::path& dir, bool force) {
  namespace fs = std::filesystem;
  if (fs::exists(dir)) {
    if (!fs::is_directory(dir)) throw ConfigError(fmt::format("output path '{}' exists and is not a directory", dir.string()));
    if (!fs::is_empty(dir) && !force)
      throw ConfigError(fmt::format("output directory '{}' is not empty; pass --force to overwrite", dir.string()));
    return;
  }
  fs::create_directories(dir);
}

}  // namespace ufb::io
