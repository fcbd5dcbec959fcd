#ifndef CKSPLINE_IO_HPP
#define CKSPLINE_IO_HPP

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <limits>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ckspline/error.hpp"
#include "ckspline/loss.hpp"
#include "ckspline/repair.hpp"
#include "ckspline/spline.hpp"
#include "ckspline/train.hpp"

namespace ckspline {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitDiverged = 2, kExitIo = 3 };

// ---------------------------------------------------------------------------
// Text helpers

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return value;
}

inline std::optional<long long> parse_int(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return value;
}

}  // namespace detail

/// 17 significant digits, enough to round-trip any double.
inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string to_string(BoundaryMode m) {
  switch (m) {
    case BoundaryMode::open: return "open";
    case BoundaryMode::cyclic: return "cyclic";
    case BoundaryMode::periodic: return "periodic";
  }
  return "open";
}

inline std::string to_string(OptimizerKind k) {
  switch (k) {
    case OptimizerKind::sgd: return "sgd";
    case OptimizerKind::adam: return "adam";
    case OptimizerKind::adamax: return "adamax";
    case OptimizerKind::amsgrad: return "amsgrad";
  }
  return "sgd";
}

inline BoundaryMode parse_boundary_mode(std::string_view s) {
  if (s == "open") return BoundaryMode::open;
  if (s == "cyclic") return BoundaryMode::cyclic;
  if (s == "periodic") return BoundaryMode::periodic;
  throw ConfigError("unknown boundary mode '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// Samples

/// CSV with header `x,y`; rows sorted stably by x afterwards.
inline SampleSet read_samples(std::istream& in, const std::string& name = "<stream>") {
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<double> xs, ys;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = detail::trim(line);
    if (text.empty()) continue;
    if (!header_seen) {
      std::string compact;
      for (char c : text)
        if (c != ' ' && c != '\t') compact.push_back(c);
      if (compact != "x,y")
        throw ParseError(name + ":" + std::to_string(line_no) + ": expected header 'x,y'", line_no);
      header_seen = true;
      continue;
    }
    const auto comma = text.find(',');
    if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos)
      throw ParseError(name + ":" + std::to_string(line_no) + ": expected two fields 'x,y'", line_no);
    const auto x = detail::parse_double(text.substr(0, comma));
    const auto y = detail::parse_double(text.substr(comma + 1));
    if (!x || !y)
      throw ParseError(name + ":" + std::to_string(line_no) + ": malformed number", line_no);
    if (!std::isfinite(*x) || !std::isfinite(*y))
      throw ParseError(name + ":" + std::to_string(line_no) + ": non-finite value", line_no);
    xs.push_back(*x);
    ys.push_back(*y);
  }
  if (!header_seen) throw ParseError(name + ": empty file, expected header 'x,y'", 0);
  if (xs.size() < 2)
    throw ParseError(name + ": at least 2 samples required, found " + std::to_string(xs.size()), 0);
  return SampleSet::from_unsorted(std::move(xs), std::move(ys));
}

inline SampleSet load_samples(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open sample file '" + path.string() + "'");
  return read_samples(in, path.string());
}

inline void write_samples(const std::filesystem::path& path, const SampleSet& samples) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << "x,y\n";
  for (std::size_t i = 0; i < samples.size(); ++i)
    out << format_number(samples.xs()[i]) << ',' << format_number(samples.ys()[i]) << '\n';
}

// ---------------------------------------------------------------------------
// Run manifest: flat key=value file, the same keys as the CLI flags.

struct RunManifest {
  std::filesystem::path input;
  TrainConfig train;
  std::filesystem::path output_dir = "out";
  int resolution = 32;
  std::uint64_t seed = 0;  // reserved; training is deterministic
  bool repair = false;

  void validate() const {
    if (input.empty()) throw ConfigError("manifest: 'input' is required");
    if (output_dir.empty()) throw ConfigError("manifest: 'out' must be non-empty");
    if (resolution < 2) throw ConfigError("manifest: resolution must be >= 2");
    train.validate();
    if (repair && train.degree < 2 * train.loss.k + 1)
      throw ConfigError("manifest: repair requires degree >= 2k+1");
  }
};

inline const std::vector<std::string>& manifest_keys() {
  static const std::vector<std::string> keys = {
      "input",        "segments",      "degree",        "k",      "lambda",
      "epochs",       "optimizer",     "lr",            "momentum", "nesterov",
      "beta1",        "beta2",         "epsilon",       "regularization", "init",
      "scaling",      "boundary-mode", "strain-weight", "out",    "resolution",
      "record-every", "seed",          "repair"};
  return keys;
}

namespace detail {

inline double require_double(const std::string& key, std::string_view v) {
  auto d = parse_double(v);
  if (!d || !std::isfinite(*d))
    throw ConfigError("manifest: '" + key + "' expects a real number, got '" + std::string(v) + "'");
  return *d;
}

inline int require_int(const std::string& key, std::string_view v) {
  auto i = parse_int(v);
  if (!i || *i < std::numeric_limits<int>::min() || *i > std::numeric_limits<int>::max())
    throw ConfigError("manifest: '" + key + "' expects an integer, got '" + std::string(v) + "'");
  return static_cast<int>(*i);
}

inline bool require_bool(const std::string& key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("manifest: '" + key + "' expects true/false, got '" + std::string(v) + "'");
}

}  // namespace detail

/// Applies one key=value setting; unknown keys and malformed values throw ConfigError.
inline void apply_setting(RunManifest& m, const std::string& key, std::string_view raw) {
  using namespace detail;
  const auto v = trim(raw);
  TrainConfig& t = m.train;
  if (key == "input") m.input = std::string(v);
  else if (key == "out") m.output_dir = std::string(v);
  else if (key == "segments") t.segments = require_int(key, v);
  else if (key == "degree") t.degree = require_int(key, v);
  else if (key == "k") t.loss.k = require_int(key, v);
  else if (key == "lambda") t.loss.lambda = require_double(key, v);
  else if (key == "epochs") t.epochs = require_int(key, v);
  else if (key == "lr") t.optimizer.learning_rate = require_double(key, v);
  else if (key == "momentum") t.optimizer.momentum = require_double(key, v);
  else if (key == "nesterov") t.optimizer.nesterov = require_bool(key, v);
  else if (key == "beta1") t.optimizer.beta1 = require_double(key, v);
  else if (key == "beta2") t.optimizer.beta2 = require_double(key, v);
  else if (key == "epsilon") t.optimizer.epsilon = require_double(key, v);
  else if (key == "strain-weight") t.loss.strain_weight = require_double(key, v);
  else if (key == "resolution") m.resolution = require_int(key, v);
  else if (key == "record-every") t.record_every = require_int(key, v);
  else if (key == "repair") m.repair = require_bool(key, v);
  else if (key == "seed") {
    auto s = parse_int(v);
    if (!s || *s < 0) throw ConfigError("manifest: 'seed' expects a non-negative integer");
    m.seed = static_cast<std::uint64_t>(*s);
  } else if (key == "boundary-mode") {
    t.loss.boundary_mode = parse_boundary_mode(v);
  } else if (key == "optimizer") {
    if (v == "sgd") t.optimizer.kind = OptimizerKind::sgd;
    else if (v == "adam") t.optimizer.kind = OptimizerKind::adam;
    else if (v == "adamax") t.optimizer.kind = OptimizerKind::adamax;
    else if (v == "amsgrad") t.optimizer.kind = OptimizerKind::amsgrad;
    else throw ConfigError("manifest: unknown optimizer '" + std::string(v) + "'");
  } else if (key == "regularization") {
    if (v == "none") t.regularization = Regularization::none;
    else if (v == "degree_based" || v == "degree-based") t.regularization = Regularization::degree_based;
    else throw ConfigError("manifest: unknown regularization '" + std::string(v) + "'");
  } else if (key == "init") {
    if (v == "zeros") t.init = Init::zeros;
    else if (v == "least_squares" || v == "least-squares") t.init = Init::least_squares;
    else throw ConfigError("manifest: unknown init '" + std::string(v) + "'");
  } else if (key == "scaling") {
    if (v == "none") t.scaling = Scaling::none;
    else if (v == "unit_segments" || v == "unit-segments") t.scaling = Scaling::unit_segments;
    else throw ConfigError("manifest: unknown scaling '" + std::string(v) + "'");
  } else {
    throw ConfigError("manifest: unknown key '" + key + "'");
  }
}

/// Parses `key = value` lines; '#' starts a comment. Relative `input` and
/// `out` paths are taken relative to `base_dir` when one is given.
inline RunManifest parse_manifest(std::istream& in, const std::filesystem::path& base_dir = {}) {
  RunManifest m;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto text = std::string_view(line);
    if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    text = detail::trim(text);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("manifest line " + std::to_string(line_no) + ": expected key=value");
    const std::string key(detail::trim(text.substr(0, eq)));
    try {
      apply_setting(m, key, text.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("manifest line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!base_dir.empty()) {
    if (!m.input.empty() && m.input.is_relative()) m.input = base_dir / m.input;
  }
  return m;
}

inline RunManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest '" + path.string() + "'");
  return parse_manifest(in, path.parent_path());
}

// ---------------------------------------------------------------------------
// Model and report serialization

inline nlohmann::json model_to_json(const SplineModel& model) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (std::size_t i = 0; i < model.segments(); ++i) {
    const auto row = model.segment_coefficients(i);
    coeffs.push_back(std::vector<double>(row.begin(), row.end()));
  }
  const auto xi = model.breakpoints();
  const auto mu = model.centers();
  return {{"format", "ckspline-model"},
          {"version", 1},
          {"degree", model.degree()},
          {"breakpoints", std::vector<double>(xi.begin(), xi.end())},
          {"centers", std::vector<double>(mu.begin(), mu.end())},
          {"coefficients", std::move(coeffs)},
          {"domain_map", {{"scale", model.domain_map().scale},
                          {"offset", model.domain_map().offset}}}};
}

inline SplineModel model_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != "ckspline-model")
      throw ParseError("model: unexpected format tag");
    const auto xi = j.at("breakpoints").get<std::vector<double>>();
    const int degree = j.at("degree").get<int>();
    const auto rows = j.at("coefficients").get<std::vector<std::vector<double>>>();
    if (xi.size() < 2 || rows.size() != xi.size() - 1)
      throw ParseError("model: coefficient rows do not match breakpoints");
    CoefficientMatrix c(static_cast<Eigen::Index>(rows.size()), degree + 1);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (static_cast<int>(rows[i].size()) != degree + 1)
        throw ParseError("model: row " + std::to_string(i) + " has wrong length");
      for (int t = 0; t <= degree; ++t) c(static_cast<Eigen::Index>(i), t) = rows[i][static_cast<std::size_t>(t)];
    }
    DomainMap map{j.at("domain_map").at("scale").get<double>(),
                  j.at("domain_map").at("offset").get<double>()};
    SplineModel model(xi, std::move(c), map);
    if (j.contains("centers")) {
      const auto mu = j.at("centers").get<std::vector<double>>();
      if (mu.size() != model.segments()) throw ParseError("model: centers length mismatch");
      for (std::size_t i = 0; i < mu.size(); ++i)
        if (mu[i] != model.centers()[i])
          throw ParseError("model: center " + std::to_string(i) + " is not the segment midpoint");
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("model: ") + e.what());
  } catch (const ConfigError& e) {
    throw ParseError(std::string("model: ") + e.what());
  }
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  write_text(path, j.dump(2) + "\n");
}

inline SplineModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open model '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return model_from_json(j);
}

inline std::string history_csv(const std::vector<HistoryEntry>& history) {
  std::string out = "epoch,total,l2,ck,strain\n";
  for (const auto& h : history)
    out += std::to_string(h.epoch) + ',' + format_number(h.loss.total) + ',' +
           format_number(h.loss.l2) + ',' + format_number(h.loss.ck) + ',' +
           format_number(h.loss.strain) + '\n';
  return out;
}

/// Original-coordinate abscissae: `resolution` uniform points per segment,
/// shared breakpoints listed once.
inline std::vector<double> curve_abscissae(const SplineModel& model, int resolution) {
  if (resolution < 2) throw ConfigError("curve: resolution must be >= 2");
  const auto xi = model.breakpoints();
  std::vector<double> xs;
  for (std::size_t i = 0; i < model.segments(); ++i)
    for (int q = (i == 0 ? 0 : 1); q < resolution; ++q) {
      const double t = q == resolution - 1
                           ? xi[i + 1]
                           : xi[i] + (xi[i + 1] - xi[i]) * q / (resolution - 1);
      xs.push_back(model.domain_map().to_original(t));
    }
  return xs;
}

/// x, f, f', ..., f^(k) in original coordinates.
inline std::string curve_csv(const SplineModel& model, std::span<const double> xs, int k) {
  std::string out = "x,f";
  for (int j = 1; j <= k; ++j) out += ",d" + std::to_string(j);
  out += '\n';
  for (double x : xs) {
    out += format_number(x);
    for (int j = 0; j <= k; ++j) out += ',' + format_number(model.eval(x, j));
    out += '\n';
  }
  return out;
}

inline nlohmann::json repair_to_json(const RepairReport& r) {
  nlohmann::json bs = nlohmann::json::array();
  for (const auto& b : r.boundaries)
    bs.push_back({{"left_segment", b.left_segment},
                  {"right_segment", b.right_segment},
                  {"first_order", b.first_order},
                  {"mean_derivatives", b.mean_derivatives},
                  {"pre_defects", b.pre_defects},
                  {"post_defects", b.post_defects}});
  return {{"k", r.k},
          {"boundary_mode", to_string(r.boundary_mode)},
          {"max_correction", r.max_correction},
          {"max_relative_post_defect", r.max_relative_post_defect()},
          {"boundaries", std::move(bs)}};
}

inline nlohmann::json loss_to_json(const LossBreakdown& l) {
  return {{"total", l.total}, {"l2", l.l2}, {"ck", l.ck}, {"strain", l.strain}};
}

// ---------------------------------------------------------------------------
// Commands

struct RunOutcome {
  int exit_code = kExitOk;
  TrainingReport report;
  std::optional<RepairReport> repair;
};

namespace detail {

inline void print_error(std::ostream& err, const std::string& msg) {
  std::string line = msg;
  std::replace(line.begin(), line.end(), '\n', ' ');
  err << "ckspline: error: " << line << '\n';
}

/// Fits, writes the artifacts for one manifest into `dir`.
inline RunOutcome fit_and_write(const SampleSet& samples, const RunManifest& m,
                                const std::filesystem::path& dir) {
  RunOutcome out{kExitOk, fit(samples, m.train), std::nullopt};
  SplineModel model = out.report.final_model;
  if (m.repair && !out.report.diverged) {
    auto repaired = repair_continuity(model, m.train.loss.k, m.train.loss.boundary_mode);
    model = std::move(repaired.model);
    out.repair = std::move(repaired.report);
  }
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());

  write_json(dir / "model.json", model_to_json(model));
  write_text(dir / "history.csv", history_csv(out.report.history));
  write_text(dir / "curve.csv",
             curve_csv(model, curve_abscissae(model, m.resolution), m.train.loss.k));
  if (out.repair) write_json(dir / "repair.json", repair_to_json(*out.repair));

  nlohmann::json status = {
      {"diverged", out.report.diverged},
      {"divergence_epoch", out.report.divergence_epoch
                               ? nlohmann::json(*out.report.divergence_epoch)
                               : nlohmann::json(nullptr)},
      {"epochs", m.train.epochs},
      {"lambda", m.train.loss.lambda},
      {"optimizer", to_string(m.train.optimizer.kind)},
      {"rank_deficient_init", out.report.rank_deficient_init},
      {"warnings", out.report.warnings}};
  if (!out.report.history.empty()) status["final"] = loss_to_json(out.report.history.back().loss);
  write_json(dir / "report.json", status);
  if (out.report.diverged) out.exit_code = kExitDiverged;
  return out;
}

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    print_error(err, e.what());
    return kExitConfig;
  } catch (const DomainError& e) {
    print_error(err, e.what());
    return kExitConfig;
  } catch (const ConditioningError& e) {
    print_error(err, e.what());
    return kExitConfig;
  } catch (const ParseError& e) {
    print_error(err, e.what());
    return kExitIo;
  } catch (const IoError& e) {
    print_error(err, e.what());
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    print_error(err, e.what());
    return kExitIo;
  }
}

}  // namespace detail

/// Fit (and optionally repair) per manifest; writes model.json, history.csv,
/// curve.csv, report.json and, on repair, repair.json.
/// Exit codes: 0 ok, 1 configuration, 2 divergence, 3 I/O.
inline int run(const RunManifest& manifest, std::ostream& err = std::cerr) {
  return detail::guarded(err, [&] {
    manifest.validate();
    const SampleSet samples = load_samples(manifest.input);
    RunOutcome out = detail::fit_and_write(samples, manifest, manifest.output_dir);
    if (out.exit_code == kExitDiverged)
      detail::print_error(err, "training diverged at epoch " +
                                   std::to_string(out.report.divergence_epoch.value_or(-1)));
    return out.exit_code;
  });
}

/// Result directory names for a lambda list: lambda_<value>, with _2, _3, ...
/// appended to repeated values in order of appearance.
inline std::vector<std::string> sweep_directory_names(std::span<const double> lambdas) {
  std::vector<std::string> names;
  std::map<std::string, int> seen;
  for (double l : lambdas) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "lambda_%g", l);
    const int count = ++seen[buf];
    names.push_back(count == 1 ? std::string(buf) : std::string(buf) + "_" + std::to_string(count));
  }
  return names;
}

/// One fit per lambda into <out>/<lambda dir>, then <out>/summary.csv.
inline int sweep(const RunManifest& manifest, std::span<const double> lambdas,
                 std::ostream& err = std::cerr) {
  return detail::guarded(err, [&]() -> int {
    if (lambdas.empty()) throw ConfigError("sweep: empty lambda list");
    for (double l : lambdas)
      if (!(l >= 0.0 && l <= 1.0))
        throw ConfigError("sweep: lambda " + format_number(l) + " outside [0, 1]");
    manifest.validate();
    const SampleSet samples = load_samples(manifest.input);
    const auto names = sweep_directory_names(lambdas);
    std::string summary = "lambda,total,l2,ck,post_repair_max_defect,diverged,dir\n";
    int code = kExitOk;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      RunManifest m = manifest;
      m.train.loss.lambda = lambdas[i];
      RunOutcome out = detail::fit_and_write(samples, m, manifest.output_dir / names[i]);
      if (out.exit_code != kExitOk) code = out.exit_code;
      const LossBreakdown last =
          out.report.history.empty() ? LossBreakdown{} : out.report.history.back().loss;
      double post = std::nan("");
      if (!out.report.diverged && m.train.degree >= 2 * m.train.loss.k + 1) {
        const RepairReport r = out.repair ? *out.repair
                                          : repair_continuity(out.report.final_model,
                                                              m.train.loss.k,
                                                              m.train.loss.boundary_mode)
                                                .report;
        post = 0.0;
        for (const auto& b : r.boundaries)
          for (std::size_t j = static_cast<std::size_t>(b.first_order); j < b.post_defects.size(); ++j)
            post = std::max(post, std::abs(b.post_defects[j]));
      }
      summary += format_number(lambdas[i]) + ',' + format_number(last.total) + ',' +
                 format_number(last.l2) + ',' + format_number(last.ck) + ',' +
                 format_number(post) + ',' + (out.report.diverged ? "1" : "0") + ',' +
                 names[i] + '\n';
    }
    write_text(manifest.output_dir / "summary.csv", summary);
    if (code == kExitDiverged) detail::print_error(err, "at least one sweep run diverged");
    return code;
  });
}

/// Repairs a stored model; writes model.json, repair.json and curve.csv.
inline int repair_command(const std::filesystem::path& model_path, int k, BoundaryMode mode,
                          const std::filesystem::path& out_dir, int resolution,
                          std::ostream& err = std::cerr) {
  return detail::guarded(err, [&] {
    const SplineModel model = load_model(model_path);
    auto repaired = repair_continuity(model, k, mode);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + out_dir.string() + "'");
    write_json(out_dir / "model.json", model_to_json(repaired.model));
    write_json(out_dir / "repair.json", repair_to_json(repaired.report));
    write_text(out_dir / "curve.csv",
               curve_csv(repaired.model, curve_abscissae(repaired.model, resolution), k));
    return static_cast<int>(kExitOk);
  });
}

/// Evaluates a stored model at the xs of a sample file (or on a uniform grid
/// when `input` is empty); writes curve CSV to `out` or stdout when out is "-".
inline int eval_command(const std::filesystem::path& model_path, const std::filesystem::path& input,
                        int k, int resolution, const std::filesystem::path& out,
                        std::ostream& err = std::cerr, std::ostream& stdout_stream = std::cout) {
  return detail::guarded(err, [&] {
    if (k < 0) throw ConfigError("eval: k must be >= 0");
    const SplineModel model = load_model(model_path);
    std::vector<double> xs;
    if (input.empty()) {
      xs = curve_abscissae(model, resolution);
    } else {
      const SampleSet s = load_samples(input);
      xs.assign(s.xs().begin(), s.xs().end());
    }
    const std::string csv = curve_csv(model, xs, k);
    if (out == "-") stdout_stream << csv;
    else write_text(out, csv);
    return static_cast<int>(kExitOk);
  });
}

}  // namespace ckspline

#endif  // CKSPLINE_IO_HPP
