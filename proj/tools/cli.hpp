#pragma once
//
// Command-line front end: synth, detect, roc, selftest.
//
// Parameters come from defaults, then an optional key=value config file, then
// flags. Every command writes run.log with the resolved parameter set.
// Exit status: 0 success, 1 usage error, 2 data error, 3 numerical failure.
//

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "irstd/irstd.hpp"
#include "irstd/testing/acceptance.hpp"

namespace irstd::cli {

namespace fs = std::filesystem;

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kNumerical = 3 };

/// Bad command line or config contents.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  fs::path input, out = ".", spec, gt;
  SolverParams params;
  WindowOptions windows;
  std::uint64_t seed = 1;
  std::size_t thresholds = 101;
  double match_radius = 4.0;
  bool rank_explicit = false;
  bool seed_explicit = false;
};

namespace detail {

template <typename T>
T parse_value(const std::string& key, const std::string& text) {
  std::istringstream in(text);
  T v{};
  std::string rest;
  if (!(in >> v) || (in >> rest)) throw UsageError("invalid value '" + text + "' for " + key);
  return v;
}

inline std::size_t parse_count(const std::string& key, const std::string& text) {
  if (!text.empty() && text.front() == '-') throw UsageError("invalid value '" + text + "' for " + key);
  return parse_value<std::size_t>(key, text);
}

inline bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw UsageError("invalid value '" + text + "' for " + key);
}

}  // namespace detail

/// Sets one parameter by its config key; unknown keys are rejected.
inline void apply_setting(RunConfig& c, const std::string& key, const std::string& value) {
  using detail::parse_count;
  using detail::parse_value;
  auto real = [&] { return parse_value<double>(key, value); };
  SolverParams& p = c.params;
  if (key == "input") c.input = value;
  else if (key == "out") c.out = value;
  else if (key == "spec") c.spec = value;
  else if (key == "gt") c.gt = value;
  else if (key == "r") {
    p.rank = parse_count(key, value);
    c.rank_explicit = true;
  } else if (key == "frames_per_window") {
    c.windows.length = parse_count(key, value);
    p.frames_per_window = c.windows.length;
  } else if (key == "step") c.windows.step = parse_count(key, value);
  else if (key == "patch_rows") c.windows.patch_rows = parse_count(key, value);
  else if (key == "patch_cols") c.windows.patch_cols = parse_count(key, value);
  else if (key == "patch_stride") c.windows.patch_stride = parse_count(key, value);
  else if (key == "h_tuning") p.h = real();
  else if (key == "lambda_s") p.lambda_s = real();
  else if (key == "lambda_tv") p.lambda_tv = real();
  else if (key == "lambda3") p.lambda3 = real();
  else if (key == "delta") p.delta = real();
  else if (key == "mu0") p.mu0 = real();
  else if (key == "rho") p.rho = real();
  else if (key == "mu_max") p.mu_max = real();
  else if (key == "xi") p.xi = real();
  else if (key == "max_outer_iters") p.max_outer_iters = parse_count(key, value);
  else if (key == "inner_iters") p.inner_iters = parse_count(key, value);
  else if (key == "plain_residual") p.plain_residual = detail::parse_bool(key, value);
  else if (key == "seed") {
    c.seed = parse_value<std::uint64_t>(key, value);
    c.seed_explicit = true;
  } else if (key == "thresholds") c.thresholds = parse_count(key, value);
  else if (key == "match_radius") c.match_radius = real();
  else throw UsageError("unknown config key '" + key + "'");
}

/// key = value lines; '#' starts a comment.
inline void apply_config_text(RunConfig& c, std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  auto trim = [](const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError("config line " + std::to_string(lineno) + ": expected key = value");
    apply_setting(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

inline std::string format_double(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

/// Resolved parameters as key = value lines, in config-key spelling.
inline std::string describe(const RunConfig& c) {
  const SolverParams& p = c.params;
  std::ostringstream s;
  s << "command = " << c.command << '\n'
    << "input = " << c.input.string() << '\n'
    << "out = " << c.out.string() << '\n'
    << "spec = " << c.spec.string() << '\n'
    << "gt = " << c.gt.string() << '\n'
    << "r = " << p.rank << '\n'
    << "frames_per_window = " << c.windows.length << '\n'
    << "step = " << (c.windows.step == 0 ? c.windows.length : c.windows.step) << '\n'
    << "patch_rows = " << c.windows.patch_rows << '\n'
    << "patch_cols = " << c.windows.patch_cols << '\n'
    << "patch_stride = " << c.windows.patch_stride << '\n'
    << "h_tuning = " << format_double(p.h) << '\n'
    << "lambda_s = " << (p.lambda_s ? format_double(*p.lambda_s) : std::string("derived")) << '\n'
    << "lambda_tv = " << format_double(p.lambda_tv) << '\n'
    << "lambda3 = " << format_double(p.lambda3) << '\n'
    << "delta = " << format_double(p.delta) << '\n'
    << "mu0 = " << format_double(p.mu0) << '\n'
    << "rho = " << format_double(p.rho) << '\n'
    << "mu_max = " << format_double(p.mu_max) << '\n'
    << "xi = " << format_double(p.xi) << '\n'
    << "max_outer_iters = " << p.max_outer_iters << '\n'
    << "inner_iters = " << p.inner_iters << '\n'
    << "plain_residual = " << (p.plain_residual ? "true" : "false") << '\n'
    << "seed = " << c.seed << '\n'
    << "thresholds = " << c.thresholds << '\n'
    << "match_radius = " << format_double(c.match_radius) << '\n';
  return s.str();
}

inline std::string numbered(const std::string& stem, std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "_%03zu.pgm", i);
  return stem + buf;
}

/// Collects run.log lines and writes the file when the command finishes.
class RunLog {
 public:
  explicit RunLog(const RunConfig& c) : config_(c) {}
  void note(const std::string& line) { notes_ << line << '\n'; }
  void write(const std::string& status) const {
    write_file_atomic(config_.out / "run.log", describe(config_) + notes_.str() + "status = " + status + "\n");
  }
  RunConfig& config() { return config_; }

 private:
  RunConfig config_;
  std::ostringstream notes_;
};

inline int run_synth(RunLog& log, std::ostream& out) {
  RunConfig& c = log.config();
  SynthSpec spec = c.spec.empty() ? default_spec(c.seed) : parse_synth_spec(read_file(c.spec));
  if (!c.spec.empty()) {
    if (c.seed_explicit) spec.seed = c.seed;
    c.seed = spec.seed;
  }
  const SynthOutput data = gen_sequence(spec);
  std::vector<std::string> names;
  for (std::size_t f = 0; f < data.sequence.size(); ++f) {
    names.push_back(numbered("frame", f));
    write_image(data.sequence.frames[f], c.out / names.back());
  }
  write_manifest(c.out / "manifest.txt", names);
  write_file_atomic(c.out / "ground_truth.csv", format_ground_truth(data.truth));
  log.note("frames_written = " + std::to_string(names.size()));
  log.note("targets = " + std::to_string(spec.targets.size()));
  out << "wrote " << names.size() << " frames, manifest.txt and ground_truth.csv to " << c.out.string() << '\n';
  return kOk;
}

inline int run_detect(RunLog& log, std::ostream& out) {
  RunConfig& c = log.config();
  if (c.input.empty()) throw UsageError("detect needs --input MANIFEST");
  const FrameSequence seq = load_sequence(c.input);
  const std::size_t rows = c.windows.patch_rows ? c.windows.patch_rows : seq.frames.front().height;
  const std::size_t cols = c.windows.patch_cols ? c.windows.patch_cols : seq.frames.front().width;
  const std::size_t max_rank = std::min(rows, cols);
  if (!c.rank_explicit && c.params.rank > max_rank) {
    log.note("rank_clamped = " + std::to_string(c.params.rank) + " -> " + std::to_string(max_rank) +
             " (window is " + std::to_string(rows) + "x" + std::to_string(cols) + ")");
    c.params.rank = max_rank;
  }
  c.params.frames_per_window = c.windows.length;

  const PipelineResult result = detect_sequence(seq, c.params, c.windows);

  std::vector<std::string> target_names, background_names;
  for (std::size_t f = 0; f < result.target_maps.size(); ++f) {
    target_names.push_back(numbered("target", f));
    background_names.push_back(numbered("background", f));
    write_image(result.target_maps[f], c.out / target_names.back());
    write_image(result.background_frames[f], c.out / background_names.back());
  }
  write_manifest(c.out / "targets.txt", target_names);
  write_manifest(c.out / "backgrounds.txt", background_names);

  std::ostringstream csv;
  csv << std::setprecision(17) << "window,iteration,residual,mu\n";
  double total_seconds = 0.0;
  for (std::size_t w = 0; w < result.runs.size(); ++w) {
    const Decomposition& d = result.runs[w];
    for (std::size_t i = 0; i < d.residual_history.size(); ++i)
      csv << w << ',' << i + 1 << ',' << d.residual_history[i] << ',' << d.mu_history[i] << '\n';
    total_seconds += d.wall_seconds;
    const Window& win = result.plan.windows[w];
    log.note("window " + std::to_string(w) + " = start_frame " + std::to_string(win.start_frame) + ", row0 " +
             std::to_string(win.row0) + ", col0 " + std::to_string(win.col0) + ", lambda_s " +
             format_double(c.params.lambda_s_for(win.tensor)) + ", iterations " + std::to_string(d.iterations) +
             ", final_residual " + format_double(d.final_residual) + ", converged " +
             (d.converged ? "true" : "false") + ", wall_seconds " + format_double(d.wall_seconds));
  }
  write_file_atomic(c.out / "diagnostics.csv", csv.str());
  log.note("solver_wall_seconds = " + format_double(total_seconds));
  out << "processed " << result.runs.size() << " windows over " << seq.size() << " frames in " << total_seconds
      << " s; maps in " << c.out.string() << '\n';
  return kOk;
}

inline int run_roc(RunLog& log, std::ostream& out) {
  RunConfig& c = log.config();
  if (c.input.empty()) throw UsageError("roc needs --input MANIFEST of target maps");
  if (c.gt.empty()) throw UsageError("roc needs --gt GROUND_TRUTH_CSV");
  const FrameSequence maps = load_sequence(c.input);
  const GroundTruth gt = parse_ground_truth(read_file(c.gt), maps.size());
  const RocData roc = roc_curves(maps.frames, gt, c.thresholds, c.match_radius);
  write_file_atomic(c.out / "roc.csv", format_roc_csv(roc));
  write_file_atomic(c.out / "auc.csv", format_auc_csv(roc));
  out << "AUC(PF,PD) = " << roc.auc_pf_pd << ", AUC(PF,tau) = " << roc.auc_pf_tau
      << ", AUC(PD,tau) = " << roc.auc_pd_tau << '\n';
  return kOk;
}

inline int run_selftest(RunLog& log, std::ostream& out) {
  bool all = true;
  for (const auto& r : testing::run_acceptance([&](const testing::CriterionResult& r) {
         out << testing::format_result(r) << std::endl;
       })) {
    all = all && r.pass;
    log.note("criterion = " + std::string(r.pass ? "PASS " : "FAIL ") + r.name + " | " + r.detail);
  }
  return all ? kOk : kNumerical;
}

inline int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::NonFinite:
    case ErrorCode::ImaginaryResidueTooLarge:
      return kNumerical;
    case ErrorCode::InvalidArgument:
      return kUsage;
    default:
      return kDataError;
  }
}

/// Runs one command; `args` excludes the program name.
inline int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Infrared small-target detection by low-rank tensor recovery", "irstd"};
  app.require_subcommand(1);
  std::map<std::string, std::string> flag_values;
  std::string config_path;
  app.add_option("--config", config_path, "key=value config file (flags override it)")->type_name("PATH");
  struct Flag {
    std::string name, key, help;
  };
  const std::vector<Flag> flags = {
      {"--out", "out", "output directory (default: current directory)"},
      {"--input", "input", "manifest of PGM frames (detect) or target maps (roc)"},
      {"--spec", "spec", "synthetic sequence spec file (synth)"},
      {"--gt", "gt", "ground-truth CSV with header frame,x,y (roc)"},
      {"--r", "r", "tensor rank (default 180, clamped to the window size unless given)"},
      {"--frames-per-window", "frames_per_window", "frames per window L (default 3)"},
      {"--step", "step", "temporal step between windows, at most L (default L)"},
      {"--h-tuning", "h_tuning", "H in lambda_s = H / sqrt(max(n1, n2) L) (default 6)"},
      {"--lambda-tv", "lambda_tv", "total-variation weight (default 0.5)"},
      {"--lambda3", "lambda3", "noise weight (default 100)"},
      {"--delta", "delta", "temporal TV weight relative to spatial (default 1)"},
      {"--max-iters", "max_outer_iters", "ADMM iteration cap (default 500)"},
      {"--seed", "seed", "random seed for synth (default 1)"},
      {"--thresholds", "thresholds", "threshold count of the ROC sweep (default 101)"},
      {"--match-radius", "match_radius", "target match radius in pixels (default 4)"},
  };
  for (const Flag& f : flags) app.add_option(f.name, flag_values[f.key], f.help)->type_name("VALUE");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"synth", "generate a synthetic sequence with ground truth"},
      {"detect", "decompose a frame sequence and write target/background maps"},
      {"roc", "score target maps against ground truth"},
      {"selftest", "run the built-in acceptance checks"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  // rendered before parsing; afterwards CLI11 would show only the chosen
  // subcommand, which lacks the shared flags
  const std::string usage = app.help();

  std::vector<std::string> argv_store{"irstd"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << usage;
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << usage;
    return kUsage;
  }

  RunConfig config;
  config.command = app.get_subcommands().front()->get_name();
  try {
    if (!config_path.empty()) apply_config_text(config, read_file(config_path));
    for (const Flag& f : flags) {
      if (app.count(f.name) > 0) apply_setting(config, f.key, flag_values[f.key]);
    }
    config.params.validate();
    if (config.thresholds < 2) throw UsageError("thresholds must be at least 2");
    if (!(config.match_radius > 0.0)) throw UsageError("match_radius must be positive");
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n' << usage;
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }

  RunLog log(config);
  int status = kOk;
  std::string message;
  try {
    fs::create_directories(config.out);
    if (config.command == "synth") status = run_synth(log, out);
    else if (config.command == "detect") status = run_detect(log, out);
    else if (config.command == "roc") status = run_roc(log, out);
    else status = run_selftest(log, out);
  } catch (const UsageError& e) {
    message = e.what();
    status = kUsage;
  } catch (const Error& e) {
    message = e.what();
    status = exit_code_for(e);
  } catch (const std::exception& e) {
    message = e.what();
    status = kDataError;
  }
  if (!message.empty()) err << "error: " << message << '\n';
  try {
    log.write(message.empty() ? "exit " + std::to_string(status) : "exit " + std::to_string(status) + " (" + message + ")");
  } catch (const std::exception& e) {
    err << "error: cannot write run.log: " << e.what() << '\n';
    if (status == kOk) status = kDataError;
  }
  return status;
}

}  // namespace irstd::cli
