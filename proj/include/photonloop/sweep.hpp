// Copyright 2026 the photonloop authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "photonloop/channels.hpp"
#include "photonloop/distillation.hpp"
#include "photonloop/metrics.hpp"
#include "photonloop/states.hpp"

// Declarative parameter sweeps. A plain-text config selects an experiment
// (single-mode subtraction or two-arm distillation), an input state, a grid
// over the tap transmissivity, step budgets, and the metrics to tabulate;
// the runner evaluates every (steps, t) point and emits deterministic CSV.
//
// All computation here is fixed to double precision: output files are
// regression artifacts and must not depend on a caller's scalar choice.

namespace photonloop {

// The strict factory default would reject the figure-scale configurations
// whose top Fock levels hold a few 1e-6 of population at practical
// cutoffs. The sweep runner therefore accepts tails up to this looser
// bound and still aborts on genuinely inadequate cutoffs.
inline constexpr double kSweepTailTolerance = 1e-5;

// Upper end of the t range probed by root finding; t = 1 itself is outside
// the channel domain.
inline constexpr double kMaxProbedTransmissivity = 1.0 - 1e-8;

class parse_error : public std::runtime_error {
 public:
  parse_error(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

class validation_error : public std::runtime_error {
 public:
  validation_error(const std::string& field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(field) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

enum class GridSpacing { linear, log_complement };

// Transmissivity grid; log_complement spaces the points evenly in
// u = -log10(1 - t), which resolves the t -> 1 regime.
struct TGrid {
  double start = 0;
  double stop = 0;
  int count = 0;
  GridSpacing spacing = GridSpacing::linear;
};

struct SweepConfig {
  std::string experiment;
  std::string state;
  double eta = 1.0;
  std::vector<int> steps;
  TGrid t_grid;
  Eigen::Index cutoff = 40;
  std::vector<std::string> metrics = {"p_success", "wigner_origin"};
  std::optional<std::string> fidelity_target;
  std::string output;
};

// One evaluated grid point. Metrics that were not requested, or that are
// unavailable because the point was degenerate, stay empty.
struct SweepRecord {
  std::string experiment;
  std::string state;
  double eta = 1.0;
  int steps = 0;
  double t = 0;
  double p_success = 0;
  std::optional<double> wigner_origin;
  std::optional<double> fidelity;
  std::optional<double> log_negativity;
  std::optional<double> purity;
};

// Parsed form of the state mini-syntax used in configs and on the command
// line: vacuum, coherent:RE[,IM], cat+:ALPHA, cat-:ALPHA, sqz:SDB[,ADB],
// tmsv:SDB.
struct StateSpec {
  enum class Kind { vacuum, coherent, cat, squeezed, two_mode_squeezed };

  Kind kind = Kind::vacuum;
  std::complex<double> alpha;
  int parity_sign = +1;
  double squeeze_db = 0;
  double antisqueeze_db = 0;

  int modes() const { return kind == Kind::two_mode_squeezed ? 2 : 1; }

  bool pure() const {
    return kind != Kind::squeezed || antisqueeze_db == squeeze_db;
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) {
    return "";
  }
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string::size_type pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    if (next == std::string::npos) {
      parts.push_back(s.substr(pos));
      return parts;
    }
    parts.push_back(s.substr(pos, next - pos));
    pos = next + 1;
  }
}

// Strict floating point parse: the whole token must be consumed and the
// value must be finite. A single leading '+' is tolerated.
inline std::optional<double> parse_double(const std::string& token) {
  std::string text = token;
  if (!text.empty() && text.front() == '+') {
    text.erase(text.begin());
  }
  if (text.empty()) {
    return std::nullopt;
  }
  double value = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc() || result.ptr != end ||
      !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

inline std::optional<long> parse_integer(const std::string& token) {
  std::string text = token;
  if (!text.empty() && text.front() == '+') {
    text.erase(text.begin());
  }
  if (text.empty()) {
    return std::nullopt;
  }
  long value = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc() || result.ptr != end) {
    return std::nullopt;
  }
  return value;
}

}  // namespace detail

inline StateSpec parse_state_spec(const std::string& text) {
  const auto fail = [&text](const std::string& why) -> StateSpec {
    throw validation_error("state",
                           "bad state spec '" + text + "': " + why);
  };
  StateSpec spec;
  if (text == "vacuum") {
    spec.kind = StateSpec::Kind::vacuum;
    return spec;
  }
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    return fail("unknown state name");
  }
  const std::string head = text.substr(0, colon);
  const std::vector<std::string> args =
      detail::split(text.substr(colon + 1), ',');
  const auto arg = [&](size_t i) -> double {
    const auto v = detail::parse_double(args[i]);
    if (!v) {
      fail("'" + args[i] + "' is not a number");
    }
    return *v;
  };
  if (head == "coherent") {
    if (args.size() < 1 || args.size() > 2) {
      return fail("expected coherent:RE[,IM]");
    }
    spec.kind = StateSpec::Kind::coherent;
    spec.alpha = {arg(0), args.size() == 2 ? arg(1) : 0.0};
    return spec;
  }
  if (head == "cat+" || head == "cat-") {
    if (args.size() != 1) {
      return fail("expected cat+:ALPHA or cat-:ALPHA");
    }
    spec.kind = StateSpec::Kind::cat;
    spec.parity_sign = head == "cat+" ? +1 : -1;
    spec.alpha = {arg(0), 0.0};
    return spec;
  }
  if (head == "sqz") {
    if (args.size() < 1 || args.size() > 2) {
      return fail("expected sqz:SDB[,ADB]");
    }
    spec.kind = StateSpec::Kind::squeezed;
    spec.squeeze_db = arg(0);
    spec.antisqueeze_db = args.size() == 2 ? arg(1) : spec.squeeze_db;
    if (spec.squeeze_db < 0) {
      return fail("squeezing must be >= 0 dB");
    }
    if (spec.antisqueeze_db < spec.squeeze_db) {
      return fail("antisqueezing must be >= squeezing");
    }
    return spec;
  }
  if (head == "tmsv") {
    if (args.size() != 1) {
      return fail("expected tmsv:SDB");
    }
    spec.kind = StateSpec::Kind::two_mode_squeezed;
    spec.squeeze_db = arg(0);
    if (spec.squeeze_db < 0) {
      return fail("squeezing must be >= 0 dB");
    }
    return spec;
  }
  return fail("unknown state name");
}

// Materializes a spec as a density operator.
inline DensityOperator<double> build_state(
    const StateSpec& spec, Eigen::Index cutoff,
    double tail_tol = kDefaultTailTolerance) {
  switch (spec.kind) {
    case StateSpec::Kind::vacuum:
      return to_density(vacuum_state<double>(cutoff));
    case StateSpec::Kind::coherent:
      return to_density(coherent(spec.alpha, cutoff, tail_tol));
    case StateSpec::Kind::cat:
      return to_density(
          cat_state<double>({spec.alpha, spec.parity_sign}, cutoff, tail_tol));
    case StateSpec::Kind::squeezed:
      return squeezed_thermal<double>(
          {spec.squeeze_db, spec.antisqueeze_db}, cutoff, tail_tol);
    case StateSpec::Kind::two_mode_squeezed:
      return to_density(two_mode_squeezed(spec.squeeze_db, cutoff, tail_tol));
  }
  throw std::logic_error("unhandled state kind");
}

// Pure-state variant, needed for fidelity targets.
inline FockVector<double> build_pure_state(
    const StateSpec& spec, Eigen::Index cutoff,
    double tail_tol = kDefaultTailTolerance) {
  switch (spec.kind) {
    case StateSpec::Kind::vacuum:
      return vacuum_state<double>(cutoff);
    case StateSpec::Kind::coherent:
      return coherent(spec.alpha, cutoff, tail_tol);
    case StateSpec::Kind::cat:
      return cat_state<double>({spec.alpha, spec.parity_sign}, cutoff,
                               tail_tol);
    case StateSpec::Kind::squeezed:
      if (spec.antisqueeze_db != spec.squeeze_db) {
        throw validation_error("fidelity_target",
                               "an impure state cannot be a fidelity target");
      }
      return squeezed_vacuum(spec.squeeze_db, cutoff, tail_tol);
    case StateSpec::Kind::two_mode_squeezed:
      return two_mode_squeezed(spec.squeeze_db, cutoff, tail_tol);
  }
  throw std::logic_error("unhandled state kind");
}

inline std::vector<double> make_t_grid(const TGrid& grid) {
  std::vector<double> ts(static_cast<size_t>(grid.count));
  if (grid.spacing == GridSpacing::linear) {
    const double step = (grid.stop - grid.start) / (grid.count - 1);
    for (int i = 0; i < grid.count; ++i) {
      ts[static_cast<size_t>(i)] = grid.start + step * i;
    }
  } else {
    const double u0 = -std::log10(1.0 - grid.start);
    const double u1 = -std::log10(1.0 - grid.stop);
    const double step = (u1 - u0) / (grid.count - 1);
    for (int i = 0; i < grid.count; ++i) {
      ts[static_cast<size_t>(i)] = 1.0 - std::pow(10.0, -(u0 + step * i));
    }
  }
  return ts;
}

namespace detail {

inline const std::set<std::string>& known_config_keys() {
  static const std::set<std::string> keys = {
      "experiment", "state",   "eta",     "steps",
      "t_start",    "t_stop",  "t_count", "t_spacing",
      "cutoff",     "metrics", "fidelity_target", "output"};
  return keys;
}

inline const std::set<std::string>& known_metrics() {
  static const std::set<std::string> names = {
      "p_success", "wigner_origin", "fidelity", "log_negativity", "purity"};
  return names;
}

}  // namespace detail

// Parses the key = value config format. Unknown or duplicated keys and
// malformed values are parse errors carrying the line number; semantic
// problems (ranges, missing keys, incompatible metric choices) are
// validation errors naming the field.
inline SweepConfig parse_config(const std::string& text) {
  SweepConfig config;
  std::set<std::string> seen;

  std::istringstream lines(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(lines, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) {
      raw.erase(hash);
    }
    const std::string line = detail::trim(raw);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw parse_error(line_no, "expected 'key = value'");
    }
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty()) {
      throw parse_error(line_no, "missing key before '='");
    }
    if (detail::known_config_keys().count(key) == 0) {
      throw parse_error(line_no, "unknown key '" + key + "'");
    }
    if (!seen.insert(key).second) {
      throw parse_error(line_no, "duplicate key '" + key + "'");
    }
    if (value.empty()) {
      throw parse_error(line_no, "missing value for '" + key + "'");
    }

    const auto number = [&](const std::string& field) -> double {
      const auto v = detail::parse_double(value);
      if (!v) {
        throw parse_error(line_no,
                          field + ": '" + value + "' is not a number");
      }
      return *v;
    };
    const auto integer = [&](const std::string& field) -> long {
      const auto v = detail::parse_integer(value);
      if (!v) {
        throw parse_error(line_no,
                          field + ": '" + value + "' is not an integer");
      }
      return *v;
    };

    if (key == "experiment") {
      config.experiment = value;
    } else if (key == "state") {
      config.state = value;
    } else if (key == "eta") {
      config.eta = number(key);
    } else if (key == "steps") {
      config.steps.clear();
      for (const std::string& part : detail::split(value, ',')) {
        const auto v = detail::parse_integer(detail::trim(part));
        if (!v) {
          throw parse_error(line_no, "steps: '" + detail::trim(part) +
                                         "' is not an integer");
        }
        config.steps.push_back(static_cast<int>(*v));
      }
    } else if (key == "t_start") {
      config.t_grid.start = number(key);
    } else if (key == "t_stop") {
      config.t_grid.stop = number(key);
    } else if (key == "t_count") {
      config.t_grid.count = static_cast<int>(integer(key));
    } else if (key == "t_spacing") {
      if (value == "linear") {
        config.t_grid.spacing = GridSpacing::linear;
      } else if (value == "log-complement") {
        config.t_grid.spacing = GridSpacing::log_complement;
      } else {
        throw parse_error(line_no,
                          "t_spacing must be 'linear' or 'log-complement'");
      }
    } else if (key == "cutoff") {
      config.cutoff = static_cast<Eigen::Index>(integer(key));
    } else if (key == "metrics") {
      config.metrics.clear();
      for (const std::string& part : detail::split(value, ',')) {
        std::string name = detail::trim(part);
        if (name == "fidelity_target") {
          name = "fidelity";
        }
        if (detail::known_metrics().count(name) == 0) {
          throw parse_error(line_no, "unknown metric '" + name + "'");
        }
        config.metrics.push_back(name);
      }
    } else if (key == "fidelity_target") {
      config.fidelity_target = value;
    } else if (key == "output") {
      config.output = value;
    }
  }

  for (const char* required :
       {"experiment", "state", "steps", "t_start", "t_stop", "t_count",
        "output"}) {
    if (seen.count(required) == 0) {
      throw validation_error(required, "missing required key");
    }
  }

  if (config.experiment != "subtract" && config.experiment != "distill") {
    throw validation_error("experiment",
                           "must be 'subtract' or 'distill', got '" +
                               config.experiment + "'");
  }
  if (!(config.eta > 0.0) || config.eta > 1.0) {
    throw validation_error("eta", "must lie in (0, 1]");
  }
  if (config.steps.empty()) {
    throw validation_error("steps", "needs at least one entry");
  }
  for (int n : config.steps) {
    if (n < 1) {
      throw validation_error("steps", "step counts must be >= 1");
    }
  }
  if (!(config.t_grid.start >= 0.0) || !(config.t_grid.start < 1.0)) {
    throw validation_error("t_start", "must lie in [0, 1)");
  }
  if (!(config.t_grid.stop >= 0.0) || !(config.t_grid.stop < 1.0)) {
    throw validation_error("t_stop", "must lie in [0, 1)");
  }
  if (!(config.t_grid.start < config.t_grid.stop)) {
    throw validation_error("t_start", "must be smaller than t_stop");
  }
  if (config.t_grid.count < 2) {
    throw validation_error("t_count", "needs at least 2 points");
  }
  if (config.cutoff < 2) {
    throw validation_error("cutoff", "must be at least 2");
  }

  const StateSpec spec = parse_state_spec(config.state);
  const bool is_distill = config.experiment == "distill";
  if (is_distill && spec.modes() != 2) {
    throw validation_error("state",
                           "distill needs a two-mode state such as tmsv:SDB");
  }
  if (!is_distill && spec.modes() != 1) {
    throw validation_error("state", "subtract needs a one-mode state");
  }

  for (const std::string& metric : config.metrics) {
    if (metric == "wigner_origin" && is_distill) {
      throw validation_error("metrics",
                             "wigner_origin needs the one-mode experiment");
    }
    if (metric == "log_negativity" && !is_distill) {
      throw validation_error("metrics",
                             "log_negativity needs the distill experiment");
    }
    if (metric == "fidelity" && !config.fidelity_target) {
      throw validation_error("metrics",
                             "fidelity needs a fidelity_target state");
    }
  }
  if (config.fidelity_target) {
    const StateSpec target = parse_state_spec(*config.fidelity_target);
    if (!target.pure()) {
      throw validation_error("fidelity_target", "must be a pure state");
    }
    if (target.modes() != spec.modes()) {
      throw validation_error("fidelity_target",
                             "must have the same number of modes as state");
    }
  }
  return config;
}

namespace detail {

inline unsigned sweep_thread_cap() {
  const char* env = std::getenv("PHOTONLOOP_THREADS");
  if (env != nullptr && *env != '\0') {
    const auto v = parse_integer(env);
    if (!v || *v < 0) {
      throw validation_error("PHOTONLOOP_THREADS",
                             "must be a nonnegative integer");
    }
    if (*v > 0) {
      return static_cast<unsigned>(*v);
    }
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? hc : 1;
}

// Runs fn(0 .. jobs-1) on a bounded pool. Results must be written into
// per-index slots by the caller; completion order is irrelevant.
template <typename Fn>
void parallel_for(size_t jobs, unsigned threads, Fn&& fn) {
  threads = static_cast<unsigned>(
      std::min<size_t>(threads, jobs > 0 ? jobs : 1));
  if (threads <= 1) {
    for (size_t i = 0; i < jobs; ++i) {
      fn(i);
    }
    return;
  }
  std::atomic<size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      while (!failed.load(std::memory_order_relaxed)) {
        const size_t i = next.fetch_add(1);
        if (i >= jobs) {
          return;
        }
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) {
            error = std::current_exception();
          }
          failed.store(true);
        }
      }
    });
  }
  for (std::thread& worker : pool) {
    worker.join();
  }
  if (error) {
    std::rethrow_exception(error);
  }
}

}  // namespace detail

// Evaluates the full (steps x t) grid of a validated config. Deterministic:
// the record order follows the config, and every point is computed with the
// same fixed-precision pipeline regardless of the worker count.
inline std::vector<SweepRecord> run_sweep(const SweepConfig& config) {
  const StateSpec spec = parse_state_spec(config.state);
  const DensityOperator<double> input =
      build_state(spec, config.cutoff, kSweepTailTolerance);
  std::optional<FockVector<double>> target;
  if (config.fidelity_target) {
    target = build_pure_state(parse_state_spec(*config.fidelity_target),
                              config.cutoff, kSweepTailTolerance);
  }

  const bool is_distill = config.experiment == "distill";
  const std::vector<double> ts = make_t_grid(config.t_grid);
  const auto wants = [&config](const char* name) {
    return std::find(config.metrics.begin(), config.metrics.end(), name) !=
           config.metrics.end();
  };
  const bool want_wigner = wants("wigner_origin");
  const bool want_fidelity = wants("fidelity");
  const bool want_logneg = wants("log_negativity");
  const bool want_purity = wants("purity");

  const size_t jobs = config.steps.size() * ts.size();
  std::vector<SweepRecord> records(jobs);
  const DetectorModel<double> det{config.eta};

  detail::parallel_for(jobs, detail::sweep_thread_cap(), [&](size_t i) {
    const int steps = config.steps[i / ts.size()];
    const double t = ts[i % ts.size()];
    SweepRecord rec;
    rec.experiment = config.experiment;
    rec.state = config.state;
    rec.eta = config.eta;
    rec.steps = steps;
    rec.t = t;
    if (is_distill) {
      const DistillationResult<double> r = distill(input, t, det, steps);
      rec.p_success = r.p_success;
      if (r.rho_out) {
        if (want_logneg) {
          rec.log_negativity = r.log_negativity_out;
        }
        if (want_purity) {
          rec.purity = purity(*r.rho_out);
        }
      }
    } else {
      const SubtractionResult<double> r =
          adaptive_subtraction(input, t, det, steps);
      rec.p_success = r.p_success;
      if (r.rho_out) {
        if (want_wigner) {
          rec.wigner_origin = wigner_origin(*r.rho_out);
        }
        if (want_fidelity) {
          rec.fidelity = fidelity(*r.rho_out, *target);
        }
        if (want_purity) {
          rec.purity = purity(*r.rho_out);
        }
      }
    }
    records[i] = std::move(rec);
  });
  return records;
}

// Shortest decimal form with at most 12 significant digits; used for every
// real-valued CSV field so files are reproducible byte for byte.
inline std::string format_number(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

namespace detail {

inline std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\n") == std::string::npos) {
    return value;
  }
  std::string quoted = "\"";
  for (char c : value) {
    if (c == '"') {
      quoted += '"';
    }
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

}  // namespace detail

inline constexpr const char* kCsvHeader =
    "experiment,state,eta,N,t,p_success,wigner_origin,fidelity,"
    "log_negativity,purity";

inline void write_csv(const std::vector<SweepRecord>& records,
                      std::ostream& out) {
  const auto opt = [](const std::optional<double>& v) {
    return v ? format_number(*v) : std::string();
  };
  out << kCsvHeader << '\n';
  for (const SweepRecord& rec : records) {
    out << detail::csv_field(rec.experiment) << ','
        << detail::csv_field(rec.state) << ',' << format_number(rec.eta)
        << ',' << rec.steps << ',' << format_number(rec.t) << ','
        << format_number(rec.p_success) << ',' << opt(rec.wigner_origin)
        << ',' << opt(rec.fidelity) << ',' << opt(rec.log_negativity) << ','
        << opt(rec.purity) << '\n';
  }
}

inline std::string csv_string(const std::vector<SweepRecord>& records) {
  std::ostringstream out;
  write_csv(records, out);
  return out.str();
}

struct ProbabilityMatch {
  double t = 0;
  bool at_boundary = false;
};

// Finds the transmissivity at which the loop succeeds with the requested
// probability. The success probability falls monotonically from its t = 0
// maximum toward zero as t -> 1; that shape is verified on a coarse scan
// before bisecting, and targets outside the reachable range either throw
// (too high) or return the boundary point (too low).
inline ProbabilityMatch find_t_for_probability(
    const DensityOperator<double>& rho, const DetectorModel<double>& det,
    int steps, double target_p, double tolerance) {
  if (!(tolerance > 0)) {
    throw std::invalid_argument("find_t_for_probability: tolerance must be > 0");
  }
  if (!(target_p >= 0) || !(target_p <= 1)) {
    throw std::invalid_argument(
        "find_t_for_probability: target must lie in [0, 1]");
  }
  const auto p_at = [&](double t) {
    return adaptive_subtraction(rho, t, det, steps).p_success;
  };

  double lo = 0.0;
  double hi = kMaxProbedTransmissivity;
  constexpr int kScanPoints = 9;
  double previous = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kScanPoints; ++i) {
    const double t = lo + (hi - lo) * i / (kScanPoints - 1);
    const double p = p_at(t);
    if (p > previous + 1e-9) {
      throw bracketing_error(
          "success probability is not monotone on the scanned range");
    }
    previous = p;
  }

  const double max_p = p_at(lo);
  if (target_p > max_p + tolerance) {
    throw unreachable_target_error(
        "target success probability " + format_number(target_p) +
            " exceeds the achievable maximum " + format_number(max_p),
        max_p);
  }
  if (target_p <= p_at(hi)) {
    return {hi, true};
  }

  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double p = p_at(mid);
    if (std::abs(p - target_p) <= tolerance) {
      return {mid, false};
    }
    if (p > target_p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  throw numerical_error("find_t_for_probability: bisection did not converge");
}

}  // namespace photonloop
