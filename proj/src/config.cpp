#include "surropt/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace surropt {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(trim(item));
  return parts;
}

struct Parser {
  std::string origin;
  int line_no = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError(origin + ":" + std::to_string(line_no) + ": " + msg);
  }

  double to_real(const std::string& v) const {
    try {
      std::size_t used = 0;
      const double x = std::stod(v, &used);
      if (used != v.size()) fail("malformed number '" + v + "'");
      return x;
    } catch (const ConfigError&) {
      throw;
    } catch (...) {
      fail("malformed number '" + v + "'");
    }
  }

  std::int64_t to_int(const std::string& v) const {
    std::int64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) fail("malformed integer '" + v + "'");
    return out;
  }
};

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  RunConfig cfg;
  Parser p{origin};
  std::string section = "run";
  std::istringstream in(text);
  std::string raw;

  bool saw_external_command = false;
  ExternalObjectiveConfig external;

  while (std::getline(in, raw)) {
    ++p.line_no;
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') p.fail("unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      static const std::vector<std::string> known = {"run",     "space",   "uq",
                                                     "regularization", "sampler", "ga",
                                                     "ensemble", "external", "compare"};
      if (std::find(known.begin(), known.end(), section) == known.end()) {
        p.fail("unknown section [" + section + "]");
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) p.fail("expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) p.fail("empty key");

    if (section == "run") {
      if (key == "benchmark") {
        cfg.benchmark = value;
      } else if (key == "surrogate") {
        if (value == "rbf") cfg.engine.surrogate_kind = SurrogateKind::rbf;
        else if (value == "rbf_ensemble") cfg.engine.surrogate_kind = SurrogateKind::rbf_ensemble;
        else if (value == "gp") cfg.engine.surrogate_kind = SurrogateKind::gp;
        else p.fail("surrogate must be rbf, rbf_ensemble or gp");
      } else if (key == "initial_design") {
        cfg.engine.initial_design_size = static_cast<int>(p.to_int(value));
      } else if (key == "max_evaluations") {
        cfg.engine.max_evaluations = static_cast<int>(p.to_int(value));
      } else if (key == "workers") {
        cfg.engine.workers = static_cast<int>(p.to_int(value));
      } else if (key == "trial_workers") {
        cfg.engine.trial_workers = static_cast<int>(p.to_int(value));
      } else if (key == "seed") {
        cfg.engine.seed = static_cast<std::uint64_t>(p.to_int(value));
      } else if (key == "data_seed") {
        cfg.data_seed = static_cast<std::uint64_t>(p.to_int(value));
      } else if (key == "duration_mode") {
        if (value == "real") cfg.engine.duration_mode = DurationMode::real;
        else if (value == "simulated") cfg.engine.duration_mode = DurationMode::simulated;
        else p.fail("duration_mode must be real or simulated");
      } else if (key == "sim_duration_mean") {
        cfg.engine.sim_duration_mean = p.to_real(value);
      } else if (key == "sim_duration_jitter") {
        cfg.engine.sim_duration_jitter = p.to_real(value);
      } else if (key == "output_dir") {
        cfg.output_dir = value;
      } else if (key == "seed_point") {
        HyperparameterSet point;
        for (const auto& part : split(value, ',')) point.values.push_back(p.to_int(part));
        cfg.engine.seed_points.push_back(std::move(point));
      } else {
        p.fail("unknown key '" + key + "' in section [run]");
      }
    } else if (section == "space") {
      if (key == "dim") {
        const auto parts = split(value, ',');
        if (parts.size() != 3 && parts.size() != 5) {
          p.fail("dim expects: name, lower, upper [, offset, step]");
        }
        SpaceDimOverride dim;
        dim.name = parts[0];
        dim.lower = p.to_int(parts[1]);
        dim.upper = p.to_int(parts[2]);
        if (dim.lower > dim.upper) p.fail("dim '" + dim.name + "': lower exceeds upper");
        if (parts.size() == 5) {
          dim.codec.offset = p.to_real(parts[3]);
          dim.codec.step = p.to_real(parts[4]);
        }
        cfg.space_dims.push_back(std::move(dim));
      } else {
        p.fail("unknown key '" + key + "' in section [space]");
      }
    } else if (section == "uq") {
      if (key == "trials") cfg.engine.uq.trials = static_cast<int>(p.to_int(value));
      else if (key == "passes") cfg.engine.uq.passes = static_cast<int>(p.to_int(value));
      else if (key == "weight_trained") cfg.engine.uq.weight_trained = p.to_real(value);
      else if (key == "weight_dropout") cfg.engine.uq.weight_dropout = p.to_real(value);
      else p.fail("unknown key '" + key + "' in section [uq]");
    } else if (section == "regularization") {
      if (key == "gamma") cfg.engine.reg.gamma = p.to_real(value);
      else if (key == "g") {
        if (value == "none") cfg.engine.reg.g_kind = GKind::none;
        else if (value == "rectified_norm") cfg.engine.reg.g_kind = GKind::rectified_norm;
        else if (value == "sum") cfg.engine.reg.g_kind = GKind::sum;
        else p.fail("g must be none, rectified_norm or sum");
      } else {
        p.fail("unknown key '" + key + "' in section [regularization]");
      }
    } else if (section == "sampler") {
      if (key == "n_candidates") cfg.engine.sampler.n_candidates = static_cast<int>(p.to_int(value));
      else if (key == "perturb_fraction") cfg.engine.sampler.perturb_fraction = p.to_real(value);
      else if (key == "perturb_sigma") cfg.engine.sampler.perturb_sigma = p.to_real(value);
      else if (key == "alpha") cfg.engine.sampler.alpha = p.to_real(value);
      else if (key == "min_distance") cfg.engine.sampler.min_distance = p.to_real(value);
      else if (key == "weight_cycle") {
        cfg.engine.sampler.weight_cycle.clear();
        for (const auto& part : split(value, ',')) {
          cfg.engine.sampler.weight_cycle.push_back(p.to_real(part));
        }
      } else {
        p.fail("unknown key '" + key + "' in section [sampler]");
      }
    } else if (section == "ga") {
      if (key == "population") cfg.engine.ga.population = static_cast<int>(p.to_int(value));
      else if (key == "generations") cfg.engine.ga.generations = static_cast<int>(p.to_int(value));
      else if (key == "crossover_prob") cfg.engine.ga.crossover_prob = p.to_real(value);
      else if (key == "mutation_prob") cfg.engine.ga.mutation_prob = p.to_real(value);
      else if (key == "elitism") cfg.engine.ga.elitism = static_cast<int>(p.to_int(value));
      else if (key == "tournament") cfg.engine.ga.tournament = static_cast<int>(p.to_int(value));
      else p.fail("unknown key '" + key + "' in section [ga]");
    } else if (section == "ensemble") {
      if (key == "members") cfg.engine.ensemble_members = static_cast<int>(p.to_int(value));
      else p.fail("unknown key '" + key + "' in section [ensemble]");
    } else if (section == "external") {
      if (key == "command") {
        external.command = value;
        saw_external_command = true;
      } else if (key == "timeout") {
        external.timeout_seconds = p.to_real(value);
        if (external.timeout_seconds <= 0.0) p.fail("timeout must be > 0");
      } else {
        p.fail("unknown key '" + key + "' in section [external]");
      }
    } else if (section == "compare") {
      if (key == "threshold") cfg.compare.threshold = p.to_real(value);
      else if (key == "seeds") cfg.compare.seeds = static_cast<int>(p.to_int(value));
      else p.fail("unknown key '" + key + "' in section [compare]");
    }
  }

  if (saw_external_command) cfg.external = external;

  p.line_no = 0;
  if (cfg.benchmark.empty() && !cfg.external) {
    throw ConfigError(origin + ": either a benchmark or an external command must be configured");
  }
  if (!cfg.benchmark.empty() && cfg.external) {
    throw ConfigError(origin + ": benchmark and external command are mutually exclusive");
  }
  if (cfg.external && cfg.space_dims.empty()) {
    throw ConfigError(origin + ": an external objective requires a [space] section");
  }
  try {
    cfg.engine.uq.validate();
    cfg.engine.sampler.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config file '" + path + "' not found");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path);
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream out;
  out.precision(17);
  out << "[run]\n";
  if (!cfg.benchmark.empty()) out << "benchmark = " << cfg.benchmark << "\n";
  out << "surrogate = "
      << (cfg.engine.surrogate_kind == SurrogateKind::rbf
              ? "rbf"
              : cfg.engine.surrogate_kind == SurrogateKind::rbf_ensemble ? "rbf_ensemble" : "gp")
      << "\n";
  out << "initial_design = " << cfg.engine.initial_design_size << "\n";
  out << "max_evaluations = " << cfg.engine.max_evaluations << "\n";
  out << "workers = " << cfg.engine.workers << "\n";
  out << "trial_workers = " << cfg.engine.trial_workers << "\n";
  out << "seed = " << cfg.engine.seed << "\n";
  out << "data_seed = " << cfg.data_seed << "\n";
  out << "duration_mode = "
      << (cfg.engine.duration_mode == DurationMode::real ? "real" : "simulated") << "\n";
  out << "sim_duration_mean = " << cfg.engine.sim_duration_mean << "\n";
  out << "sim_duration_jitter = " << cfg.engine.sim_duration_jitter << "\n";
  out << "output_dir = " << cfg.output_dir << "\n";
  for (const auto& point : cfg.engine.seed_points) {
    out << "seed_point = ";
    for (std::size_t i = 0; i < point.values.size(); ++i) {
      out << (i ? "," : "") << point.values[i];
    }
    out << "\n";
  }
  if (!cfg.space_dims.empty()) {
    out << "\n[space]\n";
    for (const auto& dim : cfg.space_dims) {
      out << "dim = " << dim.name << ", " << dim.lower << ", " << dim.upper;
      if (dim.codec.offset != 0.0 || dim.codec.step != 1.0) {
        out << ", " << dim.codec.offset << ", " << dim.codec.step;
      }
      out << "\n";
    }
  }
  out << "\n[uq]\n";
  out << "trials = " << cfg.engine.uq.trials << "\n";
  out << "passes = " << cfg.engine.uq.passes << "\n";
  out << "weight_trained = " << cfg.engine.uq.weight_trained << "\n";
  out << "weight_dropout = " << cfg.engine.uq.weight_dropout << "\n";
  out << "\n[regularization]\n";
  out << "gamma = " << cfg.engine.reg.gamma << "\n";
  out << "g = "
      << (cfg.engine.reg.g_kind == GKind::none
              ? "none"
              : cfg.engine.reg.g_kind == GKind::rectified_norm ? "rectified_norm" : "sum")
      << "\n";
  out << "\n[sampler]\n";
  out << "n_candidates = " << cfg.engine.sampler.n_candidates << "\n";
  out << "perturb_fraction = " << cfg.engine.sampler.perturb_fraction << "\n";
  out << "perturb_sigma = " << cfg.engine.sampler.perturb_sigma << "\n";
  out << "weight_cycle = ";
  for (std::size_t i = 0; i < cfg.engine.sampler.weight_cycle.size(); ++i) {
    out << (i ? "," : "") << cfg.engine.sampler.weight_cycle[i];
  }
  out << "\n";
  out << "alpha = " << cfg.engine.sampler.alpha << "\n";
  out << "min_distance = " << cfg.engine.sampler.min_distance << "\n";
  out << "\n[ga]\n";
  out << "population = " << cfg.engine.ga.population << "\n";
  out << "generations = " << cfg.engine.ga.generations << "\n";
  out << "crossover_prob = " << cfg.engine.ga.crossover_prob << "\n";
  out << "mutation_prob = " << cfg.engine.ga.mutation_prob << "\n";
  out << "elitism = " << cfg.engine.ga.elitism << "\n";
  out << "tournament = " << cfg.engine.ga.tournament << "\n";
  out << "\n[ensemble]\n";
  out << "members = " << cfg.engine.ensemble_members << "\n";
  if (cfg.external) {
    out << "\n[external]\n";
    out << "command = " << cfg.external->command << "\n";
    out << "timeout = " << cfg.external->timeout_seconds << "\n";
  }
  out << "\n[compare]\n";
  out << "threshold = " << cfg.compare.threshold << "\n";
  out << "seeds = " << cfg.compare.seeds << "\n";
  return out.str();
}

ResolvedProblem resolve_problem(const RunConfig& cfg) {
  ResolvedProblem problem;
  if (!cfg.benchmark.empty()) {
    problem.benchmark = load_benchmark(cfg.benchmark, cfg.data_seed);
    HyperparameterSpace& space = problem.benchmark->space;
    for (const auto& dim : cfg.space_dims) {
      const auto it = std::find(space.names.begin(), space.names.end(), dim.name);
      if (it == space.names.end()) {
        throw ConfigError("space override names unknown dimension '" + dim.name + "'");
      }
      const std::size_t k = it - space.names.begin();
      space.lower[k] = dim.lower;
      space.upper[k] = dim.upper;
    }
    problem.space = space;
  } else {
    for (const auto& dim : cfg.space_dims) {
      problem.space.names.push_back(dim.name);
      problem.space.lower.push_back(dim.lower);
      problem.space.upper.push_back(dim.upper);
      problem.space.codecs.push_back(dim.codec);
    }
  }
  problem.space.validate();
  return problem;
}

}  // namespace surropt
