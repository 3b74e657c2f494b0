// Copyright 2026 The LAGO Authors. All Rights Reserved.
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
// =============================================================================

#include "lago/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

namespace lago {

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s, std::string_view key) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return kInf;
  if (s == "-inf") return -kInf;
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ConfigError("invalid number for '" + std::string(key) + "': " + std::string(s));
  }
  return v;
}

template <typename Int>
Int parse_int(std::string_view s, std::string_view key) {
  Int v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ConfigError("invalid integer for '" + std::string(key) + "': " + std::string(s));
  }
  return v;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_bool(std::string_view s, std::string_view key) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw ConfigError("invalid boolean for '" + std::string(key) + "': " + std::string(s));
}

constexpr std::string_view kAuto = "auto";

}  // namespace

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  std::vector<std::uint64_t> seeds;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const std::string_view item =
        trim(text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
    if (!item.empty()) {
      const auto dash = item.find('-');
      if (dash != std::string_view::npos) {
        const auto lo = parse_int<std::uint64_t>(trim(item.substr(0, dash)), "seeds");
        const auto hi = parse_int<std::uint64_t>(trim(item.substr(dash + 1)), "seeds");
        if (hi < lo) throw ConfigError("empty seed range");
        for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
      } else {
        seeds.push_back(parse_int<std::uint64_t>(item, "seeds"));
      }
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (seeds.empty()) throw ConfigError("seed list is empty");
  return seeds;
}

LagoConfig CampaignConfig::lago_config(std::uint64_t seed) const {
  LagoConfig c;
  c.mode = mode;
  c.gamma = gamma;
  c.nu = nu;
  c.early_stop_window = early_stop_window;
  c.eps_terminate = eps_terminate;
  c.eps_step = eps_step;
  c.eta = eta;
  c.sr1_r = sr1_r;
  c.initial_radius = initial_radius;
  c.max_radius = max_radius;
  c.refit_period = refit_period;
  c.budget = resolved_budget();
  c.gradient_cost = gradient_cost;
  c.design_size = design_size;
  c.seed = seed;
  c.family = kernel;
  c.nugget = nugget;
  c.track_condition = track_condition;
  return c;
}

Problem CampaignConfig::make_problem() const {
  ProblemOptions opts;
  opts.mesh_n = mesh_n;
  return lago::make_problem(problem, dim, opts);
}

std::string CampaignConfig::to_text() const {
  std::ostringstream os;
  auto opt_d = [](const std::optional<double>& v) { return v ? fmt(*v) : std::string(kAuto); };
  auto opt_i = [](const std::optional<int>& v) {
    return v ? std::to_string(*v) : std::string(kAuto);
  };
  std::string seed_text;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (i) seed_text += ',';
    seed_text += std::to_string(seeds[i]);
  }
  os << "problem = " << problem << '\n'
     << "dim = " << dim << '\n'
     << "mode = " << to_string(mode) << '\n'
     << "seeds = " << seed_text << '\n'
     << "budget = " << budget << '\n'
     << "gradient_cost = " << opt_i(gradient_cost) << '\n'
     << "mesh_n = " << mesh_n << '\n'
     << "out = " << out << '\n'
     << "workers = " << workers << '\n'
     << "gamma = " << fmt(gamma) << '\n'
     << "nu = " << fmt(nu) << '\n'
     << "early_stop_window = " << early_stop_window << '\n'
     << "eps_terminate = " << fmt(eps_terminate) << '\n'
     << "eps_step = " << fmt(eps_step) << '\n'
     << "eta = " << fmt(eta) << '\n'
     << "sr1_r = " << fmt(sr1_r) << '\n'
     << "initial_radius = " << opt_d(initial_radius) << '\n'
     << "max_radius = " << opt_d(max_radius) << '\n'
     << "refit_period = " << refit_period << '\n'
     << "nugget = " << fmt(nugget) << '\n'
     << "kernel = " << (kernel ? std::string(to_string(*kernel)) : std::string(kAuto)) << '\n'
     << "design_size = " << opt_i(design_size) << '\n'
     << "track_condition = " << (track_condition ? "true" : "false") << '\n';
  return os.str();
}

CampaignConfig CampaignConfig::parse(std::string_view text) {
  CampaignConfig c;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view val = trim(line.substr(eq + 1));
    auto opt_d = [&]() -> std::optional<double> {
      if (val == kAuto) return std::nullopt;
      return parse_double(val, key);
    };
    auto opt_i = [&]() -> std::optional<int> {
      if (val == kAuto) return std::nullopt;
      return parse_int<int>(val, key);
    };
    if (key == "problem") c.problem = std::string(val);
    else if (key == "dim") c.dim = parse_int<int>(val, key);
    else if (key == "mode") c.mode = mode_from_string(val);
    else if (key == "seeds") c.seeds = parse_seed_list(val);
    else if (key == "budget") c.budget = parse_int<long>(val, key);
    else if (key == "gradient_cost") c.gradient_cost = opt_i();
    else if (key == "mesh_n") c.mesh_n = parse_int<int>(val, key);
    else if (key == "out") c.out = std::string(val);
    else if (key == "workers") c.workers = parse_int<int>(val, key);
    else if (key == "gamma") c.gamma = parse_double(val, key);
    else if (key == "nu") c.nu = parse_double(val, key);
    else if (key == "early_stop_window") c.early_stop_window = parse_int<int>(val, key);
    else if (key == "eps_terminate") c.eps_terminate = parse_double(val, key);
    else if (key == "eps_step") c.eps_step = parse_double(val, key);
    else if (key == "eta") c.eta = parse_double(val, key);
    else if (key == "sr1_r") c.sr1_r = parse_double(val, key);
    else if (key == "initial_radius") c.initial_radius = opt_d();
    else if (key == "max_radius") c.max_radius = opt_d();
    else if (key == "refit_period") c.refit_period = parse_int<int>(val, key);
    else if (key == "nugget") c.nugget = parse_double(val, key);
    else if (key == "kernel") {
      c.kernel = val == kAuto ? std::nullopt
                              : std::optional<KernelFamily>(kernel_family_from_string(val));
    } else if (key == "design_size") c.design_size = opt_i();
    else if (key == "track_condition") c.track_condition = parse_bool(val, key);
    else throw ConfigError("unknown config key: " + std::string(key));
  }
  return c;
}

std::vector<double> best_so_far_curve(const RunResult& result, long budget) {
  const long last = std::max(budget, result.units);
  std::vector<double> curve(static_cast<std::size_t>(last + 1),
                            std::numeric_limits<double>::quiet_NaN());
  double best = kInf;
  std::size_t k = 0;
  for (long u = 0; u <= last; ++u) {
    while (k < result.evaluations.size() && result.evaluations[k].first <= u) {
      best = std::min(best, result.evaluations[k].second);
      ++k;
    }
    if (std::isfinite(best)) curve[static_cast<std::size_t>(u)] = best;
  }
  return curve;
}

SummaryRow quartiles(std::vector<double> values) {
  SummaryRow row;
  if (values.empty()) {
    row.median = row.q1 = row.q3 = std::numeric_limits<double>::quiet_NaN();
    return row;
  }
  std::sort(values.begin(), values.end());
  auto at = [&](double q) {
    const double h = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  row.q1 = at(0.25);
  row.median = at(0.5);
  row.q3 = at(0.75);
  return row;
}

std::vector<Vector> campaign_design(const CampaignConfig& config, const Problem& problem,
                                    std::uint64_t seed) {
  const int n = config.design_size.value_or(5 * problem.dim);
  return latin_hypercube(problem.domain, n, seed);
}

namespace {

double error_of(const Problem& problem, double best) {
  return problem.known_min ? std::abs(best - *problem.known_min) : best;
}

std::vector<RunArtifact> run_seeds(const CampaignConfig& config, const Problem& problem) {
  std::vector<RunArtifact> runs(config.seeds.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < runs.size(); i = next++) {
      const std::uint64_t seed = config.seeds[i];
      RunArtifact a;
      a.seed = seed;
      a.result = run(problem, config.lago_config(seed), campaign_design(config, problem, seed));
      a.best_curve = best_so_far_curve(a.result, config.resolved_budget());
      runs[i] = std::move(a);
    }
  };
  const int workers = std::max(1, std::min<int>(config.workers, static_cast<int>(runs.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return runs;
}

}  // namespace

CampaignSummary run_campaign(const CampaignConfig& config) {
  if (config.seeds.empty()) throw ConfigError("campaign needs at least one seed");
  const Problem problem = config.make_problem();
  CampaignSummary summary;
  summary.runs = run_seeds(config, problem);

  const long budget = config.resolved_budget();
  for (long u = 1; u <= budget; ++u) {
    std::vector<double> errors;
    bool complete = true;
    for (const auto& r : summary.runs) {
      const double b = r.best_curve[static_cast<std::size_t>(u)];
      if (std::isnan(b)) {
        complete = false;
        break;
      }
      errors.push_back(error_of(problem, b));
    }
    if (!complete) continue;
    SummaryRow row = quartiles(std::move(errors));
    row.units = u;
    summary.rows.push_back(row);
  }
  std::vector<double> finals;
  for (const auto& r : summary.runs) finals.push_back(error_of(problem, r.result.f_best));
  summary.final_error = quartiles(std::move(finals));
  summary.final_error.units = budget;

  if (!config.out.empty()) write_campaign(config, summary, config.out);
  return summary;
}

std::string trace_csv(const RunArtifact& artifact, const Problem& problem) {
  std::ostringstream os;
  os << "iteration,choice";
  for (int i = 0; i < problem.dim; ++i) os << ",x" << i;
  os << ",f,ei,I_t,delta,lengthscale,cond,cost,f_best,accepted,active,filter_removed,probe_hits\n";
  const RunResult& r = artifact.result;
  // Initial evaluations: design points plus the informed candidate.
  for (int i = 0; i < r.init_evaluations; ++i) {
    const auto& [units, f] = r.evaluations[static_cast<std::size_t>(i)];
    os << "0,init";
    for (int j = 0; j < problem.dim; ++j) os << ',' << fmt(r.init_points[static_cast<std::size_t>(i)][j]);
    os << ',' << fmt(f) << ",nan,nan,nan,nan,nan," << units << ",nan,0,0,0,0\n";
  }
  for (const auto& rec : r.trace) {
    os << rec.iteration << ',' << to_string(rec.choice);
    for (Eigen::Index j = 0; j < rec.x.size(); ++j) os << ',' << fmt(rec.x[j]);
    os << ',' << fmt(rec.f) << ',' << fmt(rec.ei) << ',' << fmt(rec.local_improvement) << ','
       << fmt(rec.delta) << ',' << fmt(rec.lengthscale) << ',' << fmt(rec.condition_number) << ','
       << rec.cost << ',' << fmt(rec.f_best) << ',' << (rec.accepted ? 1 : 0) << ','
       << rec.active_size << ',' << rec.filter_removed << ',' << rec.probe_hits << '\n';
  }
  return os.str();
}

std::string curve_csv(const RunArtifact& artifact, const Problem& problem) {
  std::ostringstream os;
  os << "units,best,error\n";
  for (std::size_t u = 0; u < artifact.best_curve.size(); ++u) {
    const double b = artifact.best_curve[u];
    if (std::isnan(b)) continue;
    os << u << ',' << fmt(b) << ',' << fmt(error_of(problem, b)) << '\n';
  }
  return os.str();
}

std::string summary_csv(const CampaignSummary& summary) {
  std::ostringstream os;
  os << "units,median,q1,q3\n";
  for (const auto& row : summary.rows) {
    os << row.units << ',' << fmt(row.median) << ',' << fmt(row.q1) << ',' << fmt(row.q3) << '\n';
  }
  return os.str();
}

std::vector<double> replay_curve_from_trace(const std::string& trace_text, long budget) {
  std::istringstream is(trace_text);
  std::string line;
  std::getline(is, line);
  // Locate the f and cost columns from the header.
  std::vector<std::string> header;
  {
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) header.push_back(cell);
  }
  const auto col = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw InputError("trace is missing column " + name);
    return static_cast<std::size_t>(std::distance(header.begin(), it));
  };
  const std::size_t f_col = col("f");
  const std::size_t cost_col = col("cost");

  RunResult r;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    const double f = parse_double(cells.at(f_col), "f");
    const long units = parse_int<long>(cells.at(cost_col), "cost");
    r.evaluations.emplace_back(units, f);
    r.units = units;
  }
  return best_so_far_curve(r, budget);
}

void write_campaign(const CampaignConfig& config, const CampaignSummary& summary,
                    const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const Problem problem = config.make_problem();
  auto write = [&](const std::filesystem::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + p.string());
    f << text;
  };
  write(dir / "config.txt", config.to_text());
  for (const auto& run : summary.runs) {
    const std::string tag = "seed" + std::to_string(run.seed);
    write(dir / ("trace_" + tag + ".csv"), trace_csv(run, problem));
    write(dir / ("curve_" + tag + ".csv"), curve_csv(run, problem));
  }
  write(dir / "summary.csv", summary_csv(summary));
}

std::vector<GammaRow> run_gamma_ablation(const CampaignConfig& base,
                                         const std::vector<double>& gammas) {
  std::vector<GammaRow> rows;
  for (double g : gammas) {
    if (!(g > 0.0)) throw ConfigError("gamma values must be positive");
    CampaignConfig c = base;
    c.gamma = g;
    if (!base.out.empty()) {
      c.out = (std::filesystem::path(base.out) / ("gamma_" + fmt(g))).string();
    }
    const CampaignSummary s = run_campaign(c);
    rows.push_back({g, s.final_error});
  }
  if (!base.out.empty()) {
    std::filesystem::create_directories(base.out);
    std::ofstream f(std::filesystem::path(base.out) / "gamma_summary.csv", std::ios::binary);
    f << "gamma,median,q1,q3\n";
    for (const auto& r : rows) {
      f << fmt(r.gamma) << ',' << fmt(r.final_error.median) << ',' << fmt(r.final_error.q1) << ','
        << fmt(r.final_error.q3) << '\n';
    }
  }
  return rows;
}

ConditioningTable run_conditioning_ablation(const CampaignConfig& base,
                                            const std::vector<double>& nus, int window) {
  if (base.dim != 2) throw ConfigError("conditioning ablation is defined for 2D problems");
  if (window < 0) throw ConfigError("window must be nonnegative");
  const Problem problem = base.make_problem();

  std::vector<CampaignConfig> configs;
  std::vector<std::vector<RunArtifact>> runs;
  for (double nu : nus) {
    CampaignConfig c = base;
    c.nu = nu;
    c.track_condition = true;
    c.out.clear();
    runs.push_back(run_seeds(c, problem));
  }

  const auto width = static_cast<std::size_t>(2 * window + 1);
  std::vector<std::vector<std::vector<double>>> samples(
      nus.size(), std::vector<std::vector<double>>(width));
  ConditioningTable table;
  for (std::size_t s = 0; s < base.seeds.size(); ++s) {
    std::vector<std::vector<double>> per_nu;
    bool ok = true;
    for (std::size_t k = 0; k < nus.size() && ok; ++k) {
      const auto& trace = runs[k][s].result.trace;
      const auto it = std::find_if(trace.begin(), trace.end(),
                                   [](const IterationRecord& r) { return r.probe_hits > 0; });
      if (it == trace.end()) {
        ok = false;
        break;
      }
      const auto t = static_cast<long>(std::distance(trace.begin(), it));
      if (t - window < 0 || t + window >= static_cast<long>(trace.size())) {
        ok = false;
        break;
      }
      const double ref = trace[static_cast<std::size_t>(t)].condition_number;
      std::vector<double> normalized;
      for (long o = -window; o <= window; ++o) {
        normalized.push_back(trace[static_cast<std::size_t>(t + o)].condition_number / ref);
      }
      per_nu.push_back(std::move(normalized));
    }
    if (!ok) {
      ++table.excluded;
      continue;
    }
    table.used_seeds.push_back(base.seeds[s]);
    for (std::size_t k = 0; k < nus.size(); ++k) {
      for (std::size_t o = 0; o < width; ++o) samples[k][o].push_back(per_nu[k][o]);
    }
  }

  for (std::size_t k = 0; k < nus.size(); ++k) {
    for (std::size_t o = 0; o < width; ++o) {
      const SummaryRow q = quartiles(samples[k][o]);
      table.rows.push_back({nus[k], static_cast<int>(o) - window, q.median, q.q1, q.q3,
                            static_cast<int>(samples[k][o].size())});
    }
  }

  if (!base.out.empty()) {
    std::filesystem::create_directories(base.out);
    std::ofstream f(std::filesystem::path(base.out) / "conditioning.csv", std::ios::binary);
    f << conditioning_csv(table);
  }
  return table;
}

std::string conditioning_csv(const ConditioningTable& table) {
  std::ostringstream os;
  os << "nu,offset,median,q1,q3,count\n";
  for (const auto& r : table.rows) {
    os << fmt(r.nu) << ',' << r.offset << ',' << fmt(r.median) << ',' << fmt(r.q1) << ','
       << fmt(r.q3) << ',' << r.count << '\n';
  }
  return os.str();
}

}  // namespace lago
