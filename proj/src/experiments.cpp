// SPDX-License-Identifier: Apache-2.0
//
// riscf: RIS-assisted cell-free massive MIMO uplink simulator
// Copyright (C) 2026 The riscf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "riscf/experiments.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "riscf/correlation.hpp"
#include "riscf/performance.hpp"
#include "riscf/phase.hpp"

namespace riscf {

namespace {

namespace fs = std::filesystem;

const char* kMarker = "validate.status";

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

std::string correlation_name(CorrelationKind k) {
  return k == CorrelationKind::correlated ? "correlated" : "independent";
}

void write_manifest(const ExperimentSpec& spec, const SystemConfig& cfg, const fs::path& path) {
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016" PRIx64, fnv1a(read_file(spec.config_path)));
  nlohmann::json doc = {
      {"experiment", experiment_name(spec.kind)},
      {"config_path", spec.config_path.string()},
      {"config_fnv1a64", hash},
      {"master_seed", cfg.master_seed},
      {"trials", cfg.trials},
      {"resolved_config", config_to_json(cfg)},
      {"versions",
       {{"riscf", RISCF_VERSION},
        {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                      "." + std::to_string(EIGEN_MINOR_VERSION)},
        {"compiler", __VERSION__}}},
  };
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
}

void check_gate(const ExperimentSpec& spec) {
  if (spec.force) return;
  const fs::path marker = spec.out_dir / kMarker;
  if (!fs::exists(marker)) return;
  std::string status = read_file(marker);
  if (status.rfind("fail", 0) == 0) {
    throw GateError("last validate run in " + spec.out_dir.string() +
                    " failed; rerun validate or pass --force");
  }
}

template <typename F>
void parallel_for(std::size_t n, F&& body) {
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
}

double sum_rate(const Scenario& sc, const TraceProducts& tp) {
  return closed_form_report(sc.large_scale, sc.correlation, tp, sc.cfg).sum_rate_mbps;
}

PhaseShifts resolve_phase(const ExperimentSpec& spec, const SystemConfig& cfg) {
  return parse_phase_spec(spec.phase.value_or(cfg.phase), cfg.num_elements()).realized;
}

}  // namespace

ExperimentKind parse_experiment_kind(const std::string& name) {
  if (name == "validate") return ExperimentKind::validate;
  if (name == "sweep-ptilde") return ExperimentKind::sweep_ptilde;
  if (name == "cdf") return ExperimentKind::cdf;
  if (name == "phase-compare") return ExperimentKind::phase_compare;
  if (name == "asymptotic") return ExperimentKind::asymptotic;
  throw std::invalid_argument("unknown experiment '" + name + "'");
}

std::string experiment_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::validate:
      return "validate";
    case ExperimentKind::sweep_ptilde:
      return "sweep-ptilde";
    case ExperimentKind::cdf:
      return "cdf";
    case ExperimentKind::phase_compare:
      return "phase-compare";
    case ExperimentKind::asymptotic:
      return "asymptotic";
  }
  return "unknown";
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_matrix_csv(const fs::path& path, const Eigen::MatrixXd& m) {
  auto out = open_out(path);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out << (j ? "," : "") << format_number(m(i, j));
    }
    out << '\n';
  }
}

void write_stats_csv(const fs::path& path, const EstimationStats& stats) {
  auto out = open_out(path);
  out << "m,k,c,gamma,err_var,nmse\n";
  for (Eigen::Index m = 0; m < stats.c.rows(); ++m) {
    for (Eigen::Index k = 0; k < stats.c.cols(); ++k) {
      out << m + 1 << ',' << k + 1 << ',' << format_number(stats.c(m, k)) << ','
          << format_number(stats.gamma(m, k)) << ',' << format_number(stats.err_var(m, k)) << ','
          << format_number(stats.nmse(m, k)) << '\n';
    }
  }
}

SystemConfig resolve_config(const ExperimentSpec& spec) {
  SystemConfig cfg = load_config(spec.config_path);
  if (spec.seed) cfg.master_seed = *spec.seed;
  if (spec.trials) cfg.trials = *spec.trials;
  if (spec.draws) cfg.scenario_draws = *spec.draws;
  if (spec.p_tilde_grid) cfg.p_tilde_grid = *spec.p_tilde_grid;
  if (spec.phase) cfg.phase = *spec.phase;
  if (spec.correlation) cfg.correlation = *spec.correlation;
  cfg.validate();
  return cfg;
}

std::vector<ValidationRow> validate_scenario(const Scenario& sc, const PhaseShifts& phi,
                                             const McOptions& opt) {
  const McProblem problem(sc.large_scale, sc.correlation, phi, sc.cfg);
  const McSinrEstimate mc = monte_carlo_sinr(problem, opt);
  std::vector<ValidationRow> rows;
  for (std::size_t k = 0; k < sc.large_scale.num_users(); ++k) {
    ValidationRow r;
    r.k = k;
    r.sinr_closed = closed_form_sinr(sc.large_scale, sc.correlation, problem.traces, sc.cfg,
                                     problem.stats, k);
    r.rate_closed_mbps = net_throughput(r.sinr_closed, sc.cfg);
    r.sinr_mc = mc.sinr[k];
    r.sinr_mc_stderr = mc.stderr_[k];
    r.rate_mc_mbps = net_throughput(r.sinr_mc, sc.cfg);
    r.rel_gap = r.sinr_mc > 0.0 ? std::abs(r.sinr_closed - r.sinr_mc) / r.sinr_mc
                                : (r.sinr_closed == 0.0 ? 0.0 : INFINITY);
    rows.push_back(r);
  }
  return rows;
}

std::vector<SweepRow> sweep_ptilde(const SystemConfig& cfg, const std::vector<double>& grid,
                                   std::size_t draws, const PhaseShifts& phi) {
  const auto shape = make_correlation_shape(cfg, false);
  const TraceProducts tp = trace_products(CorrelationModel(shape, {}, {}), phi);
  std::vector<SweepRow> rows;
  for (double p : grid) {
    std::vector<double> ris(draws), cf(draws), nolos(draws);
    parallel_for(draws, [&](std::size_t d) {
      ris[d] = sum_rate(build_scenario(cfg, shape, d, p, SystemVariant::ris_cell_free), tp);
      cf[d] = sum_rate(build_scenario(cfg, shape, d, p, SystemVariant::cell_free), tp);
      nolos[d] = sum_rate(build_scenario(cfg, shape, d, p, SystemVariant::ris_no_los), tp);
    });
    auto mean = [](const std::vector<double>& v) {
      double s = 0.0;
      for (double x : v) s += x;
      return v.empty() ? 0.0 : s / static_cast<double>(v.size());
    };
    rows.push_back({p, mean(ris), mean(cf), mean(nolos)});
  }
  return rows;
}

std::vector<CdfPoint> sum_rate_cdf(const SystemConfig& cfg, std::size_t draws,
                                   const PhaseShifts& phi) {
  if (draws < 100) throw std::invalid_argument("cdf needs at least 100 scenario draws");
  const auto shape = make_correlation_shape(cfg, false);
  const TraceProducts tp = trace_products(CorrelationModel(shape, {}, {}), phi);
  std::vector<CdfPoint> out;
  for (SystemVariant v :
       {SystemVariant::ris_cell_free, SystemVariant::cell_free, SystemVariant::ris_no_los}) {
    std::vector<double> samples(draws);
    parallel_for(draws, [&](std::size_t d) {
      samples[d] = sum_rate(build_scenario(cfg, shape, d, cfg.p_tilde, v), tp);
    });
    std::sort(samples.begin(), samples.end());
    for (std::size_t i = 0; i < draws; ++i) {
      out.push_back({v, i + 1, samples[i],
                     static_cast<double>(i + 1) / static_cast<double>(draws)});
    }
  }
  return out;
}

std::vector<PhaseCompareRow> phase_compare(const SystemConfig& cfg, std::size_t draws,
                                           double theta_bar) {
  if (draws < 2) throw std::invalid_argument("phase-compare needs at least 2 scenario draws");
  std::vector<PhaseCompareRow> rows;
  const std::size_t n = cfg.num_elements();
  for (CorrelationKind kind : {CorrelationKind::correlated, CorrelationKind::independent}) {
    SystemConfig c = cfg;
    c.correlation = kind;
    const auto shape = make_correlation_shape(c, false);
    const CorrelationModel bare(shape, {}, {});
    const TraceProducts equal_tp = trace_products(bare, equal_phase_design(theta_bar, n).realized);
    for (const char* phase : {"equal", "random"}) {
      const bool random = std::string(phase) == "random";
      std::vector<double> samples(draws);
      parallel_for(draws, [&](std::size_t d) {
        const Scenario sc = build_scenario(c, shape, d, c.p_tilde, SystemVariant::ris_cell_free);
        if (random) {
          RngStream rng(c.master_seed, StreamTag::phase, d);
          samples[d] = sum_rate(sc, trace_products(bare, random_phase_design(rng, n).realized));
        } else {
          samples[d] = sum_rate(sc, equal_tp);
        }
      });
      double mean = 0.0;
      for (double s : samples) mean += s;
      mean /= static_cast<double>(draws);
      double var = 0.0;
      for (double s : samples) var += (s - mean) * (s - mean);
      var /= static_cast<double>(draws - 1);
      rows.push_back({phase, kind, mean, std::sqrt(var / static_cast<double>(draws))});
    }
  }
  return rows;
}

std::vector<AsymptoticRow> asymptotic_sweep(const SystemConfig& cfg, const McOptions& opt,
                                            std::size_t draws) {
  if (draws == 0) throw std::invalid_argument("asymptotic sweep needs at least one draw");
  if (cfg.asymptotic_aps.empty()) throw std::invalid_argument("asymptotic_aps is empty");
  const std::size_t max_aps =
      *std::max_element(cfg.asymptotic_aps.begin(), cfg.asymptotic_aps.end());
  std::vector<AsymptoticRow> rows;
  // Pooled over draws: mean square and its squared standard error.
  auto sweep = [&](const SystemConfig& c, AsymptoticRegime regime, const PhaseShifts& phi,
                   const std::vector<std::size_t>& aps) {
    const auto shape = make_correlation_shape(c, true);
    std::vector<double> ms(aps.size(), 0.0);
    std::vector<double> var(aps.size(), 0.0);
    std::vector<double> lim(aps.size(), 0.0);
    for (std::size_t d = 0; d < draws; ++d) {
      const Scenario full = build_scenario(c, shape, d);
      McOptions o = opt;
      o.seed = derive_seed(opt.seed, StreamTag::channel, d);
      for (std::size_t i = 0; i < aps.size(); ++i) {
        const Scenario sc = restrict_aps(full, aps[i]);
        const McProblem problem(sc.large_scale, sc.correlation, phi, sc.cfg);
        const DeviationEstimate dev = asymptotic_deviation(problem, regime, o);
        const double ms_se = 2.0 * dev.rms * dev.rms_stderr;
        ms[i] += dev.rms * dev.rms;
        var[i] += ms_se * ms_se;
        lim[i] += dev.limit_rms * dev.limit_rms;
      }
    }
    const double n = static_cast<double>(draws);
    for (std::size_t i = 0; i < aps.size(); ++i) {
      const double rms = std::sqrt(ms[i] / n);
      const double se = std::sqrt(var[i]) / n;
      rows.push_back({regime, aps[i], c.num_elements(), rms, rms > 0.0 ? se / (2.0 * rms) : 0.0,
                      std::sqrt(lim[i] / n)});
    }
  };

  SystemConfig fixed = cfg;
  fixed.num_aps = max_aps;
  sweep(fixed, AsymptoticRegime::fixed_elements,
        parse_phase_spec(cfg.phase, cfg.num_elements()).realized, cfg.asymptotic_aps);

  // Equal phases keep the design comparable across RIS sizes.
  const PhaseShifts base_phase = parse_phase_spec(cfg.phase, cfg.num_elements()).realized;
  const double theta = base_phase.theta.empty() ? 0.0 : base_phase.theta.front();
  const std::size_t pairs = std::min(cfg.asymptotic_aps.size(), cfg.asymptotic_ris_side.size());
  for (std::size_t i = 0; i < pairs; ++i) {
    SystemConfig c = cfg;
    c.num_aps = max_aps;
    c.ris_cols = cfg.asymptotic_ris_side[i];
    c.ris_rows = cfg.asymptotic_ris_side[i];
    sweep(c, AsymptoticRegime::joint, equal_phase_design(theta, c.num_elements()).realized,
          {cfg.asymptotic_aps[i]});
  }
  return rows;
}

ExperimentOutcome run_experiment(const ExperimentSpec& spec) {
  const SystemConfig cfg = resolve_config(spec);
  fs::create_directories(spec.out_dir);
  if (spec.kind != ExperimentKind::validate) check_gate(spec);

  const std::string name = experiment_name(spec.kind);
  ExperimentOutcome outcome;
  const fs::path csv = spec.out_dir / (name + ".csv");
  const fs::path manifest = spec.out_dir / (name + ".manifest.json");

  switch (spec.kind) {
    case ExperimentKind::validate: {
      const auto shape = make_correlation_shape(cfg, true);
      const Scenario sc = build_scenario(cfg, shape, 0);
      const PhaseShifts phi = resolve_phase(spec, cfg);
      McOptions opt;
      opt.trials = cfg.trials;
      opt.seed = cfg.master_seed;
      std::vector<ValidationRow> rows;
      try {
        rows = validate_scenario(sc, phi, opt);
      } catch (const InsufficientTrials& e) {
        auto marker = open_out(spec.out_dir / kMarker);
        marker << "fail\n";
        outcome.exit_code = 2;
        outcome.message = e.what();
        return outcome;
      }
      auto out = open_out(csv);
      out << "k,sinr_closed,rate_closed_mbps,sinr_mc,sinr_mc_stderr,rate_mc_mbps,rel_gap\n";
      const ValidationRow* worst = nullptr;
      for (const auto& r : rows) {
        out << r.k + 1 << ',' << format_number(r.sinr_closed) << ','
            << format_number(r.rate_closed_mbps) << ',' << format_number(r.sinr_mc) << ','
            << format_number(r.sinr_mc_stderr) << ',' << format_number(r.rate_mc_mbps) << ','
            << format_number(r.rel_gap) << '\n';
        if (!worst || r.rel_gap > worst->rel_gap) worst = &r;
      }
      outcome.outputs.push_back(csv);
      const bool pass = worst && worst->rel_gap <= spec.tolerance;
      std::ostringstream msg;
      msg << "worst user k=" << (worst ? worst->k + 1 : 0)
          << " rel_gap=" << format_number(worst ? worst->rel_gap : 0.0)
          << " (tolerance " << format_number(spec.tolerance) << ")";
      outcome.message = msg.str();
      outcome.exit_code = pass ? 0 : 2;
      auto marker = open_out(spec.out_dir / kMarker);
      marker << (pass ? "pass\n" : "fail\n");
      if (spec.dump) {
        const fs::path r_csv = spec.out_dir / "correlation_matrix.csv";
        const fs::path s_csv = spec.out_dir / "estimation_stats.csv";
        write_matrix_csv(r_csv, sc.correlation.r());
        write_stats_csv(s_csv,
                        estimator_stats(sc.large_scale, sc.correlation, phi, sc.cfg));
        outcome.outputs.push_back(r_csv);
        outcome.outputs.push_back(s_csv);
      }
      break;
    }
    case ExperimentKind::sweep_ptilde: {
      const auto rows = sweep_ptilde(cfg, cfg.p_tilde_grid, cfg.scenario_draws,
                                     resolve_phase(spec, cfg));
      auto out = open_out(csv);
      out << "p_tilde,ris_cellfree,cellfree,ris_cellfree_nolos\n";
      for (const auto& r : rows) {
        out << format_number(r.p_tilde) << ',' << format_number(r.ris_cell_free) << ','
            << format_number(r.cell_free) << ',' << format_number(r.ris_no_los) << '\n';
      }
      outcome.outputs.push_back(csv);
      break;
    }
    case ExperimentKind::cdf: {
      const std::size_t draws =
          spec.draws.value_or(std::max<std::size_t>(cfg.scenario_draws, 100));
      const auto points = sum_rate_cdf(cfg, draws, resolve_phase(spec, cfg));
      auto out = open_out(csv);
      out << "system,rank,sum_rate_mbps,cdf\n";
      for (const auto& p : points) {
        out << variant_name(p.system) << ',' << p.rank << ',' << format_number(p.sum_rate_mbps)
            << ',' << format_number(p.cdf) << '\n';
      }
      outcome.outputs.push_back(csv);
      break;
    }
    case ExperimentKind::phase_compare: {
      const PhaseDesign design = parse_phase_spec(spec.phase.value_or(cfg.phase), cfg.num_elements());
      const double theta = design.kind == PhaseKind::equal ? design.theta_bar : std::numbers::pi / 4;
      const auto rows = phase_compare(cfg, cfg.scenario_draws, theta);
      auto out = open_out(csv);
      out << "phase,correlation,mean_sum_rate_mbps,stderr_mbps\n";
      for (const auto& r : rows) {
        out << r.phase << ',' << correlation_name(r.correlation) << ','
            << format_number(r.mean_sum_rate_mbps) << ',' << format_number(r.stderr_mbps) << '\n';
      }
      outcome.outputs.push_back(csv);
      break;
    }
    case ExperimentKind::asymptotic: {
      McOptions opt;
      opt.trials = spec.trials.value_or(cfg.asymptotic_trials);
      opt.batches = std::min<std::size_t>(opt.batches, opt.trials);
      opt.seed = cfg.master_seed;
      const auto rows = asymptotic_sweep(cfg, opt, spec.draws.value_or(cfg.asymptotic_draws));
      auto out = open_out(csv);
      out << "regime,aps,elements,rms_deviation,rms_stderr,limit_rms,relative_deviation\n";
      for (const auto& r : rows) {
        out << (r.regime == AsymptoticRegime::fixed_elements ? "fixed_elements" : "joint") << ','
            << r.aps << ',' << r.elements << ',' << format_number(r.rms_deviation) << ','
            << format_number(r.rms_stderr) << ',' << format_number(r.limit_rms) << ','
            << format_number(r.relative_deviation()) << '\n';
      }
      outcome.outputs.push_back(csv);
      break;
    }
  }
  write_manifest(spec, cfg, manifest);
  outcome.outputs.push_back(manifest);
  return outcome;
}

}  // namespace riscf
