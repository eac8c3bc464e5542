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

#include "riscf/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace riscf {

namespace {

// Pilot projection as two small products: Y = sqrt(p tau_p) U S + W P, where
// S(j, k) = 1 if j shares k's pilot and P(t, k) = 1 if k uses pilot t.
struct PilotMaps {
  Eigen::MatrixXd sharing;
  Eigen::MatrixXd select;
};

PilotMaps pilot_maps(const LargeScaleState& ls, std::size_t tau_p) {
  const auto K = static_cast<Eigen::Index>(ls.num_users());
  PilotMaps p{Eigen::MatrixXd::Zero(K, K),
              Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(tau_p), K)};
  for (Eigen::Index k = 0; k < K; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    for (std::size_t j : ls.sharing(ku)) p.sharing(static_cast<Eigen::Index>(j), k) = 1.0;
    p.select(static_cast<Eigen::Index>(ls.pilots.pilot_of[ku]), k) = 1.0;
  }
  return p;
}

// Per-trial state of the channel/pilot pipeline, reused across trials.
class TrialPipeline {
 public:
  TrialPipeline(const McProblem& problem)
      : problem_(problem),
        maps_(pilot_maps(problem.ls, problem.cfg.tau_p)),
        root_pg_(std::sqrt(problem.cfg.pilot_gain())),
        noise_(static_cast<Eigen::Index>(problem.ls.num_aps()),
               static_cast<Eigen::Index>(problem.cfg.tau_p)) {}

  // Fresh channels, pilot noise, projected pilots and MMSE estimates.
  void draw(RngStream& rng) {
    sample_channels(problem_.ls, problem_.corr, problem_.phi_diag, rng, chan);
    for (Eigen::Index m = 0; m < noise_.rows(); ++m) {
      for (Eigen::Index t = 0; t < noise_.cols(); ++t) noise_(m, t) = rng.complex_normal();
    }
    projected.noalias() = root_pg_ * (chan.aggregated * maps_.sharing);
    projected.noalias() += noise_ * maps_.select;
    estimates = problem_.stats.c.cast<cplx>().cwiseProduct(projected);
  }

  ChannelRealization chan;
  Eigen::MatrixXcd projected;
  Eigen::MatrixXcd estimates;

 private:
  const McProblem& problem_;
  PilotMaps maps_;
  double root_pg_;
  Eigen::MatrixXcd noise_;
};

template <typename Acc, typename Kernel>
std::vector<Acc> run_batches(std::size_t batches, bool parallel, Kernel&& kernel) {
  std::vector<Acc> out(batches);
  const auto count = static_cast<std::int64_t>(batches);
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t b = 0; b < count; ++b) {
      out[static_cast<std::size_t>(b)] = kernel(static_cast<std::size_t>(b));
    }
  } else {
    for (std::int64_t b = 0; b < count; ++b) {
      out[static_cast<std::size_t>(b)] = kernel(static_cast<std::size_t>(b));
    }
  }
  return out;
}

void check_trials(const McOptions& opt) {
  if (opt.batches < 2) throw std::invalid_argument("at least two batches are needed for a standard error");
  if (opt.trials < 1000) {
    std::ostringstream os;
    os << "stderr too large: " << opt.trials << " trials requested, at least 1000 required";
    throw InsufficientTrials(os.str());
  }
}

McSinrEstimate estimate_sinr(const McProblem& problem, const McOptions& opt, bool parallel) {
  check_trials(opt);
  const std::size_t K = problem.ls.num_users();
  auto parts = run_batches<SinrAccumulator>(opt.batches, parallel, [&](std::size_t b) {
    return sinr_batch(problem, opt.seed, b, batch_size(opt.trials, opt.batches, b));
  });

  SinrAccumulator total(K);
  for (const auto& p : parts) total.merge(p);

  McSinrEstimate est;
  est.trials = total.count;
  est.batches = opt.batches;
  const double nb = static_cast<double>(opt.batches);
  for (std::size_t k = 0; k < K; ++k) {
    est.sinr.push_back(total.sinr(problem.cfg, k));
    double mean = 0.0;
    double sq = 0.0;
    for (const auto& p : parts) {
      const double s = p.sinr(problem.cfg, k);
      mean += s;
      sq += s * s;
    }
    mean /= nb;
    const double var = std::max(0.0, (sq - nb * mean * mean) / (nb - 1.0));
    est.stderr_.push_back(std::sqrt(var / nb));
  }

  if (opt.max_rel_stderr > 0.0 && est.max_rel_stderr() > opt.max_rel_stderr) {
    std::ostringstream os;
    os << "stderr too large: relative standard error " << est.max_rel_stderr() << " exceeds cap "
       << opt.max_rel_stderr << " with " << opt.trials << " trials";
    throw InsufficientTrials(os.str());
  }
  return est;
}

}  // namespace

McProblem::McProblem(const LargeScaleState& ls_, const CorrelationModel& corr_,
                     const PhaseShifts& phi, const SystemConfig& cfg_)
    : ls(ls_),
      corr(corr_),
      cfg(cfg_),
      phi_diag(phi.diagonal()),
      traces(trace_products(corr_, phi)),
      stats(estimator_stats(ls_, corr_, traces, cfg_)) {}

std::size_t batch_size(std::size_t trials, std::size_t batches, std::size_t b) {
  return trials / batches + (b < trials % batches ? 1 : 0);
}

SinrAccumulator::SinrAccumulator(std::size_t num_users)
    : sum_a(Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(num_users))),
      sum_b2(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(num_users),
                                   static_cast<Eigen::Index>(num_users))),
      sum_n(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(num_users))) {}

void SinrAccumulator::merge(const SinrAccumulator& other) {
  sum_a += other.sum_a;
  sum_b2 += other.sum_b2;
  sum_n += other.sum_n;
  count += other.count;
}

double SinrAccumulator::sinr(const SystemConfig& cfg, std::size_t k) const {
  const auto ki = static_cast<Eigen::Index>(k);
  const double n = static_cast<double>(count);
  const double rho = cfg.data_snr;
  const double signal = rho * cfg.eta[k] * std::norm(sum_a[ki] / n);
  double total = 0.0;
  for (Eigen::Index j = 0; j < sum_b2.cols(); ++j) {
    total += cfg.eta[static_cast<std::size_t>(j)] * sum_b2(ki, j) / n;
  }
  const double den = rho * total - signal + sum_n[ki] / n;
  return den > 0.0 ? signal / den : 0.0;
}

SinrAccumulator sinr_batch(const McProblem& problem, std::uint64_t seed, std::size_t batch,
                           std::size_t trials) {
  const std::size_t K = problem.ls.num_users();
  SinrAccumulator acc(K);
  RngStream rng(seed, StreamTag::channel, batch);
  TrialPipeline pipe(problem);
  Eigen::MatrixXcd b(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(K));
  for (std::size_t t = 0; t < trials; ++t) {
    pipe.draw(rng);
    b.noalias() = pipe.estimates.adjoint() * pipe.chan.aggregated;
    acc.sum_a += b.diagonal();
    acc.sum_b2 += b.cwiseAbs2();
    acc.sum_n += pipe.estimates.cwiseAbs2().colwise().sum().transpose();
  }
  acc.count = trials;
  return acc;
}

double McSinrEstimate::max_rel_stderr() const {
  double worst = 0.0;
  for (std::size_t k = 0; k < sinr.size(); ++k) {
    if (sinr[k] > 0.0) worst = std::max(worst, stderr_[k] / sinr[k]);
  }
  return worst;
}

McSinrEstimate monte_carlo_sinr(const McProblem& problem, const McOptions& opt) {
  return estimate_sinr(problem, opt, true);
}

McSinrEstimate monte_carlo_sinr_serial(const McProblem& problem, const McOptions& opt) {
  return estimate_sinr(problem, opt, false);
}

namespace {

struct MomentSums {
  double n = 0.0;
  double est2 = 0.0, est4 = 0.0;
  double err2 = 0.0, err4 = 0.0;
  cplx cross = 0.0;
  double cross2 = 0.0;
  double u2 = 0.0;
  cplx uy = 0.0;        // sum u conj(y)
  double y2 = 0.0;      // sum |y|^2
  double u2y2 = 0.0;    // sum |u|^2 |y|^2
  cplx uy_y2 = 0.0;     // sum u conj(y) |y|^2
  double y4 = 0.0;      // sum |y|^4

  void merge(const MomentSums& o) {
    n += o.n;
    est2 += o.est2;
    est4 += o.est4;
    err2 += o.err2;
    err4 += o.err4;
    cross += o.cross;
    cross2 += o.cross2;
    u2 += o.u2;
    uy += o.uy;
    y2 += o.y2;
    u2y2 += o.u2y2;
    uy_y2 += o.uy_y2;
    y4 += o.y4;
  }
};

}  // namespace

std::vector<EstimatorMoments> estimator_moments(
    const McProblem& problem, const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
    const McOptions& opt) {
  check_trials(opt);
  using Batch = std::vector<MomentSums>;
  auto parts = run_batches<Batch>(opt.batches, true, [&](std::size_t b) {
    Batch sums(pairs.size());
    RngStream rng(opt.seed, StreamTag::channel, b);
    TrialPipeline pipe(problem);
    const std::size_t trials = batch_size(opt.trials, opt.batches, b);
    for (std::size_t t = 0; t < trials; ++t) {
      pipe.draw(rng);
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto m = static_cast<Eigen::Index>(pairs[i].first);
        const auto k = static_cast<Eigen::Index>(pairs[i].second);
        const cplx u = pipe.chan.aggregated(m, k);
        const cplx y = pipe.projected(m, k);
        const cplx est = pipe.estimates(m, k);
        const cplx e = u - est;
        const double a2 = std::norm(est);
        const double e2 = std::norm(e);
        const double y2 = std::norm(y);
        MomentSums& s = sums[i];
        s.n += 1.0;
        s.est2 += a2;
        s.est4 += a2 * a2;
        s.err2 += e2;
        s.err4 += e2 * e2;
        s.cross += e * std::conj(est);
        s.cross2 += e2 * a2;
        s.u2 += std::norm(u);
        s.uy += u * std::conj(y);
        s.y2 += y2;
        s.u2y2 += std::norm(u) * y2;
        s.uy_y2 += u * std::conj(y) * y2;
        s.y4 += y2 * y2;
      }
    }
    return sums;
  });

  std::vector<EstimatorMoments> out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    MomentSums s;
    for (const auto& p : parts) s.merge(p[i]);
    EstimatorMoments r;
    r.m = pairs[i].first;
    r.k = pairs[i].second;
    const double n = s.n;
    r.est_power = s.est2 / n;
    r.est_power_se = std::sqrt(std::max(0.0, s.est4 / n - r.est_power * r.est_power) / n);
    r.err_power = s.err2 / n;
    r.err_power_se = std::sqrt(std::max(0.0, s.err4 / n - r.err_power * r.err_power) / n);
    r.cross = s.cross / n;
    r.cross_se = std::sqrt(std::max(0.0, s.cross2 / n - std::norm(r.cross)) / n);
    r.est_var_of_u = s.u2 / n;
    // Complex least squares u ~ b y with a heteroskedasticity-robust variance:
    // Var(b) = sum |u - b y|^2 |y|^2 / (sum |y|^2)^2, half of it on the real part.
    const cplx slope = s.uy / s.y2;
    const double resid_w = s.u2y2 - 2.0 * std::real(std::conj(slope) * s.uy_y2) +
                           std::norm(slope) * s.y4;
    r.slope = slope.real();
    r.slope_se = std::sqrt(std::max(0.0, 0.5 * resid_w) ) / s.y2;
    out.push_back(r);
  }
  return out;
}

DeviationEstimate asymptotic_deviation(const McProblem& problem, AsymptoticRegime regime,
                                       const McOptions& opt) {
  if (opt.batches < 2) throw std::invalid_argument("at least two batches are needed for a standard error");
  const std::size_t K = problem.ls.num_users();
  const auto Ki = static_cast<Eigen::Index>(K);
  // The limit is linear in the symbols: limit = L s.
  Eigen::MatrixXcd limit_map(Ki, Ki);
  for (Eigen::Index j = 0; j < Ki; ++j) {
    const Eigen::VectorXcd e = Eigen::VectorXcd::Unit(Ki, j);
    for (Eigen::Index k = 0; k < Ki; ++k) {
      limit_map(k, j) = asymptotic_limit(problem.ls, problem.corr, problem.traces, problem.cfg,
                                         problem.stats, static_cast<std::size_t>(k), e, regime);
    }
  }
  double norm = static_cast<double>(problem.ls.num_aps());
  if (regime == AsymptoticRegime::joint) norm *= static_cast<double>(problem.corr.num_elements());

  struct Part {
    double sum_sq = 0.0;
    double n = 0.0;
  };
  auto parts = run_batches<Part>(opt.batches, true, [&](std::size_t b) {
    Part part;
    RngStream rng(opt.seed, StreamTag::channel, b);
    RngStream data_rng(opt.seed, StreamTag::data_noise, b);
    TrialPipeline pipe(problem);
    Eigen::VectorXcd symbols(Ki);
    const double h = std::numbers::sqrt2 / 2.0;
    const std::size_t trials = batch_size(opt.trials, opt.batches, b);
    for (std::size_t t = 0; t < trials; ++t) {
      pipe.draw(rng);
      for (auto& s : symbols) {
        s = {data_rng.bernoulli(0.5) ? h : -h, data_rng.bernoulli(0.5) ? h : -h};
      }
      const Eigen::VectorXcd y = uplink_receive(pipe.chan, problem.cfg, symbols, data_rng);
      const Eigen::VectorXcd r = pipe.estimates.adjoint() * y;
      const Eigen::VectorXcd dev = r / norm - limit_map * symbols;
      part.sum_sq += dev.squaredNorm();
      part.n += static_cast<double>(K);
    }
    return part;
  });

  double sum = 0.0;
  double n = 0.0;
  std::vector<double> batch_ms;
  for (const auto& p : parts) {
    sum += p.sum_sq;
    n += p.n;
    batch_ms.push_back(p.n > 0 ? p.sum_sq / p.n : 0.0);
  }
  DeviationEstimate out;
  const double ms = sum / n;
  out.rms = std::sqrt(ms);
  const double nb = static_cast<double>(batch_ms.size());
  double var = 0.0;
  for (double v : batch_ms) var += (v - ms) * (v - ms);
  var /= (nb - 1.0);
  const double ms_se = std::sqrt(var / nb);
  out.rms_stderr = out.rms > 0.0 ? ms_se / (2.0 * out.rms) : 0.0;
  // Unit-power symbols with independent entries: E|L s|^2 = ||L||_F^2.
  out.limit_rms = limit_map.norm() / std::sqrt(static_cast<double>(K));
  return out;
}

}  // namespace riscf
