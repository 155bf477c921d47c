// Copyright 2026 The Thermo Authors
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


#include "thermo/ldp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

#include "thermo/block.hpp"
#include "thermo/convex.hpp"
#include "thermo/errors.hpp"
#include "thermo/parallel.hpp"
#include "thermo/pressure.hpp"
#include "thermo/rate.hpp"

namespace thermo {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class LogSum {
 public:
  void add(double v) {
    if (v == -kInf) return;
    if (v > max_) {
      sum_ = sum_ * std::exp(max_ - v) + 1.0;
      max_ = v;
    } else {
      sum_ += std::exp(v - max_);
    }
  }
  bool empty() const { return max_ == -kInf; }
  double value() const { return max_ + std::log(sum_); }

 private:
  double max_ = -kInf;
  double sum_ = 0.0;
};

// log 1^T E^n 1 with per-step renormalisation.
double log_power_sum(const Eigen::MatrixXd& e, int n) {
  Eigen::VectorXd v = Eigen::VectorXd::Ones(e.rows());
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    v = e * v;
    const double s = v.sum();
    if (!(s > 0.0)) return -kInf;
    v /= s;
    acc += std::log(s);
  }
  return acc + std::log(v.sum());
}

bool in_ball(const Eigen::VectorXd& p, const Eigen::VectorXd& x, double delta) {
  return p.size() == 0 || (p - x).cwiseAbs().maxCoeff() <= delta + kBallBoundaryTolerance;
}

struct DpKey {
  int head;
  int tail;
  std::vector<std::int64_t> sums;
  bool operator==(const DpKey&) const = default;
};

struct DpKeyHash {
  std::size_t operator()(const DpKey& k) const {
    std::size_t h = std::hash<int>()(k.head) * 1000003u ^ std::hash<int>()(k.tail);
    for (auto s : k.sums) h = h * 1000003u ^ std::hash<std::int64_t>()(s);
    return h;
  }
};

}  // namespace

double finite_n_mgf(const Sft& sft, const Potential& f, const Potential& g, int n) {
  if (n < 1) throw InputError("finite-n MGF needs n >= 1");
  check_potential(sft, f);
  check_potential(sft, g);
  const Potential fg = f + g;
  const BlockPresentation block(sft, block_length_for_depth(fg.depth()));
  const TransferMatrix mf = transfer_matrix(block, f);
  const TransferMatrix mfg = transfer_matrix(block, fg);
  return (log_power_sum(mfg.entries, n) - log_power_sum(mf.entries, n)) / n +
         (mfg.log_scale - mf.log_scale);
}

EmpiricalLaw::EmpiricalLaw(Sft sft, Potential f, int n, std::int64_t cap)
    : sft_(std::move(sft)), base_(std::move(f)), n_(n) {
  check_potential(sft_, base_);
  if (n_ < base_.depth()) throw InputError("word length is below the potential depth");
  words_ = enumerate_words(sft_, n_, cap);
  log_weights_.resize(static_cast<Eigen::Index>(words_.size()));
  for (std::size_t i = 0; i < words_.size(); ++i) {
    log_weights_[static_cast<Eigen::Index>(i)] = birkhoff_sum(base_, words_[i]);
  }
  LogSum z;
  for (double v : log_weights_) z.add(v);
  log_partition_ = z.value();
  weights_ = (log_weights_.array() - log_partition_).exp().matrix();
}

EmpiricalLaw::EmpiricalLaw(Sft sft, Potential f, int n, std::vector<Word> words,
                           Eigen::VectorXd log_weights)
    : sft_(std::move(sft)),
      base_(std::move(f)),
      n_(n),
      words_(std::move(words)),
      log_weights_(std::move(log_weights)) {
  LogSum z;
  for (double v : log_weights_) z.add(v);
  log_partition_ = z.value();
  weights_ = (log_weights_.array() - log_partition_).exp().matrix();
}

EmpiricalLaw EmpiricalLaw::tilted(const Potential& g) const {
  check_potential(sft_, g);
  if (n_ < g.depth()) throw InputError("word length is below the tilt depth");
  Eigen::VectorXd lw = log_weights_;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    lw[static_cast<Eigen::Index>(i)] += birkhoff_sum(g, words_[i]);
  }
  return EmpiricalLaw(sft_, base_ + g, n_, words_, std::move(lw));
}

PushforwardLaw::PushforwardLaw(EmpiricalLaw law, std::vector<Potential> directions)
    : law_(std::move(law)), directions_(std::move(directions)) {
  const auto d = static_cast<Eigen::Index>(directions_.size());
  const auto& words = law_.words();
  points_.resize(d, static_cast<Eigen::Index>(words.size()));
  for (Eigen::Index k = 0; k < d; ++k) {
    check_potential(law_.sft(), directions_[k]);
    if (law_.length() < directions_[k].depth()) {
      throw InputError("word length is below a direction depth");
    }
    for (std::size_t i = 0; i < words.size(); ++i) {
      points_(k, static_cast<Eigen::Index>(i)) =
          birkhoff_sum(directions_[k], words[i]) / law_.length();
    }
  }
}

ExtendedReal ball_log_probability(const PushforwardLaw& pl, const Eigen::VectorXd& x,
                                  double delta) {
  if (x.size() != pl.points().rows()) throw InputError("ball centre has the wrong dimension");
  if (!(delta >= 0.0)) throw InputError("ball radius must be nonnegative");
  LogSum inside;
  for (Eigen::Index i = 0; i < pl.points().cols(); ++i) {
    if (in_ball(pl.points().col(i), x, delta)) inside.add(pl.law().log_weights()[i]);
  }
  if (inside.empty()) return ExtendedReal::MinusInfinity();
  return (inside.value() - pl.law().log_partition()) / pl.law().length();
}

BallDpResult ball_log_probability_dp(const Sft& sft, const Potential& f,
                                     const std::vector<Potential>& directions, int n,
                                     const Eigen::VectorXd& x, double delta,
                                     std::int64_t state_cap) {
  const auto d = static_cast<int>(directions.size());
  if (x.size() != d) throw InputError("ball centre has the wrong dimension");
  if (!(delta > 0.0)) throw InputError("dynamic-program route needs a positive radius");
  check_potential(sft, f);
  int depth = std::max(f.depth(), 2);
  for (const auto& g : directions) {
    check_potential(sft, g);
    depth = std::max(depth, g.depth());
  }
  if (n < depth) throw InputError("word length is below the potential depth");
  // Depth >= 2 lets every word carry its first depth-1 symbols as a head;
  // lifting does not change periodic Birkhoff sums.
  const Potential base = lift(f, depth);
  std::vector<Potential> dirs;
  for (const auto& g : directions) dirs.push_back(lift(g, depth));

  const int len = depth - 1;
  const int m = sft.alphabet_size();
  const BlockPresentation block(sft, len);
  const double step = delta / 8.0;
  const auto& edges = block.edges();
  const Eigen::VectorXd fe = block.edge_values(base);
  const double shift = fe.size() > 0 ? fe.maxCoeff() : 0.0;
  std::vector<std::vector<std::int64_t>> increment(edges.size(),
                                                   std::vector<std::int64_t>(d));
  for (int k = 0; k < d; ++k) {
    const Eigen::VectorXd v = block.edge_values(dirs[k]);
    for (std::size_t e = 0; e < edges.size(); ++e) increment[e][k] = std::llround(v[e] / step);
  }

  BallDpResult out;
  out.quantization_error = step / 2.0;
  std::unordered_map<DpKey, double, DpKeyHash> layer;
  for (int h = 0; h < block.state_count(); ++h) {
    layer[{h, h, std::vector<std::int64_t>(d, 0)}] = 1.0;
  }
  double log_acc = 0.0;
  for (int pos = len; pos < n; ++pos) {
    std::unordered_map<DpKey, double, DpKeyHash> next;
    for (const auto& [key, w] : layer) {
      for (int e : block.out_edges(key.tail)) {
        DpKey nk{key.head, edges[e].to, key.sums};
        for (int k = 0; k < d; ++k) nk.sums[k] += increment[e][k];
        next[std::move(nk)] += w * std::exp(std::max(fe[e] - shift, -700.0));
      }
    }
    out.peak_states = std::max<std::int64_t>(out.peak_states, next.size());
    if (static_cast<std::int64_t>(next.size()) > state_cap) {
      throw ResourceError("ball DP state", static_cast<std::int64_t>(next.size()), state_cap);
    }
    double top = 0.0;
    for (const auto& kv : next) top = std::max(top, kv.second);
    if (!(top > 0.0)) return {ExtendedReal::MinusInfinity(), out.quantization_error, 0};
    for (auto& kv : next) kv.second /= top;
    log_acc += shift + std::log(top);
    layer = std::move(next);
  }

  const std::int64_t head_span = word_space_size(m, len);
  const std::int64_t window_span = word_space_size(m, len + 1);
  LogSum inside;
  LogSum total;
  Eigen::VectorXd point(d);
  for (const auto& [key, w] : layer) {
    const WordCode joined = block.state_code(key.tail) * head_span + block.state_code(key.head);
    double wrap = 0.0;
    std::vector<std::int64_t> sums = key.sums;
    for (int j = 0; j < len; ++j) {
      const WordCode code = (joined / word_space_size(m, len - 1 - j)) % window_span;
      wrap += base.at(code);
      for (int k = 0; k < d; ++k) sums[k] += std::llround(dirs[k].at(code) / step);
    }
    const double lw = std::log(w) + wrap;
    total.add(lw);
    for (int k = 0; k < d; ++k) point[k] = static_cast<double>(sums[k]) * step / n;
    if (in_ball(point, x, delta)) inside.add(lw);
  }
  if (inside.empty()) {
    out.value = ExtendedReal::MinusInfinity();
  } else {
    out.value = (inside.value() - total.value()) / n;
  }
  return out;
}

ExtendedReal ball_log_probability(const Sft& sft, const Potential& f,
                                  const std::vector<Potential>& directions, int n,
                                  const Eigen::VectorXd& x, double delta, BallRoute route) {
  if (route == BallRoute::kAuto) {
    route = count_words(sft, n) <= kDefaultEnumerationCap ? BallRoute::kEnumeration
                                                          : BallRoute::kDynamicProgram;
  }
  if (route == BallRoute::kEnumeration) {
    return ball_log_probability(PushforwardLaw(EmpiricalLaw(sft, f, n), directions), x, delta);
  }
  return ball_log_probability_dp(sft, f, directions, n, x, delta).value;
}

namespace {

// inf of I over the sup-norm box B(x, delta): projected gradient descent with
// grad I(y) = t*(y), started from the box point nearest the LLN mean.
double box_infimum(const RateFunction& rate, const Eigen::VectorXd& mean,
                   const Eigen::VectorXd& x, double delta) {
  const Eigen::VectorXd lo = x.array() - delta;
  const Eigen::VectorXd hi = x.array() + delta;
  Eigen::VectorXd y = mean.cwiseMax(lo).cwiseMin(hi);
  if ((y - mean).cwiseAbs().maxCoeff() == 0.0) return 0.0;
  ConjugateResult cur = legendre(rate.log_mgf(), y);
  if (!cur.value.is_finite()) return kInf;
  for (int it = 0; it < 100 && y.size() > 1; ++it) {
    bool moved = false;
    for (double eta = 1.0; eta > 1e-12; eta *= 0.5) {
      const Eigen::VectorXd trial = (y - eta * cur.maximizer).cwiseMax(lo).cwiseMin(hi);
      if ((trial - y).cwiseAbs().maxCoeff() < 1e-14) break;
      ConjugateResult r = legendre(rate.log_mgf(), trial);
      if (r.value.is_finite() && r.value.value() < cur.value.value() - 1e-15) {
        y = trial;
        cur = std::move(r);
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  return std::max(cur.value.value(), 0.0);
}

}  // namespace

GartnerReport gartner_audit(const Sft& sft, const Potential& f, const Potential& g,
                            const std::vector<Potential>& directions,
                            const std::vector<int>& n_schedule,
                            const std::vector<Eigen::VectorXd>& x_grid, double delta) {
  if (n_schedule.empty() || x_grid.empty()) throw InputError("audit needs n values and points");
  std::vector<int> schedule = n_schedule;
  std::sort(schedule.begin(), schedule.end());
  const Potential base = f + g;
  const RateFunction rate(sft, base, directions);

  GartnerReport report;
  const LocalData at_zero = local_data(rate.log_mgf(), Eigen::VectorXd::Zero(rate.dimension()));
  report.hypothesis = at_zero.smooth && at_zero.maximizers.size() == 1;
  const Eigen::VectorXd mean = at_zero.vertices.front();

  report.points.resize(x_grid.size());
  std::vector<std::vector<GartnerRow>> rows(x_grid.size());
  std::vector<double> slopes(x_grid.size(), 0.0);
  parallel_for(x_grid.size(), [&](std::size_t i) {
    const Eigen::VectorXd& x = x_grid[i];
    GartnerPoint pt;
    pt.x = x;
    pt.predicted = -box_infimum(rate, mean, x, delta);
    const ConjugateResult at_x = legendre(rate.log_mgf(), x);
    if (at_x.converged && !at_x.boundary && at_x.value.is_finite()) {
      slopes[i] = at_x.maximizer.lpNorm<1>();
    }
    std::vector<double> inv_n;
    std::vector<double> values;
    for (int n : schedule) {
      GartnerRow row{n, x, ball_log_probability(sft, base, directions, n, x, delta),
                     pt.predicted};
      if (row.empirical.is_finite()) {
        inv_n.push_back(1.0 / n);
        values.push_back(row.empirical.value());
      }
      rows[i].push_back(std::move(row));
    }
    // Least squares y = a + b / n on the last three non-empty balls.
    const std::size_t take = std::min<std::size_t>(3, values.size());
    if (take >= 2) {
      const std::size_t start = values.size() - take;
      double ms = 0.0, my = 0.0;
      for (std::size_t j = start; j < values.size(); ++j) {
        ms += inv_n[j];
        my += values[j];
      }
      ms /= take;
      my /= take;
      double sxy = 0.0, sxx = 0.0;
      for (std::size_t j = start; j < values.size(); ++j) {
        sxy += (inv_n[j] - ms) * (values[j] - my);
        sxx += (inv_n[j] - ms) * (inv_n[j] - ms);
      }
      const double b = sxx > 0.0 ? sxy / sxx : 0.0;
      pt.intercept = my - b * ms;
      pt.fitted = std::isfinite(pt.predicted);
      pt.discrepancy = std::abs(pt.intercept - pt.predicted);
    } else {
      pt.discrepancy = kInf;
    }
    report.points[i] = std::move(pt);
  });

  const int n_max = schedule.back();
  report.lipschitz = *std::max_element(slopes.begin(), slopes.end());
  report.tolerance = report.lipschitz * delta + 10.0 * std::log(n_max) / n_max;
  bool all_fitted = true;
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    for (auto& row : rows[i]) report.rows.push_back(std::move(row));
    const auto& pt = report.points[i];
    all_fitted = all_fitted && pt.fitted;
    report.max_discrepancy = std::max(report.max_discrepancy, pt.discrepancy);
  }
  report.pass =
      report.hypothesis && all_fitted && report.max_discrepancy <= report.tolerance;
  return report;
}

}  // namespace thermo
