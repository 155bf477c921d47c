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


#include "thermo/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "thermo/errors.hpp"
#include "thermo/perron.hpp"

namespace thermo {
namespace {

// exp(x - shift) below this exponent would underflow and break the
// irreducibility pattern of a component.
constexpr double kMinExponent = -600.0;

double scaled_exp(double x, double shift) {
  return std::exp(std::max(x - shift, kMinExponent));
}

// Streaming log-sum-exp.
class LogSum {
 public:
  void add(double v) {
    if (v == -std::numeric_limits<double>::infinity()) return;
    if (v > max_) {
      sum_ = sum_ * std::exp(max_ - v) + 1.0;
      max_ = v;
    } else {
      sum_ += std::exp(v - max_);
    }
  }
  double value() const { return max_ + std::log(sum_); }

 private:
  double max_ = -std::numeric_limits<double>::infinity();
  double sum_ = 0.0;
};

MarkovMeasure gibbs_chain(const BlockPresentation& block, const std::vector<int>& states,
                          const Eigen::MatrixXd& a, const PerronSolution<double>& perron) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index u = 0; u < n; ++u) {
    for (Eigen::Index v = 0; v < n; ++v) {
      if (a(u, v) > 0.0) {
        p(u, v) = a(u, v) * perron.right[v] / (perron.eigenvalue * perron.right[u]);
      }
    }
    p.row(u) /= p.row(u).sum();
  }
  std::vector<Word> words;
  for (int s : states) words.push_back(block.state(s));
  Eigen::VectorXd pi = stationary_distribution(p);
  return MarkovMeasure(block.sft().alphabet_size(), block.word_length(), std::move(words),
                       std::move(p), std::move(pi));
}

}  // namespace

TransferMatrix transfer_matrix(const BlockPresentation& block, const Potential& f) {
  const Eigen::VectorXd ev = block.edge_values(f);
  TransferMatrix t;
  t.log_scale = ev.size() > 0 ? ev.maxCoeff() : 0.0;
  t.entries = Eigen::MatrixXd::Zero(block.state_count(), block.state_count());
  for (std::size_t e = 0; e < block.edges().size(); ++e) {
    const auto& edge = block.edges()[e];
    t.entries(edge.from, edge.to) = scaled_exp(ev[e], t.log_scale);
  }
  return t;
}

PressureReport pressure_spectral(const Sft& sft, const Potential& f,
                                 std::int64_t state_cap) {
  check_potential(sft, f);
  const BlockPresentation block(sft, block_length_for_depth(f.depth()), state_cap);
  const Eigen::VectorXd ev = block.edge_values(f);

  struct Solved {
    Eigen::MatrixXd matrix;
    PerronSolution<double> perron;
  };
  std::vector<Solved> solved;
  PressureReport report;
  for (const BlockComponent& comp : block.components()) {
    const auto n = static_cast<Eigen::Index>(comp.states.size());
    std::vector<int> local(block.state_count(), -1);
    for (Eigen::Index i = 0; i < n; ++i) local[comp.states[i]] = static_cast<int>(i);
    double shift = -std::numeric_limits<double>::infinity();
    for (int e : comp.edges) shift = std::max(shift, ev[e]);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int e : comp.edges) {
      const auto& edge = block.edges()[e];
      a(local[edge.from], local[edge.to]) = scaled_exp(ev[e], shift);
    }
    auto perron = perron_solve(a);
    report.per_component.push_back({comp.id, shift + std::log(perron.eigenvalue)});
    solved.push_back({std::move(a), std::move(perron)});
  }
  if (report.per_component.empty()) {
    throw InputError("shift has no nontrivial component");
  }

  report.pressure = -std::numeric_limits<double>::infinity();
  for (const auto& c : report.per_component) {
    report.pressure = std::max(report.pressure, c.log_perron);
  }
  for (std::size_t s = 0; s < solved.size(); ++s) {
    if (report.per_component[s].log_perron < report.pressure - kPressureTieTolerance) continue;
    report.maximizers.push_back(report.per_component[s].component);
    report.equilibrium_states.push_back(gibbs_chain(
        block, block.components()[s].states, solved[s].matrix, solved[s].perron));
  }
  report.unique = report.maximizers.size() == 1;
  return report;
}

double pressure_direct(const Sft& sft, const Potential& f, int n, std::int64_t state_cap) {
  check_potential(sft, f);
  const int k = f.depth();
  if (n < k) {
    throw InputError("word length " + std::to_string(n) + " is below the potential depth " +
                     std::to_string(k));
  }
  const BlockPresentation block(sft, block_length_for_depth(k), state_cap);
  const int states = block.state_count();
  const auto& edges = block.edges();

  if (k == 1) {
    const double shift = f.values().maxCoeff();
    Eigen::VectorXd x(states);
    for (int u = 0; u < states; ++u) x[u] = scaled_exp(f(block.state(u)), shift);
    double log_acc = shift;
    for (int step = 1; step < n; ++step) {
      Eigen::VectorXd y = Eigen::VectorXd::Zero(states);
      for (const auto& e : edges) y[e.to] += x[e.from] * scaled_exp(f(block.state(e.to)), shift);
      const double top = y.maxCoeff();
      x = y / top;
      log_acc += shift + std::log(top);
    }
    return (log_acc + std::log(x.sum())) / n;
  }

  // k >= 2: the first k-1 symbols (head) are fixed, the chain tracks the last
  // k-1 symbols (tail), and the k-1 windows that wrap around are added from
  // the (tail, head) pair at the end.
  const int len = block.word_length();
  const int m = sft.alphabet_size();
  const Eigen::VectorXd ev = block.edge_values(f);
  const double shift = ev.size() > 0 ? ev.maxCoeff() : 0.0;
  Eigen::VectorXd weight(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) weight[e] = scaled_exp(ev[e], shift);
  const std::int64_t head_span = word_space_size(m, len);
  const std::int64_t window_span = word_space_size(m, len + 1);

  LogSum total;
  for (int h = 0; h < states; ++h) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(states);
    x[h] = 1.0;
    double log_acc = 0.0;
    bool alive = true;
    for (int step = len; step < n && alive; ++step) {
      Eigen::VectorXd y = Eigen::VectorXd::Zero(states);
      for (std::size_t e = 0; e < edges.size(); ++e) {
        y[edges[e].to] += x[edges[e].from] * weight[e];
      }
      const double top = y.maxCoeff();
      alive = top > 0.0;
      if (alive) {
        x = y / top;
        log_acc += shift + std::log(top);
      }
    }
    if (!alive) continue;
    for (int t = 0; t < states; ++t) {
      if (x[t] <= 0.0) continue;
      const WordCode joined = block.state_code(t) * head_span + block.state_code(h);
      double wrap = 0.0;
      for (int j = 0; j < len; ++j) {
        wrap += f.at((joined / word_space_size(m, len - 1 - j)) % window_span);
      }
      total.add(log_acc + std::log(x[t]) + wrap);
    }
  }
  return total.value() / n;
}

double pressure_direct_enumerated(const Sft& sft, const Potential& f, int n,
                                  std::int64_t cap) {
  check_potential(sft, f);
  if (n < f.depth()) throw InputError("word length is below the potential depth");
  const std::int64_t count = count_words(sft, n);
  if (count > cap) throw ResourceError("word enumeration", count, cap);
  LogSum total;
  for_each_word(sft, n, [&](std::span<const Symbol> w) { total.add(birkhoff_sum(f, w)); });
  return total.value() / n;
}

DirectionalDerivatives directional_derivatives(const PressureReport& report,
                                               const Potential& g) {
  DirectionalDerivatives d{std::numeric_limits<double>::infinity(),
                           -std::numeric_limits<double>::infinity()};
  for (const auto& mu : report.equilibrium_states) {
    const double v = expectation(mu, g);
    d.left = std::min(d.left, v);
    d.right = std::max(d.right, v);
  }
  return d;
}

DirectionalDerivatives directional_derivatives(const Sft& sft, const Potential& f,
                                               const Potential& g) {
  check_potential(sft, g);
  return directional_derivatives(pressure_spectral(sft, f), g);
}

GateauxReport gateaux_check(const Sft& sft, const Potential& f,
                            const std::vector<Potential>& probes) {
  const PressureReport report = pressure_spectral(sft, f);
  GateauxReport out;
  out.unique = report.unique;
  out.differentiable = report.unique;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    check_potential(sft, probes[i]);
    const auto d = directional_derivatives(report, probes[i]);
    const bool symmetric = d.right - d.left <= kGateauxTolerance;
    out.probes.push_back({d.left, d.right, symmetric});
    if (!symmetric) {
      out.differentiable = false;
      if (out.witness < 0) out.witness = static_cast<int>(i);
    }
  }
  return out;
}

}  // namespace thermo
