#include <cmath>
#include <stdexcept>
#include <string>

#include "regretlab/learners.hpp"

namespace regretlab {

std::string_view algorithm_id(Algorithm algo) {
  switch (algo) {
    case Algorithm::Ucb: return "ucb";
    case Algorithm::Ulcb: return "ulcb";
    case Algorithm::Amb: return "amb";
    case Algorithm::RefinedAmb: return "ramb";
    case Algorithm::Oracle: return "oracle";
  }
  return "unknown";
}

std::string_view algorithm_label(Algorithm algo) {
  switch (algo) {
    case Algorithm::Ucb: return "UCB-Hoeffding";
    case Algorithm::Ulcb: return "ULCB-Hoeffding";
    case Algorithm::Amb: return "AMB";
    case Algorithm::RefinedAmb: return "Refined AMB";
    case Algorithm::Oracle: return "Oracle";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view id) {
  for (Algorithm a : {Algorithm::Ucb, Algorithm::Ulcb, Algorithm::Amb, Algorithm::RefinedAmb, Algorithm::Oracle}) {
    if (algorithm_id(a) == id) return a;
  }
  throw std::invalid_argument("unknown algorithm '" + std::string(id) + "' (expected ucb, ulcb, amb, ramb or oracle)");
}

double IotaMode::resolve(int S, int A, double T) const {
  if (kind == Kind::Constant) return value;
  return std::log(2.0 * S * A * T / value);
}

LearnerConfig LearnerConfig::theoretical(Algorithm algo, double p) {
  return {IotaMode::theoretical(p), algo == Algorithm::Amb ? 4.0 : 2.0, TieBreak::LowestIndex};
}

LearnerConfig LearnerConfig::experimental(Algorithm algo) {
  return {IotaMode::constant(1.0), algo == Algorithm::Amb ? 2.0 : 1.0, TieBreak::LowestIndex};
}

void LearnerConfig::validate() const {
  if (!(bonus_c > 0.0)) {
    throw std::invalid_argument("bonus coefficient must be positive");
  }
  if (iota.kind == IotaMode::Kind::Theoretical && !(iota.value > 0.0 && iota.value < 1.0)) {
    throw std::invalid_argument("failure probability p must lie in (0,1)");
  }
  if (iota.kind == IotaMode::Kind::Constant && !(iota.value > 0.0)) {
    throw std::invalid_argument("constant iota must be positive");
  }
}

double eta(int t, int H) {
  if (t < 1) {
    throw std::invalid_argument("eta: t must be >= 1");
  }
  return static_cast<double>(H + 1) / static_cast<double>(H + t);
}

std::vector<double> eta_weights(int N, int H) {
  if (N < 0) {
    throw std::invalid_argument("eta_weights: N must be >= 0");
  }
  std::vector<double> w(static_cast<std::size_t>(N));
  double tail = 1.0;  // prod_{j>i} (1 - eta_j)
  for (int i = N; i >= 1; --i) {
    const double e = eta(i, H);
    w[static_cast<std::size_t>(i - 1)] = e * tail;
    tail *= 1.0 - e;
  }
  return w;
}

double bonus(int n, int H, double iota, double c) {
  if (n < 1) {
    throw std::invalid_argument("bonus: visit count must be >= 1");
  }
  if (!(iota > 0.0) || !(c > 0.0)) {
    throw std::invalid_argument("bonus: iota and c must be positive");
  }
  const double h = H;
  return c * std::sqrt(h * h * h * iota / n);
}

}  // namespace regretlab
