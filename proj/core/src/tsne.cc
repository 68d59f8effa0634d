// Copyright 2026 The vfatigue Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vfatigue/tsne.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "vfatigue/error.h"
#include "vfatigue/pca.h"
#include "vfatigue/svm.h"

namespace vfatigue {

namespace {

constexpr double kEntropyTolBits = 1e-5;
constexpr int kMaxBisectionSteps = 200;

// Entropy in bits of P_j ~ exp(-beta * d_j) over the row, and fills probs.
double RowEntropyBits(const Eigen::VectorXd& shifted, double beta,
                      Eigen::VectorXd* probs) {
  *probs = (-beta * shifted.array()).exp().matrix();
  const double sum = probs->sum();
  *probs /= sum;
  const double nats = std::log(sum) + beta * probs->dot(shifted);
  return nats / std::numbers::ln2;
}

// Student-t kernel 1 / (1 + |y_i - y_j|^2) with a zero diagonal.
Eigen::MatrixXd StudentKernel(const Eigen::MatrixXd& y) {
  Eigen::MatrixXd num = (1.0 + SquaredDistances(y, y).array()).inverse().matrix();
  num.diagonal().setZero();
  return num;
}

// Single pass over the strict lower triangle; p must be symmetric. `num`
// is scratch space kept between calls to avoid N x N reallocation.
void GradientInto(const Eigen::MatrixXd& p, double exaggeration,
                  const Eigen::MatrixXd& y, Eigen::MatrixXd* num,
                  Eigen::MatrixXd* grad) {
  const Eigen::Index n = y.rows();
  const Eigen::Index dims = y.cols();
  num->resize(n, n);
  double z = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double d = 0.0;
      for (Eigen::Index c = 0; c < dims; ++c) {
        const double diff = y(i, c) - y(j, c);
        d += diff * diff;
      }
      const double v = 1.0 / (1.0 + d);
      (*num)(i, j) = v;
      z += 2.0 * v;
    }
  }
  grad->setZero(n, dims);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double v = (*num)(i, j);
      const double w = (exaggeration * p(i, j) - v / z) * v;
      for (Eigen::Index c = 0; c < dims; ++c) {
        const double step = w * (y(i, c) - y(j, c));
        (*grad)(i, c) += step;
        (*grad)(j, c) -= step;
      }
    }
  }
  *grad *= 4.0;
}

}  // namespace

void TsneConfig::Validate(Eigen::Index n) const {
  if (n < 4) {
    throw Error(ErrorCode::kTooFewPoints,
                "t-SNE needs >= 4 points, got " + std::to_string(n));
  }
  if (!(perplexity > 0.0) || out_dims < 1 || iterations < 0 ||
      !(learning_rate > 0.0) || !(early_exaggeration > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid t-SNE configuration");
  }
  if (!(perplexity < static_cast<double>(n - 1) / 3.0)) {
    throw Error(ErrorCode::kPerplexityTooLarge,
                "perplexity " + std::to_string(perplexity) +
                    " needs more than " +
                    std::to_string(static_cast<long>(3 * perplexity + 1)) +
                    " points, got " + std::to_string(n));
  }
}

Affinities ComputeAffinities(const Eigen::MatrixXd& x, double perplexity) {
  const Eigen::Index n = x.rows();
  const double target = std::log2(perplexity);
  Eigen::MatrixXd dist = SquaredDistances(x, x);

  Affinities out;
  out.entropy_bits.resize(n);
  out.beta.resize(n);
  Eigen::MatrixXd conditional = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd shifted(n - 1);
  Eigen::VectorXd probs;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0, k = 0; j < n; ++j) {
      if (j != i) shifted(k++) = dist(i, j);
    }
    shifted.array() -= shifted.minCoeff();
    const double mean = shifted.mean();
    double lo = 0.0;
    double hi = mean > 0.0 ? 1.0 / mean : 1.0;
    double h = RowEntropyBits(shifted, hi, &probs);
    for (int step = 0; h > target && step < 1100; ++step) {
      lo = hi;
      hi *= 2.0;
      h = RowEntropyBits(shifted, hi, &probs);
    }
    double beta = hi;
    for (int step = 0; std::abs(h - target) > kEntropyTolBits &&
                       step < kMaxBisectionSteps;
         ++step) {
      beta = 0.5 * (lo + hi);
      h = RowEntropyBits(shifted, beta, &probs);
      (h > target ? lo : hi) = beta;
    }
    out.beta(i) = beta;
    out.entropy_bits(i) = h;
    for (Eigen::Index j = 0, k = 0; j < n; ++j) {
      if (j != i) conditional(i, j) = probs(k++);
    }
  }
  out.p = (conditional + conditional.transpose()) / (2.0 * static_cast<double>(n));
  return out;
}

double KlDivergence(const Eigen::MatrixXd& p, const Eigen::MatrixXd& y) {
  const Eigen::MatrixXd num = StudentKernel(y);
  const double z = num.sum();
  double kl = 0.0;
  for (Eigen::Index j = 0; j < p.cols(); ++j) {
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
      const double pij = p(i, j);
      if (i == j || pij <= 0.0) continue;
      kl += pij * std::log(pij * z / num(i, j));
    }
  }
  return kl;
}

Eigen::MatrixXd KlGradient(const Eigen::MatrixXd& p, const Eigen::MatrixXd& y) {
  Eigen::MatrixXd num;
  Eigen::MatrixXd grad;
  GradientInto(p, 1.0, y, &num, &grad);
  return grad;
}

TsneResult TsneProject(const Eigen::MatrixXd& x, const TsneConfig& cfg) {
  const Eigen::Index n = x.rows();
  cfg.Validate(n);
  TsneResult result;
  result.affinities = ComputeAffinities(x, cfg.perplexity);
  const Eigen::MatrixXd& p = result.affinities.p;

  const Eigen::Index dims = cfg.out_dims;
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(n, dims);
  const Eigen::Index k = std::min({dims, n, x.cols()});
  const Eigen::MatrixXd lead = FitPca(x, k).Transform(x);
  for (Eigen::Index c = 0; c < k; ++c) {
    const double sd = std::sqrt(lead.col(c).squaredNorm() /
                                static_cast<double>(n));
    if (sd > 0.0) y.col(c) = lead.col(c) * (1e-4 / sd);
  }
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> jitter(0.0, 1e-6);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index c = 0; c < dims; ++c) y(i, c) += jitter(rng);
  }
  y.rowwise() -= y.colwise().mean();

  result.kl_initial = KlDivergence(p, y);
  Eigen::MatrixXd update = Eigen::MatrixXd::Zero(n, dims);
  Eigen::MatrixXd gains = Eigen::MatrixXd::Ones(n, dims);
  Eigen::MatrixXd num;
  Eigen::MatrixXd grad;
  for (int it = 0; it < cfg.iterations; ++it) {
    const double exaggeration =
        it < cfg.exaggeration_iterations ? cfg.early_exaggeration : 1.0;
    const double momentum = it < cfg.momentum_switch_iteration
                                ? cfg.initial_momentum
                                : cfg.final_momentum;
    GradientInto(p, exaggeration, y, &num, &grad);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index c = 0; c < dims; ++c) {
        const bool same_sign = (grad(i, c) > 0.0) == (update(i, c) > 0.0);
        gains(i, c) = same_sign ? gains(i, c) * 0.8 : gains(i, c) + 0.2;
        gains(i, c) = std::max(gains(i, c), 0.01);
      }
    }
    update = momentum * update -
             cfg.learning_rate * gains.cwiseProduct(grad);
    if (cfg.max_step_norm > 0.0) {
      for (Eigen::Index i = 0; i < n; ++i) {
        const double norm = update.row(i).norm();
        if (norm > cfg.max_step_norm) update.row(i) *= cfg.max_step_norm / norm;
      }
    }
    y += update;
    y.rowwise() -= y.colwise().mean();
  }
  result.kl_final = KlDivergence(p, y);
  result.embedding = std::move(y);
  return result;
}

}  // namespace vfatigue
