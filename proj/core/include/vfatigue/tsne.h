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

// Exact (O(N^2)) t-SNE.

#ifndef VFATIGUE_TSNE_H_
#define VFATIGUE_TSNE_H_

#include <cstdint>

#include <Eigen/Dense>

namespace vfatigue {

struct TsneConfig {
  double perplexity = 30.0;
  int out_dims = 2;
  int iterations = 1000;
  double learning_rate = 200.0;
  double early_exaggeration = 12.0;
  int exaggeration_iterations = 250;
  double initial_momentum = 0.5;
  double final_momentum = 0.8;
  int momentum_switch_iteration = 250;
  // Per-point update vectors longer than this are rescaled to it; keeps a
  // point with a large accumulated gain from being thrown across the map.
  // Nonpositive disables clipping.
  double max_step_norm = 5.0;
  std::uint64_t seed = 0;

  // Throws kTooFewPoints for n < 4, kPerplexityTooLarge unless
  // perplexity < (n - 1) / 3, kInvalidArgument for nonpositive settings.
  void Validate(Eigen::Index n) const;
};

struct Affinities {
  // Symmetric joint probabilities, zero diagonal, total mass 1.
  Eigen::MatrixXd p;
  // Per-point Shannon entropy (bits) of the calibrated conditional P_{.|i}.
  Eigen::VectorXd entropy_bits;
  // Calibrated precision 1 / (2 sigma_i^2) per point.
  Eigen::VectorXd beta;
};

// Finds beta_i by bisection so that H(P_{.|i}) = log2(perplexity) within
// 1e-5 bits, then symmetrizes P = (P_{j|i} + P_{i|j}) / (2N).
Affinities ComputeAffinities(const Eigen::MatrixXd& x, double perplexity);

// KL(P || Q) for a Student-t (one degree of freedom) Q induced by y.
double KlDivergence(const Eigen::MatrixXd& p, const Eigen::MatrixXd& y);

// dKL/dy, one row per point.
Eigen::MatrixXd KlGradient(const Eigen::MatrixXd& p, const Eigen::MatrixXd& y);

struct TsneResult {
  Eigen::MatrixXd embedding;  // N x out_dims, column means zero
  double kl_initial = 0.0;
  double kl_final = 0.0;
  Affinities affinities;
};

// Initialization is the leading PCA coordinates scaled to standard
// deviation 1e-4 plus seeded Gaussian jitter of 1e-6. Deterministic given
// (x, cfg).
TsneResult TsneProject(const Eigen::MatrixXd& x, const TsneConfig& cfg);

}  // namespace vfatigue

#endif  // VFATIGUE_TSNE_H_
