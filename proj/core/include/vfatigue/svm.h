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

// Soft-margin RBF support vector machines trained with SMO, plus a
// one-vs-one wrapper for more than two classes.

#ifndef VFATIGUE_SVM_H_
#define VFATIGUE_SVM_H_

#include <array>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace vfatigue {

struct SvmParams {
  double c = 1.0;
  double gamma = 1.0;
  double tol = 1e-3;
  // Iteration budget in epochs; one epoch is M pair updates.
  long max_passes = 10000;
};

// exp(-gamma * ||x - y||^2). Throws kDimMismatch on unequal sizes.
double RbfKernel(const Eigen::Ref<const Eigen::VectorXd>& x,
                 const Eigen::Ref<const Eigen::VectorXd>& y, double gamma);

// out(i, j) = ||a_i - b_j||^2, clamped at zero.
Eigen::MatrixXd SquaredDistances(const Eigen::MatrixXd& a,
                                 const Eigen::MatrixXd& b);

struct DualSolution {
  Eigen::VectorXd alpha;
  double bias = 0.0;
  long iterations = 0;
  bool converged = false;
  // Final maximal KKT violation m(alpha) - M(alpha).
  double violation = 0.0;
};

// Solves max sum(a) - 1/2 a'Qa, 0 <= a <= c, y'a = 0, with Q_ij = y_i y_j K_ij,
// using maximal-violating-pair working sets. y_sign entries are +1 / -1.
// Stops once the violation is <= tol or after max_iterations updates.
DualSolution SolveSvmDual(const Eigen::MatrixXd& kernel,
                          const Eigen::VectorXd& y_sign, double c, double tol,
                          long max_iterations);

class SvmModel {
 public:
  SvmModel() = default;
  SvmModel(Eigen::MatrixXd support_vectors, Eigen::VectorXd dual_coefs,
           double bias, double gamma, std::array<int, 2> classes);

  // f(x) = sum_i dual_coefs_i k(sv_i, x) + bias.
  Eigen::VectorXd DecisionFunction(const Eigen::MatrixXd& x) const;
  // classes[f >= 0 ? 1 : 0]
  std::vector<int> Predict(const Eigen::MatrixXd& x) const;

  const Eigen::MatrixXd& support_vectors() const { return support_vectors_; }
  const Eigen::VectorXd& dual_coefs() const { return dual_coefs_; }
  double bias() const { return bias_; }
  double gamma() const { return gamma_; }
  const std::array<int, 2>& classes() const { return classes_; }
  Eigen::Index dim() const { return support_vectors_.cols(); }

  // Training provenance, carried through serialization.
  double c = 0.0;
  double tol = 0.0;
  bool converged = true;  // false means the iteration budget ran out
  long iterations = 0;

 private:
  Eigen::MatrixXd support_vectors_;
  Eigen::VectorXd dual_coefs_;
  double bias_ = 0.0;
  double gamma_ = 1.0;
  std::array<int, 2> classes_ = {0, 1};
};

// labels must contain exactly two distinct values (kDegenerateLabels for
// one); the larger value is the positive class.
SvmModel TrainSvm(const Eigen::MatrixXd& x, std::span<const int> labels,
                  const SvmParams& params);

// Builds the model for a dual solution computed on rows x.
SvmModel ModelFromDual(const Eigen::MatrixXd& x, const Eigen::VectorXd& y_sign,
                       const DualSolution& solution, double gamma,
                       std::array<int, 2> classes);

// Container: "SVMC", u32 version, u32 J, J bytes of JSON header (gamma, bias,
// classes, c, tol, converged, iterations), an EMB1 block of support vectors,
// u32 S, then S f32 dual coefficients. All integers little-endian.
void SaveSvm(const SvmModel& model, const std::string& path);
SvmModel LoadSvm(const std::string& path);

// Class pairs (a, b), a < b, in lexicographic order.
std::vector<std::pair<int, int>> OvoPairs(int num_classes);

// decisions(i, p) is pair p's decision value for row i (positive favors the
// pair's larger class). Majority vote, ties broken by summed decision
// values, then by smaller class index.
std::vector<int> OvoVote(const Eigen::MatrixXd& decisions, int num_classes);

// One-vs-one classifier; with two classes it wraps a single SvmModel.
class SvmClassifier {
 public:
  SvmClassifier() = default;
  SvmClassifier(int num_classes, std::vector<SvmModel> models);

  static SvmClassifier Train(const Eigen::MatrixXd& x,
                             std::span<const int> labels, int num_classes,
                             const SvmParams& params);

  // Column p holds pair p's decision values.
  Eigen::MatrixXd DecisionValues(const Eigen::MatrixXd& x) const;
  std::vector<int> Predict(const Eigen::MatrixXd& x) const;

  int num_classes() const { return num_classes_; }
  const std::vector<SvmModel>& models() const { return models_; }
  Eigen::Index dim() const;

 private:
  int num_classes_ = 2;
  std::vector<SvmModel> models_;
};

}  // namespace vfatigue

#endif  // VFATIGUE_SVM_H_
