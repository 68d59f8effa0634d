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

#ifndef VFATIGUE_PCA_H_
#define VFATIGUE_PCA_H_

#include <string>

#include <Eigen/Dense>

namespace vfatigue {

// Centered (not scaled) principal component analysis.
//
// components() holds one principal axis per row, ordered by explained
// variance (sample covariance eigenvalue, 1/(M-1) normalization),
// descending. Each axis is signed so its largest-magnitude entry is
// nonnegative.
class PcaModel {
 public:
  PcaModel() = default;
  PcaModel(Eigen::VectorXd mean, Eigen::MatrixXd components,
           Eigen::VectorXd explained_variance);

  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& components() const { return components_; }
  const Eigen::VectorXd& explained_variance() const {
    return explained_variance_;
  }
  Eigen::Index dim() const { return mean_.size(); }
  Eigen::Index num_components() const { return components_.rows(); }

  // Row i of the result is components * (x_i - mean).
  Eigen::MatrixXd Transform(const Eigen::MatrixXd& x) const;
  Eigen::MatrixXd Reconstruct(const Eigen::MatrixXd& y) const;

  // The leading k axes; identical to fitting with k directly.
  PcaModel Truncated(Eigen::Index k) const;

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd components_;
  Eigen::VectorXd explained_variance_;
};

// Requires M >= 2 and 1 <= k <= min(M, D) (kBadComponentCount otherwise).
// Directions beyond the data's rank come back as an orthonormal completion
// with zero variance.
PcaModel FitPca(const Eigen::MatrixXd& x, Eigen::Index k);

// Mean and components go to an EMB1 file (row 0 = mean, rows 1..K =
// components); explained variances go to a JSON sidecar.
void SavePca(const PcaModel& model, const std::string& emb_path,
             const std::string& json_path);
PcaModel LoadPca(const std::string& emb_path, const std::string& json_path);

}  // namespace vfatigue

#endif  // VFATIGUE_PCA_H_
