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

#include "vfatigue/pca.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "json.hpp"
#include "vfatigue/emb_io.h"
#include "vfatigue/error.h"
#include "vfatigue/file_util.h"

namespace vfatigue {

PcaModel::PcaModel(Eigen::VectorXd mean, Eigen::MatrixXd components,
                   Eigen::VectorXd explained_variance)
    : mean_(std::move(mean)),
      components_(std::move(components)),
      explained_variance_(std::move(explained_variance)) {
  if (components_.cols() != mean_.size() ||
      explained_variance_.size() != components_.rows()) {
    throw Error(ErrorCode::kDimMismatch, "inconsistent PCA model shapes");
  }
}

Eigen::MatrixXd PcaModel::Transform(const Eigen::MatrixXd& x) const {
  if (x.cols() != dim()) {
    throw Error(ErrorCode::kDimMismatch,
                "PCA expects " + std::to_string(dim()) + " columns, got " +
                    std::to_string(x.cols()));
  }
  return (x.rowwise() - mean_.transpose()) * components_.transpose();
}

Eigen::MatrixXd PcaModel::Reconstruct(const Eigen::MatrixXd& y) const {
  if (y.cols() != num_components()) {
    throw Error(ErrorCode::kDimMismatch, "reconstruction input has wrong width");
  }
  return (y * components_).rowwise() + mean_.transpose();
}

PcaModel PcaModel::Truncated(Eigen::Index k) const {
  if (k < 1 || k > num_components()) {
    throw Error(ErrorCode::kBadComponentCount,
                "cannot truncate " + std::to_string(num_components()) +
                    " components to " + std::to_string(k));
  }
  return PcaModel(mean_, components_.topRows(k), explained_variance_.head(k));
}

PcaModel FitPca(const Eigen::MatrixXd& x, Eigen::Index k) {
  const Eigen::Index m = x.rows();
  const Eigen::Index d = x.cols();
  if (m < 2) {
    throw Error(ErrorCode::kTooFewSamples, "PCA needs at least two samples");
  }
  if (k < 1 || k > std::min(m, d)) {
    throw Error(ErrorCode::kBadComponentCount,
                "k = " + std::to_string(k) + " outside [1, " +
                    std::to_string(std::min(m, d)) + "]");
  }
  if (!x.allFinite()) {
    throw Error(ErrorCode::kInvalidValue, "PCA input has non-finite values");
  }
  Eigen::VectorXd mean = x.colwise().mean().transpose();
  const Eigen::MatrixXd centered = x.rowwise() - mean.transpose();

  // Right singular vectors of the centered data are the covariance
  // eigenvectors; squared singular values / (M-1) are the eigenvalues.
  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const Eigen::MatrixXd& v = svd.matrixV();

  Eigen::MatrixXd components(k, d);
  Eigen::VectorXd variance(k);
  for (Eigen::Index r = 0; r < k; ++r) {
    Eigen::VectorXd axis = v.col(r);
    Eigen::Index pivot = 0;
    for (Eigen::Index j = 1; j < d; ++j) {
      if (std::abs(axis(j)) > std::abs(axis(pivot))) pivot = j;
    }
    if (axis(pivot) < 0.0) axis = -axis;
    components.row(r) = axis.transpose();
    variance(r) = sv(r) * sv(r) / static_cast<double>(m - 1);
  }
  return PcaModel(std::move(mean), std::move(components), std::move(variance));
}

void SavePca(const PcaModel& model, const std::string& emb_path,
             const std::string& json_path) {
  FrameMatrix rows(model.num_components() + 1, model.dim());
  rows.row(0) = model.mean().transpose();
  rows.bottomRows(model.num_components()) = model.components();
  WriteEmbeddings(EmbeddingSequence("pca", "pca", 0, 1.0, 0.0, std::move(rows)),
                  emb_path);
  nlohmann::json sidecar = {
      {"format", "pca-v1"},
      {"dim", model.dim()},
      {"n_components", model.num_components()},
      {"explained_variance",
       std::vector<double>(model.explained_variance().begin(),
                           model.explained_variance().end())}};
  WriteFileAtomic(json_path, sidecar.dump(2) + "\n");
}

PcaModel LoadPca(const std::string& emb_path, const std::string& json_path) {
  const EmbeddingSequence rows = ReadEmbeddings(emb_path);
  std::vector<double> variance;
  Eigen::Index k = 0;
  try {
    const auto sidecar = nlohmann::json::parse(ReadFileBytes(json_path));
    variance = sidecar.at("explained_variance").get<std::vector<double>>();
    k = sidecar.at("n_components").get<Eigen::Index>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormatError,
                "malformed PCA sidecar '" + json_path + "': " + e.what());
  }
  if (rows.num_frames() != k + 1 ||
      static_cast<Eigen::Index>(variance.size()) != k) {
    throw Error(ErrorCode::kFormatError, "PCA files disagree on K");
  }
  return PcaModel(rows.frames().row(0).transpose(),
                  rows.frames().bottomRows(k),
                  Eigen::Map<const Eigen::VectorXd>(variance.data(), k));
}

}  // namespace vfatigue
