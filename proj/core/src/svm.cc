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

#include "vfatigue/svm.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <set>

#include "json.hpp"
#include "vfatigue/emb_io.h"
#include "vfatigue/error.h"
#include "vfatigue/file_util.h"

namespace vfatigue {

namespace {

constexpr double kTau = 1e-12;
constexpr char kSvmMagic[4] = {'S', 'V', 'M', 'C'};
constexpr std::uint32_t kSvmFormatVersion = 1;

bool InUp(double y, double a, double c) {
  return (y > 0 && a < c) || (y < 0 && a > 0);
}

bool InLow(double y, double a, double c) {
  return (y > 0 && a > 0) || (y < 0 && a < c);
}

struct Violators {
  Eigen::Index up = -1;
  Eigen::Index low = -1;
  double up_value = -std::numeric_limits<double>::infinity();
  double low_value = std::numeric_limits<double>::infinity();
};

// Maximal violating pair over r_t = -y_t * G_t.
Violators SelectPair(const Eigen::VectorXd& y, const Eigen::VectorXd& alpha,
                     const Eigen::VectorXd& grad, double c) {
  Violators v;
  for (Eigen::Index t = 0; t < y.size(); ++t) {
    const double r = -y(t) * grad(t);
    if (InUp(y(t), alpha(t), c) && r > v.up_value) {
      v.up_value = r;
      v.up = t;
    }
    if (InLow(y(t), alpha(t), c) && r < v.low_value) {
      v.low_value = r;
      v.low = t;
    }
  }
  return v;
}

Eigen::MatrixXd RbfFromDistances(const Eigen::MatrixXd& sq_dist, double gamma) {
  return (-gamma * sq_dist.array()).exp().matrix();
}

}  // namespace

double RbfKernel(const Eigen::Ref<const Eigen::VectorXd>& x,
                 const Eigen::Ref<const Eigen::VectorXd>& y, double gamma) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::kDimMismatch, "kernel arguments differ in size");
  }
  return std::exp(-gamma * (x - y).squaredNorm());
}

Eigen::MatrixXd SquaredDistances(const Eigen::MatrixXd& a,
                                 const Eigen::MatrixXd& b) {
  if (a.cols() != b.cols()) {
    throw Error(ErrorCode::kDimMismatch, "distance arguments differ in width");
  }
  const Eigen::VectorXd a_sq = a.rowwise().squaredNorm();
  const Eigen::VectorXd b_sq = b.rowwise().squaredNorm();
  Eigen::MatrixXd out = -2.0 * (a * b.transpose());
  out.colwise() += a_sq;
  out.rowwise() += b_sq.transpose();
  return out.cwiseMax(0.0);
}

DualSolution SolveSvmDual(const Eigen::MatrixXd& kernel,
                          const Eigen::VectorXd& y_sign, double c, double tol,
                          long max_iterations) {
  const Eigen::Index n = y_sign.size();
  if (kernel.rows() != n || kernel.cols() != n) {
    throw Error(ErrorCode::kDimMismatch, "kernel/label size mismatch");
  }
  if (!(c > 0.0) || !(tol > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "c and tol must be positive");
  }
  DualSolution sol;
  sol.alpha = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd& alpha = sol.alpha;
  // Gradient of 1/2 a'Qa - e'a.
  Eigen::VectorXd grad = Eigen::VectorXd::Constant(n, -1.0);

  Violators v;
  for (;;) {
    v = SelectPair(y_sign, alpha, grad, c);
    sol.violation = v.up < 0 || v.low < 0 ? 0.0 : v.up_value - v.low_value;
    if (sol.violation <= tol) {
      sol.converged = true;
      break;
    }
    if (sol.iterations >= max_iterations) break;
    ++sol.iterations;

    const Eigen::Index i = v.up;
    const Eigen::Index j = v.low;
    const double yi = y_sign(i);
    const double yj = y_sign(j);
    const double kii = kernel(i, i);
    const double kjj = kernel(j, j);
    const double qij = yi * yj * kernel(i, j);
    const double old_ai = alpha(i);
    const double old_aj = alpha(j);
    double ai = old_ai;
    double aj = old_aj;

    if (yi != yj) {
      double quad = kii + kjj + 2.0 * qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad(i) - grad(j)) / quad;
      const double diff = ai - aj;
      ai += delta;
      aj += delta;
      if (diff > 0.0) {
        if (aj < 0.0) {
          aj = 0.0;
          ai = diff;
        }
      } else if (ai < 0.0) {
        ai = 0.0;
        aj = -diff;
      }
      if (diff > 0.0) {
        if (ai > c) {
          ai = c;
          aj = c - diff;
        }
      } else if (aj > c) {
        aj = c;
        ai = c + diff;
      }
    } else {
      double quad = kii + kjj - 2.0 * qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad(i) - grad(j)) / quad;
      const double sum = ai + aj;
      ai -= delta;
      aj += delta;
      if (sum > c) {
        if (ai > c) {
          ai = c;
          aj = sum - c;
        }
      } else if (aj < 0.0) {
        aj = 0.0;
        ai = sum;
      }
      if (sum > c) {
        if (aj > c) {
          aj = c;
          ai = sum - c;
        }
      } else if (ai < 0.0) {
        ai = 0.0;
        aj = sum;
      }
    }
    alpha(i) = ai;
    alpha(j) = aj;
    const double di = (ai - old_ai) * yi;
    const double dj = (aj - old_aj) * yj;
    grad.array() += y_sign.array() *
                    (kernel.col(i).array() * di + kernel.col(j).array() * dj);
  }

  // Bias: mean of r over free vectors, else the middle of [m, M].
  double free_sum = 0.0;
  Eigen::Index free_count = 0;
  for (Eigen::Index t = 0; t < n; ++t) {
    if (alpha(t) > 0.0 && alpha(t) < c) {
      free_sum += -y_sign(t) * grad(t);
      ++free_count;
    }
  }
  if (free_count > 0) {
    sol.bias = free_sum / static_cast<double>(free_count);
  } else {
    sol.bias = 0.5 * (v.up_value + v.low_value);
  }
  return sol;
}

SvmModel::SvmModel(Eigen::MatrixXd support_vectors, Eigen::VectorXd dual_coefs,
                   double bias, double gamma, std::array<int, 2> classes)
    : support_vectors_(std::move(support_vectors)),
      dual_coefs_(std::move(dual_coefs)),
      bias_(bias),
      gamma_(gamma),
      classes_(classes) {
  if (support_vectors_.rows() != dual_coefs_.size()) {
    throw Error(ErrorCode::kDimMismatch, "support vector / coefficient count");
  }
  if (!(gamma_ > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "gamma must be positive");
  }
}

Eigen::VectorXd SvmModel::DecisionFunction(const Eigen::MatrixXd& x) const {
  if (x.cols() != dim()) {
    throw Error(ErrorCode::kDimMismatch,
                "SVM expects " + std::to_string(dim()) + " features, got " +
                    std::to_string(x.cols()));
  }
  if (support_vectors_.rows() == 0) {
    return Eigen::VectorXd::Constant(x.rows(), bias_);
  }
  const Eigen::MatrixXd k =
      RbfFromDistances(SquaredDistances(x, support_vectors_), gamma_);
  return (k * dual_coefs_).array() + bias_;
}

std::vector<int> SvmModel::Predict(const Eigen::MatrixXd& x) const {
  const Eigen::VectorXd f = DecisionFunction(x);
  std::vector<int> out(static_cast<std::size_t>(f.size()));
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    out[static_cast<std::size_t>(i)] = classes_[f(i) >= 0.0 ? 1 : 0];
  }
  return out;
}

SvmModel ModelFromDual(const Eigen::MatrixXd& x, const Eigen::VectorXd& y_sign,
                       const DualSolution& solution, double gamma,
                       std::array<int, 2> classes) {
  std::vector<Eigen::Index> sv;
  for (Eigen::Index t = 0; t < solution.alpha.size(); ++t) {
    if (solution.alpha(t) > 0.0) sv.push_back(t);
  }
  Eigen::MatrixXd vectors(static_cast<Eigen::Index>(sv.size()), x.cols());
  Eigen::VectorXd coefs(static_cast<Eigen::Index>(sv.size()));
  for (std::size_t k = 0; k < sv.size(); ++k) {
    const auto r = static_cast<Eigen::Index>(k);
    vectors.row(r) = x.row(sv[k]);
    coefs(r) = solution.alpha(sv[k]) * y_sign(sv[k]);
  }
  SvmModel model(std::move(vectors), std::move(coefs), solution.bias, gamma,
                 classes);
  model.converged = solution.converged;
  model.iterations = solution.iterations;
  return model;
}

SvmModel TrainSvm(const Eigen::MatrixXd& x, std::span<const int> labels,
                  const SvmParams& params) {
  if (static_cast<Eigen::Index>(labels.size()) != x.rows()) {
    throw Error(ErrorCode::kLengthMismatch, "labels and rows differ in count");
  }
  const std::set<int> distinct(labels.begin(), labels.end());
  if (distinct.size() < 2) {
    throw Error(ErrorCode::kDegenerateLabels,
                "SVM training needs both classes present");
  }
  if (distinct.size() > 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "binary SVM given more than two classes");
  }
  if (!(params.gamma > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "gamma must be positive");
  }
  const std::array<int, 2> classes = {*distinct.begin(), *distinct.rbegin()};
  Eigen::VectorXd y(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    y(i) = labels[static_cast<std::size_t>(i)] == classes[1] ? 1.0 : -1.0;
  }
  Eigen::MatrixXd sq = SquaredDistances(x, x);
  sq.diagonal().setZero();
  const Eigen::MatrixXd kernel = RbfFromDistances(sq, params.gamma);
  const DualSolution sol = SolveSvmDual(kernel, y, params.c, params.tol,
                                        params.max_passes * x.rows());
  SvmModel model = ModelFromDual(x, y, sol, params.gamma, classes);
  model.c = params.c;
  model.tol = params.tol;
  return model;
}

void SaveSvm(const SvmModel& model, const std::string& path) {
  const nlohmann::json header = {
      {"gamma", model.gamma()},
      {"bias", model.bias()},
      {"classes", {model.classes()[0], model.classes()[1]}},
      {"c", model.c},
      {"tol", model.tol},
      {"converged", model.converged},
      {"iterations", model.iterations},
      {"n_support", model.support_vectors().rows()},
      {"dim", model.dim()}};
  const std::string json_text = header.dump();
  std::string out(kSvmMagic, 4);
  AppendU32(&out, kSvmFormatVersion);
  AppendU32(&out, static_cast<std::uint32_t>(json_text.size()));
  out += json_text;
  if (model.support_vectors().rows() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "model has no support vectors");
  }
  out += EncodeEmbeddings(EmbeddingSequence(
      "svm", "svm", 0, 1.0, 0.0, FrameMatrix(model.support_vectors())));
  AppendU32(&out, static_cast<std::uint32_t>(model.dual_coefs().size()));
  for (Eigen::Index i = 0; i < model.dual_coefs().size(); ++i) {
    AppendF32(&out, static_cast<float>(model.dual_coefs()(i)));
  }
  WriteFileAtomic(path, out);
}

SvmModel LoadSvm(const std::string& path) {
  const std::string bytes = ReadFileBytes(path);
  if (bytes.size() < 12 || std::memcmp(bytes.data(), kSvmMagic, 4) != 0) {
    throw Error(ErrorCode::kFormatError, "'" + path + "' is not an SVM file");
  }
  if (LoadU32(bytes.data() + 4) != kSvmFormatVersion) {
    throw Error(ErrorCode::kFormatError, "unsupported SVM container version");
  }
  const std::size_t json_len = LoadU32(bytes.data() + 8);
  if (bytes.size() < 12 + json_len) {
    throw Error(ErrorCode::kTruncatedFile, "SVM header truncated");
  }
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.substr(12, json_len));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormatError, std::string("SVM header: ") + e.what());
  }
  std::size_t pos = 12 + json_len;
  std::size_t consumed = 0;
  const EmbeddingSequence sv =
      DecodeEmbeddings(std::string_view(bytes).substr(pos), &consumed);
  pos += consumed;
  if (bytes.size() < pos + 4) {
    throw Error(ErrorCode::kTruncatedFile, "SVM coefficients missing");
  }
  const std::uint32_t s = LoadU32(bytes.data() + pos);
  pos += 4;
  if (s != sv.num_frames()) {
    throw Error(ErrorCode::kFormatError, "coefficient count mismatch");
  }
  if (bytes.size() < pos + 4ULL * s) {
    throw Error(ErrorCode::kTruncatedFile, "SVM coefficients truncated");
  }
  Eigen::VectorXd coefs(s);
  for (std::uint32_t i = 0; i < s; ++i) {
    coefs(i) = LoadF32(bytes.data() + pos + 4ULL * i);
  }
  try {
    const auto classes = header.at("classes").get<std::vector<int>>();
    if (classes.size() != 2) {
      throw Error(ErrorCode::kFormatError, "SVM must list two classes");
    }
    SvmModel model(sv.frames(), std::move(coefs), header.at("bias").get<double>(),
                   header.at("gamma").get<double>(), {classes[0], classes[1]});
    model.c = header.at("c").get<double>();
    model.tol = header.at("tol").get<double>();
    model.converged = header.at("converged").get<bool>();
    model.iterations = header.at("iterations").get<long>();
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormatError, std::string("SVM header: ") + e.what());
  }
}

std::vector<std::pair<int, int>> OvoPairs(int num_classes) {
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < num_classes; ++a) {
    for (int b = a + 1; b < num_classes; ++b) pairs.emplace_back(a, b);
  }
  return pairs;
}

std::vector<int> OvoVote(const Eigen::MatrixXd& decisions, int num_classes) {
  const auto pairs = OvoPairs(num_classes);
  if (decisions.cols() != static_cast<Eigen::Index>(pairs.size())) {
    throw Error(ErrorCode::kDimMismatch, "decision matrix has wrong width");
  }
  std::vector<int> out(static_cast<std::size_t>(decisions.rows()));
  std::vector<int> votes(static_cast<std::size_t>(num_classes));
  std::vector<double> score(static_cast<std::size_t>(num_classes));
  for (Eigen::Index i = 0; i < decisions.rows(); ++i) {
    std::fill(votes.begin(), votes.end(), 0);
    std::fill(score.begin(), score.end(), 0.0);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      const double f = decisions(i, static_cast<Eigen::Index>(p));
      const auto [a, b] = pairs[p];
      ++votes[static_cast<std::size_t>(f >= 0.0 ? b : a)];
      score[static_cast<std::size_t>(b)] += f;
      score[static_cast<std::size_t>(a)] -= f;
    }
    int best = 0;
    for (int k = 1; k < num_classes; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      const auto ub = static_cast<std::size_t>(best);
      if (votes[uk] > votes[ub] ||
          (votes[uk] == votes[ub] && score[uk] > score[ub])) {
        best = k;
      }
    }
    out[static_cast<std::size_t>(i)] = best;
  }
  return out;
}

SvmClassifier::SvmClassifier(int num_classes, std::vector<SvmModel> models)
    : num_classes_(num_classes), models_(std::move(models)) {
  if (models_.size() != OvoPairs(num_classes).size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "one-vs-one classifier needs one model per class pair");
  }
}

SvmClassifier SvmClassifier::Train(const Eigen::MatrixXd& x,
                                   std::span<const int> labels,
                                   int num_classes, const SvmParams& params) {
  std::vector<SvmModel> models;
  for (const auto& [a, b] : OvoPairs(num_classes)) {
    std::vector<Eigen::Index> rows;
    std::vector<int> pair_labels;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == a || labels[i] == b) {
        rows.push_back(static_cast<Eigen::Index>(i));
        pair_labels.push_back(labels[i]);
      }
    }
    const std::set<int> present(pair_labels.begin(), pair_labels.end());
    if (present.size() < 2) {
      throw Error(ErrorCode::kDegenerateLabels,
                  "class pair (" + std::to_string(a) + ", " +
                      std::to_string(b) + ") lacks one of its classes");
    }
    models.push_back(TrainSvm(x(rows, Eigen::all), pair_labels, params));
  }
  return SvmClassifier(num_classes, std::move(models));
}

Eigen::MatrixXd SvmClassifier::DecisionValues(const Eigen::MatrixXd& x) const {
  Eigen::MatrixXd out(x.rows(), static_cast<Eigen::Index>(models_.size()));
  for (std::size_t p = 0; p < models_.size(); ++p) {
    out.col(static_cast<Eigen::Index>(p)) = models_[p].DecisionFunction(x);
  }
  return out;
}

std::vector<int> SvmClassifier::Predict(const Eigen::MatrixXd& x) const {
  return OvoVote(DecisionValues(x), num_classes_);
}

Eigen::Index SvmClassifier::dim() const {
  return models_.empty() ? 0 : models_.front().dim();
}

}  // namespace vfatigue
