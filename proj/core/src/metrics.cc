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

#include "vfatigue/metrics.h"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "vfatigue/error.h"

namespace vfatigue {

namespace {

double Round4(double v) { return std::round(v * 1e4) / 1e4; }

nlohmann::json Rounded(const std::optional<double>& v) {
  return v ? nlohmann::json(Round4(*v)) : nlohmann::json(nullptr);
}

std::string Fixed2(const std::optional<double>& v) {
  if (!v) return "  n/a";
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%5.2f", *v);
  return buf;
}

}  // namespace

std::int64_t ConfusionMatrix::total() const {
  std::int64_t sum = 0;
  for (const auto& row : counts) {
    for (std::int64_t v : row) sum += v;
  }
  return sum;
}

std::int64_t ConfusionMatrix::RowSum(int cls) const {
  std::int64_t sum = 0;
  for (std::int64_t v : counts[static_cast<std::size_t>(cls)]) sum += v;
  return sum;
}

std::int64_t ConfusionMatrix::ColumnSum(int cls) const {
  std::int64_t sum = 0;
  for (const auto& row : counts) sum += row[static_cast<std::size_t>(cls)];
  return sum;
}

double ConfusionMatrix::PairConfusionMass(int a, int b) const {
  const auto ua = static_cast<std::size_t>(a);
  const auto ub = static_cast<std::size_t>(b);
  return static_cast<double>(counts[ua][ub] + counts[ub][ua]) /
         static_cast<double>(total());
}

ClassificationReport Score(std::span<const int> y_true,
                           std::span<const int> y_pred, int num_classes) {
  if (y_true.size() != y_pred.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "y_true has " + std::to_string(y_true.size()) +
                    " entries, y_pred has " + std::to_string(y_pred.size()));
  }
  if (y_true.empty()) {
    throw Error(ErrorCode::kTooFewSamples, "nothing to score");
  }
  const auto k = static_cast<std::size_t>(num_classes);
  ClassificationReport report;
  report.confusion.counts.assign(k, std::vector<std::int64_t>(k, 0));
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if (y_true[i] < 0 || y_true[i] >= num_classes || y_pred[i] < 0 ||
        y_pred[i] >= num_classes) {
      throw Error(ErrorCode::kInvalidArgument, "label outside class range");
    }
    ++report.confusion.counts[static_cast<std::size_t>(y_true[i])]
                             [static_cast<std::size_t>(y_pred[i])];
  }
  std::int64_t trace = 0;
  for (int c = 0; c < num_classes; ++c) {
    const auto diag = report.confusion.counts[static_cast<std::size_t>(c)]
                                             [static_cast<std::size_t>(c)];
    trace += diag;
    const std::int64_t col = report.confusion.ColumnSum(c);
    const std::int64_t row = report.confusion.RowSum(c);
    report.precision.push_back(
        col > 0 ? std::optional<double>(static_cast<double>(diag) /
                                        static_cast<double>(col))
                : std::nullopt);
    report.recall.push_back(
        row > 0 ? std::optional<double>(static_cast<double>(diag) /
                                        static_cast<double>(row))
                : std::nullopt);
  }
  report.accuracy = static_cast<double>(trace) /
                    static_cast<double>(report.confusion.total());
  return report;
}

std::string ReportJson(const ClassificationReport& report,
                       const std::vector<std::string>& class_names) {
  nlohmann::json precision = nlohmann::json::object();
  nlohmann::json recall = nlohmann::json::object();
  nlohmann::json undefined = nlohmann::json::array();
  for (std::size_t c = 0; c < report.precision.size(); ++c) {
    precision[class_names[c]] = Rounded(report.precision[c]);
    recall[class_names[c]] = Rounded(report.recall[c]);
    if (!report.precision[c]) undefined.push_back("precision_" + class_names[c]);
    if (!report.recall[c]) undefined.push_back("recall_" + class_names[c]);
  }
  nlohmann::json doc = {{"classes", class_names},
                        {"n_samples", report.confusion.total()},
                        {"accuracy", Round4(report.accuracy)},
                        {"precision", precision},
                        {"recall", recall},
                        {"undefined", undefined},
                        {"confusion", report.confusion.counts}};
  return doc.dump(2) + "\n";
}

std::string ReportTable(const ClassificationReport& report,
                        const std::vector<std::string>& class_names) {
  std::ostringstream out;
  for (const std::string& name : class_names) out << "Prec " << name << " | ";
  for (const std::string& name : class_names) out << "Rec " << name << " | ";
  out << "Acc.\n";
  for (std::size_t c = 0; c < class_names.size(); ++c) {
    out << Fixed2(report.precision[c]) << " | ";
  }
  for (std::size_t c = 0; c < class_names.size(); ++c) {
    out << Fixed2(report.recall[c]) << " | ";
  }
  out << Fixed2(report.accuracy) << "\n";
  return out.str();
}

std::string ConfusionCsv(const ConfusionMatrix& confusion,
                         const std::vector<std::string>& class_names) {
  std::ostringstream out;
  out << "true\\pred";
  for (const std::string& name : class_names) out << ',' << name;
  out << '\n';
  for (std::size_t r = 0; r < confusion.counts.size(); ++r) {
    out << class_names[r];
    for (std::int64_t v : confusion.counts[r]) out << ',' << v;
    out << '\n';
  }
  return out.str();
}

}  // namespace vfatigue
