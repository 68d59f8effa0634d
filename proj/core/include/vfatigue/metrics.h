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

#ifndef VFATIGUE_METRICS_H_
#define VFATIGUE_METRICS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vfatigue {

// counts[true][predicted].
struct ConfusionMatrix {
  std::vector<std::vector<std::int64_t>> counts;

  int num_classes() const { return static_cast<int>(counts.size()); }
  std::int64_t total() const;
  std::int64_t RowSum(int cls) const;
  std::int64_t ColumnSum(int cls) const;
  // (counts[a][b] + counts[b][a]) / total
  double PairConfusionMass(int a, int b) const;
};

// Undefined ratios (zero denominator) are std::nullopt, never 0.
struct ClassificationReport {
  ConfusionMatrix confusion;
  std::vector<std::optional<double>> precision;
  std::vector<std::optional<double>> recall;
  double accuracy = 0.0;
};

// Throws kLengthMismatch for unequal lengths, kTooFewSamples for empty
// input and kInvalidArgument for labels outside [0, num_classes).
ClassificationReport Score(std::span<const int> y_true,
                           std::span<const int> y_pred, int num_classes);

// Machine-readable report, values rounded to 4 decimals; undefined values
// are null and listed under "undefined".
std::string ReportJson(const ClassificationReport& report,
                       const std::vector<std::string>& class_names);

// Plain-text table with 2-decimal precision/recall per class and accuracy.
std::string ReportTable(const ClassificationReport& report,
                        const std::vector<std::string>& class_names);

// K x K confusion counts with a header row and a leading true-class column.
std::string ConfusionCsv(const ConfusionMatrix& confusion,
                         const std::vector<std::string>& class_names);

}  // namespace vfatigue

#endif  // VFATIGUE_METRICS_H_
