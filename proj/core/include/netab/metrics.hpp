#pragma once

#include <cstddef>
#include <span>

#include "netab/corpus.hpp"
#include "netab/model.hpp"

namespace netab {

/// Binary confusion counts with label 1 (positive) as the positive class.
struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const noexcept { return tp + fp + tn + fn; }
  bool operator==(const ConfusionCounts&) const = default;
};

struct Metrics {
  double accuracy = 0.0;
  double f1_pos = 0.0;
  double f1_neg = 0.0;
  // False when the F1 denominator was zero; the value is then reported as 0.
  bool f1_pos_defined = true;
  bool f1_neg_defined = true;
  ConfusionCounts counts;
};

ConfusionCounts confusion_counts(std::span<const int> predicted, std::span<const int> labels);
Metrics metrics_from_counts(const ConfusionCounts& counts);

/// Scores the clean-head prediction of every example against its label.
/// Throws ValidationError on an empty set.
Metrics evaluate(const NetAbModel& model, const LabeledCorpus& test);

/// Fraction of examples whose clean-head prediction matches the label; 0 for
/// an empty corpus.
double accuracy(const NetAbModel& model, const LabeledCorpus& corpus);

}  // namespace netab
