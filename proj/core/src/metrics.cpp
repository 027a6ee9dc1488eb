#include "netab/metrics.hpp"

#include <vector>

#include "netab/errors.hpp"

namespace netab {

ConfusionCounts confusion_counts(std::span<const int> predicted, std::span<const int> labels) {
  if (predicted.size() != labels.size()) {
    throw ShapeError("confusion_counts: " + std::to_string(predicted.size()) +
                     " predictions for " + std::to_string(labels.size()) + " labels");
  }
  ConfusionCounts c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool pred_pos = predicted[i] == kPositive;
    const bool true_pos = labels[i] == kPositive;
    if (pred_pos && true_pos) ++c.tp;
    else if (pred_pos) ++c.fp;
    else if (true_pos) ++c.fn;
    else ++c.tn;
  }
  return c;
}

Metrics metrics_from_counts(const ConfusionCounts& c) {
  Metrics m;
  m.counts = c;
  const auto n = c.total();
  m.accuracy = n == 0 ? 0.0 : static_cast<double>(c.tp + c.tn) / static_cast<double>(n);
  const auto pos_den = 2 * c.tp + c.fp + c.fn;
  const auto neg_den = 2 * c.tn + c.fn + c.fp;
  // F1 is undefined for a class with no predicted or no actual members.
  m.f1_pos_defined = c.tp + c.fp > 0 && c.tp + c.fn > 0;
  m.f1_neg_defined = c.tn + c.fn > 0 && c.tn + c.fp > 0;
  m.f1_pos = !m.f1_pos_defined ? 0.0 : static_cast<double>(2 * c.tp) / static_cast<double>(pos_den);
  m.f1_neg = !m.f1_neg_defined ? 0.0 : static_cast<double>(2 * c.tn) / static_cast<double>(neg_den);
  return m;
}

Metrics evaluate(const NetAbModel& model, const LabeledCorpus& test) {
  if (test.empty()) throw ValidationError("evaluate: test set is empty");
  std::vector<int> predicted, labels;
  predicted.reserve(test.size());
  labels.reserve(test.size());
  for (const auto& ex : test.examples) {
    predicted.push_back(model.predict_label(ex.ids));
    labels.push_back(ex.label);
  }
  return metrics_from_counts(confusion_counts(predicted, labels));
}

double accuracy(const NetAbModel& model, const LabeledCorpus& corpus) {
  if (corpus.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& ex : corpus.examples) {
    if (model.predict_label(ex.ids) == ex.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(corpus.size());
}

}  // namespace netab
