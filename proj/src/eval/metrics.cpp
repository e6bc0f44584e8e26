#include "hta/eval/eval.hpp"

#include "hta/error.hpp"

namespace hta::eval {

ConfusionMetrics confusion_metrics(const ConfusionCounts& c) {
  ConfusionMetrics m;
  const double total = static_cast<double>(c.tp + c.fp + c.fn + c.tn);
  m.accuracy = total > 0 ? (c.tp + c.tn) / total : 0.0;
  m.precision = c.tp + c.fp > 0 ? static_cast<double>(c.tp) / (c.tp + c.fp) : 0.0;
  m.recall = c.tp + c.fn > 0 ? static_cast<double>(c.tp) / (c.tp + c.fn) : 0.0;
  m.f1 = m.precision + m.recall > 0
             ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
             : 0.0;
  return m;
}

ConfusionMetrics confusion_metrics(const std::vector<bool>& predicted,
                                   const std::vector<bool>& truth) {
  if (predicted.size() != truth.size())
    throw Error(ErrorKind::invalid, "label vectors are not aligned");
  ConfusionCounts c;
  for (size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i] && truth[i]) ++c.tp;
    else if (predicted[i] && !truth[i]) ++c.fp;
    else if (!predicted[i] && truth[i]) ++c.fn;
    else ++c.tn;
  }
  return confusion_metrics(c);
}

}  // namespace hta::eval
