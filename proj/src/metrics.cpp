#include "gsparse/metrics.hpp"

#include <map>

#include "gsparse/error.hpp"

namespace gsparse {

namespace {
void check(std::span<const int> pred, std::span<const int> truth, std::span<const NodeId> mask) {
  if (mask.empty()) throw Error("F1 over an empty node mask");
  if (pred.size() != truth.size()) throw Error("prediction and truth lengths differ");
  for (NodeId i : mask) {
    if (i >= truth.size()) throw Error("mask index out of range");
  }
}
} // namespace

double micro_f1(std::span<const int> pred, std::span<const int> truth, std::span<const NodeId> mask) {
  check(pred, truth, mask);
  std::size_t hit = 0;
  for (NodeId i : mask) hit += pred[i] == truth[i];
  return static_cast<double>(hit) / static_cast<double>(mask.size());
}

double macro_f1(std::span<const int> pred, std::span<const int> truth, std::span<const NodeId> mask) {
  check(pred, truth, mask);
  struct Counts {
    std::size_t tp = 0, fp = 0, fn = 0;
  };
  std::map<int, Counts> per;
  for (NodeId i : mask) {
    if (pred[i] == truth[i]) {
      ++per[truth[i]].tp;
    } else {
      ++per[pred[i]].fp;
      ++per[truth[i]].fn;
    }
  }
  double total = 0.0;
  for (const auto& [c, k] : per) {
    total += 2.0 * static_cast<double>(k.tp) / static_cast<double>(2 * k.tp + k.fp + k.fn);
  }
  return total / static_cast<double>(per.size());
}

} // namespace gsparse
