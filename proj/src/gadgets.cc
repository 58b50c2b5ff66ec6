#include "ccstream/gadgets.h"

#include <stdexcept>
#include <string>

namespace ccstream {

Gadget IndexGadget(const std::vector<bool>& x, std::size_t b) {
  const std::size_t l = x.size();
  if (l < 2) throw std::invalid_argument("INDEX gadget needs l >= 2");
  if (b < 1 || b > l) {
    throw std::invalid_argument("INDEX query b = " + std::to_string(b) +
                                " outside [1, " + std::to_string(l) + "]");
  }
  std::vector<SparsePoint> points;
  points.reserve(2 * l);
  for (std::size_t i = 1; i <= l; ++i) {
    points.push_back(
        MakeSparsePoint({{0, 4.0 * static_cast<double>(i) + (x[i - 1] ? 1 : 0)}}));
  }
  for (std::size_t i = 1; i <= l; ++i) {
    points.push_back(MakeSparsePoint(
        {{0, 4.0 * static_cast<double>(b)}, {static_cast<std::uint32_t>(i), 1.0}}));
  }
  const std::uint64_t opt = x[b - 1] ? 0 : l - 1;
  return {L1ThresholdOracle(std::move(points)), opt};
}

Gadget DisjGadget(const std::vector<bool>& x, const std::vector<bool>& y) {
  const std::size_t l = x.size();
  if (l < 1) throw std::invalid_argument("DISJ gadget needs l >= 1");
  if (y.size() != l) {
    throw std::invalid_argument("DISJ inputs differ in length: " +
                                std::to_string(l) + " vs " +
                                std::to_string(y.size()));
  }
  auto point = [](std::size_t i, double second) {
    return MakeSparsePoint({{0, 2.0 * static_cast<double>(i)}, {1, second}});
  };
  std::vector<SparsePoint> points;
  points.reserve(4 * l);
  for (std::size_t i = 1; i <= l; ++i) points.push_back(point(i, x[i - 1]));
  for (std::size_t i = 1; i <= l; ++i) {
    points.push_back(point(i, x[i - 1] ? 0.0 : -1.0));
  }
  for (std::size_t i = 1; i <= l; ++i) {
    points.push_back(point(i, y[i - 1] ? 2.0 : 3.0));
  }
  for (std::size_t i = 1; i <= l; ++i) {
    points.push_back(point(i, y[i - 1] ? 3.0 : 4.0));
  }
  std::uint64_t opt = 0;
  for (std::size_t i = 0; i < l; ++i) opt += (x[i] && y[i]) ? 1 : 0;
  return {L1ThresholdOracle(std::move(points)), opt};
}

}  // namespace ccstream
