#pragma once

#include <cstdint>

namespace warpmesh {

struct OpCounts {
  std::int64_t sums = 0;
  std::int64_t mults = 0;
};

/// double that tallies binary additions/subtractions and multiplications into
/// a thread-local counter. Negation is free (a sign flip, not an adder).
class Counted {
 public:
  Counted() = default;
  Counted(double v) : value_(v) {}  // NOLINT: implicit by intent

  double value() const { return value_; }

  static OpCounts& counts() {
    thread_local OpCounts c;
    return c;
  }

  friend Counted operator+(Counted a, Counted b) { ++counts().sums; return a.value_ + b.value_; }
  friend Counted operator-(Counted a, Counted b) { ++counts().sums; return a.value_ - b.value_; }
  friend Counted operator*(Counted a, Counted b) { ++counts().mults; return a.value_ * b.value_; }
  friend Counted operator-(Counted a) { return -a.value_; }

 private:
  double value_ = 0.0;
};

}  // namespace warpmesh
