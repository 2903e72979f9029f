// Copyright 2026 The AeroEmit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AEROEMIT_EXACT_SUM_H_
#define AEROEMIT_EXACT_SUM_H_

#include <cmath>
#include <vector>

#include "aeroemit/gas.h"

namespace aeroemit {

// Error-free running sum of doubles (Shewchuk's non-overlapping partials,
// as in Python's math.fsum). value() is the correctly rounded exact sum,
// so the result does not depend on the order or grouping of the addends.
// Finite inputs only.
class ExactSum {
 public:
  void add(double x) {
    std::size_t i = 0;
    for (double y : partials_) {
      if (std::fabs(x) < std::fabs(y)) std::swap(x, y);
      const double hi = x + y;
      const double lo = y - (hi - x);
      if (lo != 0.0) partials_[i++] = lo;
      x = hi;
    }
    partials_.resize(i);
    partials_.push_back(x);
  }

  void add(const ExactSum& other) {
    for (double p : other.partials_) add(p);
  }

  ExactSum& operator+=(double x) {
    add(x);
    return *this;
  }
  ExactSum& operator+=(const ExactSum& other) {
    add(other);
    return *this;
  }

  double value() const {
    if (partials_.empty()) return 0.0;
    std::size_t n = partials_.size();
    double hi = partials_[--n];
    double lo = 0.0;
    while (n > 0) {
      const double x = hi;
      const double y = partials_[--n];
      hi = x + y;
      const double yr = hi - x;
      lo = y - yr;
      if (lo != 0.0) break;
    }
    // Round-half-even correction when the remaining partials push the
    // exact value across the halfway point.
    if (n > 0 && ((lo < 0.0 && partials_[n - 1] < 0.0) ||
                  (lo > 0.0 && partials_[n - 1] > 0.0))) {
      const double y = lo * 2.0;
      const double x = hi + y;
      const double yr = x - hi;
      if (y == yr) hi = x;
    }
    return hi;
  }

 private:
  std::vector<double> partials_;
};

// One ExactSum per gas.
class ExactGasSum {
 public:
  void add(const GasVector& v) {
    for (Gas gas : kAllGases) sums_[static_cast<std::size_t>(gas)].add(v[gas]);
  }
  void add(const ExactGasSum& other) {
    for (std::size_t i = 0; i < sums_.size(); ++i) sums_[i].add(other.sums_[i]);
  }
  GasVector value() const {
    GasVector out;
    for (Gas gas : kAllGases) out[gas] = sums_[static_cast<std::size_t>(gas)].value();
    return out;
  }

 private:
  std::array<ExactSum, 4> sums_;
};

}  // namespace aeroemit

#endif  // AEROEMIT_EXACT_SUM_H_
