// Copyright 2026 The wcl Authors.
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

#ifndef WCL_MULTI_INDEX_HPP
#define WCL_MULTI_INDEX_HPP

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace wcl {

/// (n_1, ..., n_d) with non-negative entries; order() = sum of entries.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries);
  MultiIndex(std::initializer_list<int> entries);

  [[nodiscard]] std::size_t dimension() const { return entries_.size(); }
  [[nodiscard]] int order() const { return order_; }
  [[nodiscard]] int operator[](std::size_t j) const { return entries_[j]; }
  [[nodiscard]] const std::vector<int>& entries() const { return entries_; }

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  friend auto operator<=>(const MultiIndex& a, const MultiIndex& b) {
    return a.entries_ <=> b.entries_;
  }

 private:
  std::vector<int> entries_;
  int order_ = 0;
};

}  // namespace wcl

#endif  // WCL_MULTI_INDEX_HPP
