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

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <vector>

#include "wcl/error.hpp"
#include "wcl/rng.hpp"
#include "wcl/stats.hpp"

namespace wcl {
namespace {

TEST(ReplicaSeed, DistinctAndStable) {
  EXPECT_EQ(replica_seed(42, 3), replica_seed(42, 3));
  EXPECT_NE(replica_seed(42, 3), replica_seed(42, 4));
  EXPECT_NE(replica_seed(42, 3), replica_seed(43, 3));
  RandomStream a(5), b(5);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a.normal(), b.normal());
}

TEST(RandomStream, MomentsOfNormal) {
  RandomStream r(9);
  std::vector<double> x(100000);
  for (double& v : x) v = r.normal();
  const Estimate m = mean_estimate(x);
  EXPECT_NEAR(m.value, 0.0, 4.0 * m.std_error);
  EXPECT_NEAR(sample_covariance(x, x), 1.0, 0.02);
  for (int i = 0; i < 1000; ++i) EXPECT_LT(r.index(7), 7u);
}

TEST(CompensatedSum, RecoversSmallTerms) {
  CompensatedSum s;
  s.add(1e16);
  for (int i = 0; i < 1000; ++i) s.add(1.0);
  s.add(-1e16);
  EXPECT_EQ(s.value(), 1000.0);
}

TEST(Estimates, MeanCovarianceRatio) {
  const std::vector<double> x = {1.0, 2.0, 3.0, 4.0};
  const std::vector<double> y = {2.0, 4.0, 6.0, 8.0};
  const Estimate m = mean_estimate(x);
  EXPECT_DOUBLE_EQ(m.value, 2.5);
  EXPECT_NEAR(m.std_error, std::sqrt((5.0 / 3.0) / 4.0), 1e-15);
  EXPECT_NEAR(sample_covariance(x, y), 10.0 / 3.0, 1e-14);
  const Estimate r = ratio_estimate(y, x);
  EXPECT_DOUBLE_EQ(r.value, 2.0);
  EXPECT_NEAR(r.std_error, 0.0, 1e-15);
  EXPECT_THROW(mean_estimate(std::vector<double>{1.0}), ConfigError);
  EXPECT_THROW(ratio_estimate(x, std::vector<double>(4, 0.0)), DiagnosticError);
}

TEST(ParallelMap, IndependentOfThreadCount) {
  const auto f = [](std::size_t i) { return RandomStream(replica_seed(1, i)).normal(); };
  setenv("WCL_THREADS", "1", 1);
  const auto a = parallel_map(257, f);
  setenv("WCL_THREADS", "4", 1);
  EXPECT_EQ(worker_count(), 4u);
  const auto b = parallel_map(257, f);
  unsetenv("WCL_THREADS");
  EXPECT_EQ(a, b);
}

}  // namespace
}  // namespace wcl
