#include <gtest/gtest.h>

#include <atomic>
#include <stdexcept>

#include "cptlab/audit.hpp"
#include "cptlab/kernel.hpp"
#include "cptlab/parallel.hpp"

using namespace cptlab;

TEST(Parallel, VisitsEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; });
  for (auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(Parallel, RethrowsLowestIndex) {
  set_worker_count(4);
  try {
    parallel_for(100, [](std::size_t i) {
      if (i % 10 == 3) throw std::runtime_error(std::to_string(i));
    });
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "3");
  }
  set_worker_count(0);
}

TEST(Parallel, ResultsIndependentOfWorkers) {
  const auto model = KernelModel::from_variance(0.16);
  set_worker_count(1);
  const auto a = sample_joint(model, Measure::P, 20000, 4);
  const auto ca = run_audit_corpus(Lemma::L1L2, 40, 8);
  set_worker_count(3);
  const auto b = sample_joint(model, Measure::P, 20000, 4);
  const auto cb = run_audit_corpus(Lemma::L1L2, 40, 8);
  set_worker_count(0);
  for (std::size_t i = 0; i < a.size(); ++i) ASSERT_EQ(a[i].u, b[i].u);
  for (std::size_t i = 0; i < ca.size(); ++i) ASSERT_EQ(ca[i].rhs, cb[i].rhs);
}
