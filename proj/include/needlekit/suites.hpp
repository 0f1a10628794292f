#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "needlekit/interval_set.hpp"
#include "needlekit/pl_concave.hpp"

namespace needlekit {

struct SuiteOptions {
  std::uint64_t seed = 1;
  std::size_t trials = 1000;
  double tol = 1e-9;
  unsigned threads = 0;            ///< 0: hardware concurrency
  std::size_t quantiles = 10000;   ///< convexity suite only
};

/// Outcome of a randomized property run. Trials are generated from
/// trial_rng(seed, k), so a fixed seed gives identical CSV on one platform.
struct SuiteResult {
  std::string name;
  std::size_t trials = 0;
  std::size_t violations = 0;
  double worst = 0.0;         ///< largest violation measure seen (negative: slack)
  std::string csv;
  std::string counterexample; ///< JSON of the first violating trial, empty if none
};

/// Worker count after applying the NEEDLEKIT_THREADS cap.
unsigned effective_threads(unsigned requested);

/// m+(Ω) >= h m(Ω), compared in log form with relative tolerance tol.
SuiteResult verify_isoperimetric(const SuiteOptions& opt);
/// Entropy convexity along the displacement interpolation.
SuiteResult verify_convexity(const SuiteOptions& opt);
SuiteResult verify_brunn_minkowski(const SuiteOptions& opt);
SuiteResult verify_lemma41(const SuiteOptions& opt);
SuiteResult verify_growth(const SuiteOptions& opt);
/// rigidity_1d must report "not rigid" for random strictly concave perturbations.
SuiteResult verify_rigidity(const SuiteOptions& opt);

struct Lemma42Instance {
  std::string name;
  PLConcave space;
  IntervalSet omega;
  double h = 1.0;
  double eps = 0.0;
  double L = 0.0;
  double R = 0.0;
  bool expect_hypothesis = true;
};

/// Admissible instances on [0, D]: affine W, W with a small kink inside the
/// slope window, and a contrapositive with slope 2h on [0, D/2].
std::vector<Lemma42Instance> lemma42_instances(double eps);

}  // namespace needlekit
