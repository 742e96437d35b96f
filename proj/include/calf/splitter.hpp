#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "calf/types.hpp"

namespace calf {

// What a calf contributes to stratification counts: windows (default),
// distinct segment ids, or recording duration.
enum class CountBasis { kWindows, kSegments, kDuration };

CountBasis count_basis_from_name(const std::string& name);
const std::string& count_basis_name(CountBasis basis);

// Stratification quality of one candidate test set. For each class the
// ratio of test-side to train-side quantity is compared against the target;
// deviation is the unweighted mean absolute difference over the label set.
// A class with no train-side quantity makes the candidate unusable
// (deviation +infinity).
struct StratificationScore {
  std::map<std::string, double> per_class_ratio;
  double deviation = 0.0;
  double target = 0.0;
};

StratificationScore score_combination(const Dataset& dataset,
                                      const std::vector<std::string>& test_calves,
                                      double target_ratio, CountBasis basis = CountBasis::kWindows);

struct SplitSearch {
  // Exhaustive enumeration runs up to `budget` combinations; beyond that,
  // seeded sampling of `samples` candidate draws engages (with a stderr
  // notice) unless sampling was requested outright.
  bool sampled = false;
  std::uint64_t budget = 20'000'000;
  std::size_t samples = 200'000;
  std::uint64_t seed = 0;
};

// Chooses round(test_fraction * n_calves) calves whose removal best
// preserves the per-class target ratio. Ties in deviation go to the
// lexicographically smallest sorted calf-id tuple, so the choice is
// deterministic regardless of enumeration order or worker count.
std::pair<std::vector<std::string>, StratificationScore> select_test_split(
    const Dataset& dataset, double test_fraction, double target_ratio,
    const SplitSearch& search = {}, CountBasis basis = CountBasis::kWindows, int workers = 1);

// One cross-validation fold over training calves only.
struct SubjectFold {
  std::vector<std::string> train_calves;       // sorted
  std::vector<std::string> validation_calves;  // sorted
  double deviation = 0.0;
};

// The k best-stratified distinct validation subsets of the training calves,
// ascending by (deviation, calf-id tuple). Fewer than k qualifying
// combinations is an error naming the shortfall.
std::vector<SubjectFold> make_validation_folds(const Dataset& dataset,
                                               const std::vector<std::string>& train_calves,
                                               std::size_t k, double val_fraction,
                                               double target_ratio, const SplitSearch& search = {},
                                               CountBasis basis = CountBasis::kWindows,
                                               int workers = 1);

// A complete subject-level plan: held-out test calves plus validation folds
// carved from the remaining training calves.
struct SplitPlan {
  std::vector<std::string> test_calves;   // sorted
  std::vector<std::string> train_calves;  // sorted
  double test_deviation = 0.0;
  double target_ratio = 0.0;
  CountBasis basis = CountBasis::kWindows;
  std::vector<SubjectFold> folds;
};

SplitPlan make_split_plan(const Dataset& dataset, double test_fraction, double val_fraction,
                          double target_ratio, std::size_t fold_count, const SplitSearch& search,
                          CountBasis basis, int workers);

// Exact binomial coefficient, saturating at 2^63 - 1 (enough to compare
// against any practical enumeration budget).
std::uint64_t combination_count(std::size_t n, std::size_t k);

// rank-th k-combination of {0..n-1} in lexicographic order.
std::vector<int> unrank_combination(std::size_t n, std::size_t k, std::uint64_t rank);

// Advances to the next combination in lexicographic order; false after the
// last one.
bool next_combination(std::vector<int>& comb, std::size_t n);

}  // namespace calf
