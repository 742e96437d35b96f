#include "calf/splitter.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <map>
#include <set>
#include <tuple>

#include "calf/error.hpp"
#include "calf/parallel.hpp"
#include "calf/rng.hpp"

namespace calf {

CountBasis count_basis_from_name(const std::string& name) {
  if (name == "windows") return CountBasis::kWindows;
  if (name == "segments") return CountBasis::kSegments;
  if (name == "duration") return CountBasis::kDuration;
  throw ValidationError("unknown count basis: '" + name + "'");
}

const std::string& count_basis_name(CountBasis basis) {
  static const std::string kNames[] = {"windows", "segments", "duration"};
  return kNames[static_cast<int>(basis)];
}

std::uint64_t combination_count(std::size_t n, std::size_t k) {
  constexpr std::uint64_t kCap = std::numeric_limits<std::int64_t>::max();
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 result = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;  // divides exactly at every step
    if (result > kCap) return kCap;
  }
  return static_cast<std::uint64_t>(result);
}

std::vector<int> unrank_combination(std::size_t n, std::size_t k, std::uint64_t rank) {
  std::vector<int> comb(k);
  int v = 0;
  for (std::size_t i = 0; i < k; ++i) {
    while (true) {
      const std::uint64_t with_v = combination_count(n - 1 - static_cast<std::size_t>(v), k - 1 - i);
      if (rank < with_v) break;
      rank -= with_v;
      ++v;
    }
    comb[i] = v++;
  }
  return comb;
}

bool next_combination(std::vector<int>& comb, std::size_t n) {
  const int k = static_cast<int>(comb.size());
  int i = k - 1;
  while (i >= 0 && comb[i] == static_cast<int>(n) - k + i) --i;
  if (i < 0) return false;
  ++comb[i];
  for (int j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
  return true;
}

namespace {

// Per-calf, per-class quantities under the chosen basis, restricted to a
// calf subset. Duration is in samples (window length summed per window).
struct CountTable {
  std::vector<std::string> calves;  // sorted
  std::vector<std::string> labels;
  std::vector<std::vector<double>> counts;  // calves x labels
  std::vector<double> totals;               // per label
};

CountTable make_count_table(const Dataset& dataset, const std::vector<std::string>& calf_subset,
                            CountBasis basis) {
  CountTable table;
  table.calves = calf_subset;
  std::sort(table.calves.begin(), table.calves.end());
  if (std::adjacent_find(table.calves.begin(), table.calves.end()) != table.calves.end()) {
    throw ValidationError("duplicate calf id in subset");
  }
  table.labels = dataset.label_set();
  table.counts.assign(table.calves.size(), std::vector<double>(table.labels.size(), 0.0));
  table.totals.assign(table.labels.size(), 0.0);

  std::map<std::string, std::size_t> calf_row;
  for (std::size_t i = 0; i < table.calves.size(); ++i) {
    if (!dataset.calf_index().count(table.calves[i])) {
      throw ValidationError("calf '" + table.calves[i] + "' is not in the dataset");
    }
    calf_row[table.calves[i]] = i;
  }

  std::set<std::tuple<std::size_t, std::size_t, std::string>> seen_segments;
  for (const auto& window : dataset.windows()) {
    const auto it = calf_row.find(window.calf_id);
    if (it == calf_row.end()) continue;
    const std::size_t row = it->second;
    const std::size_t label = static_cast<std::size_t>(dataset.label_index(window.behaviour_label));
    double quantity = 0.0;
    switch (basis) {
      case CountBasis::kWindows:
        quantity = 1.0;
        break;
      case CountBasis::kDuration:
        quantity = static_cast<double>(window.length);
        break;
      case CountBasis::kSegments:
        quantity = seen_segments.insert({row, label, window.segment_id}).second ? 1.0 : 0.0;
        break;
    }
    table.counts[row][label] += quantity;
    table.totals[label] += quantity;
  }
  return table;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

// Mean absolute difference between the test/train ratio and the target over
// classes present in the subset. Any class stripped entirely from the train
// side disqualifies the combination (+inf).
double combo_deviation(const CountTable& table, const std::vector<int>& combo, double target) {
  double sum = 0.0;
  std::size_t included = 0;
  for (std::size_t c = 0; c < table.labels.size(); ++c) {
    const double total = table.totals[c];
    if (total <= 0.0) continue;
    double test = 0.0;
    for (const int row : combo) test += table.counts[static_cast<std::size_t>(row)][c];
    const double train = total - test;
    if (train <= 0.0) return kInf;
    sum += std::abs(test / train - target);
    ++included;
  }
  if (included == 0) return kInf;
  return sum / static_cast<double>(included);
}

struct ComboScore {
  double deviation = kInf;
  std::vector<int> combo;
};

bool combo_less(const ComboScore& a, const ComboScore& b) {
  if (a.deviation != b.deviation) return a.deviation < b.deviation;
  return a.combo < b.combo;
}

// Keeps the k smallest (deviation, combo) pairs seen so far.
class BestSet {
 public:
  explicit BestSet(std::size_t k) : k_(k) {}

  void offer(ComboScore score) {
    if (!(score.deviation < kInf)) return;
    if (heap_.size() < k_) {
      heap_.push_back(std::move(score));
      std::push_heap(heap_.begin(), heap_.end(), combo_less);
    } else if (combo_less(score, heap_.front())) {
      std::pop_heap(heap_.begin(), heap_.end(), combo_less);
      heap_.back() = std::move(score);
      std::push_heap(heap_.begin(), heap_.end(), combo_less);
    }
  }

  std::vector<ComboScore> sorted() && {
    std::sort(heap_.begin(), heap_.end(), combo_less);
    return std::move(heap_);
  }

 private:
  std::size_t k_;
  std::vector<ComboScore> heap_;  // max-heap under combo_less
};

// The k best-stratified combinations of `choose` calves out of the table,
// ascending by (deviation, combo). Exhaustive within the budget; otherwise
// or on request, seeded sampling.
std::vector<ComboScore> best_combinations(const CountTable& table, std::size_t choose,
                                          std::size_t k_best, double target,
                                          const SplitSearch& search, int workers,
                                          const char* context) {
  const std::size_t n = table.calves.size();
  const std::uint64_t total = combination_count(n, choose);
  const bool sample = search.sampled || total > search.budget;

  std::vector<ComboScore> merged;
  if (!sample) {
    const int w = resolve_workers(workers);
    const std::size_t chunks = chunk_count(static_cast<std::size_t>(total), w);
    std::vector<std::vector<ComboScore>> chunk_best(chunks);
    parallel_chunks(static_cast<std::size_t>(total), w,
                    [&](std::size_t chunk, std::size_t begin, std::size_t end) {
      BestSet best(k_best);
      std::vector<int> combo = unrank_combination(n, choose, begin);
      for (std::size_t rank = begin; rank < end; ++rank) {
        best.offer({combo_deviation(table, combo, target), combo});
        if (rank + 1 < end) next_combination(combo, n);
      }
      chunk_best[chunk] = std::move(best).sorted();
    });
    BestSet best(k_best);
    for (auto& part : chunk_best) {
      for (auto& score : part) best.offer(std::move(score));
    }
    merged = std::move(best).sorted();
  } else {
    if (!search.sampled) {
      std::cerr << "notice: " << context << ": " << total
                << " candidate combinations exceed the enumeration budget of " << search.budget
                << "; falling back to " << search.samples << " seeded samples (seed "
                << search.seed << "). Results may be suboptimal.\n";
    }
    if (search.samples == 0) throw ValidationError("sample count must be positive");
    Rng rng(search.seed);
    std::set<std::vector<int>> distinct;
    std::vector<int> pool(n);
    for (std::size_t draw = 0; draw < search.samples; ++draw) {
      for (std::size_t i = 0; i < n; ++i) pool[i] = static_cast<int>(i);
      for (std::size_t i = 0; i < choose; ++i) {
        const std::size_t j = i + rng.uniform_int(n - i);
        std::swap(pool[i], pool[j]);
      }
      std::vector<int> combo(pool.begin(), pool.begin() + static_cast<long>(choose));
      std::sort(combo.begin(), combo.end());
      distinct.insert(std::move(combo));
    }
    std::vector<std::vector<int>> candidates(distinct.begin(), distinct.end());
    const int w = resolve_workers(workers);
    const std::size_t chunks = chunk_count(candidates.size(), w);
    std::vector<std::vector<ComboScore>> chunk_best(chunks);
    parallel_chunks(candidates.size(), w,
                    [&](std::size_t chunk, std::size_t begin, std::size_t end) {
      BestSet best(k_best);
      for (std::size_t i = begin; i < end; ++i) {
        best.offer({combo_deviation(table, candidates[i], target), candidates[i]});
      }
      chunk_best[chunk] = std::move(best).sorted();
    });
    BestSet best(k_best);
    for (auto& part : chunk_best) {
      for (auto& score : part) best.offer(std::move(score));
    }
    merged = std::move(best).sorted();
  }
  return merged;
}

std::vector<std::string> combo_to_calves(const CountTable& table, const std::vector<int>& combo) {
  std::vector<std::string> ids;
  ids.reserve(combo.size());
  for (const int row : combo) ids.push_back(table.calves[static_cast<std::size_t>(row)]);
  return ids;  // combo indices ascend, calves sorted, so ids come out sorted
}

std::size_t rounded_count(double fraction, std::size_t n, const char* what) {
  if (!(fraction > 0.0) || !(fraction < 1.0)) {
    throw ValidationError(std::string(what) + " must lie strictly between 0 and 1");
  }
  const auto k = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  if (k == 0) {
    throw ValidationError(std::string(what) + " rounds to zero calves out of " +
                          std::to_string(n));
  }
  if (k >= n) {
    throw ValidationError(std::string(what) + " rounds to all " + std::to_string(n) +
                          " calves, leaving no remainder");
  }
  return k;
}

}  // namespace

StratificationScore score_combination(const Dataset& dataset,
                                      const std::vector<std::string>& test_calves,
                                      double target_ratio, CountBasis basis) {
  if (test_calves.empty()) throw ValidationError("test calf set is empty");
  const auto all_calves = dataset.calves();
  if (test_calves.size() >= all_calves.size()) {
    throw ValidationError("test calves must be a proper subset of the dataset's calves");
  }
  const CountTable table = make_count_table(dataset, all_calves, basis);

  std::vector<int> combo;
  std::set<std::string> wanted(test_calves.begin(), test_calves.end());
  if (wanted.size() != test_calves.size()) {
    throw ValidationError("duplicate calf id in the test set");
  }
  for (std::size_t i = 0; i < table.calves.size(); ++i) {
    if (wanted.count(table.calves[i])) combo.push_back(static_cast<int>(i));
  }
  if (combo.size() != wanted.size()) {
    throw ValidationError("test set names a calf not present in the dataset");
  }

  StratificationScore score;
  score.target = target_ratio;
  score.deviation = combo_deviation(table, combo, target_ratio);
  for (std::size_t c = 0; c < table.labels.size(); ++c) {
    if (table.totals[c] <= 0.0) continue;
    double test = 0.0;
    for (const int row : combo) test += table.counts[static_cast<std::size_t>(row)][c];
    const double train = table.totals[c] - test;
    score.per_class_ratio[table.labels[c]] = train > 0.0 ? test / train : kInf;
  }
  return score;
}

std::pair<std::vector<std::string>, StratificationScore> select_test_split(
    const Dataset& dataset, double test_fraction, double target_ratio, const SplitSearch& search,
    CountBasis basis, int workers) {
  const auto calves = dataset.calves();
  if (calves.size() < 2) throw ValidationError("splitting needs at least 2 calves");
  const std::size_t k = rounded_count(test_fraction, calves.size(), "test fraction");

  const CountTable table = make_count_table(dataset, calves, basis);
  const auto best =
      best_combinations(table, k, 1, target_ratio, search, workers, "test-split search");
  if (best.empty()) {
    throw ValidationError(
        "no combination keeps every class represented on the train side; stratification is "
        "unsatisfiable");
  }
  const auto test_calves = combo_to_calves(table, best.front().combo);
  return {test_calves, score_combination(dataset, test_calves, target_ratio, basis)};
}

std::vector<SubjectFold> make_validation_folds(const Dataset& dataset,
                                               const std::vector<std::string>& train_calves,
                                               std::size_t k, double val_fraction,
                                               double target_ratio, const SplitSearch& search,
                                               CountBasis basis, int workers) {
  if (k == 0) throw ValidationError("fold count must be positive");
  if (train_calves.size() < 2) throw ValidationError("folding needs at least 2 training calves");
  const std::size_t val_size = rounded_count(val_fraction, train_calves.size(), "validation fraction");

  const CountTable table = make_count_table(dataset, train_calves, basis);
  const auto best = best_combinations(table, val_size, k, target_ratio, search, workers,
                                      "validation-fold search");
  if (best.size() < k) {
    throw ValidationError("only " + std::to_string(best.size()) + " of " + std::to_string(k) +
                          " requested validation folds keep every class on the train side");
  }

  std::vector<SubjectFold> folds;
  folds.reserve(k);
  for (std::size_t f = 0; f < k; ++f) {
    SubjectFold fold;
    fold.validation_calves = combo_to_calves(table, best[f].combo);
    const std::set<std::string> val_set(fold.validation_calves.begin(),
                                        fold.validation_calves.end());
    for (const auto& calf : table.calves) {
      if (!val_set.count(calf)) fold.train_calves.push_back(calf);
    }
    fold.deviation = best[f].deviation;
    folds.push_back(std::move(fold));
  }
  return folds;
}

SplitPlan make_split_plan(const Dataset& dataset, double test_fraction, double val_fraction,
                          double target_ratio, std::size_t fold_count, const SplitSearch& search,
                          CountBasis basis, int workers) {
  SplitPlan plan;
  plan.target_ratio = target_ratio;
  plan.basis = basis;

  auto [test_calves, score] =
      select_test_split(dataset, test_fraction, target_ratio, search, basis, workers);
  plan.test_calves = std::move(test_calves);
  plan.test_deviation = score.deviation;

  const std::set<std::string> test_set(plan.test_calves.begin(), plan.test_calves.end());
  for (const auto& calf : dataset.calves()) {
    if (!test_set.count(calf)) plan.train_calves.push_back(calf);
  }

  plan.folds = make_validation_folds(dataset, plan.train_calves, fold_count, val_fraction,
                                     target_ratio, search, basis, workers);
  return plan;
}

}  // namespace calf
