#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "calf/rocket.hpp"
#include "calf/splitter.hpp"
#include "calf/types.hpp"

namespace calf::test {

// Direct-definition kernel pass: materialize the zero-padded series, slide
// the dilated kernel one output position at a time.
KernelFeatures naive_rocket_features(const std::vector<double>& series,
                                     const RocketKernel& kernel);

// Weighted ridge solved from the (augmented) normal equations with a dense
// LDLT factorization; the intercept column is unpenalized. W is features x
// classes.
void dense_ridge_oracle(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                        const Eigen::VectorXd& sample_weights, double alpha, bool fit_intercept,
                        Eigen::MatrixXd& W, Eigen::VectorXd& intercepts);

// Recursive enumeration of every k-subset of the calves; returns the
// best-stratified subset under (deviation, lexicographic subset) ordering
// along with its deviation. Infeasible subsets (a class with nothing left on
// the train side) are skipped.
std::pair<std::vector<std::string>, double> brute_force_best_split(const Dataset& dataset,
                                                                   std::size_t k, double target,
                                                                   CountBasis basis);

}  // namespace calf::test
