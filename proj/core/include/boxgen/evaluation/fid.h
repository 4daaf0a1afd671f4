// Copyright 2026 The Boxgen Authors. All Rights Reserved.
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

#ifndef BOXGEN_EVALUATION_FID_H_
#define BOXGEN_EVALUATION_FID_H_

#include <string>

#include <Eigen/Dense>

namespace boxgen {

// n x dim feature rows from one extractor.
struct FeatureSet {
  std::string extractor_id;
  Eigen::MatrixXd features;

  long n() const { return features.rows(); }
  long dim() const { return features.cols(); }
};

// Mean and unbiased covariance.
struct GaussianFit {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

// Streaming first and second moments. Merge combines partial results
// computed over disjoint rows, so per-image work can be reduced in any
// order.
class MomentAccumulator {
 public:
  explicit MomentAccumulator(long dim);

  void Add(const Eigen::VectorXd& row);
  void Merge(const MomentAccumulator& other);

  long count() const { return count_; }
  // Throws kInvalidArgument when fewer than two rows were added.
  GaussianFit Fit() const;

 private:
  long count_ = 0;
  Eigen::VectorXd mean_;
  Eigen::MatrixXd scatter_;  // sum of outer products of centred rows
};

GaussianFit FitGaussian(const FeatureSet& set);

// Squared Frechet distance between two Gaussians. The matrix square root
// is taken through symmetric eigendecompositions with tiny negative
// eigenvalues clipped to zero.
double FrechetDistance(const GaussianFit& a, const GaussianFit& b);

// Requires matching dim and extractor_id and n >= 2 on both sides.
double Fid(const FeatureSet& a, const FeatureSet& b);

}  // namespace boxgen

#endif  // BOXGEN_EVALUATION_FID_H_
