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

#include "boxgen/evaluation/fid.h"

#include <Eigen/Eigenvalues>

#include "boxgen/base/error.h"

namespace boxgen {
namespace {

Eigen::MatrixXd Symmetrized(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

Eigen::MatrixXd PsdSqrt(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Symmetrized(m));
  const Eigen::VectorXd root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace

MomentAccumulator::MomentAccumulator(long dim)
    : mean_(Eigen::VectorXd::Zero(dim)), scatter_(Eigen::MatrixXd::Zero(dim, dim)) {
  if (dim < 1) Fail(ErrorCode::kInvalidArgument, "feature dim must be >= 1, got {}", dim);
}

void MomentAccumulator::Add(const Eigen::VectorXd& row) {
  if (row.size() != mean_.size()) {
    Fail(ErrorCode::kShapeMismatch, "feature row has dim {}, expected {}", row.size(),
         mean_.size());
  }
  ++count_;
  const Eigen::VectorXd delta = row - mean_;
  mean_ += delta / static_cast<double>(count_);
  scatter_.noalias() += delta * (row - mean_).transpose();
}

void MomentAccumulator::Merge(const MomentAccumulator& other) {
  if (other.mean_.size() != mean_.size()) {
    Fail(ErrorCode::kShapeMismatch, "cannot merge moments of dim {} into dim {}",
         other.mean_.size(), mean_.size());
  }
  if (other.count_ == 0) return;
  const double na = static_cast<double>(count_);
  const double nb = static_cast<double>(other.count_);
  const double n = na + nb;
  const Eigen::VectorXd delta = other.mean_ - mean_;
  mean_ += delta * (nb / n);
  scatter_ += other.scatter_ + delta * delta.transpose() * (na * nb / n);
  count_ += other.count_;
}

GaussianFit MomentAccumulator::Fit() const {
  if (count_ < 2) {
    Fail(ErrorCode::kInvalidArgument, "covariance needs at least 2 samples, got {}", count_);
  }
  return {mean_, Symmetrized(scatter_) / static_cast<double>(count_ - 1)};
}

GaussianFit FitGaussian(const FeatureSet& set) {
  if (set.n() < 2) {
    Fail(ErrorCode::kInvalidArgument, "feature set '{}' has {} rows; need at least 2",
         set.extractor_id, set.n());
  }
  GaussianFit fit;
  fit.mean = set.features.colwise().mean().transpose();
  const Eigen::MatrixXd centred = set.features.rowwise() - fit.mean.transpose();
  fit.covariance =
      Symmetrized(centred.transpose() * centred) / static_cast<double>(set.n() - 1);
  return fit;
}

double FrechetDistance(const GaussianFit& a, const GaussianFit& b) {
  if (a.mean.size() != b.mean.size()) {
    Fail(ErrorCode::kShapeMismatch, "Gaussians of dim {} and {}", a.mean.size(),
         b.mean.size());
  }
  // Tr((Sa Sb)^1/2) = Tr((Sa^1/2 Sb Sa^1/2)^1/2), the latter symmetric PSD.
  const Eigen::MatrixXd ra = PsdSqrt(a.covariance);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
      Symmetrized(ra * b.covariance * ra), Eigen::EigenvaluesOnly);
  const double cross = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return (a.mean - b.mean).squaredNorm() + a.covariance.trace() + b.covariance.trace() -
         2.0 * cross;
}

double Fid(const FeatureSet& a, const FeatureSet& b) {
  if (a.extractor_id != b.extractor_id) {
    Fail(ErrorCode::kInvalidArgument, "feature sets come from different extractors: '{}' vs '{}'",
         a.extractor_id, b.extractor_id);
  }
  if (a.dim() != b.dim()) {
    Fail(ErrorCode::kShapeMismatch, "feature dims differ: {} vs {}", a.dim(), b.dim());
  }
  return FrechetDistance(FitGaussian(a), FitGaussian(b));
}

}  // namespace boxgen
