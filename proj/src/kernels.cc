// Copyright 2026 The eqrate Authors.
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

#include "eqrate/kernels.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace eqrate {
namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// Row a holds u_i(a, a_{-i}) for every co-player profile a_{-i}, laid out in
// row-major order over the remaining axes.
MatrixXd PayoffRows(const Game& game, int player) {
  const TensorShape& shape = game.shape();
  const Index n = shape.dim(player);
  const Index outer = shape.outer(player);
  const Index inner = shape.inner(player);
  const VectorXd& u = game.utility(player);
  MatrixXd rows(n, outer * inner);
  for (Index o = 0; o < outer; ++o) {
    for (Index a = 0; a < n; ++a) {
      rows.row(a).segment(o * inner, inner) =
          u.segment((o * n + a) * inner, inner).transpose();
    }
  }
  return rows;
}

VectorXd Softmax(const VectorXd& logits) {
  const VectorXd e = (logits.array() - logits.maxCoeff()).exp();
  return e / e.sum();
}

}  // namespace

MatrixXd NormalizeKernelColumns(const MatrixXd& similarity,
                                double entropic_index) {
  const double q = entropic_index + 1.0;
  const VectorXd norms =
      similarity.array().pow(q).colwise().sum().pow(1.0 / q).transpose();
  if ((norms.array() <= 0.0).any()) {
    throw ParameterError("similarity kernel has an all-zero column");
  }
  return similarity * norms.cwiseInverse().asDiagonal();
}

AffinityKernel AffinityKernel::FromSimilarity(MatrixXd similarity,
                                              double entropic_index,
                                              double variance) {
  if (!(entropic_index > 0.0 && entropic_index <= 1.0)) {
    throw ParameterError("entropic index must lie in (0, 1]");
  }
  if (similarity.rows() != similarity.cols() || similarity.rows() == 0) {
    throw DimensionError("similarity kernel must be square and nonempty");
  }
  if (!similarity.allFinite() || similarity.minCoeff() < 0.0 ||
      similarity.maxCoeff() > 1.0) {
    throw ParameterError("similarity entries must lie in [0, 1]");
  }
  if ((similarity - similarity.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw ParameterError("similarity kernel must be symmetric");
  }
  if ((similarity.diagonal().array() != 1.0).any()) {
    throw ParameterError("similarity kernel must have a unit diagonal");
  }
  AffinityKernel kernel;
  kernel.normalized = NormalizeKernelColumns(similarity, entropic_index);
  kernel.similarity = std::move(similarity);
  kernel.entropic_index = entropic_index;
  kernel.variance = variance;
  return kernel;
}

MatrixXd DissimilarityJoint(const Game& game, int player) {
  const MatrixXd rows = PayoffRows(game, player);
  const Index n = rows.rows();
  const double d = static_cast<double>(rows.cols());
  const double scale = 1.0 / ((d + 1.0) * (d + 2.0));
  MatrixXd dissimilarity = MatrixXd::Zero(n, n);
  for (Index p = 0; p < n; ++p) {
    for (Index q = p + 1; q < n; ++q) {
      const VectorXd diff = (rows.row(p) - rows.row(q)).transpose();
      const double total = diff.sum();
      const double value = scale * (diff.squaredNorm() + total * total);
      dissimilarity(p, q) = value;
      dissimilarity(q, p) = value;
    }
  }
  return dissimilarity;
}

MatrixXd DissimilarityFactorized(const Game& game, int player) {
  const MatrixXd rows = PayoffRows(game, player);
  const TensorShape others = game.shape().Without(player);
  const Index n = rows.rows();
  double scale = 1.0;
  for (int d : others.dims()) scale /= (d + 1.0) * (d + 2.0);
  // sum_{a, a'} D(a) D(a') 2^{#a=a'} = D^T (kron_j (I + J_j)) D.
  MatrixXd dissimilarity = MatrixXd::Zero(n, n);
  for (Index p = 0; p < n; ++p) {
    for (Index q = p + 1; q < n; ++q) {
      const VectorXd diff = (rows.row(p) - rows.row(q)).transpose();
      VectorXd mixed = diff;
      for (int axis = 0; axis < others.rank(); ++axis) {
        mixed += BroadcastAlong(SumAxis(mixed, others, axis), others, axis);
      }
      const double value = scale * diff.dot(mixed);
      dissimilarity(p, q) = value;
      dissimilarity(q, p) = value;
    }
  }
  return dissimilarity;
}

MatrixXd SimilarityKernelFromVariance(const MatrixXd& dissimilarity,
                                      double variance) {
  if (!(variance > 0.0)) throw ParameterError("kernel variance must be > 0");
  if (dissimilarity.rows() != dissimilarity.cols()) {
    throw DimensionError("dissimilarity must be square");
  }
  MatrixXd kernel = (-dissimilarity.array() / variance).exp().matrix();
  kernel.diagonal().setOnes();
  return kernel;
}

MatrixXd SimilarityKernel(const MatrixXd& dissimilarity, double sigma) {
  if (!(sigma > 0.0)) throw ParameterError("kernel bandwidth must be > 0");
  return SimilarityKernelFromVariance(dissimilarity, 4.0 * sigma * sigma);
}

double ShannonEntropy(const VectorXd& x) {
  double h = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0) h -= x[i] * std::log(x[i]);
  }
  return h;
}

double ShannonAffinityEntropy(const MatrixXd& similarity, const VectorXd& x) {
  if (similarity.cols() != x.size()) throw DimensionError("kernel/x mismatch");
  const VectorXd column_sums = similarity.colwise().sum().transpose();
  if ((column_sums.array() <= 0.0).any()) {
    throw ParameterError("similarity columns must have positive sums");
  }
  const MatrixXd u0 = similarity * column_sums.cwiseInverse().asDiagonal();
  double correction = 0.0;
  for (Index j = 0; j < similarity.cols(); ++j) {
    double cross = 0.0;
    for (Index i = 0; i < similarity.rows(); ++i) {
      if (similarity(i, j) > 0.0) {
        cross += u0(i, j) * std::log(similarity(i, j));
      }
    }
    correction += (std::log(column_sums[j]) - cross) * x[j];
  }
  return ShannonEntropy(u0 * x) - correction;
}

MaxEntropyResult MaxAffinityEntropy(const AffinityKernel& kernel,
                                    const MaxEntropyOptions& options) {
  const Index n = kernel.size();
  VectorXd x = VectorXd::Constant(n, 1.0 / n);
  VectorXd grad = AffinityEntropyGradient(kernel, x);
  double step = options.initial_step;
  int iter = 0;
  for (;; ++iter) {
    const double gap = grad.maxCoeff() - x.dot(grad);
    if (gap <= options.tolerance) {
      return {x, AffinityEntropy(kernel, x), gap, iter};
    }
    if (iter >= options.max_iters || step < 1e-300) {
      throw EntropyConvergenceError(
          "max affinity entropy did not converge: gap " + std::to_string(gap),
          x, gap);
    }
    // Multiplicative update; accept when the new gradient still points along
    // the step, which for a concave objective guarantees ascent. The gradient
    // is centred first: the step sums to zero only up to rounding, and a
    // large common offset in g would otherwise drown the test.
    const VectorXd logits =
        x.array().log().matrix() + step * (grad.array() - grad.maxCoeff()).matrix();
    const VectorXd candidate = Softmax(logits);
    const VectorXd candidate_grad = AffinityEntropyGradient(kernel, candidate);
    const VectorXd centred =
        candidate_grad.array() - candidate_grad.maxCoeff();
    if (centred.dot(candidate - x) >= 0.0) {
      x = candidate;
      grad = candidate_grad;
      step = std::min(step * 2.0, 1e12);
    } else {
      step *= 0.5;
    }
  }
}

AffinityKernel PlayerKernel(const Game& game, int player,
                            const KernelConfig& config) {
  const MatrixXd dissimilarity =
      config.dissimilarity == DissimilarityKind::kJoint
          ? DissimilarityJoint(game, player)
          : DissimilarityFactorized(game, player);
  return AffinityKernel::FromSimilarity(
      SimilarityKernelFromVariance(dissimilarity, config.variance),
      config.entropic_index, config.variance);
}

std::vector<VectorXd> AffinityTargets(const Game& game,
                                      const KernelConfig& config) {
  std::vector<VectorXd> targets;
  for (int i = 0; i < game.num_players(); ++i) {
    targets.push_back(
        MaxAffinityEntropy(PlayerKernel(game, i, config), config.max_entropy)
            .distribution);
  }
  return targets;
}

std::vector<VectorXd> UniformTargets(const Game& game) {
  std::vector<VectorXd> targets;
  for (int i = 0; i < game.num_players(); ++i) {
    const int n = game.num_actions(i);
    targets.push_back(VectorXd::Constant(n, 1.0 / n));
  }
  return targets;
}

}  // namespace eqrate
