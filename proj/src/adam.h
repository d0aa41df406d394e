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

#ifndef EQRATE_SRC_ADAM_H_
#define EQRATE_SRC_ADAM_H_

#include <cmath>

#include "Eigen/Dense"

namespace eqrate::internal {

// Adam with bias correction and a fixed learning rate.
class Adam {
 public:
  Adam(Eigen::Index size, double learning_rate, double beta1 = 0.9,
       double beta2 = 0.999, double epsilon = 1e-8)
      : first_(Eigen::VectorXd::Zero(size)),
        second_(Eigen::VectorXd::Zero(size)),
        learning_rate_(learning_rate),
        beta1_(beta1),
        beta2_(beta2),
        epsilon_(epsilon) {}

  // Descends: params -= lr * m_hat / (sqrt(v_hat) + eps).
  void Step(Eigen::VectorXd& params, const Eigen::VectorXd& grad) {
    ++t_;
    first_ = beta1_ * first_ + (1.0 - beta1_) * grad;
    second_ = beta2_ * second_ + (1.0 - beta2_) * grad.cwiseAbs2();
    const double c1 = 1.0 - std::pow(beta1_, t_);
    const double c2 = 1.0 - std::pow(beta2_, t_);
    params.array() -= learning_rate_ * (first_.array() / c1) /
                      ((second_.array() / c2).sqrt() + epsilon_);
  }

 private:
  Eigen::VectorXd first_;
  Eigen::VectorXd second_;
  double learning_rate_;
  double beta1_;
  double beta2_;
  double epsilon_;
  long t_ = 0;
};

}  // namespace eqrate::internal

#endif  // EQRATE_SRC_ADAM_H_
