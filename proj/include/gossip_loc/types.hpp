// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>

#include <cstdint>

namespace gossip_loc {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using VectorXd = Vector<double>;
using MatrixXd = Matrix<double>;
using MatrixXi = Matrix<int>;

using NodeId = Eigen::Index;
using EdgeIndex = Eigen::Index;
using Seed = std::uint64_t;

}  // namespace gossip_loc
