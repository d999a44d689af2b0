#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace ccs {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// 1-based sample indices into {1, ..., N}, strictly increasing.
using IndexList = std::vector<int>;

}  // namespace ccs
