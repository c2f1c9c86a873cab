#pragma once

#include <Eigen/Dense>
#include <vector>

namespace vortexlab {

/// Ascending singular values of a dense matrix (LAPACK dgesdd).
std::vector<double> dense_singular_values(const Eigen::MatrixXd& a);

struct NullSpace {
    Eigen::MatrixXd basis;           ///< orthonormal columns
    std::vector<double> singular;    ///< ascending singular values of the input
};

/// Orthonormal basis of the right null space: right singular vectors whose
/// singular value is below rel_tol * sigma_max, plus the structural ones when
/// the matrix is wide.
NullSpace dense_null_space(const Eigen::MatrixXd& a, double rel_tol = 1e-10);

}  // namespace vortexlab
