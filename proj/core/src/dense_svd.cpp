#include "vortexlab/dense_svd.hpp"

#include <lapacke.h>

#include <algorithm>
#include <stdexcept>
#include <string>

namespace vortexlab {

std::vector<double> dense_singular_values(const Eigen::MatrixXd& a) {
    const lapack_int m = a.rows(), n = a.cols();
    const lapack_int k = std::min(m, n);
    std::vector<double> s(k);
    if (k == 0) return s;
    Eigen::MatrixXd work = a;
    const lapack_int info = LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'N', m, n, work.data(), m, s.data(), nullptr, 1,
                                           nullptr, 1);
    if (info != 0) throw std::runtime_error("dgesdd failed, info=" + std::to_string(info));
    std::sort(s.begin(), s.end());
    return s;
}

NullSpace dense_null_space(const Eigen::MatrixXd& a, double rel_tol) {
    const lapack_int m = a.rows(), n = a.cols();
    const lapack_int k = std::min(m, n);
    NullSpace out;
    if (n == 0) return out;
    if (m == 0) {
        out.basis = Eigen::MatrixXd::Identity(n, n);
        return out;
    }
    Eigen::MatrixXd work = a;
    Eigen::MatrixXd u(m, m), vt(n, n);
    std::vector<double> s(k);
    const lapack_int info =
        LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'A', m, n, work.data(), m, s.data(), u.data(), m, vt.data(), n);
    if (info != 0) throw std::runtime_error("dgesdd failed, info=" + std::to_string(info));
    const double cut = rel_tol * (s.empty() ? 0.0 : s.front());
    lapack_int rank = 0;
    while (rank < k && s[rank] > cut) ++rank;
    out.basis = vt.bottomRows(n - rank).transpose();
    out.singular.assign(s.rbegin(), s.rend());
    return out;
}

}  // namespace vortexlab
