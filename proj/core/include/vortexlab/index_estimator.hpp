#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vortexlab/model_operators.hpp"

namespace vortexlab {

/// Largest decomposition handled by the dense path (max of rows and columns).
constexpr int kDenseLimit = 30000;

/// Ascending singular values, min(rows, cols) of them.
std::vector<double> singular_spectrum(const OperatorMatrix& op);
std::vector<double> singular_spectrum(const Eigen::MatrixXd& a);

struct KernelCount {
    int count = 0;
    double gap_ratio = 0;
};
/// Largest k with s[k] / max(s[k-1], eps) >= ratio_threshold among the smallest
/// 40 values; eps is machine epsilon times max(1, largest scanned value).
KernelCount count_near_kernel(const std::vector<double>& svals, double ratio_threshold = 50.0);

struct RefinementEntry {
    double R = 0;
    double h = 0;
    int dim_ker = 0;
    int dim_coker = 0;
    double gap_ratio = 0;
    std::vector<double> smallest;   ///< a few of the smallest singular values
};

struct IndexReport {
    int dim_ker = 0;
    int dim_coker = 0;
    int index = 0;
    double gap_ratio = 0;   ///< worst gap over the schedule
    std::vector<RefinementEntry> refinement_history;
    bool stable = false;
    std::optional<int> predicted;
    std::optional<bool> match;

    std::string verdict() const { return stable ? "stable" : "unstable"; }
};

/// Kernel and cokernel counts of one operator. The spectrum is padded with
/// structural zeros to cols (kernel) and rows (cokernel).
RefinementEntry measure_index(const OperatorMatrix& op);

using Schedule = std::vector<std::pair<double, double>>;
using OperatorFamily = std::function<OperatorMatrix(const Grid2D&)>;

Schedule default_schedule();

/// Threads for schedule entries: VORTEXLAB_THREADS if set (positive int),
/// otherwise the hardware concurrency.
int thread_cap();

IndexReport estimate_index(const OperatorFamily& family, const Schedule& schedule,
                           std::optional<int> predicted = std::nullopt, double ratio_threshold = 50.0);

/// Index of op minus index of reference. Errors: different grids or layouts, or
/// different shapes for Cartesian operators.
int relative_index(const OperatorMatrix& op, const OperatorMatrix& reference);

/// D' expressed on an orthonormal basis of the numerical kernel of T.
OperatorMatrix restrict_to_kernel(const OperatorMatrix& Dprime, const OperatorMatrix& T);

enum class IndexKind { model_cr, coupled, vortex, augmented_vortex };
IndexKind parse_index_kind(const std::string& s);

struct IndexParams {
    int d = 0;        ///< model_cr
    int m = 0;        ///< Maslov index
    int n_bar = 1;
    int dim_M = 4;
    int dim_G = 1;
};
int predicted_index(IndexKind kind, const IndexParams& params);

using LambdaFamily = std::function<OperatorMatrix(const Grid2D&, double lambda)>;
/// Rejects lambda with lambda + 2/p within 0.1 of an integer.
std::vector<std::pair<double, IndexReport>> index_chamber_scan(const LambdaFamily& family,
                                                               const std::vector<double>& lambdas, double p,
                                                               const Schedule& schedule);

}  // namespace vortexlab
