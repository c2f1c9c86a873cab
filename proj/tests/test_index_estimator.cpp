#include <gtest/gtest.h>

#include <cstdlib>
#include <random>

#include "vortexlab/index_estimator.hpp"
#include "vortexlab/linearized_operator.hpp"
#include "vortexlab/model_operators.hpp"

using namespace vortexlab;

namespace {

OperatorMatrix dense_op(const Eigen::MatrixXd& m) {
    OperatorMatrix op;
    op.entries = m.sparseView();
    op.domain.grid_dofs = static_cast<int>(m.cols());
    op.codomain.grid_dofs = static_cast<int>(m.rows());
    return op;
}

OperatorMatrix transpose(const OperatorMatrix& op) {
    OperatorMatrix t;
    t.domain = op.codomain;
    t.codomain = op.domain;
    t.entries = op.entries.transpose();
    return t;
}

Eigen::MatrixXd random_matrix(int rows, int cols, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0, 1);
    Eigen::MatrixXd m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) m(i, j) = n(rng);
    return m;
}

class ThreadEnv : public ::testing::Test {
protected:
    void TearDown() override { unsetenv("VORTEXLAB_THREADS"); }
};

}  // namespace

TEST(Spectrum, Examples) {
    for (double s : singular_spectrum(Eigen::MatrixXd::Identity(5, 5))) EXPECT_NEAR(s, 1.0, 1e-15);
    const std::vector<double> d = singular_spectrum(Eigen::Vector3d(2, 0, 1).asDiagonal().toDenseMatrix());
    ASSERT_EQ(d.size(), 3u);
    EXPECT_NEAR(d[0], 0.0, 1e-15);
    EXPECT_NEAR(d[1], 1.0, 1e-15);
    EXPECT_NEAR(d[2], 2.0, 1e-15);
    EXPECT_EQ(singular_spectrum(random_matrix(7, 4, 1)).size(), 4u);
    Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(3, 3);
    bad(1, 1) = std::nan("");
    EXPECT_THROW(singular_spectrum(bad), std::domain_error);
    EXPECT_THROW(singular_spectrum(Eigen::MatrixXd(kDenseLimit + 1, 1)), std::invalid_argument);
}

TEST(Spectrum, AssembledDbarHasKernel) {
    const OperatorMatrix op = assemble_dbar_index(Grid2D(8, 0.5), 4, 0.75, 1);
    std::vector<double> padded(op.cols() - std::min(op.rows(), op.cols()), 0.0);
    const std::vector<double> sv = singular_spectrum(op);
    padded.insert(padded.end(), sv.begin(), sv.end());
    EXPECT_GE(count_near_kernel(padded).count, 2);
}

TEST(KernelCount, Examples) {
    const KernelCount a = count_near_kernel({1e-14, 1e-13, 0.5, 0.7});
    EXPECT_EQ(a.count, 2);
    EXPECT_NEAR(a.gap_ratio, 5e12, 1e-3 * 5e12);
    EXPECT_EQ(count_near_kernel({0.99, 1.0, 1.0, 1.01}).count, 0);
    std::vector<double> geo;
    for (int k = 0; k < 30; ++k) geo.push_back(std::pow(2.0, k - 30));
    EXPECT_EQ(count_near_kernel(geo).count, 0);
    EXPECT_EQ(count_near_kernel({}).count, 0);
    // Only the smallest 40 values are scanned.
    std::vector<double> late(45, 1.0);
    late[44] = 1e6;
    EXPECT_EQ(count_near_kernel(late).count, 0);
}

TEST(MeasureIndex, TransposeNegates) {
    for (auto [r, c] : {std::pair{5, 9}, {9, 5}, {6, 6}}) {
        Eigen::MatrixXd m = random_matrix(r, c, r * 10 + c);
        m.col(0).setZero();
        const RefinementEntry a = measure_index(dense_op(m)), b = measure_index(transpose(dense_op(m)));
        EXPECT_EQ(a.dim_ker - a.dim_coker, c - r);
        EXPECT_EQ(b.dim_ker - b.dim_coker, r - c);
        EXPECT_EQ(a.dim_ker, b.dim_coker);
    }
    const OperatorMatrix op = assemble_dbar_index(Grid2D(8, 0.5), 4, 0.75, 1);
    const RefinementEntry a = measure_index(op), b = measure_index(transpose(op));
    EXPECT_EQ(a.dim_ker - a.dim_coker, -(b.dim_ker - b.dim_coker));
}

TEST(EstimateIndex, ModelDegreeZero) {
    const IndexReport r = estimate_index([](const Grid2D& g) { return assemble_dbar_index(g, 4, 0.75, 0); },
                                         default_schedule(), 2);
    EXPECT_EQ(r.index, 2);
    EXPECT_EQ(r.index, r.dim_ker - r.dim_coker);
    EXPECT_TRUE(r.stable);
    EXPECT_EQ(r.verdict(), "stable");
    EXPECT_TRUE(r.match.value());
    ASSERT_EQ(r.refinement_history.size(), 3u);
    EXPECT_EQ(r.refinement_history[2].R, 12);
    EXPECT_EQ(r.refinement_history[2].h, 0.375);
    EXPECT_GE(r.gap_ratio, 10);
}

TEST(EstimateIndex, UnstableAndErrors) {
    // Counts that depend on the grid cannot be stable.
    const IndexReport r = estimate_index(
        [](const Grid2D& g) {
            Eigen::MatrixXd m = Eigen::MatrixXd::Identity(6, 6);
            if (g.R() > 10) m(0, 0) = 0;
            return dense_op(m);
        },
        default_schedule(), 0);
    EXPECT_FALSE(r.stable);
    EXPECT_EQ(r.verdict(), "unstable");
    EXPECT_THROW(estimate_index([](const Grid2D&) { return dense_op(Eigen::MatrixXd::Identity(2, 2)); },
                                {{8, 0.5}}),
                 std::invalid_argument);
    EXPECT_THROW(estimate_index([](const Grid2D&) -> OperatorMatrix { throw std::runtime_error("boom"); },
                                default_schedule()),
                 std::runtime_error);
}

TEST(RelativeIndex, Examples) {
    const Grid2D g(8, 0.5);
    const OperatorMatrix d1 = assemble_dbar_index(g, 4, 0.75, 1), d0 = assemble_dbar_index(g, 4, 0.75, 0);
    EXPECT_EQ(relative_index(d1, d1), 0);
    EXPECT_EQ(relative_index(d1, d0), 2);
    const ToyModelConfig cfg;
    EXPECT_EQ(relative_index(assemble_augmented_index(cfg, 1, g, 4, 0.75), assemble_augmented_index(cfg, 0, g, 4, 0.75)),
              4);
    EXPECT_THROW(relative_index(d1, assemble_dbar(Grid2D(4, 0.5), 4, 0.75, 1)), std::invalid_argument);
}

TEST(RestrictToKernel, Examples) {
    const Eigen::MatrixXd d = random_matrix(7, 10, 3);
    const OperatorMatrix zero_t = dense_op(Eigen::MatrixXd::Zero(2, 10));
    const RefinementEntry same = measure_index(restrict_to_kernel(dense_op(d), zero_t));
    EXPECT_EQ(same.dim_ker - same.dim_coker, 3);

    for (unsigned seed = 0; seed < 5; ++seed) {
        const Eigen::MatrixXd dp = random_matrix(6, 12, 10 + seed), t = random_matrix(3, 12, 20 + seed);
        Eigen::MatrixXd stacked(9, 12);
        stacked << dp, t;
        const RefinementEntry r = measure_index(restrict_to_kernel(dense_op(dp), dense_op(t)));
        const RefinementEntry s = measure_index(dense_op(stacked));
        EXPECT_EQ(r.dim_ker - r.dim_coker, s.dim_ker - s.dim_coker);
    }
    EXPECT_THROW(restrict_to_kernel(dense_op(d), dense_op(Eigen::MatrixXd::Zero(2, 9))), std::invalid_argument);
}

TEST(RestrictToKernel, VortexMatchesAugmented) {
    const ToyModelConfig cfg;
    for (int d : {0, 1}) {
        const OperatorMatrix aug = assemble_augmented_index(cfg, d, Grid2D(8, 0.5), 4, 0.75);
        const ConstrainedBlocks cb = constrained_blocks(aug);
        const RefinementEntry r = measure_index(restrict_to_kernel(cb.Dw, cb.Lw_star));
        EXPECT_EQ(r.dim_ker - r.dim_coker, 2 + 4 * d);
    }
}

TEST(PredictedIndex, Examples) {
    EXPECT_EQ(predicted_index(IndexKind::model_cr, {.d = 1}), 4);
    EXPECT_EQ(predicted_index(IndexKind::model_cr, {.d = -2}), -2);
    EXPECT_EQ(predicted_index(IndexKind::coupled, {}), 0);
    EXPECT_EQ(predicted_index(IndexKind::augmented_vortex, {.m = 0}), 2);
    EXPECT_EQ(predicted_index(IndexKind::vortex, {.m = 2}), 6);
    EXPECT_EQ(predicted_index(IndexKind::augmented_vortex, {.m = 2}), 6);
    EXPECT_EQ(parse_index_kind("augmented_vortex"), IndexKind::augmented_vortex);
    EXPECT_EQ(parse_index_kind("model_cr"), IndexKind::model_cr);
    EXPECT_THROW(parse_index_kind("elliptic"), std::invalid_argument);
}

TEST(ChamberScan, RejectsExceptionalWeights) {
    const LambdaFamily fam = [](const Grid2D& g, double l) { return assemble_dbar_index(g, 4, l, 0); };
    EXPECT_THROW(index_chamber_scan(fam, {0.75, 1.45}, 4, default_schedule()), std::invalid_argument);
    EXPECT_THROW(index_chamber_scan(fam, {0.55}, 4, default_schedule()), std::invalid_argument);
}

TEST(ChamberScan, SameChamberSameIndex) {
    const LambdaFamily fam = [](const Grid2D& g, double l) { return assemble_dbar_index(g, 4, l, 1); };
    const auto scan = index_chamber_scan(fam, {0.65, 0.75, 1.35}, 4, {{8, 0.5}, {10, 0.5}});
    ASSERT_EQ(scan.size(), 3u);
    for (const auto& [l, rep] : scan) {
        EXPECT_EQ(rep.index, 4) << l;
        EXPECT_TRUE(rep.stable) << l;
    }
}

TEST_F(ThreadEnv, Cap) {
    setenv("VORTEXLAB_THREADS", "3", 1);
    EXPECT_EQ(thread_cap(), 3);
    setenv("VORTEXLAB_THREADS", "0", 1);
    EXPECT_THROW(thread_cap(), std::invalid_argument);
    setenv("VORTEXLAB_THREADS", "four", 1);
    EXPECT_THROW(thread_cap(), std::invalid_argument);
    unsetenv("VORTEXLAB_THREADS");
    EXPECT_GE(thread_cap(), 1);
}
