#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vortexlab/pair_synthesis.hpp"

using namespace vortexlab;
using cd = std::complex<double>;

namespace {

constexpr double pi = std::numbers::pi;

double residual_at(const PairResiduals& res, std::size_t node) {
    return res.dAu_s.magnitude(node) + res.dAu_t.magnitude(node) + std::abs(res.F.at(node, 0)) +
           std::abs(res.mu.at(node, 0));
}

template <class F>
void for_nodes(const Grid2D& g, F&& f) {
    for (int j = 0; j < g.n(); ++j)
        for (int i = 0; i < g.n(); ++i) f(g.index(i, j), std::hypot(g.s(i), g.t(j)));
}

std::vector<Eigen::MatrixXcd> loop_of(int n, const std::function<Eigen::MatrixXcd(double)>& f) {
    std::vector<Eigen::MatrixXcd> out;
    for (int k = 0; k < n; ++k) out.push_back(f(2 * pi * k / n));
    return out;
}

}  // namespace

TEST(WindingPair, ConstantWindingZero) {
    const ToyModelConfig cfg;
    const Grid2D g(6, 0.25);
    const EquivariantPair w = make_winding_pair(cfg, 0, g);
    const GridField e = energy_density(cfg, w);
    for_nodes(g, [&](std::size_t node, double r) {
        if (r < 2) return;
        EXPECT_LT((w.u_at(node) - cfg.x_inf()).norm(), 1e-14);
        EXPECT_EQ(e.at(node, 0), 0.0);
    });
    for (double a : w.A.values()) EXPECT_EQ(a, 0.0);
    EXPECT_THROW(make_winding_pair(cfg, 0, Grid2D(3, 0.25)), std::invalid_argument);
}

TEST(WindingPair, ResidualIsStencilError) {
    const ToyModelConfig cfg;
    for (double h : {0.25, 0.125}) {
        const Grid2D g(6, h);
        const PairResiduals res = pair_residuals(cfg, make_winding_pair(cfg, 1, g));
        double worst = 0;
        for_nodes(g, [&](std::size_t node, double r) {
            if (r >= 2.5) worst = std::max(worst, residual_at(res, node));
        });
        EXPECT_LE(worst, 10 * h * h) << "h=" << h;
    }
}

TEST(WindingPair, SupremumOfU) {
    const ToyModelConfig cfg(2.0);
    for (int d = -2; d <= 2; ++d) {
        const EquivariantPair w = make_winding_pair(cfg, d, Grid2D(6, 0.25));
        double sup_all = 0, sup_far = 0;
        for_nodes(w.grid, [&](std::size_t node, double r) {
            const double m = w.u.magnitude(node);
            sup_all = std::max(sup_all, m);
            if (r >= 2) sup_far = std::max(sup_far, m);
        });
        EXPECT_NEAR(sup_all, cfg.sphere_radius(), 1e-12) << d;
        EXPECT_NEAR(sup_far, cfg.sphere_radius(), 1e-12) << d;
        for (double a : w.A.values()) EXPECT_TRUE(std::isfinite(a));
    }
}

TEST(EnergyDensity, Examples) {
    const ToyModelConfig cfg;
    const Grid2D g(5, 0.25);
    const GridField at_inf = energy_density(cfg, make_constant_pair(cfg, g, cfg.x_inf()));
    for (double v : at_inf.values()) EXPECT_NEAR(v, 0, 1e-28);
    const ToyModelConfig unit(1.0);
    const GridField at_zero = energy_density(unit, make_constant_pair(unit, g, Point::Zero()));
    for (double v : at_zero.values()) EXPECT_DOUBLE_EQ(v, 0.5);
    const double h = 0.125;
    const EquivariantPair w = make_winding_pair(cfg, 1, Grid2D(6, h));
    const GridField e = energy_density(cfg, w);
    for_nodes(w.grid, [&](std::size_t node, double r) {
        if (r > 2.5) EXPECT_LE(e.at(node, 0), 10 * h * h);
    });
}

TEST(EnergyDensity, NonnegativeAndZeroExactlyOnSolutions) {
    const ToyModelConfig cfg;
    for (int d = -1; d <= 2; ++d) {
        const EquivariantPair w = make_winding_pair(cfg, d, Grid2D(5, 0.25));
        const GridField e = energy_density(cfg, w);
        const PairResiduals res = pair_residuals(cfg, w);
        for_nodes(w.grid, [&](std::size_t node, double) {
            const double v = e.at(node, 0);
            EXPECT_GE(v, 0.0);
            EXPECT_EQ(v == 0.0, residual_at(res, node) == 0.0);
        });
    }
}

TEST(Membership, Examples) {
    const ToyModelConfig cfg;
    const Grid2D g(16, 0.25);
    for (double lambda : {0.0, 0.75, 1.2})
        EXPECT_EQ(b_membership_diagnostic(cfg, make_winding_pair(cfg, 1, g), 4, lambda).verdict, "bounded");
    const MembershipReport zero = b_membership_diagnostic(cfg, make_constant_pair(cfg, g, Point::Zero()), 4, 0);
    EXPECT_EQ(zero.verdict, "divergent-trend");
    const ToyModelConfig cfg2(2 * cfg.tau);
    const MembershipReport zero2 = b_membership_diagnostic(cfg2, make_constant_pair(cfg2, g, Point::Zero()), 4, 0);
    ASSERT_EQ(zero.norm_by_radius.size(), zero2.norm_by_radius.size());
    for (std::size_t k = 0; k < zero.norm_by_radius.size(); ++k)
        EXPECT_NEAR(zero2.norm_by_radius[k], 2 * zero.norm_by_radius[k], 1e-12 * zero2.norm_by_radius[k]);
}

TEST(WindingDegree, Examples) {
    EXPECT_EQ(winding_degree(loop_of(64, [](double th) {
                  Eigen::MatrixXcd m(1, 1);
                  m(0, 0) = std::polar(1.0, th);
                  return m;
              })),
              1);
    EXPECT_EQ(winding_degree(loop_of(128, [](double th) {
                  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
                  m(0, 0) = std::polar(1.0, th);
                  m(1, 1) = std::polar(1.0, -th);
                  return m;
              })),
              0);
    EXPECT_EQ(winding_degree(loop_of(128, [](double th) {
                  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(3, 3);
                  m(0, 0) = std::polar(1.0, 2 * th);
                  return m;
              })),
              2);
}

TEST(WindingDegree, Gates) {
    auto scalar = [](double f) {
        return [f](double th) {
            Eigen::MatrixXcd m(1, 1);
            m(0, 0) = std::polar(1.0, f * th);
            return m;
        };
    };
    EXPECT_THROW(winding_degree(loop_of(32, scalar(1))), std::invalid_argument);
    // Forty turns on 64 samples jump by more than pi/2 per step.
    EXPECT_THROW(winding_degree(loop_of(64, scalar(40))), std::domain_error);
    EXPECT_THROW(winding_degree(loop_of(64, [](double th) {
                     Eigen::MatrixXcd m(1, 1);
                     m(0, 0) = th == 0 ? cd(0) : cd(1);
                     return m;
                 })),
                 std::domain_error);
}

TEST(Maslov, TwiceTheWinding) {
    const ToyModelConfig cfg;
    const Grid2D g(8, 0.25);
    EXPECT_EQ(maslov_index(cfg, make_constant_pair(cfg, g, cfg.x_inf())), 0);
    for (int d = -2; d <= 2; ++d) EXPECT_EQ(maslov_index(cfg, make_winding_pair(cfg, d, g)), 2 * d) << d;
}

TEST(Maslov, GaugeAndRadiusInvariance) {
    const ToyModelConfig cfg;
    const Grid2D g(8, 0.25);
    for (int d : {-1, 1, 2}) {
        const EquivariantPair w = make_winding_pair(cfg, d, g);
        for (double f : {0.6, 0.7, 0.8}) EXPECT_EQ(maslov_index(cfg, w, f), 2 * d);
        EquivariantPair rotated = w;
        const cd phase = std::polar(1.0, 2 * pi * 0.37);
        for (std::size_t node = 0; node < g.size(); ++node)
            for (int c = 0; c < 2; ++c) rotated.u.set_complex(node, c, phase * w.u.complex_at(node, c));
        EXPECT_EQ(maslov_index(cfg, rotated), 2 * d);
    }
}

TEST(Maslov, RejectsSmallU) {
    const ToyModelConfig cfg;
    const Grid2D g(8, 0.25);
    EXPECT_THROW(maslov_index(cfg, make_constant_pair(cfg, g, 0.1 * cfg.x_inf())), std::domain_error);
}

TEST(Trivialization, ConstantPair) {
    const ToyModelConfig cfg;
    const EquivariantPair w = make_constant_pair(cfg, Grid2D(6, 0.25), cfg.x_inf());
    const Trivialization tr = good_trivialization(cfg, w);
    EXPECT_EQ(tr.m, 0);
    const cd alpha(0.3, -1.2);
    const Eigen::Vector2cd expect = inf_action(cfg.x_inf(), alpha);
    for_nodes(tr.grid, [&](std::size_t node, double r) {
        if (r < 2) return;
        const Eigen::Vector3cd img = tr.frames[node] * Eigen::Vector3cd(0, alpha, 0);
        EXPECT_LT((img.head<2>() - expect).norm(), 1e-12);
        EXPECT_LT(std::abs(img(2)), 1e-15);
    });
    EXPECT_LE(tr.splitting_residual, 1e-10);
}

TEST(Trivialization, WindingPairs) {
    const ToyModelConfig cfg;
    for (int d : {-1, 0, 1, 2}) {
        const Trivialization tr = good_trivialization(cfg, make_winding_pair(cfg, d, Grid2D(8, 0.25)));
        EXPECT_EQ(tr.m, 2 * d);
        EXPECT_LE(tr.splitting_residual, 1e-10);
        EXPECT_TRUE(std::isfinite(tr.max_condition));
        if (d == 1) EXPECT_LE(tr.sandwich_constant, 10);
    }
}

TEST(Trivialization, DecayVerdict) {
    EXPECT_EQ(decay_verdict({1.0, 0.5, 0.2, 0.05}, 1e-12), "decaying");
    EXPECT_EQ(decay_verdict({1.0, 0.9}, 1e-12), "not-decaying");
    EXPECT_EQ(decay_verdict({1.0, 1e-13, 1e-13}, 1e-12), "decaying");
    const auto ann = dyadic_annuli(Grid2D(8, 0.25));
    ASSERT_FALSE(ann.empty());
    for (auto [a, b] : ann) {
        EXPECT_DOUBLE_EQ(b, 2 * a);
        EXPECT_LE(b, 8.0);
    }
}
