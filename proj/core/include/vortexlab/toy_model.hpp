#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>

namespace vortexlab {

using Point = Eigen::Vector2cd;

/// G = R/Z acting on C^2 by x -> e^{2 pi i theta} x, moment map tau - pi |x|^2.
struct ToyModelConfig {
    explicit ToyModelConfig(double tau = 3.141592653589793);
    double tau;
    static constexpr int dim_M = 4;
    static constexpr int dim_G = 1;
    static constexpr int n_bar = dim_M / 2 - dim_G;
    /// Radius of the zero level set.
    double sphere_radius() const;
    /// The base point (sqrt(tau/pi), 0) on the zero level set.
    Point x_inf() const;
};

double moment_map(const ToyModelConfig& cfg, const Point& x);
/// d mu(x) v = -2 pi Re <x, v>.
double moment_map_differential(const Point& x, const Point& v);
/// L_x xi = 2 pi i xi x; the complex extension takes alpha in C.
Point inf_action(const Point& x, std::complex<double> alpha);
/// Adjoint of L_x for the flat metric: 2 pi Im <x, v>.
double l_star(const Point& x, const Point& v);
/// Orthogonal projection onto the real line spanned by i x (0 at x = 0).
Point projection_pr(const Point& x, const Point& v);
/// Unit complex basis vector of (im L^C_x)^perp; throws at x = 0.
Point horizontal_space(const Point& x);
/// L_x^* L_x = 4 pi^2 |x|^2 at a point of the zero level set.
double s_infinity(const ToyModelConfig& cfg, const Point& x_inf);

/// Sampled infimum of |d mu(x) L^C_x alpha| + |Pr L^C_x alpha| over
/// |mu(x)| <= delta and |alpha| = 1.
double estimate_c_lower_bound(const ToyModelConfig& cfg, double delta, int samples = 4096,
                              std::uint64_t seed = 0);

struct HypothesisReport {
    double min_orbit_speed = 0;   ///< min |L_x 1| over sampled zero-level points
    bool free_action = false;
    double max_sublevel_radius2 = 0;
    double sublevel_bound = 0;
    bool proper = false;
    bool pass() const { return free_action && proper; }
};

HypothesisReport hypothesis_H_check(const ToyModelConfig& cfg, int samples = 1024, std::uint64_t seed = 0);

/// Residual of L (L^* L)^{-1} L^* v = Pr v.
double rmk_c_projection_residual(const Point& x, const Point& v);

/// Uniform random point of the unit sphere S^3 in C^2.
template <class Rng>
Point random_unit_point(Rng& rng);

}  // namespace vortexlab

#include <random>

namespace vortexlab {

template <class Rng>
Point random_unit_point(Rng& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Point x(std::complex<double>(n(rng), n(rng)), std::complex<double>(n(rng), n(rng)));
    return x / x.norm();
}

}  // namespace vortexlab
