#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "vortexlab/grid.hpp"
#include "vortexlab/toy_model.hpp"

namespace vortexlab {

/// Closed-form radial profiles of the winding pair.
///
/// u(z) = g_d(z) x_inf with g_d = |g|(r) e^{i d phi}, |g| = (1 - b) r^|d| + b,
/// b a quintic step on [1/4, 1]; A = -(d / 2 pi) rho(r) dtheta with rho a quintic
/// step on [1/2, 3/2]. For r >= 3/2 the pair satisfies d_A u = 0, F_A = 0 and
/// mu(u) = 0 exactly.
struct WindingProfile {
    int d = 0;
    double tau = 3.141592653589793;

    double g_abs(double r) const;
    double rho(double r) const;
    double rho_prime(double r) const;
    /// First component of u (the second is zero).
    std::complex<double> u1(double s, double t) const;
    /// Connection coefficients (a_s, a_t).
    std::pair<double, double> connection(double s, double t) const;
    /// pi i (a_s + i a_t) = (d/2) rho / conj(z).
    std::complex<double> dbar_connection(double s, double t) const;
};

struct EquivariantPair {
    Grid2D grid;
    GridField u;   ///< fiber C^2, interleaved (re, im)
    GridField A;   ///< (a_s, a_t)
    int winding = 0;
    double tau = 3.141592653589793;

    Point u_at(std::size_t node) const { return Point(u.complex_at(node, 0), u.complex_at(node, 1)); }
    /// Bilinear interpolation of u and A at an arbitrary point inside the grid.
    Point u_interp(double s, double t) const;
    std::pair<double, double> A_interp(double s, double t) const;
};

/// Errors: grid.R < 4.
EquivariantPair make_winding_pair(const ToyModelConfig& cfg, int d, const Grid2D& grid);
EquivariantPair make_constant_pair(const ToyModelConfig& cfg, const Grid2D& grid, const Point& x);

/// Components of d_A u, F_A and mu(u) on the grid.
struct PairResiduals {
    GridField dAu_s, dAu_t;   ///< C^2 fibers
    GridField F;              ///< scalar
    GridField mu;             ///< scalar
};
PairResiduals pair_residuals(const ToyModelConfig& cfg, const EquivariantPair& w);

/// 1/2 (|d_A u|^2 + |F_A|^2 + |mu(u)|^2).
GridField energy_density(const ToyModelConfig& cfg, const EquivariantPair& w);

struct MembershipReport {
    std::vector<double> radii;
    std::vector<double> norm_by_radius;
    std::string verdict;   ///< "bounded" or "divergent-trend"
};
MembershipReport b_membership_diagnostic(const ToyModelConfig& cfg, const EquivariantPair& w, double p,
                                         double lambda);

/// Winding of arg det around a sampled loop of invertible matrices.
/// Errors: fewer than 64 samples, a singular sample, or a phase jump >= pi/2.
int winding_degree(const std::vector<Eigen::MatrixXcd>& loop);

/// Transition loop between the constant frame and the adapted frame
/// [H-frame, L^C_u] on the circle |z| = radius. The H-frame is continued by
/// nabla^A-parallel transport projected to H; any closure defect is spread
/// evenly along the loop.
std::vector<Eigen::MatrixXcd> maslov_loop(const ToyModelConfig& cfg, const EquivariantPair& w, double radius,
                                          int samples = 512);

/// Degree of the transition loop on |z| = fraction * R.
/// Errors: |u| < sqrt(tau/pi)/2 somewhere on the circle, winding_degree gates.
int maslov_index(const ToyModelConfig& cfg, const EquivariantPair& w, double fraction = 0.8);

struct Trivialization {
    Grid2D grid;
    std::vector<Eigen::Matrix3cd> frames;   ///< Psi_z: C^nbar + g^C + g^C -> C^2 + g^C
    double r_split = 2.0;
    int m = 0;
    double max_condition = 0;
    double splitting_residual = 0;     ///< max |<Psi e1, Psi e2>| for |z| >= r_split
    double sandwich_constant = 0;      ///< C with C^-1 |x| <= |Psi(<z>^m . + id) x| <= C |x|
    std::vector<double> derivative_annulus_norms;   ///< ||nabla^A(Psi(p_m . + id))||_{p,lambda} on dyadic annuli
    std::string derivative_verdict;
};

/// Good trivialization of a winding pair (closed-form frame, blended to a
/// constant frame inside r_split).
Trivialization good_trivialization(const ToyModelConfig& cfg, const EquivariantPair& w, double p = 4.0,
                                   double lambda = 0.75);

/// Dyadic annuli {2^k <= |z| <= 2^(k+1)} inside the grid, as (inner, outer) pairs.
std::vector<std::pair<double, double>> dyadic_annuli(const Grid2D& g);

/// "decaying" when every annulus value after the first is at most half the
/// previous one or below the floor.
std::string decay_verdict(const std::vector<double>& values, double floor);

}  // namespace vortexlab
