#pragma once

#include <cstdint>

#include "vortexlab/grid.hpp"

namespace vortexlab {

struct WeightParams {
    double p = 2.0;
    double lambda = 0.0;
    int k = 0;
};

/// (1 + |z|^2)^(lambda/2).
double sobolev_weight(double s, double t, double lambda);

/// Quadrature of |f| <z>^lambda in L^p.
double weighted_lp_norm(const GridField& f, double p, double lambda);

/// Sum over |alpha| <= k of weighted_lp_norm(d^alpha f, p, lambda + |alpha|).
double lkp_norm(const GridField& f, const WeightParams& wp);

/// As lkp_norm with the same exponent lambda for every derivative order.
double wkp_norm(const GridField& f, const WeightParams& wp);

struct HardyResult {
    double y_inf = 0;
    double lhs = 0;
    double rhs = 0;
    bool satisfied = false;
};

/// Checks ||(u - y_inf)|z|^lambda||_p <= p/(lambda + 2/p) ||Du |z|^(lambda+1)||_p
/// with y_inf taken from the outermost ring of the grid.
HardyResult hardy_check(const GridField& u, double p, double lambda, double tol = 0.02);

/// sup |u| <z>^(lambda + 2/p) over lkp_norm(u, {p, lambda, 1}).
double morrey_ratio(const GridField& u, double p, double lambda);

struct BoundResult {
    double lhs = 0;
    double rhs = 0;
    bool satisfied = false;
};

/// max{-d 2^((-d+3)/2), 2}.
double pd_bound_constant(int d);

/// Compares the L^{1,p}_{lambda-d} norm of z^d u with the L^{1,p}_lambda norm of u
/// outside the unit disk. Values of u inside the unit disk are ignored.
BoundResult pd_mult_bound_check(const GridField& u, int d, double p, double lambda, double tol = 0.02);

/// Seeded sum of 1 to 6 Gaussian bumps centered within R/3, widths in
/// [0.5, R/8], plus y_inf. Fiber 1 (real) or 2 (complex, y_inf added to the
/// real part). The bumps are below 1e-6 of their peak on the outer ring.
GridField random_admissible_field(const Grid2D& g, int fiber_dim, std::uint64_t seed, double y_inf = 0.0);

}  // namespace vortexlab
