#pragma once

#include <string>
#include <vector>

#include "vortexlab/model_operators.hpp"
#include "vortexlab/pair_synthesis.hpp"
#include "vortexlab/toy_model.hpp"

namespace vortexlab {

/// Cartesian layouts. Domain per node: (v1 re, v1 im, v2 re, v2 im, phi, psi) for
/// zeta = (v, phi ds + psi dt). D_w codomain per node: the (0,1) part of
/// nabla^A v + L_u alpha identified with C^2 through F_1, then the ds^dt
/// coefficient of d alpha + d mu(u) v. L_w^* codomain: one real value per node.
///
/// Weight conjugation: v carries exponent lambda - 1, alpha and every codomain
/// block carry lambda.
struct LinearizedOptions {
    double p = 4.0;
    double lambda = 0.75;
    bool conjugate = true;
    /// Adds -1/2 J (nabla_v J)(d_A u)^{1,0}; J = i is constant on C^2 so the
    /// term contributes nothing, which the tests check.
    bool nabla_j_term = true;
};

OperatorMatrix assemble_Dw(const ToyModelConfig& cfg, const EquivariantPair& w, const LinearizedOptions& opt = {});
/// L_u^* v - d_A^* alpha with d^*(a ds + b dt) = -(a_s + b_t); unweighted.
OperatorMatrix assemble_Lw_star(const ToyModelConfig& cfg, const EquivariantPair& w);
/// xi -> (L_u xi, -d xi); unweighted.
OperatorMatrix assemble_Lw(const ToyModelConfig& cfg, const EquivariantPair& w);
/// [D_w; L_w^*] with the L_w^* rows conjugated like the D_w codomain.
OperatorMatrix assemble_augmented(const ToyModelConfig& cfg, const EquivariantPair& w,
                                  const LinearizedOptions& opt = {});

struct XwNorm {
    double base = 0;
    double with_projection = 0;
};
/// ||zeta||_inf + || |nabla^A zeta| + |d mu(u) v| + |alpha| ||_{p,lambda}, plus
/// ||Pr^u v||_{p,lambda} for the augmented norm. zeta has fiber 6.
XwNorm xw_norm(const ToyModelConfig& cfg, const EquivariantPair& w, const GridField& zeta, double p,
               double lambda);

/// Residual of nabla^A L_u xi - L_u d xi = nabla_{d_A u} X_xi (max norm).
double na_lu_identity_residual(const ToyModelConfig& cfg, const EquivariantPair& w, const GridField& xi);

struct RemainderReport {
    std::vector<double> annulus_norms;   ///< weighted L^p_lambda norms on dyadic annuli
    double tail_max = 0;                 ///< max remainder coefficient for |z| >= r_split
    double s_inf = 0;
    std::string tail_decay;
};
/// Zeroth-order coefficients of (F Psi)^{-1} D~_w Psi minus the model
/// dbar + [[dbar, 1/2], [S_inf, 2 d/dz]].
RemainderReport trivialized_remainder(const ToyModelConfig& cfg, const EquivariantPair& w, const Trivialization& psi,
                                      double p, double lambda);

// ---------------------------------------------------------------------------
// Index lane: polar discretization of the augmented operator of the winding
// pair in complex form, v in C^2 and beta = phi + i psi:
//   dbar v + pi i (a_s + i a_t) v + pi i beta u
//   2 d/dz beta - 2 pi i conj(u) . v
// Re of the second row is L_w^*, Im of it is the second row of D_w.

ModeProblem vortex_mode_problem(const ToyModelConfig& cfg, int d, const Grid2D& grid, double p, double lambda,
                                int K = 8);

OperatorMatrix assemble_augmented_index(const ToyModelConfig& cfg, int d, const Grid2D& grid, double p, double lambda,
                                        int K = 8);

/// D_w rows and L_w^* rows of the index-lane operator, both expressed on an
/// orthonormal basis of the domain cut out by the boundary rows.
struct ConstrainedBlocks {
    OperatorMatrix Dw;
    OperatorMatrix Lw_star;
};
ConstrainedBlocks constrained_blocks(const OperatorMatrix& augmented_index);

/// Smallest singular value of the constrained index-lane L_w^* on the
/// orthogonal complement of its numerical kernel. Uses the pair's winding and tau.
double lw_star_surjectivity_gap(const ToyModelConfig& cfg, const EquivariantPair& w, const Grid2D& grid,
                                double p = 4.0, double lambda = 0.75);

}  // namespace vortexlab
