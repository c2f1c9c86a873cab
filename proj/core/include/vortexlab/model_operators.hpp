#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <iosfwd>
#include <string>
#include <vector>

#include "vortexlab/grid.hpp"
#include "vortexlab/mode_system.hpp"

namespace vortexlab {

enum class Layout { cartesian, polar_modes };

/// Dof bookkeeping of one side of an operator. Cartesian spaces have
/// nodes * fiber_dim grid dofs; polar spaces carry 2 * components * modes * radial
/// nodes grid dofs. Extended directions are appended after the grid dofs.
struct SpaceDescriptor {
    Layout layout = Layout::cartesian;
    Grid2D grid{1.0, 0.5};
    int fiber_dim = 2;
    double weight = 0.0;
    int grid_dofs = 0;
    std::vector<std::string> extended_dims;

    int dofs() const { return grid_dofs + static_cast<int>(extended_dims.size()); }
};

struct OperatorMatrix {
    SpaceDescriptor domain;
    SpaceDescriptor codomain;
    Eigen::SparseMatrix<double> entries;
    /// Row bookkeeping of polar assemblies; empty for Cartesian ones.
    std::vector<RowBlock> row_blocks;
    std::vector<int> row_components;

    int rows() const { return static_cast<int>(entries.rows()); }
    int cols() const { return static_cast<int>(entries.cols()); }
};

/// Quintic cutoff: 0 for r <= 1/2, 1 for r >= 1, C^2.
double rho0(double r);
double rho0_derivative(double r);
/// Quintic step 0 -> 1 on [a, b].
double smooth_step(double x, double a, double b);
double smooth_step_derivative(double x, double a, double b);

/// Cartesian weight-conjugated d/dzbar on complex scalar fields, domain exponent
/// lambda - 1 - d, codomain lambda - d, one extended column for rho0 * z^d.
/// Errors: R < 4, or lambda outside (1 - 2/p, 2 - 2/p) unless allow_outside.
OperatorMatrix assemble_dbar(const Grid2D& grid, double p, double lambda, int d, bool allow_outside = false);

/// {1, z, ..., z^(d-1)} sampled as complex fields (empty for d <= 0).
std::vector<GridField> polynomial_kernel_basis(const Grid2D& grid, int d);

/// Polar discretization of d/dzbar on C rho0 z^d + L^{1,2}_{lambda2 - 1 - d} with
/// lambda2 = lambda + 2/p - 1, used for index estimation.
OperatorMatrix assemble_dbar_index(const Grid2D& grid, double p, double lambda, int d, bool extended = true,
                                   int K = 8);

/// Polar discretization of [[dbar, A], [B, d/dz]] on V + V with uniform weight.
/// A and B must be positive definite hermitian, dim V in {1, 2, 3}.
OperatorMatrix assemble_coupled(const Grid2D& grid, double p, double lambda, const Eigen::MatrixXcd& A,
                                const Eigen::MatrixXcd& B, int K = 8);

/// -Laplacian (5-point, zero extension) plus A per node on V-valued fields.
OperatorMatrix assemble_helmholtz(const Grid2D& grid, const Eigen::MatrixXcd& A);

/// M_{<z>^delta} * op * M_{<z>^-delta} on the grid dofs of a Cartesian operator.
OperatorMatrix weight_conjugate(const OperatorMatrix& op, double delta);

/// Real L^2-frame exponent matching the L^p weight lambda.
inline double l2_exponent(double p, double lambda) { return lambda + 2.0 / p - 1.0; }

/// Throws unless A is hermitian positive definite.
void require_positive_hermitian(const Eigen::MatrixXcd& A, const char* what);

OperatorMatrix from_mode_assembly(const ModeAssembly& ma, const Grid2D& grid, int nc, double dom_weight,
                                  double cod_weight);

void write_operator(std::ostream& os, const OperatorMatrix& op);
void write_operator(const std::string& path, const OperatorMatrix& op);
Eigen::SparseMatrix<double> read_operator(std::istream& is);

}  // namespace vortexlab
