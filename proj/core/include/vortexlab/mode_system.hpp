#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace vortexlab {

/// Angular-Fourier / radial finite-difference discretization of first-order
/// elliptic systems on the plane, used for index estimation.
///
/// A component holds angular modes k in [-K + shift, K + shift] sampled at radial
/// nodes r_j = (j + 1/2) h, j < N. Its equation rows are rotated so that the
/// principal part acts diagonally on modes:
///   dbar rows:  factor * (u_k' - (k/r) u_k)     (rotation e^{-i phi})
///   del rows:   factor * (u_k' + (k/r) u_k)     (rotation e^{+i phi})
/// and sit at the cell midpoints rho_j = (j + 1) h. The radial stencil is exact
/// on r^nu with nu the indicial root of the mode. Zeroth-order terms enter through
/// the Fourier coefficients of a matrix-valued function C(r, phi), expressed
/// already in rotated rows.
///
/// Boundary rows: modes with negative indicial root are pinned at the first node
/// (regularity at the origin); at r = R the frozen-coefficient radial generator
/// is diagonalized and every eigen-direction that is not admissible in the
/// weighted space gets one row. Both kinds of rows are complex and are realified
/// into pairs like everything else.
enum class RowKind { dbar, del };

struct ModeComponent {
    std::string name;
    RowKind kind = RowKind::dbar;
    int shift = 0;
    double factor = 0.5;
    double dom_weight = 0.0;   ///< <r>-exponent of the domain samples in the L^2 frame
    double cod_weight = 0.0;   ///< <r>-exponent of the codomain samples
    bool split_real = false;   ///< emit Re and Im of the unrotated row as separate blocks
};

using CoefFn = std::function<void(double r, double phi, Eigen::MatrixXcd& c)>;
/// Physical mode value of an extension direction: (component, mode, r) -> value.
using ExtFn = std::function<std::complex<double>(int comp, int mode, double r)>;

struct ModeExtension {
    std::string label;
    ExtFn profile;
};

struct ModeProblem {
    double R = 8;
    double h = 0.5;
    int K = 8;
    std::vector<ModeComponent> comps;
    CoefFn coef;                     ///< may be empty (no zeroth-order terms)
    double outer_threshold = 0;      ///< rows for generator eigenvalues with R Re(mu) > threshold
    std::vector<ModeExtension> extensions;
};

enum class RowBlock { interior, interior_re, interior_im, origin, outer };

struct ModeAssembly {
    Eigen::SparseMatrix<double> matrix;   ///< realified, weight-conjugated
    std::vector<int> row_component;       ///< -1 for boundary rows
    std::vector<RowBlock> row_block;
    int N = 0;                            ///< radial nodes
    int M = 0;                            ///< modes per component
    int grid_cols = 0;                    ///< real columns excluding extensions
    int origin_rows = 0;
    int outer_rows = 0;
    std::vector<std::string> ext_labels;
    std::vector<double> node_r;
};

ModeAssembly assemble_modes(const ModeProblem& pb);

/// Radial generator of the frozen problem at radius r (complex, nc*M square).
Eigen::MatrixXcd mode_generator(const ModeProblem& pb, double r);

/// Fourier coefficients of C(r, .) for frequencies -qmax..qmax, as a vector of
/// nc x nc matrices indexed by q + qmax.
std::vector<Eigen::MatrixXcd> coef_fourier(const ModeProblem& pb, double r, int qmax);

/// Indicial root of mode k for a row kind.
inline int indicial_root(RowKind kind, int k) { return kind == RowKind::dbar ? k : -k; }

}  // namespace vortexlab
