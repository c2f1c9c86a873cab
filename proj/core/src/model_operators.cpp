#include "vortexlab/model_operators.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace vortexlab {

namespace {

using cd = std::complex<double>;
using Triplet = Eigen::Triplet<double>;

double bracket_pow(double s, double t, double e) { return std::pow(1.0 + s * s + t * t, 0.5 * e); }

// Coefficients of the one-dimensional first-derivative stencil at position a of n.
std::vector<std::pair<int, double>> first_derivative_stencil(int a, int n, double h) {
    const double c = 1.0 / (2.0 * h);
    if (a == 0) return {{0, -3 * c}, {1, 4 * c}, {2, -c}};
    if (a == n - 1) return {{n - 1, 3 * c}, {n - 2, -4 * c}, {n - 3, c}};
    return {{a + 1, c}, {a - 1, -c}};
}

SpaceDescriptor cartesian_space(const Grid2D& g, int fiber, double weight) {
    SpaceDescriptor s;
    s.layout = Layout::cartesian;
    s.grid = g;
    s.fiber_dim = fiber;
    s.weight = weight;
    s.grid_dofs = static_cast<int>(g.size()) * fiber;
    return s;
}

}  // namespace

double smooth_step(double x, double a, double b) {
    if (x <= a) return 0.0;
    if (x >= b) return 1.0;
    const double y = (x - a) / (b - a);
    return y * y * y * (10 - 15 * y + 6 * y * y);
}

double smooth_step_derivative(double x, double a, double b) {
    if (x <= a || x >= b) return 0.0;
    const double y = (x - a) / (b - a);
    return 30 * y * y * (1 - y) * (1 - y) / (b - a);
}

double rho0(double r) { return smooth_step(r, 0.5, 1.0); }
double rho0_derivative(double r) { return smooth_step_derivative(r, 0.5, 1.0); }

void require_positive_hermitian(const Eigen::MatrixXcd& A, const char* what) {
    if (A.rows() != A.cols() || A.rows() < 1 || A.rows() > 3)
        throw std::invalid_argument(std::string(what) + ": expected a square matrix of size 1..3");
    if ((A - A.adjoint()).norm() > 1e-12 * (1 + A.norm()))
        throw std::invalid_argument(std::string(what) + ": matrix is not hermitian");
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A);
    if (es.eigenvalues().minCoeff() <= 0) throw std::invalid_argument(std::string(what) + ": matrix is not positive");
}

OperatorMatrix assemble_dbar(const Grid2D& g, double p, double lambda, int d, bool allow_outside) {
    if (g.R() < 4) throw std::invalid_argument("assemble_dbar: R must be at least 4");
    if (!allow_outside && !(lambda > 1 - 2 / p && lambda < 2 - 2 / p))
        throw std::invalid_argument("assemble_dbar: lambda outside (1-2/p, 2-2/p)");
    const int n = g.n();
    const double dom = lambda - 1 - d, cod = lambda - d;
    const int gd = static_cast<int>(g.size()) * 2;
    std::vector<Triplet> trip;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const int rnode = static_cast<int>(g.index(i, j));
            const double wc = bracket_pow(g.s(i), g.t(j), cod);
            // dbar(a + ib) = 1/2 [(a_s - b_t) + i (b_s + a_t)]
            for (auto [ii, c] : first_derivative_stencil(i, n, g.h())) {
                const int cnode = static_cast<int>(g.index(ii, j));
                const double v = 0.5 * c * wc / bracket_pow(g.s(ii), g.t(j), dom);
                trip.emplace_back(2 * rnode, 2 * cnode, v);
                trip.emplace_back(2 * rnode + 1, 2 * cnode + 1, v);
            }
            for (auto [jj, c] : first_derivative_stencil(j, n, g.h())) {
                const int cnode = static_cast<int>(g.index(i, jj));
                const double v = 0.5 * c * wc / bracket_pow(g.s(i), g.t(jj), dom);
                trip.emplace_back(2 * rnode, 2 * cnode + 1, -v);
                trip.emplace_back(2 * rnode + 1, 2 * cnode, v);
            }
            // Extended direction rho0 z^d: dbar = z^d rho0'(r) z / (2r).
            const cd z(g.s(i), g.t(j));
            const double r = std::abs(z);
            const double dr = r > 0 ? rho0_derivative(r) : 0.0;
            if (dr != 0) {
                const cd v = std::pow(z, d) * dr * z / (2 * r) * wc;
                trip.emplace_back(2 * rnode, gd, v.real());
                trip.emplace_back(2 * rnode + 1, gd, v.imag());
                trip.emplace_back(2 * rnode, gd + 1, -v.imag());
                trip.emplace_back(2 * rnode + 1, gd + 1, v.real());
            }
        }
    OperatorMatrix op;
    op.domain = cartesian_space(g, 2, dom);
    op.domain.extended_dims = {"rho0*p_d:re", "rho0*p_d:im"};
    op.codomain = cartesian_space(g, 2, cod);
    op.entries.resize(gd, gd + 2);
    op.entries.setFromTriplets(trip.begin(), trip.end());
    return op;
}

std::vector<GridField> polynomial_kernel_basis(const Grid2D& g, int d) {
    std::vector<GridField> out;
    for (int e = 0; e < d; ++e)
        out.push_back(sample_field(g, 2, [e](double s, double t, double* v) {
            const cd z = std::pow(cd(s, t), e);
            v[0] = z.real();
            v[1] = z.imag();
        }));
    return out;
}

OperatorMatrix from_mode_assembly(const ModeAssembly& ma, const Grid2D& grid, int nc, double dom_weight,
                                  double cod_weight) {
    OperatorMatrix op;
    op.domain.layout = op.codomain.layout = Layout::polar_modes;
    op.domain.grid = op.codomain.grid = grid;
    op.domain.fiber_dim = op.codomain.fiber_dim = 2 * nc;
    op.domain.weight = dom_weight;
    op.codomain.weight = cod_weight;
    op.domain.grid_dofs = ma.grid_cols;
    for (const auto& l : ma.ext_labels) {
        op.domain.extended_dims.push_back(l + ":re");
        op.domain.extended_dims.push_back(l + ":im");
    }
    op.codomain.grid_dofs = static_cast<int>(ma.matrix.rows());
    op.entries = ma.matrix;
    op.row_blocks = ma.row_block;
    op.row_components = ma.row_component;
    return op;
}

OperatorMatrix assemble_dbar_index(const Grid2D& grid, double p, double lambda, int d, bool extended, int K) {
    const double l2 = l2_exponent(p, lambda);
    ModeProblem pb;
    pb.R = grid.R();
    pb.h = grid.h();
    pb.K = K;
    pb.comps = {{"u", RowKind::dbar, 0, 0.5, l2 - 1 - d, l2 - d, false}};
    pb.outer_threshold = -(l2 - d);
    if (extended)
        pb.extensions.push_back({"rho0*p_d", [d](int, int k, double r) -> cd {
                                     return k == d ? rho0(r) * std::pow(r, d) : 0.0;
                                 }});
    return from_mode_assembly(assemble_modes(pb), grid, 1, lambda - 1 - d, lambda - d);
}

OperatorMatrix assemble_coupled(const Grid2D& grid, double p, double lambda, const Eigen::MatrixXcd& A,
                                const Eigen::MatrixXcd& B, int K) {
    require_positive_hermitian(A, "assemble_coupled: A");
    require_positive_hermitian(B, "assemble_coupled: B");
    if (A.rows() != B.rows()) throw std::invalid_argument("assemble_coupled: A and B act on different spaces");
    const int n = static_cast<int>(A.rows());
    const double l2 = l2_exponent(p, lambda);
    ModeProblem pb;
    pb.R = grid.R();
    pb.h = grid.h();
    pb.K = K;
    for (int a = 0; a < n; ++a) pb.comps.push_back({"x" + std::to_string(a), RowKind::dbar, 0, 0.5, l2, l2, false});
    for (int a = 0; a < n; ++a) pb.comps.push_back({"y" + std::to_string(a), RowKind::del, 1, 0.5, l2, l2, false});
    pb.coef = [A, B, n](double, double phi, Eigen::MatrixXcd& c) {
        c.topRightCorner(n, n) = A * std::polar(1.0, -phi);
        c.bottomLeftCorner(n, n) = B * std::polar(1.0, phi);
    };
    pb.outer_threshold = -(l2 + 1);
    return from_mode_assembly(assemble_modes(pb), grid, 2 * n, lambda, lambda);
}

OperatorMatrix assemble_helmholtz(const Grid2D& g, const Eigen::MatrixXcd& A) {
    require_positive_hermitian(A, "assemble_helmholtz: A");
    const int nv = static_cast<int>(A.rows()), f = 2 * nv, n = g.n();
    const double ih2 = 1.0 / (g.h() * g.h());
    std::vector<Triplet> trip;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const int node = static_cast<int>(g.index(i, j));
            auto dof = [&](int nd, int c, int part) { return nd * f + 2 * c + part; };
            for (int c = 0; c < nv; ++c)
                for (int part = 0; part < 2; ++part) {
                    const int r = dof(node, c, part);
                    trip.emplace_back(r, r, 4 * ih2);
                    const int nb[4][2] = {{i - 1, j}, {i + 1, j}, {i, j - 1}, {i, j + 1}};
                    for (auto& q : nb)
                        if (q[0] >= 0 && q[0] < n && q[1] >= 0 && q[1] < n)
                            trip.emplace_back(r, dof(static_cast<int>(g.index(q[0], q[1])), c, part), -ih2);
                }
            for (int c = 0; c < nv; ++c)
                for (int e = 0; e < nv; ++e) {
                    const cd a = A(c, e);
                    trip.emplace_back(dof(node, c, 0), dof(node, e, 0), a.real());
                    trip.emplace_back(dof(node, c, 0), dof(node, e, 1), -a.imag());
                    trip.emplace_back(dof(node, c, 1), dof(node, e, 0), a.imag());
                    trip.emplace_back(dof(node, c, 1), dof(node, e, 1), a.real());
                }
        }
    OperatorMatrix op;
    op.domain = cartesian_space(g, f, 0.0);
    op.codomain = cartesian_space(g, f, 0.0);
    const int dofs = static_cast<int>(g.size()) * f;
    op.entries.resize(dofs, dofs);
    op.entries.setFromTriplets(trip.begin(), trip.end());
    op.entries.prune(0.0);
    return op;
}

OperatorMatrix weight_conjugate(const OperatorMatrix& op, double delta) {
    if (op.domain.layout != Layout::cartesian || op.codomain.layout != Layout::cartesian)
        throw std::invalid_argument("weight_conjugate: Cartesian operator expected");
    const Grid2D& g = op.domain.grid;
    auto node_weight = [&](int dof, const SpaceDescriptor& sp, double e) {
        if (dof >= sp.grid_dofs) return 1.0;
        const int node = dof / sp.fiber_dim, n = g.n();
        return bracket_pow(g.s(node % n), g.t(node / n), e);
    };
    OperatorMatrix out = op;
    for (int k = 0; k < out.entries.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(out.entries, k); it; ++it)
            it.valueRef() *= node_weight(static_cast<int>(it.row()), op.codomain, delta) *
                             node_weight(static_cast<int>(it.col()), op.domain, -delta);
    out.domain.weight += delta;
    out.codomain.weight += delta;
    return out;
}

void write_operator(std::ostream& os, const OperatorMatrix& op) {
    os << "vortexop v1 rows=" << op.rows() << " cols=" << op.cols() << " nnz=" << op.entries.nonZeros() << '\n';
    os << std::setprecision(17);
    Eigen::SparseMatrix<double, Eigen::RowMajor> rm = op.entries;
    for (int r = 0; r < rm.outerSize(); ++r)
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(rm, r); it; ++it)
            os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
}

void write_operator(const std::string& path, const OperatorMatrix& op) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    write_operator(os, op);
}

Eigen::SparseMatrix<double> read_operator(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("vortexop: empty input");
    std::istringstream hs(line);
    std::string magic, version, rt, ct, nt;
    hs >> magic >> version >> rt >> ct >> nt;
    if (magic != "vortexop" || version != "v1" || rt.rfind("rows=", 0) || ct.rfind("cols=", 0) ||
        nt.rfind("nnz=", 0))
        throw std::runtime_error("vortexop: bad header");
    const long rows = std::stol(rt.substr(5)), cols = std::stol(ct.substr(5)), nnz = std::stol(nt.substr(4));
    std::vector<Triplet> trip;
    trip.reserve(nnz);
    for (long e = 0; e < nnz; ++e) {
        long r, c;
        double v;
        if (!(is >> r >> c >> v)) throw std::runtime_error("vortexop: truncated data");
        trip.emplace_back(r, c, v);
    }
    Eigen::SparseMatrix<double> m(rows, cols);
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
}

}  // namespace vortexlab
