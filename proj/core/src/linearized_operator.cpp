#include "vortexlab/linearized_operator.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <stdexcept>

#include "vortexlab/dense_svd.hpp"
#include "vortexlab/index_estimator.hpp"
#include "vortexlab/weighted_spaces.hpp"

namespace vortexlab {

namespace {

using cd = std::complex<double>;
using Triplets = std::vector<Eigen::Triplet<double>>;
constexpr double pi = 3.141592653589793;
const cd I(0, 1);

double bracket(double r) { return std::sqrt(1 + r * r); }

/// First-derivative stencil along one axis, matching diff_s / diff_t.
std::vector<std::pair<int, double>> stencil(int a, int n, double h) {
    const double c = 1 / (2 * h);
    if (a == 0) return {{0, -3 * c}, {1, 4 * c}, {2, -c}};
    if (a == n - 1) return {{n - 1, 3 * c}, {n - 2, -4 * c}, {n - 3, c}};
    return {{a - 1, -c}, {a + 1, c}};
}

/// Multiplication by i on C^2 = R^4 in (re, im) order.
Eigen::Matrix4d complex_structure(const Point&) {
    Eigen::Matrix4d j = Eigen::Matrix4d::Zero();
    j(1, 0) = 1;
    j(0, 1) = -1;
    j(3, 2) = 1;
    j(2, 3) = -1;
    return j;
}

Eigen::Vector4d to_real(const Point& x) {
    return {x[0].real(), x[0].imag(), x[1].real(), x[1].imag()};
}

void scale(Eigen::SparseMatrix<double>& m, const std::vector<double>& row, const std::vector<double>& col) {
    for (int k = 0; k < m.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it)
            it.valueRef() *= row[it.row()] / col[it.col()];
}

constexpr int kDom = 6;   // v1 re, v1 im, v2 re, v2 im, phi, psi
constexpr int kDw = 5;    // row 1 (C^2 as 4 reals), ds^dt row

/// Unweighted D_w rows (offset 0) and, if requested, L_w^* rows (offset rows_dw).
Triplets cartesian_triplets(const EquivariantPair& w, bool with_dw, bool with_lw, bool nabla_j) {
    const Grid2D& g = w.grid;
    const int n = g.n();
    const double h = g.h();
    const int dw_rows = with_dw ? static_cast<int>(g.size()) * kDw : 0;
    Triplets t;
    t.reserve(g.size() * 64);
    std::optional<PairResiduals> res;
    if (nabla_j) res = pair_residuals(ToyModelConfig(w.tau), w);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const std::size_t node = g.index(i, j);
            const int col0 = static_cast<int>(node) * kDom;
            const Point u = w.u_at(node);
            const double as = w.A.at(node, 0), at = w.A.at(node, 1);
            const auto ss = stencil(i, n, h), st = stencil(j, n, h);
            auto col_s = [&](int ii, int c) { return static_cast<int>(g.index(ii, j)) * kDom + c; };
            auto col_t = [&](int jj, int c) { return static_cast<int>(g.index(i, jj)) * kDom + c; };
            if (with_dw) {
                const int row0 = static_cast<int>(node) * kDw;
                const cd kap = cd(-pi * at, pi * as);
                for (int c = 0; c < 2; ++c) {
                    const int rr = row0 + 2 * c, ri = rr + 1, cx = 2 * c, cy = 2 * c + 1;
                    // 1/2 (x_s - y_t) + i/2 (y_s + x_t)
                    for (auto [a, v] : ss) {
                        t.emplace_back(rr, col_s(a, cx), 0.5 * v);
                        t.emplace_back(ri, col_s(a, cy), 0.5 * v);
                    }
                    for (auto [a, v] : st) {
                        t.emplace_back(rr, col_t(a, cy), -0.5 * v);
                        t.emplace_back(ri, col_t(a, cx), 0.5 * v);
                    }
                    // kappa v
                    t.emplace_back(rr, col0 + cx, kap.real());
                    t.emplace_back(rr, col0 + cy, -kap.imag());
                    t.emplace_back(ri, col0 + cx, kap.imag());
                    t.emplace_back(ri, col0 + cy, kap.real());
                    // pi i u_c (phi + i psi)
                    const cd m = pi * I * u[c];
                    t.emplace_back(rr, col0 + 4, m.real());
                    t.emplace_back(rr, col0 + 5, -m.imag());
                    t.emplace_back(ri, col0 + 4, m.imag());
                    t.emplace_back(ri, col0 + 5, m.real());
                }
                if (nabla_j) {
                    // -1/2 J (nabla_v J) (d_A u)^{1,0}, nabla_v J by central differences.
                    const Point dus = res->dAu_s.complex_at(node, 0) * Point(1, 0) +
                                      res->dAu_s.complex_at(node, 1) * Point(0, 1);
                    const Point dut = res->dAu_t.complex_at(node, 0) * Point(1, 0) +
                                      res->dAu_t.complex_at(node, 1) * Point(0, 1);
                    const Eigen::Matrix4d J = complex_structure(u);
                    const Eigen::Vector4d d10 = 0.5 * (to_real(dus) - J * to_real(dut));
                    const double eps = 1e-6;
                    for (int k = 0; k < 4; ++k) {
                        Eigen::Vector4d e = Eigen::Vector4d::Zero();
                        e[k] = eps;
                        Point pe(cd(e[0], e[1]), cd(e[2], e[3]));
                        const Eigen::Matrix4d dj = (complex_structure(u + pe) - complex_structure(u - pe)) / (2 * eps);
                        const Eigen::Vector4d col = -0.5 * J * dj * d10;
                        for (int r = 0; r < 4; ++r)
                            if (std::abs(col[r]) > 1e-15) t.emplace_back(row0 + r, col0 + k, col[r]);
                    }
                }
                // psi_s - phi_t - 2 pi sum (u_r x + u_i y)
                const int r2 = row0 + 4;
                for (auto [a, v] : ss) t.emplace_back(r2, col_s(a, 5), v);
                for (auto [a, v] : st) t.emplace_back(r2, col_t(a, 4), -v);
                for (int c = 0; c < 2; ++c) {
                    t.emplace_back(r2, col0 + 2 * c, -2 * pi * u[c].real());
                    t.emplace_back(r2, col0 + 2 * c + 1, -2 * pi * u[c].imag());
                }
            }
            if (with_lw) {
                // 2 pi sum (u_r y - u_i x) + phi_s + psi_t
                const int r = dw_rows + static_cast<int>(node);
                for (auto [a, v] : ss) t.emplace_back(r, col_s(a, 4), v);
                for (auto [a, v] : st) t.emplace_back(r, col_t(a, 5), v);
                for (int c = 0; c < 2; ++c) {
                    t.emplace_back(r, col0 + 2 * c, -2 * pi * u[c].imag());
                    t.emplace_back(r, col0 + 2 * c + 1, 2 * pi * u[c].real());
                }
            }
        }
    return t;
}

OperatorMatrix cartesian_operator(const EquivariantPair& w, bool with_dw, bool with_lw, const LinearizedOptions& opt,
                                  bool conjugate) {
    const Grid2D& g = w.grid;
    const int nodes = static_cast<int>(g.size());
    const int rows = (with_dw ? nodes * kDw : 0) + (with_lw ? nodes : 0);
    const int cols = nodes * kDom;
    OperatorMatrix op;
    op.domain = {Layout::cartesian, g, kDom, conjugate ? opt.lambda - 1 : 0.0, cols, {}};
    op.codomain = {Layout::cartesian, g, with_dw ? kDw + (with_lw ? 1 : 0) : 1, conjugate ? opt.lambda : 0.0, rows,
                   {}};
    const Triplets t = cartesian_triplets(w, with_dw, with_lw, with_dw && opt.nabla_j_term);
    op.entries.resize(rows, cols);
    op.entries.setFromTriplets(t.begin(), t.end());
    if (conjugate) {
        std::vector<double> rw(rows), cw(cols);
        for (int j = 0; j < g.n(); ++j)
            for (int i = 0; i < g.n(); ++i) {
                const std::size_t node = g.index(i, j);
                const double b = bracket(std::hypot(g.s(i), g.t(j)));
                for (int c = 0; c < kDom; ++c) cw[node * kDom + c] = std::pow(b, c < 4 ? opt.lambda - 1 : opt.lambda);
                const double wc = std::pow(b, opt.lambda);
                if (with_dw)
                    for (int c = 0; c < kDw; ++c) rw[node * kDw + c] = wc;
                if (with_lw) rw[(with_dw ? nodes * kDw : 0) + node] = wc;
            }
        scale(op.entries, rw, cw);
    }
    op.entries.makeCompressed();
    return op;
}

}  // namespace

OperatorMatrix assemble_Dw(const ToyModelConfig& cfg, const EquivariantPair& w, const LinearizedOptions& opt) {
    (void)cfg;
    return cartesian_operator(w, true, false, opt, opt.conjugate);
}

OperatorMatrix assemble_Lw_star(const ToyModelConfig& cfg, const EquivariantPair& w) {
    (void)cfg;
    return cartesian_operator(w, false, true, {}, false);
}

OperatorMatrix assemble_augmented(const ToyModelConfig& cfg, const EquivariantPair& w, const LinearizedOptions& opt) {
    (void)cfg;
    return cartesian_operator(w, true, true, opt, opt.conjugate);
}

OperatorMatrix assemble_Lw(const ToyModelConfig& cfg, const EquivariantPair& w) {
    (void)cfg;
    const Grid2D& g = w.grid;
    const int n = g.n(), nodes = static_cast<int>(g.size());
    Triplets t;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const int node = static_cast<int>(g.index(i, j));
            const Point u = w.u_at(node);
            const int r0 = node * kDom;
            for (int c = 0; c < 2; ++c) {
                t.emplace_back(r0 + 2 * c, node, -2 * pi * u[c].imag());
                t.emplace_back(r0 + 2 * c + 1, node, 2 * pi * u[c].real());
            }
            for (auto [a, v] : stencil(i, n, g.h())) t.emplace_back(r0 + 4, static_cast<int>(g.index(a, j)), -v);
            for (auto [a, v] : stencil(j, n, g.h())) t.emplace_back(r0 + 5, static_cast<int>(g.index(i, a)), -v);
        }
    OperatorMatrix op;
    op.domain = {Layout::cartesian, g, 1, 0.0, nodes, {}};
    op.codomain = {Layout::cartesian, g, kDom, 0.0, nodes * kDom, {}};
    op.entries.resize(nodes * kDom, nodes);
    op.entries.setFromTriplets(t.begin(), t.end());
    return op;
}

XwNorm xw_norm(const ToyModelConfig& cfg, const EquivariantPair& w, const GridField& zeta, double p, double lambda) {
    (void)cfg;
    if (zeta.fiber_dim() != kDom) throw std::invalid_argument("xw_norm: zeta needs 6 real components");
    if (!(zeta.grid() == w.grid)) throw std::invalid_argument("xw_norm: zeta and the pair live on different grids");
    zeta.check_finite();
    const Grid2D& g = w.grid;
    const GridField zs = diff_s(zeta), zt = diff_t(zeta);
    GridField dens(g, 1), proj(g, 1);
    double sup = 0;
    for (std::size_t node = 0; node < g.size(); ++node) {
        sup = std::max(sup, zeta.magnitude(node));
        const Point u = w.u_at(node);
        const Point v(zeta.complex_at(node, 0), zeta.complex_at(node, 1));
        double grad = 0;
        for (int c = 0; c < 2; ++c) {
            grad += std::norm(zs.complex_at(node, c) + 2 * pi * I * w.A.at(node, 0) * v[c]);
            grad += std::norm(zt.complex_at(node, c) + 2 * pi * I * w.A.at(node, 1) * v[c]);
        }
        for (int c = 4; c < 6; ++c) grad += zs.at(node, c) * zs.at(node, c) + zt.at(node, c) * zt.at(node, c);
        dens.at(node, 0) = std::sqrt(grad) + std::abs(moment_map_differential(u, v)) +
                           std::hypot(zeta.at(node, 4), zeta.at(node, 5));
        proj.at(node, 0) = projection_pr(u, v).norm();
    }
    XwNorm out;
    out.base = sup + weighted_lp_norm(dens, p, lambda);
    out.with_projection = out.base + weighted_lp_norm(proj, p, lambda);
    return out;
}

double na_lu_identity_residual(const ToyModelConfig& cfg, const EquivariantPair& w, const GridField& xi) {
    (void)cfg;
    if (xi.fiber_dim() != 1) throw std::invalid_argument("na_lu_identity_residual: xi must be scalar");
    if (!(xi.grid() == w.grid)) throw std::invalid_argument("na_lu_identity_residual: grid mismatch");
    const Grid2D& g = w.grid;
    GridField X(g, 4);
    for (std::size_t node = 0; node < g.size(); ++node) {
        const Point lx = inf_action(w.u_at(node), xi.at(node, 0));
        X.set_complex(node, 0, lx[0]);
        X.set_complex(node, 1, lx[1]);
    }
    const GridField Xs = diff_s(X), Xt = diff_t(X), xs = diff_s(xi), xt = diff_t(xi);
    const GridField us = diff_s(w.u), ut = diff_t(w.u);
    double worst = 0;
    for (std::size_t node = 0; node < g.size(); ++node) {
        const Point u = w.u_at(node);
        const double a[2] = {w.A.at(node, 0), w.A.at(node, 1)};
        const GridField* dX[2] = {&Xs, &Xt};
        const GridField* du[2] = {&us, &ut};
        const double dxi[2] = {xs.at(node, 0), xt.at(node, 0)};
        for (int dir = 0; dir < 2; ++dir)
            for (int c = 0; c < 2; ++c) {
                const cd x = 2 * pi * I * xi.at(node, 0) * u[c];
                const cd lhs = dX[dir]->complex_at(node, c) + 2 * pi * I * a[dir] * x;
                const cd lu_dxi = 2 * pi * I * dxi[dir] * u[c];
                const cd dAu = du[dir]->complex_at(node, c) + 2 * pi * I * a[dir] * u[c];
                const cd rhs = lu_dxi + 2 * pi * I * xi.at(node, 0) * dAu;
                worst = std::max(worst, std::abs(lhs - rhs));
            }
    }
    return worst;
}

RemainderReport trivialized_remainder(const ToyModelConfig& cfg, const EquivariantPair& w, const Trivialization& psi,
                                      double p, double lambda) {
    const Grid2D& g = w.grid;
    if (!(psi.grid == g)) throw std::invalid_argument("trivialized_remainder: grid mismatch");
    GridField X(g, 8);
    for (std::size_t node = 0; node < g.size(); ++node)
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) X.set_complex(node, 2 * a + b, psi.frames[node](a, b));
    const GridField Xs = diff_s(X), Xt = diff_t(X);
    RemainderReport out;
    out.s_inf = s_infinity(cfg, cfg.x_inf());
    GridField rem(g, 1);
    for (int j = 0; j < g.n(); ++j)
        for (int i = 0; i < g.n(); ++i) {
            const std::size_t node = g.index(i, j);
            const Eigen::Matrix3cd& f = psi.frames[node];
            Eigen::Matrix2cd dbar;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    dbar(a, b) = 0.5 * (Xs.complex_at(node, 2 * a + b) + I * Xt.complex_at(node, 2 * a + b));
            const Point u = w.u_at(node);
            const cd kappa = pi * I * cd(w.A.at(node, 0), w.A.at(node, 1));
            Eigen::Matrix3cd Z = Eigen::Matrix3cd::Zero();
            Z(0, 0) = Z(1, 1) = kappa;
            Z(0, 2) = pi * I * u[0];
            Z(1, 2) = pi * I * u[1];
            Z(2, 0) = -2 * pi * I * std::conj(u[0]);
            Z(2, 1) = -2 * pi * I * std::conj(u[1]);
            const Eigen::Matrix3cd finv = f.inverse();
            Eigen::Matrix3cd R = finv * Z * f;
            R.topLeftCorner<2, 2>() += f.topLeftCorner<2, 2>().inverse() * dbar;
            R(1, 2) -= 0.5;
            R(2, 1) -= out.s_inf;
            const double r = std::hypot(g.s(i), g.t(j));
            rem.at(node, 0) = R.norm();
            if (r >= psi.r_split) out.tail_max = std::max(out.tail_max, R.norm());
        }
    const auto annuli = dyadic_annuli(g);
    for (const auto& [lo, hi] : annuli) {
        GridField masked(g, 1);
        for (int j = 0; j < g.n(); ++j)
            for (int i = 0; i < g.n(); ++i) {
                const double r = std::hypot(g.s(i), g.t(j));
                if (r >= lo && r <= hi) masked.at(g.index(i, j), 0) = rem.at(g.index(i, j), 0);
            }
        out.annulus_norms.push_back(weighted_lp_norm(masked, p, lambda));
    }
    out.tail_decay = decay_verdict(out.annulus_norms, 10 * g.h() * g.h());
    return out;
}

ModeProblem vortex_mode_problem(const ToyModelConfig& cfg, int d, const Grid2D& grid, double p, double lambda, int K) {
    const double l2 = l2_exponent(p, lambda);
    const WindingProfile prof{d, cfg.tau};
    ModeProblem pb;
    pb.R = grid.R();
    pb.h = grid.h();
    pb.K = K;
    pb.comps = {{"v1", RowKind::dbar, d, 0.5, l2 - 1, l2, false},
                {"v2", RowKind::dbar, d, 0.5, l2 - 1, l2, false},
                {"beta", RowKind::del, 1, 1.0, l2 - 1, l2, true}};
    pb.coef = [prof](double r, double phi, Eigen::MatrixXcd& c) {
        const double s = r * std::cos(phi), t = r * std::sin(phi);
        const cd rot = std::polar(1.0, -phi);
        c(0, 0) = c(1, 1) = prof.dbar_connection(s, t) * rot;
        const cd u1 = prof.u1(s, t);
        c(0, 2) = pi * I * u1 * rot;
        c(2, 0) = -2 * pi * I * std::conj(u1) / rot;
    };
    pb.outer_threshold = -l2;
    pb.extensions.push_back({"rho0(r/2)*horizontal", [d](int comp, int k, double r) -> cd {
                                 return comp == 1 && k == d ? rho0(0.5 * r) : 0.0;
                             }});
    return pb;
}

OperatorMatrix assemble_augmented_index(const ToyModelConfig& cfg, int d, const Grid2D& grid, double p, double lambda,
                                        int K) {
    if (grid.R() < 4) throw std::invalid_argument("assemble_augmented_index: R must be at least 4");
    const ModeProblem pb = vortex_mode_problem(cfg, d, grid, p, lambda, K);
    return from_mode_assembly(assemble_modes(pb), grid, 3, lambda - 1, lambda);
}

ConstrainedBlocks constrained_blocks(const OperatorMatrix& op) {
    if (op.row_blocks.size() != static_cast<std::size_t>(op.rows()))
        throw std::invalid_argument("constrained_blocks: operator has no row bookkeeping");
    const int cols = op.cols();
    Eigen::SparseMatrix<double, Eigen::RowMajor> rm = op.entries;
    std::vector<int> bc_rows, d_rows, t_rows;
    for (int r = 0; r < op.rows(); ++r) switch (op.row_blocks[r]) {
            case RowBlock::origin:
            case RowBlock::outer: bc_rows.push_back(r); break;
            case RowBlock::interior_re: t_rows.push_back(r); break;
            default: d_rows.push_back(r);
        }
    std::set<int> touched;
    for (int r : bc_rows)
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(rm, r); it; ++it)
            if (it.value() != 0) touched.insert(static_cast<int>(it.col()));
    const std::vector<int> S(touched.begin(), touched.end());
    std::vector<int> pos(cols, -1);
    for (std::size_t k = 0; k < S.size(); ++k) pos[S[k]] = static_cast<int>(k);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(static_cast<int>(bc_rows.size()), static_cast<int>(S.size()));
    for (std::size_t a = 0; a < bc_rows.size(); ++a)
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(rm, bc_rows[a]); it; ++it)
            if (pos[it.col()] >= 0) B(static_cast<int>(a), pos[it.col()]) = it.value();
    Eigen::MatrixXd Z;
    if (S.empty())
        Z.resize(0, 0);
    else if (bc_rows.empty())
        Z = Eigen::MatrixXd::Identity(static_cast<int>(S.size()), static_cast<int>(S.size()));
    else
        Z = dense_null_space(B).basis;
    const int free = cols - static_cast<int>(S.size());
    Triplets nb;
    // Constrained grid columns first, extension columns stay last.
    const int grid_cols = op.domain.grid_dofs;
    int c = 0;
    for (int k = 0; k < grid_cols; ++k)
        if (pos[k] < 0) nb.emplace_back(k, c++, 1.0);
    for (int b = 0; b < Z.cols(); ++b, ++c)
        for (int a = 0; a < Z.rows(); ++a)
            if (Z(a, b) != 0) nb.emplace_back(S[a], c, Z(a, b));
    for (int k = grid_cols; k < cols; ++k) {
        if (pos[k] >= 0) throw std::logic_error("constrained_blocks: boundary rows touch an extension column");
        nb.emplace_back(k, c++, 1.0);
    }
    Eigen::SparseMatrix<double> Nb(cols, free + static_cast<int>(Z.cols()));
    Nb.setFromTriplets(nb.begin(), nb.end());

    auto pick = [&](const std::vector<int>& rows) {
        Triplets sel;
        for (std::size_t k = 0; k < rows.size(); ++k) sel.emplace_back(static_cast<int>(k), rows[k], 1.0);
        Eigen::SparseMatrix<double> P(static_cast<int>(rows.size()), op.rows());
        P.setFromTriplets(sel.begin(), sel.end());
        OperatorMatrix out;
        out.domain = op.domain;
        out.domain.grid_dofs = static_cast<int>(Nb.cols()) - static_cast<int>(op.domain.extended_dims.size());
        out.codomain = op.codomain;
        out.codomain.grid_dofs = static_cast<int>(rows.size());
        out.entries = (P * op.entries * Nb).pruned();
        for (int r : rows) {
            out.row_blocks.push_back(op.row_blocks[r]);
            out.row_components.push_back(op.row_components[r]);
        }
        return out;
    };
    return {pick(d_rows), pick(t_rows)};
}

double lw_star_surjectivity_gap(const ToyModelConfig& cfg, const EquivariantPair& w, const Grid2D& grid, double p,
                                double lambda) {
    (void)cfg;
    const ConstrainedBlocks blocks =
        constrained_blocks(assemble_augmented_index(ToyModelConfig(w.tau), w.winding, grid, p, lambda));
    const Eigen::MatrixXd T(blocks.Lw_star.entries);
    const std::vector<double> sv = dense_singular_values(T);
    if (sv.empty()) return 0.0;
    // Skip the numerical kernel of T^T, if any.
    std::vector<double> padded(T.rows() - sv.size(), 0.0);
    padded.insert(padded.end(), sv.begin(), sv.end());
    const KernelCount k = count_near_kernel(padded);
    return padded[k.count];
}

}  // namespace vortexlab
