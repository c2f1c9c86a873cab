#include "vortexlab/mode_system.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vortexlab {

namespace {

using cd = std::complex<double>;
using Triplet = Eigen::Triplet<double>;

double bracket(double r) { return std::sqrt(1.0 + r * r); }

int max_shift_gap(const ModeProblem& pb) {
    int lo = pb.comps.front().shift, hi = lo;
    for (const auto& c : pb.comps) {
        lo = std::min(lo, c.shift);
        hi = std::max(hi, c.shift);
    }
    return 2 * pb.K + (hi - lo);
}

}  // namespace

std::vector<Eigen::MatrixXcd> coef_fourier(const ModeProblem& pb, double r, int qmax) {
    const int nc = static_cast<int>(pb.comps.size());
    std::vector<Eigen::MatrixXcd> out(2 * qmax + 1, Eigen::MatrixXcd::Zero(nc, nc));
    if (!pb.coef) return out;
    const int nf = 2 * qmax + 8;
    Eigen::MatrixXcd c(nc, nc);
    for (int l = 0; l < nf; ++l) {
        const double phi = 2 * std::numbers::pi * l / nf;
        c.setZero();
        pb.coef(r, phi, c);
        for (int q = -qmax; q <= qmax; ++q) out[q + qmax] += c * std::polar(1.0 / nf, -q * phi);
    }
    return out;
}

Eigen::MatrixXcd mode_generator(const ModeProblem& pb, double r) {
    const int nc = static_cast<int>(pb.comps.size()), M = 2 * pb.K + 1;
    const int qmax = max_shift_gap(pb);
    const auto ck = coef_fourier(pb, r, qmax);
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(nc * M, nc * M);
    for (int a = 0; a < nc; ++a) {
        const auto& ca = pb.comps[a];
        for (int mi = 0; mi < M; ++mi) {
            const int k = mi - pb.K + ca.shift;
            g(a * M + mi, a * M + mi) += indicial_root(ca.kind, k) / r;
            for (int b = 0; b < nc; ++b)
                for (int qi = 0; qi < M; ++qi) {
                    const int q = qi - pb.K + pb.comps[b].shift;
                    g(a * M + mi, b * M + qi) -= ck[k - q + qmax](a, b) / ca.factor;
                }
        }
    }
    return g;
}

ModeAssembly assemble_modes(const ModeProblem& pb) {
    if (pb.comps.empty()) throw std::invalid_argument("mode system: no components");
    if (pb.K < 1) throw std::invalid_argument("mode system: K must be positive");
    const int N = static_cast<int>(std::lround(pb.R / pb.h));
    if (N < 4) throw std::invalid_argument("mode system: R/h too small");
    const int nc = static_cast<int>(pb.comps.size()), M = 2 * pb.K + 1;
    const int next = static_cast<int>(pb.extensions.size());
    const double h = pb.h;

    std::vector<double> rn(N), re(N - 1);
    for (int j = 0; j < N; ++j) rn[j] = (j + 0.5) * h;
    for (int j = 0; j + 1 < N; ++j) re[j] = (j + 1.0) * h;

    auto col = [&](int c, int mi, int j) { return (c * M + mi) * N + j; };
    auto row = [&](int c, int mi, int j) { return (c * M + mi) * (N - 1) + j; };
    auto mode = [&](int c, int mi) { return mi - pb.K + pb.comps[c].shift; };
    const int gcols = nc * M * N, irows = nc * M * (N - 1);

    // Unweighted complex interior operator, column-major by (row, col) triplets.
    std::vector<Eigen::Triplet<cd>> raw;
    const int qmax = max_shift_gap(pb);
    for (int j = 0; j + 1 < N; ++j) {
        const double rho = re[j];
        const auto ck = coef_fourier(pb, rho, qmax);
        for (int a = 0; a < nc; ++a) {
            const auto& ca = pb.comps[a];
            for (int mi = 0; mi < M; ++mi) {
                const int k = mode(a, mi), rw = row(a, mi, j);
                const int nu = indicial_root(ca.kind, k);
                raw.emplace_back(rw, col(a, mi, j + 1), ca.factor * std::pow(rho / rn[j + 1], nu) / h);
                raw.emplace_back(rw, col(a, mi, j), -ca.factor * std::pow(rho / rn[j], nu) / h);
                for (int b = 0; b < nc; ++b)
                    for (int qi = 0; qi < M; ++qi) {
                        const cd v = ck[k - mode(b, qi) + qmax](a, b);
                        if (std::abs(v) < 1e-15) continue;
                        raw.emplace_back(rw, col(b, qi, j), 0.5 * v);
                        raw.emplace_back(rw, col(b, qi, j + 1), 0.5 * v);
                    }
            }
        }
    }
    Eigen::SparseMatrix<cd> a_raw(irows, gcols);
    a_raw.setFromTriplets(raw.begin(), raw.end());

    // Euclidean L^2 frame: sample * <r>^delta * sqrt(2 pi r h).
    Eigen::VectorXd wd(gcols), wc(irows);
    for (int c = 0; c < nc; ++c)
        for (int mi = 0; mi < M; ++mi) {
            for (int j = 0; j < N; ++j)
                wd[col(c, mi, j)] = std::pow(bracket(rn[j]), pb.comps[c].dom_weight) *
                                    std::sqrt(2 * std::numbers::pi * rn[j] * h);
            for (int j = 0; j + 1 < N; ++j)
                wc[row(c, mi, j)] = std::pow(bracket(re[j]), pb.comps[c].cod_weight) *
                                    std::sqrt(2 * std::numbers::pi * re[j] * h);
        }

    // Complex conjugated interior operator including extension columns.
    std::vector<Eigen::Triplet<cd>> cplx;
    for (int k = 0; k < a_raw.outerSize(); ++k)
        for (Eigen::SparseMatrix<cd>::InnerIterator it(a_raw, k); it; ++it)
            cplx.emplace_back(it.row(), it.col(), it.value() * wc[it.row()] / wd[it.col()]);
    for (int e = 0; e < next; ++e) {
        Eigen::VectorXcd x = Eigen::VectorXcd::Zero(gcols);
        for (int c = 0; c < nc; ++c)
            for (int mi = 0; mi < M; ++mi)
                for (int j = 0; j < N; ++j) x[col(c, mi, j)] = pb.extensions[e].profile(c, mode(c, mi), rn[j]);
        const Eigen::VectorXcd y = a_raw * x;
        for (int r = 0; r < irows; ++r)
            if (std::abs(y[r]) > 0) cplx.emplace_back(r, gcols + e, y[r] * wc[r]);
    }

    // Boundary rows, complex, on the conjugated samples.
    std::vector<Eigen::VectorXcd> bc_rows;
    std::vector<RowBlock> bc_kind;
    for (int c = 0; c < nc; ++c)
        for (int mi = 0; mi < M; ++mi)
            if (indicial_root(pb.comps[c].kind, mode(c, mi)) < 0) {
                Eigen::VectorXcd r = Eigen::VectorXcd::Zero(gcols + next);
                r[col(c, mi, 0)] = 1.0;
                bc_rows.push_back(std::move(r));
                bc_kind.push_back(RowBlock::origin);
            }
    const double rout = rn[N - 1];
    const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(mode_generator(pb, rout));
    if (es.info() != Eigen::Success) throw std::runtime_error("mode system: generator eigensolve failed");
    const Eigen::MatrixXcd vinv = es.eigenvectors().inverse();
    for (int i = 0; i < nc * M; ++i) {
        if (rout * es.eigenvalues()[i].real() <= pb.outer_threshold) continue;
        Eigen::VectorXcd r = Eigen::VectorXcd::Zero(gcols + next);
        for (int c = 0; c < nc; ++c)
            for (int mi = 0; mi < M; ++mi) r[col(c, mi, N - 1)] = vinv(i, c * M + mi) / wd[col(c, mi, N - 1)];
        r /= r.norm();
        bc_rows.push_back(std::move(r));
        bc_kind.push_back(RowBlock::outer);
    }

    // Realify: complex entry a at (r, c) becomes [[Re a, -Im a], [Im a, Re a]].
    const int nbc = static_cast<int>(bc_rows.size());
    const int nrows = 2 * (irows + nbc), ncols = 2 * (gcols + next);
    std::vector<Triplet> trip;
    auto put = [&](int r, int c, cd v) {
        if (v.real() != 0) {
            trip.emplace_back(2 * r, 2 * c, v.real());
            trip.emplace_back(2 * r + 1, 2 * c + 1, v.real());
        }
        if (v.imag() != 0) {
            trip.emplace_back(2 * r, 2 * c + 1, -v.imag());
            trip.emplace_back(2 * r + 1, 2 * c, v.imag());
        }
    };
    for (const auto& t : cplx) put(t.row(), t.col(), t.value());
    for (int b = 0; b < nbc; ++b)
        for (int c = 0; c < gcols + next; ++c)
            if (bc_rows[b][c] != cd(0)) put(irows + b, c, bc_rows[b][c]);
    Eigen::SparseMatrix<double> real(nrows, ncols);
    real.setFromTriplets(trip.begin(), trip.end());

    ModeAssembly out;
    out.N = N;
    out.M = M;
    out.grid_cols = 2 * gcols;
    out.node_r = rn;
    for (const auto& e : pb.extensions) out.ext_labels.push_back(e.label);
    out.row_component.assign(nrows, -1);
    out.row_block.assign(nrows, RowBlock::interior);
    for (int c = 0; c < nc; ++c)
        for (int mi = 0; mi < M; ++mi)
            for (int j = 0; j + 1 < N; ++j) {
                out.row_component[2 * row(c, mi, j)] = c;
                out.row_component[2 * row(c, mi, j) + 1] = c;
            }
    for (int b = 0; b < nbc; ++b) {
        out.row_block[2 * (irows + b)] = out.row_block[2 * (irows + b) + 1] = bc_kind[b];
        (bc_kind[b] == RowBlock::origin ? out.origin_rows : out.outer_rows) += 2;
    }

    // Orthogonal row transform splitting the unrotated row f = sum f_m e^{im phi}
    // into the Fourier data of Re f and Im f.
    bool any_split = false;
    for (const auto& c : pb.comps) any_split |= c.split_real;
    if (!any_split) {
        out.matrix = std::move(real);
        return out;
    }
    std::vector<Triplet> pt;
    std::vector<char> done(nrows, 0);
    const double s2 = std::sqrt(0.5);
    for (int c = 0; c < nc; ++c) {
        const auto& cc = pb.comps[c];
        if (!cc.split_real) continue;
        const int offset = cc.kind == RowKind::dbar ? 1 : -1;
        if (cc.shift + offset != 0)
            throw std::invalid_argument("mode system: split rows need a symmetric unrotated mode range");
        for (int j = 0; j + 1 < N; ++j) {
            // Real rows of f_m: 2*row(c, m + K, j) (real part), +1 (imaginary part).
            auto fre = [&](int m) { return 2 * row(c, m + pb.K, j); };
            auto fim = [&](int m) { return 2 * row(c, m + pb.K, j) + 1; };
            // Output slots reuse the same 2M rows: first M for Re f, last M for Im f.
            std::vector<int> slots;
            for (int m = -pb.K; m <= pb.K; ++m) slots.push_back(fre(m)), slots.push_back(fim(m));
            std::sort(slots.begin(), slots.end());
            int s = 0;
            auto emit_re = [&](std::initializer_list<std::pair<int, double>> terms) {
                for (auto [src, w] : terms) pt.emplace_back(slots[s], src, w);
                out.row_block[slots[s]] = RowBlock::interior_re;
                ++s;
            };
            auto emit_im = [&](std::initializer_list<std::pair<int, double>> terms) {
                for (auto [src, w] : terms) pt.emplace_back(slots[s], src, w);
                out.row_block[slots[s]] = RowBlock::interior_im;
                ++s;
            };
            emit_re({{fre(0), 1.0}});
            for (int m = 1; m <= pb.K; ++m) {
                emit_re({{fre(m), s2}, {fre(-m), s2}});
                emit_re({{fim(m), s2}, {fim(-m), -s2}});
            }
            emit_im({{fim(0), 1.0}});
            for (int m = 1; m <= pb.K; ++m) {
                emit_im({{fim(m), s2}, {fim(-m), s2}});
                emit_im({{fre(m), -s2}, {fre(-m), s2}});
            }
            for (int r : slots) done[r] = 1;
        }
    }
    for (int r = 0; r < nrows; ++r)
        if (!done[r]) pt.emplace_back(r, r, 1.0);
    Eigen::SparseMatrix<double> p(nrows, nrows);
    p.setFromTriplets(pt.begin(), pt.end());
    out.matrix = p * real;
    return out;
}

}  // namespace vortexlab
