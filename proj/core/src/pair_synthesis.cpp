#include "vortexlab/pair_synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <type_traits>

#include "vortexlab/model_operators.hpp"

namespace vortexlab {

namespace {

using cd = std::complex<double>;
constexpr double pi = std::numbers::pi;
const cd I(0, 1);

double bracket(double r) { return std::sqrt(1 + r * r); }

// Bilinear weights of the cell containing (s, t).
struct Cell {
    int i0, j0;
    double fs, ft;
};

Cell locate(const Grid2D& g, double s, double t) {
    const double x = s / g.h() + g.center(), y = t / g.h() + g.center();
    int i0 = static_cast<int>(std::floor(x)), j0 = static_cast<int>(std::floor(y));
    i0 = std::clamp(i0, 0, g.n() - 2);
    j0 = std::clamp(j0, 0, g.n() - 2);
    return {i0, j0, x - i0, y - j0};
}

template <class F>
auto bilinear(const Grid2D& g, double s, double t, F&& at) {
    using V = std::decay_t<decltype(at(std::size_t{}))>;
    const Cell c = locate(g, s, t);
    return V((1 - c.fs) * (1 - c.ft) * at(g.index(c.i0, c.j0)) + c.fs * (1 - c.ft) * at(g.index(c.i0 + 1, c.j0)) +
           (1 - c.fs) * c.ft * at(g.index(c.i0, c.j0 + 1)) + c.fs * c.ft * at(g.index(c.i0 + 1, c.j0 + 1)));
}

}  // namespace

double WindingProfile::g_abs(double r) const {
    const double b = smooth_step(r, 0.25, 1.0);
    return (1 - b) * std::pow(r, std::abs(d)) + b;
}

double WindingProfile::rho(double r) const { return smooth_step(r, 0.5, 1.5); }
double WindingProfile::rho_prime(double r) const { return smooth_step_derivative(r, 0.5, 1.5); }

cd WindingProfile::u1(double s, double t) const {
    const double r = std::hypot(s, t);
    const double c = std::sqrt(tau / pi);
    if (r == 0) return d == 0 ? cd(c) : cd(0);
    return c * g_abs(r) * std::pow(cd(s, t) / r, d);
}

std::pair<double, double> WindingProfile::connection(double s, double t) const {
    const double r2 = s * s + t * t;
    if (r2 == 0) return {0, 0};
    const double k = d / (2 * pi) * rho(std::sqrt(r2)) / r2;
    return {k * t, -k * s};
}

cd WindingProfile::dbar_connection(double s, double t) const {
    const auto [as, at] = connection(s, t);
    return pi * I * cd(as, at);
}

Point EquivariantPair::u_interp(double s, double t) const {
    return bilinear(grid, s, t, [&](std::size_t n) { return u_at(n); });
}

std::pair<double, double> EquivariantPair::A_interp(double s, double t) const {
    const double as = bilinear(grid, s, t, [&](std::size_t n) { return A.at(n, 0); });
    const double at = bilinear(grid, s, t, [&](std::size_t n) { return A.at(n, 1); });
    return {as, at};
}

EquivariantPair make_winding_pair(const ToyModelConfig& cfg, int d, const Grid2D& grid) {
    if (grid.R() < 4) throw std::invalid_argument("make_winding_pair: grid.R must be at least 4");
    const WindingProfile prof{d, cfg.tau};
    EquivariantPair w{grid, GridField(grid, 4), GridField(grid, 2), d, cfg.tau};
    for (int j = 0; j < grid.n(); ++j)
        for (int i = 0; i < grid.n(); ++i) {
            const std::size_t node = grid.index(i, j);
            w.u.set_complex(node, 0, prof.u1(grid.s(i), grid.t(j)));
            const auto [as, at] = prof.connection(grid.s(i), grid.t(j));
            w.A.at(node, 0) = as;
            w.A.at(node, 1) = at;
        }
    return w;
}

EquivariantPair make_constant_pair(const ToyModelConfig& cfg, const Grid2D& grid, const Point& x) {
    EquivariantPair w{grid, GridField(grid, 4), GridField(grid, 2), 0, cfg.tau};
    for (std::size_t node = 0; node < grid.size(); ++node) {
        w.u.set_complex(node, 0, x[0]);
        w.u.set_complex(node, 1, x[1]);
    }
    return w;
}

PairResiduals pair_residuals(const ToyModelConfig& cfg, const EquivariantPair& w) {
    const Grid2D& g = w.grid;
    PairResiduals res{diff_s(w.u), diff_t(w.u), GridField(g, 1), GridField(g, 1)};
    const GridField ats = diff_s(w.A), att = diff_t(w.A);
    for (std::size_t node = 0; node < g.size(); ++node) {
        const Point u = w.u_at(node);
        for (int c = 0; c < 2; ++c) {
            res.dAu_s.set_complex(node, c, res.dAu_s.complex_at(node, c) + 2 * pi * I * w.A.at(node, 0) * u[c]);
            res.dAu_t.set_complex(node, c, res.dAu_t.complex_at(node, c) + 2 * pi * I * w.A.at(node, 1) * u[c]);
        }
        res.F.at(node, 0) = ats.at(node, 1) - att.at(node, 0);
        res.mu.at(node, 0) = moment_map(cfg, u);
    }
    return res;
}

GridField energy_density(const ToyModelConfig& cfg, const EquivariantPair& w) {
    const PairResiduals r = pair_residuals(cfg, w);
    GridField e(w.grid, 1);
    for (std::size_t node = 0; node < w.grid.size(); ++node) {
        const double a = r.dAu_s.magnitude(node), b = r.dAu_t.magnitude(node);
        const double f = r.F.at(node, 0), m = r.mu.at(node, 0);
        e.at(node, 0) = 0.5 * (a * a + b * b + f * f + m * m);
    }
    return e;
}

MembershipReport b_membership_diagnostic(const ToyModelConfig& cfg, const EquivariantPair& w, double p,
                                         double lambda) {
    if (p <= 2) throw std::invalid_argument("b_membership_diagnostic: p must exceed 2");
    const Grid2D& g = w.grid;
    const GridField e = energy_density(cfg, w);
    const double rmax = g.center() * g.h();
    MembershipReport rep;
    for (double r = 0.5; r < rmax; r *= 2) rep.radii.push_back(r);
    rep.radii.push_back(rmax);
    std::vector<double> integral(rep.radii.size(), 0.0);
    for (int j = 0; j < g.n(); ++j)
        for (int i = 0; i < g.n(); ++i) {
            const double r = std::hypot(g.s(i), g.t(j));
            const double v = std::pow(std::sqrt(e.at(g.index(i, j), 0)) * std::pow(bracket(r), lambda), p) *
                             g.trapezoid_weight(i, j) * g.h() * g.h();
            for (std::size_t k = 0; k < rep.radii.size(); ++k)
                if (r <= rep.radii[k]) integral[k] += v;
        }
    for (double s : integral) rep.norm_by_radius.push_back(std::pow(s, 1 / p));
    const std::size_t n = integral.size();
    bool bounded = true;
    if (n >= 3) {
        const double last = integral[n - 1] - integral[n - 2], prev = integral[n - 2] - integral[n - 3];
        bounded = last <= 0.5 * prev || last <= 1e-12 * (1 + integral[n - 1]);
    }
    rep.verdict = bounded ? "bounded" : "divergent-trend";
    return rep;
}

int winding_degree(const std::vector<Eigen::MatrixXcd>& loop) {
    const std::size_t n = loop.size();
    if (n < 64) throw std::invalid_argument("winding_degree: need at least 64 samples");
    std::vector<cd> det(n);
    for (std::size_t k = 0; k < n; ++k) {
        det[k] = loop[k].determinant();
        if (std::abs(det[k]) < 1e-300) throw std::domain_error("winding_degree: singular sample");
    }
    double total = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double jump = std::arg(det[(k + 1) % n] / det[k]);
        if (std::abs(jump) >= pi / 2) throw std::domain_error("winding_degree: loop undersampled");
        total += jump;
    }
    return static_cast<int>(std::lround(total / (2 * pi)));
}

std::vector<Eigen::MatrixXcd> maslov_loop(const ToyModelConfig&, const EquivariantPair& w, double radius,
                                          int samples) {
    std::vector<Point> us(samples), hs(samples);
    for (int k = 0; k < samples; ++k) {
        const double th = 2 * pi * k / samples;
        us[k] = w.u_interp(radius * std::cos(th), radius * std::sin(th));
    }
    hs[0] = horizontal_space(us[0]);
    Point b = hs[0];
    for (int k = 0; k < samples; ++k) {
        const double t0 = 2 * pi * k / samples, t1 = 2 * pi * (k + 1) / samples, tm = 0.5 * (t0 + t1);
        const auto [as, at] = w.A_interp(radius * std::cos(tm), radius * std::sin(tm));
        const double ds = radius * (std::cos(t1) - std::cos(t0)), dt = radius * (std::sin(t1) - std::sin(t0));
        b *= std::exp(-2 * pi * I * (as * ds + at * dt));
        const Point h = horizontal_space(us[(k + 1) % samples]);
        b = h.dot(b) * h;
        b /= b.norm();
        if (k + 1 < samples) hs[k + 1] = b;
    }
    const double defect = std::arg(hs[0].dot(b));
    std::vector<Eigen::MatrixXcd> loop(samples);
    // Constant frame: (v, alpha, beta) -> (alpha e1 + v e2, beta); its inverse is a permutation.
    Eigen::Matrix3cd psi0_inv = Eigen::Matrix3cd::Zero();
    psi0_inv(0, 1) = psi0_inv(1, 0) = psi0_inv(2, 2) = 1.0;
    for (int k = 0; k < samples; ++k) {
        Eigen::Matrix3cd psi = Eigen::Matrix3cd::Zero();
        psi.block<2, 1>(0, 0) = hs[k] * std::exp(-I * defect * double(k) / double(samples));
        psi.block<2, 1>(0, 1) = inf_action(us[k], 1.0);
        psi(2, 2) = 1.0;
        loop[k] = psi0_inv * psi;
    }
    return loop;
}

int maslov_index(const ToyModelConfig& cfg, const EquivariantPair& w, double fraction) {
    const double radius = fraction * w.grid.center() * w.grid.h();
    const int samples = 512;
    for (int k = 0; k < samples; ++k) {
        const double th = 2 * pi * k / samples;
        if (w.u_interp(radius * std::cos(th), radius * std::sin(th)).norm() < 0.5 * cfg.sphere_radius())
            throw std::domain_error("maslov_index: |u| too small on the measurement circle");
    }
    return winding_degree(maslov_loop(cfg, w, radius, samples));
}

std::vector<std::pair<double, double>> dyadic_annuli(const Grid2D& g) {
    std::vector<std::pair<double, double>> out;
    const double rmax = g.center() * g.h();
    for (double r = 1; 2 * r <= rmax + 1e-12; r *= 2) out.emplace_back(r, 2 * r);
    return out;
}

std::string decay_verdict(const std::vector<double>& v, double floor) {
    for (std::size_t k = 1; k < v.size(); ++k)
        if (!(v[k] <= 0.5 * v[k - 1] || v[k] <= floor)) return "not-decaying";
    return "decaying";
}

Trivialization good_trivialization(const ToyModelConfig& cfg, const EquivariantPair& w, double p, double lambda) {
    const Grid2D& g = w.grid;
    const int d = w.winding, m = 2 * d;
    const double c = cfg.sphere_radius();
    Trivialization tr{g, std::vector<Eigen::Matrix3cd>(g.size()), 2.0, m, 0, 0, 0, {}, {}};
    const double rs = tr.r_split;
    Eigen::Matrix2cd swap;
    swap << 0, 1, 1, 0;
    for (int j = 0; j < g.n(); ++j)
        for (int i = 0; i < g.n(); ++i) {
            const double s = g.s(i), t = g.t(j), r = std::hypot(s, t), phi = std::atan2(t, s);
            const double sig = 0.5 * pi * (1 - smooth_step(r, 0.5, rs - 0.5));
            const double th = -d * phi;
            Eigen::Matrix2cd H;
            H << std::cos(sig) * std::exp(I * th), -std::sin(sig), std::sin(sig), std::cos(sig) * std::exp(-I * th);
            const double blend = smooth_step(r, 1.0, rs - 0.5);
            const double ell = r > 0 ? (1 - blend) * std::log(bracket(r)) + blend * std::log(r) : 0.0;
            Eigen::Matrix2cd D = Eigen::Matrix2cd::Zero();
            D(0, 0) = std::exp(-m * ell);
            D(1, 1) = 2 * pi * I * c;
            Eigen::Matrix3cd psi = Eigen::Matrix3cd::Zero();
            psi.topLeftCorner<2, 2>() = swap * H * D;
            psi(2, 2) = 1.0;
            const std::size_t node = g.index(i, j);
            tr.frames[node] = psi;

            const Eigen::JacobiSVD<Eigen::Matrix3cd> svd(psi);
            tr.max_condition = std::max(tr.max_condition, svd.singularValues()(0) / svd.singularValues()(2));
            Eigen::Matrix3cd scaled = psi;
            scaled.col(0) *= std::pow(bracket(r), m);
            const Eigen::JacobiSVD<Eigen::Matrix3cd> ssvd(scaled);
            tr.sandwich_constant =
                std::max({tr.sandwich_constant, ssvd.singularValues()(0), 1.0 / ssvd.singularValues()(2)});
            if (r >= rs) {
                const Point c1 = psi.block<2, 1>(0, 0), c2 = psi.block<2, 1>(0, 1);
                const Point u = w.u_at(node), hsp = horizontal_space(u);
                const double ortho = std::abs(c1.dot(c2)) / (c1.norm() * c2.norm());
                const double in_h = (c1 - hsp.dot(c1) * hsp).norm() / c1.norm();
                const double lu = (c2 - inf_action(u, 1.0)).norm() / c2.norm();
                tr.splitting_residual = std::max({tr.splitting_residual, ortho, in_h, lu});
            }
        }

    // nabla^A of Psi(p_m . + id), outside the unit disk.
    GridField X(g, 18);
    for (int j = 0; j < g.n(); ++j)
        for (int i = 0; i < g.n(); ++i) {
            const std::size_t node = g.index(i, j);
            const cd z(g.s(i), g.t(j));
            Eigen::Matrix3cd f = tr.frames[node];
            if (std::abs(z) >= 0.5) f.col(0) *= std::pow(z, m);
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) X.set_complex(node, 3 * a + b, f(a, b));
        }
    const GridField Xs = diff_s(X), Xt = diff_t(X);
    const auto annuli = dyadic_annuli(g);
    std::vector<double> sums(annuli.size(), 0.0);
    for (int j = 0; j < g.n(); ++j)
        for (int i = 0; i < g.n(); ++i) {
            const std::size_t node = g.index(i, j);
            const double r = std::hypot(g.s(i), g.t(j));
            double acc = 0;
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) {
                    const int c3 = 3 * a + b;
                    cd vs = Xs.complex_at(node, c3), vt = Xt.complex_at(node, c3);
                    if (a < 2) {
                        vs += 2 * pi * I * w.A.at(node, 0) * X.complex_at(node, c3);
                        vt += 2 * pi * I * w.A.at(node, 1) * X.complex_at(node, c3);
                    }
                    acc += std::norm(vs) + std::norm(vt);
                }
            const double v = std::pow(std::sqrt(acc) * std::pow(bracket(r), lambda), p) * g.trapezoid_weight(i, j);
            for (std::size_t k = 0; k < annuli.size(); ++k)
                if (r >= annuli[k].first && r <= annuli[k].second) sums[k] += v;
        }
    for (double s : sums) tr.derivative_annulus_norms.push_back(std::pow(s * g.h() * g.h(), 1 / p));
    tr.derivative_verdict = decay_verdict(tr.derivative_annulus_norms, 10 * g.h() * g.h());
    return tr;
}

}  // namespace vortexlab
