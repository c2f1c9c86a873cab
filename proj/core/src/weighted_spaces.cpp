#include "vortexlab/weighted_spaces.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>

namespace vortexlab {

namespace {

using Mask = std::function<bool(double s, double t)>;

// Weighted quadrature over the nodes accepted by the mask. The radial weight is
// either <z>^lambda or |z|^lambda.
double masked_norm(const GridField& f, double p, double lambda, bool bracket, const Mask& mask) {
    const Grid2D& g = f.grid();
    double sum = 0;
    for (int j = 0; j < g.n(); ++j)
        for (int i = 0; i < g.n(); ++i) {
            const double s = g.s(i), t = g.t(j);
            if (mask && !mask(s, t)) continue;
            const double r2 = s * s + t * t;
            const double w = bracket ? std::pow(1.0 + r2, 0.5 * lambda) : std::pow(r2, 0.5 * lambda);
            sum += std::pow(f.magnitude(g.index(i, j)) * w, p) * g.trapezoid_weight(i, j);
        }
    return std::pow(sum * g.h() * g.h(), 1.0 / p);
}

double sobolev_sum(const GridField& f, const WeightParams& wp, bool increment, const Mask& mask) {
    if (wp.k < 0 || wp.k > 2) throw std::invalid_argument("derivative order must be 0, 1 or 2");
    auto lam = [&](int order) { return increment ? wp.lambda + order : wp.lambda; };
    double total = masked_norm(f, wp.p, lam(0), true, mask);
    if (wp.k >= 1) {
        const GridField fs = diff_s(f), ft = diff_t(f);
        total += masked_norm(fs, wp.p, lam(1), true, mask) + masked_norm(ft, wp.p, lam(1), true, mask);
        if (wp.k == 2) {
            total += masked_norm(diff_s(fs), wp.p, lam(2), true, mask);
            total += masked_norm(diff_t(fs), wp.p, lam(2), true, mask);
            total += masked_norm(diff_t(ft), wp.p, lam(2), true, mask);
        }
    }
    return total;
}

}  // namespace

double sobolev_weight(double s, double t, double lambda) {
    return std::pow(1.0 + s * s + t * t, 0.5 * lambda);
}

double weighted_lp_norm(const GridField& f, double p, double lambda) {
    if (p < 1) throw std::invalid_argument("weighted_lp_norm: p must be >= 1");
    return masked_norm(f, p, lambda, true, nullptr);
}

double lkp_norm(const GridField& f, const WeightParams& wp) { return sobolev_sum(f, wp, true, nullptr); }

double wkp_norm(const GridField& f, const WeightParams& wp) { return sobolev_sum(f, wp, false, nullptr); }

HardyResult hardy_check(const GridField& u, double p, double lambda, double tol) {
    if (p <= 2) throw std::invalid_argument("hardy_check: p must exceed 2");
    if (lambda <= -2.0 / p) throw std::invalid_argument("hardy_check: lambda must exceed -2/p");
    if (u.fiber_dim() != 1) throw std::invalid_argument("hardy_check: scalar field expected");
    const Grid2D& g = u.grid();
    const double h = g.h(), R = g.center() * h;

    // Outer ring: nodes within two cells of the inscribed circle of radius R.
    double sum = 0, lo = INFINITY, hi = -INFINITY, sup = 0;
    int count = 0;
    for (int j = 0; j < g.n(); ++j)
        for (int i = 0; i < g.n(); ++i) {
            const double v = u.at(g.index(i, j), 0);
            sup = std::max(sup, std::abs(v));
            const double r = std::hypot(g.s(i), g.t(j));
            if (r <= R && r >= R - 2 * h) {
                sum += v;
                lo = std::min(lo, v);
                hi = std::max(hi, v);
                ++count;
            }
        }
    HardyResult res;
    res.y_inf = sum / count;
    if (hi - lo > 0.1 * std::max(std::abs(res.y_inf), sup))
        throw std::domain_error("hardy_check: limit at infinity not resolved on the outer ring");

    GridField centered(g, 1), grad(g, 1);
    const GridField us = diff_s(u), ut = diff_t(u);
    for (std::size_t node = 0; node < g.size(); ++node) {
        centered.at(node, 0) = u.at(node, 0) - res.y_inf;
        grad.at(node, 0) = std::hypot(us.at(node, 0), ut.at(node, 0));
    }
    const Mask outside_origin = [h](double s, double t) { return s * s + t * t >= h * h * (1 - 1e-9); };
    res.lhs = masked_norm(centered, p, lambda, false, outside_origin);
    res.rhs = p / (lambda + 2.0 / p) * masked_norm(grad, p, lambda + 1, false, outside_origin);
    res.satisfied = res.lhs <= res.rhs * (1 + tol);
    return res;
}

double morrey_ratio(const GridField& u, double p, double lambda) {
    if (p <= 2) throw std::invalid_argument("morrey_ratio: p must exceed 2");
    const Grid2D& g = u.grid();
    double sup = 0;
    for (int j = 0; j < g.n(); ++j)
        for (int i = 0; i < g.n(); ++i)
            sup = std::max(sup, u.magnitude(g.index(i, j)) * sobolev_weight(g.s(i), g.t(j), lambda + 2.0 / p));
    const double denom = lkp_norm(u, {p, lambda, 1});
    if (denom == 0) throw std::domain_error("morrey_ratio: zero field");
    return sup / denom;
}

double pd_bound_constant(int d) { return std::max(-d * std::pow(2.0, (-d + 3) / 2.0), 2.0); }

BoundResult pd_mult_bound_check(const GridField& u, int d, double p, double lambda, double tol) {
    const Grid2D& g = u.grid();
    const int k = u.fiber_dim();
    if (k != 1 && k != 2) throw std::invalid_argument("pd_mult_bound_check: scalar field expected");
    GridField base(g, 2), prod(g, 2);
    for (int j = 0; j < g.n(); ++j)
        for (int i = 0; i < g.n(); ++i) {
            const std::size_t node = g.index(i, j);
            const std::complex<double> z(g.s(i), g.t(j));
            if (std::abs(z) < 1.0) continue;
            const std::complex<double> v = k == 1 ? std::complex<double>(u.at(node, 0)) : u.complex_at(node, 0);
            base.set_complex(node, 0, v);
            prod.set_complex(node, 0, std::pow(z, d) * v);
        }
    const Mask exterior = [](double s, double t) { return s * s + t * t >= 1.0; };
    BoundResult res;
    res.lhs = sobolev_sum(prod, {p, lambda - d, 1}, true, exterior);
    res.rhs = pd_bound_constant(d) * sobolev_sum(base, {p, lambda, 1}, true, exterior);
    res.satisfied = res.lhs <= res.rhs * (1 + tol);
    return res;
}

GridField random_admissible_field(const Grid2D& g, int fiber_dim, std::uint64_t seed, double y_inf) {
    if (fiber_dim != 1 && fiber_dim != 2) throw std::invalid_argument("random_admissible_field: fiber must be 1 or 2");
    const double R = g.center() * g.h();
    if (R < 4) throw std::invalid_argument("random_admissible_field: grid radius below 4");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    struct Bump {
        double cs, ct, width;
        std::complex<double> amp;
    };
    std::vector<Bump> bumps(1 + static_cast<int>(unit(rng) * 6) % 6);
    for (auto& b : bumps) {
        const double rad = R / 3 * std::sqrt(unit(rng)), th = 2 * std::numbers::pi * unit(rng);
        b.cs = rad * std::cos(th);
        b.ct = rad * std::sin(th);
        b.width = 0.5 + unit(rng) * (R / 8 - 0.5);
        const double re = gauss(rng), im = gauss(rng);
        b.amp = {re, fiber_dim == 2 ? im : 0.0};
    }
    GridField f(g, fiber_dim);
    for (int j = 0; j < g.n(); ++j)
        for (int i = 0; i < g.n(); ++i) {
            std::complex<double> v = y_inf;
            for (const auto& b : bumps) {
                const double ds = g.s(i) - b.cs, dt = g.t(j) - b.ct;
                v += b.amp * std::exp(-(ds * ds + dt * dt) / (b.width * b.width));
            }
            const std::size_t node = g.index(i, j);
            if (fiber_dim == 1)
                f.at(node, 0) = v.real();
            else
                f.set_complex(node, 0, v);
        }
    return f;
}

}  // namespace vortexlab
