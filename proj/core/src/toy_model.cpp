#include "vortexlab/toy_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vortexlab {

namespace {
constexpr double pi = std::numbers::pi;
}

ToyModelConfig::ToyModelConfig(double t) : tau(t) {
    if (!(tau > 0)) throw std::invalid_argument("toy model: tau must be positive");
}

double ToyModelConfig::sphere_radius() const { return std::sqrt(tau / pi); }

Point ToyModelConfig::x_inf() const { return Point(sphere_radius(), 0.0); }

double moment_map(const ToyModelConfig& cfg, const Point& x) { return cfg.tau - pi * x.squaredNorm(); }

double moment_map_differential(const Point& x, const Point& v) { return -2 * pi * x.dot(v).real(); }

Point inf_action(const Point& x, std::complex<double> alpha) {
    return std::complex<double>(0, 2 * pi) * alpha * x;
}

double l_star(const Point& x, const Point& v) { return 2 * pi * x.dot(v).imag(); }

Point projection_pr(const Point& x, const Point& v) {
    const double n = x.norm();
    if (n == 0) return Point::Zero();
    const Point e = std::complex<double>(0, 1) * x / n;
    return e.dot(v).real() * e;
}

Point horizontal_space(const Point& x) {
    const double n = x.norm();
    if (n == 0) throw std::domain_error("horizontal_space: degenerate at x = 0");
    return Point(-std::conj(x[1]), std::conj(x[0])) / n;
}

double s_infinity(const ToyModelConfig& cfg, const Point& x) {
    if (std::abs(moment_map(cfg, x)) > 1e-8) throw std::domain_error("s_infinity: point is off the zero level set");
    return 4 * pi * pi * x.squaredNorm();
}

double estimate_c_lower_bound(const ToyModelConfig& cfg, double delta, int samples, std::uint64_t seed) {
    if (!(delta > 0 && delta < cfg.tau)) throw std::invalid_argument("c lower bound: need 0 < delta < tau");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double r2lo = (cfg.tau - delta) / pi, r2hi = (cfg.tau + delta) / pi;
    auto value = [](const Point& x, std::complex<double> a) {
        const Point la = inf_action(x, a);
        return std::abs(moment_map_differential(x, la)) + projection_pr(x, la).norm();
    };
    double best = INFINITY;
    // The extreme shells and the real and imaginary axes of alpha are always sampled.
    const std::complex<double> fixed[] = {1.0, std::complex<double>(0, 1)};
    for (int s = 0; s < samples; ++s) {
        const Point dir = random_unit_point(rng);
        const double r2 = s % 3 == 0 ? r2lo : s % 3 == 1 ? r2hi : r2lo + unit(rng) * (r2hi - r2lo);
        const Point x = std::sqrt(r2) * dir;
        best = std::min(best, value(x, std::polar(1.0, 2 * pi * unit(rng))));
        for (auto a : fixed) best = std::min(best, value(x, a));
    }
    return best;
}

HypothesisReport hypothesis_H_check(const ToyModelConfig& cfg, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    HypothesisReport rep;
    rep.min_orbit_speed = INFINITY;
    const double C = cfg.tau;
    rep.sublevel_bound = (cfg.tau + C) / pi;
    for (int s = 0; s < samples; ++s) {
        const Point x = cfg.sphere_radius() * random_unit_point(rng);
        rep.min_orbit_speed = std::min(rep.min_orbit_speed, inf_action(x, 1.0).norm());
        const Point y = std::sqrt(4 * unit(rng) * rep.sublevel_bound) * random_unit_point(rng);
        if (std::abs(moment_map(cfg, y)) <= C)
            rep.max_sublevel_radius2 = std::max(rep.max_sublevel_radius2, y.squaredNorm());
    }
    rep.free_action = rep.min_orbit_speed > 0;
    rep.proper = rep.max_sublevel_radius2 <= rep.sublevel_bound * (1 + 1e-12);
    return rep;
}

double rmk_c_projection_residual(const Point& x, const Point& v) {
    const double lstar_l = 4 * pi * pi * x.squaredNorm();
    const Point lhs = inf_action(x, l_star(x, v) / lstar_l);
    return (lhs - projection_pr(x, v)).norm();
}

}  // namespace vortexlab
