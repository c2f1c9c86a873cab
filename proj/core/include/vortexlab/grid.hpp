#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace vortexlab {

/// Uniform truncated grid on [-R, R]^2 with the origin as a node.
///
/// Nodes are (i*h, j*h) for integer i, j with |i*h|, |j*h| <= R. Storage order
/// is t-major: node (i, j) lives at index j*n + i, where i and j run over 0..n-1.
class Grid2D {
public:
    Grid2D(double R, double h);

    double R() const { return R_; }
    double h() const { return h_; }
    /// Nodes per axis, always odd.
    int n() const { return n_; }
    /// Index of the origin along each axis.
    int center() const { return half_; }
    std::size_t size() const { return static_cast<std::size_t>(n_) * n_; }

    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * n_ + i; }
    double s(int i) const { return (i - half_) * h_; }
    double t(int j) const { return (j - half_) * h_; }
    /// Trapezoid weight: 1 inside, 1/2 on edges, 1/4 at corners.
    double trapezoid_weight(int i, int j) const;

    bool operator==(const Grid2D& o) const { return n_ == o.n_ && h_ == o.h_; }

private:
    double R_;
    double h_;
    int half_;
    int n_;
};

Grid2D make_grid(double R, double h);

/// Real samples of a k-component field over a grid. Complex fibers are stored
/// as interleaved (re, im) pairs.
class GridField {
public:
    GridField(const Grid2D& grid, int fiber_dim);
    GridField(const Grid2D& grid, int fiber_dim, std::vector<double> values);

    const Grid2D& grid() const { return grid_; }
    int fiber_dim() const { return k_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    double& at(std::size_t node, int c) { return values_[node * k_ + c]; }
    double at(std::size_t node, int c) const { return values_[node * k_ + c]; }
    std::complex<double> complex_at(std::size_t node, int c) const {
        return {values_[node * k_ + 2 * c], values_[node * k_ + 2 * c + 1]};
    }
    void set_complex(std::size_t node, int c, std::complex<double> z) {
        values_[node * k_ + 2 * c] = z.real();
        values_[node * k_ + 2 * c + 1] = z.imag();
    }
    /// Euclidean norm of the fiber vector at a node.
    double magnitude(std::size_t node) const;
    /// Throws if any entry is not finite.
    void check_finite() const;

private:
    Grid2D grid_;
    int k_;
    std::vector<double> values_;
};

template <class F>
GridField sample_field(const Grid2D& g, int k, F&& f) {
    GridField out(g, k);
    std::vector<double> buf(k);
    for (int j = 0; j < g.n(); ++j)
        for (int i = 0; i < g.n(); ++i) {
            f(g.s(i), g.t(j), buf.data());
            for (int c = 0; c < k; ++c) out.at(g.index(i, j), c) = buf[c];
        }
    return out;
}

/// Second-order centered differences, one-sided second order on the boundary.
GridField diff_s(const GridField& f);
GridField diff_t(const GridField& f);

/// (sum_nodes |f|^p w h^2)^(1/p) with trapezoid weights w.
double quadrature(const GridField& f, double p);

void write_field(std::ostream& os, const GridField& f);
void write_field(const std::string& path, const GridField& f);
GridField read_field(std::istream& is);
GridField read_field(const std::string& path);

}  // namespace vortexlab
