#include "vortexlab/grid.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace vortexlab {

Grid2D::Grid2D(double R, double h) : R_(R), h_(h) {
    if (!(R > 0) || !(h > 0)) throw std::invalid_argument("grid: R and h must be positive");
    if (R / h < 2.0 - 1e-12) throw std::invalid_argument("grid: R/h must be at least 2");
    half_ = static_cast<int>(std::floor(R / h + 1e-9));
    n_ = 2 * half_ + 1;
}

double Grid2D::trapezoid_weight(int i, int j) const {
    double w = 1.0;
    if (i == 0 || i == n_ - 1) w *= 0.5;
    if (j == 0 || j == n_ - 1) w *= 0.5;
    return w;
}

Grid2D make_grid(double R, double h) { return Grid2D(R, h); }

GridField::GridField(const Grid2D& grid, int fiber_dim)
    : grid_(grid), k_(fiber_dim), values_(grid.size() * fiber_dim, 0.0) {
    if (fiber_dim <= 0) throw std::invalid_argument("field: fiber_dim must be positive");
}

GridField::GridField(const Grid2D& grid, int fiber_dim, std::vector<double> values)
    : grid_(grid), k_(fiber_dim), values_(std::move(values)) {
    if (fiber_dim <= 0) throw std::invalid_argument("field: fiber_dim must be positive");
    if (values_.size() != grid.size() * fiber_dim)
        throw std::invalid_argument("field: value count does not match grid and fiber");
    check_finite();
}

double GridField::magnitude(std::size_t node) const {
    double s = 0;
    for (int c = 0; c < k_; ++c) s += values_[node * k_ + c] * values_[node * k_ + c];
    return std::sqrt(s);
}

void GridField::check_finite() const {
    for (double v : values_)
        if (!std::isfinite(v)) throw std::domain_error("field: non-finite entry");
}

namespace {

GridField diff_axis(const GridField& f, bool along_s) {
    const Grid2D& g = f.grid();
    const int n = g.n(), k = f.fiber_dim();
    if (n < 3) throw std::invalid_argument("diff: grid needs at least 3 nodes per axis");
    const double inv2h = 1.0 / (2.0 * g.h());
    GridField out(g, k);
    auto at = [&](int i, int j, int c) { return f.at(g.index(i, j), c); };
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const int a = along_s ? i : j;
            for (int c = 0; c < k; ++c) {
                auto v = [&](int m) { return along_s ? at(m, j, c) : at(i, m, c); };
                double d;
                if (a == 0)
                    d = (-3 * v(0) + 4 * v(1) - v(2)) * inv2h;
                else if (a == n - 1)
                    d = (3 * v(n - 1) - 4 * v(n - 2) + v(n - 3)) * inv2h;
                else
                    d = (v(a + 1) - v(a - 1)) * inv2h;
                out.at(g.index(i, j), c) = d;
            }
        }
    return out;
}

}  // namespace

GridField diff_s(const GridField& f) { return diff_axis(f, true); }
GridField diff_t(const GridField& f) { return diff_axis(f, false); }

double quadrature(const GridField& f, double p) {
    if (p < 1) throw std::invalid_argument("quadrature: p must be >= 1");
    const Grid2D& g = f.grid();
    double sum = 0;
    for (int j = 0; j < g.n(); ++j)
        for (int i = 0; i < g.n(); ++i)
            sum += std::pow(f.magnitude(g.index(i, j)), p) * g.trapezoid_weight(i, j);
    return std::pow(sum * g.h() * g.h(), 1.0 / p);
}

void write_field(std::ostream& os, const GridField& f) {
    const Grid2D& g = f.grid();
    os << "vortexfield v1 R=" << std::setprecision(17) << g.R() << " h=" << g.h()
       << " k=" << f.fiber_dim() << '\n';
    for (std::size_t node = 0; node < g.size(); ++node) {
        for (int c = 0; c < f.fiber_dim(); ++c) {
            if (c) os << ' ';
            os << f.at(node, c);
        }
        os << '\n';
    }
}

void write_field(const std::string& path, const GridField& f) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    write_field(os, f);
    if (!os) throw std::runtime_error("write failed: " + path);
}

GridField read_field(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("vortexfield: empty input");
    std::istringstream hs(line);
    std::string magic, version, rtok, htok, ktok;
    hs >> magic >> version >> rtok >> htok >> ktok;
    if (magic != "vortexfield" || version != "v1" || rtok.rfind("R=", 0) != 0 ||
        htok.rfind("h=", 0) != 0 || ktok.rfind("k=", 0) != 0)
        throw std::runtime_error("vortexfield: bad header");
    const Grid2D g(std::stod(rtok.substr(2)), std::stod(htok.substr(2)));
    const int k = std::stoi(ktok.substr(2));
    std::vector<double> vals(g.size() * k);
    for (double& v : vals)
        if (!(is >> v)) throw std::runtime_error("vortexfield: truncated data");
    return GridField(g, k, std::move(vals));
}

GridField read_field(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    return read_field(is);
}

}  // namespace vortexlab
