#include "vortexlab/index_estimator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <stdexcept>
#include <thread>

#include "vortexlab/dense_svd.hpp"

namespace vortexlab {

std::vector<double> singular_spectrum(const Eigen::MatrixXd& a) {
    if (std::max(a.rows(), a.cols()) > kDenseLimit)
        throw std::invalid_argument("singular_spectrum: operator exceeds the dense limit");
    if (!a.allFinite()) throw std::domain_error("singular_spectrum: non-finite entries");
    return dense_singular_values(a);
}

std::vector<double> singular_spectrum(const OperatorMatrix& op) {
    if (std::max(op.rows(), op.cols()) > kDenseLimit)
        throw std::invalid_argument("singular_spectrum: operator exceeds the dense limit");
    return singular_spectrum(Eigen::MatrixXd(op.entries));
}

KernelCount count_near_kernel(const std::vector<double>& s, double ratio_threshold) {
    KernelCount out;
    const std::size_t n = std::min<std::size_t>(s.size(), 40);
    if (n == 0) return out;
    const double eps = std::numeric_limits<double>::epsilon() * std::max(1.0, s[n - 1]);
    out.gap_ratio = s[0] / eps;
    for (std::size_t k = 1; k < n; ++k) {
        const double ratio = s[k] / std::max(s[k - 1], eps);
        if (ratio >= ratio_threshold) {
            out.count = static_cast<int>(k);
            out.gap_ratio = ratio;
        }
    }
    return out;
}

namespace {

RefinementEntry measure(const OperatorMatrix& op, double threshold) {
    const std::vector<double> sv = singular_spectrum(op);
    auto padded = [&](int len) {
        std::vector<double> v(static_cast<std::size_t>(len) - sv.size(), 0.0);
        v.insert(v.end(), sv.begin(), sv.end());
        return v;
    };
    const KernelCount ker = count_near_kernel(padded(op.cols()), threshold);
    const KernelCount cok = count_near_kernel(padded(op.rows()), threshold);
    RefinementEntry e;
    e.R = op.domain.grid.R();
    e.h = op.domain.grid.h();
    e.dim_ker = ker.count;
    e.dim_coker = cok.count;
    e.gap_ratio = std::min(ker.gap_ratio, cok.gap_ratio);
    e.smallest.assign(sv.begin(), sv.begin() + std::min<std::size_t>(sv.size(), 12));
    return e;
}

}  // namespace

RefinementEntry measure_index(const OperatorMatrix& op) { return measure(op, 50.0); }

Schedule default_schedule() { return {{8, 0.5}, {12, 0.5}, {12, 0.375}}; }

int thread_cap() {
    if (const char* env = std::getenv("VORTEXLAB_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
        throw std::invalid_argument("VORTEXLAB_THREADS must be a positive integer");
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

IndexReport estimate_index(const OperatorFamily& family, const Schedule& schedule, std::optional<int> predicted,
                           double ratio_threshold) {
    if (schedule.size() < 2) throw std::invalid_argument("estimate_index: schedule needs at least 2 entries");
    const std::size_t n = schedule.size();
    std::vector<RefinementEntry> entries(n);
    std::vector<std::exception_ptr> errors(n);
    auto work = [&](std::size_t k) {
        try {
            const Grid2D g(schedule[k].first, schedule[k].second);
            RefinementEntry e = measure(family(g), ratio_threshold);
            e.R = schedule[k].first;
            e.h = schedule[k].second;
            entries[k] = std::move(e);
        } catch (...) {
            errors[k] = std::current_exception();
        }
    };
    const std::size_t threads = std::min<std::size_t>(n, static_cast<std::size_t>(thread_cap()));
    if (threads <= 1) {
        for (std::size_t k = 0; k < n; ++k) work(k);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                for (std::size_t k = t; k < n; k += threads) work(k);
            });
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    IndexReport rep;
    rep.refinement_history = entries;
    rep.dim_ker = entries.front().dim_ker;
    rep.dim_coker = entries.front().dim_coker;
    rep.index = rep.dim_ker - rep.dim_coker;
    rep.gap_ratio = entries.front().gap_ratio;
    rep.stable = true;
    for (const auto& e : entries) {
        rep.gap_ratio = std::min(rep.gap_ratio, e.gap_ratio);
        if (e.dim_ker != rep.dim_ker || e.dim_coker != rep.dim_coker || !(e.gap_ratio >= 10)) rep.stable = false;
    }
    rep.predicted = predicted;
    if (predicted) rep.match = rep.index == *predicted;
    return rep;
}

int relative_index(const OperatorMatrix& op, const OperatorMatrix& ref) {
    // Polar assemblies carry a weight- and winding-dependent number of boundary
    // rows, so only the grid and layout have to agree there.
    const bool same_shape = op.rows() == ref.rows() && op.cols() == ref.cols();
    if (op.domain.layout != ref.domain.layout || !(op.domain.grid == ref.domain.grid) ||
        (op.domain.layout == Layout::cartesian && !same_shape))
        throw std::invalid_argument("relative_index: operators have different layouts");
    const RefinementEntry a = measure_index(op), b = measure_index(ref);
    return (a.dim_ker - a.dim_coker) - (b.dim_ker - b.dim_coker);
}

OperatorMatrix restrict_to_kernel(const OperatorMatrix& Dprime, const OperatorMatrix& T) {
    if (Dprime.cols() != T.cols() || Dprime.domain.layout != T.domain.layout)
        throw std::invalid_argument("restrict_to_kernel: operators do not share a domain");
    const NullSpace ns = dense_null_space(Eigen::MatrixXd(T.entries));
    OperatorMatrix out;
    out.domain = Dprime.domain;
    out.domain.grid_dofs = static_cast<int>(ns.basis.cols());
    out.domain.extended_dims.clear();
    out.codomain = Dprime.codomain;
    out.row_blocks = Dprime.row_blocks;
    out.row_components = Dprime.row_components;
    const Eigen::MatrixXd dr = Dprime.entries * ns.basis;
    out.entries = dr.sparseView();
    return out;
}

IndexKind parse_index_kind(const std::string& s) {
    if (s == "model_cr" || s == "model-cr") return IndexKind::model_cr;
    if (s == "coupled") return IndexKind::coupled;
    if (s == "vortex") return IndexKind::vortex;
    if (s == "augmented_vortex" || s == "augmented-vortex") return IndexKind::augmented_vortex;
    throw std::invalid_argument("unknown index kind: " + s);
}

int predicted_index(IndexKind kind, const IndexParams& p) {
    switch (kind) {
        case IndexKind::model_cr: return 2 + 2 * p.d;
        case IndexKind::coupled: return 0;
        case IndexKind::vortex: return p.dim_M - 2 * p.dim_G + 2 * p.m;
        case IndexKind::augmented_vortex: return 2 * p.n_bar + 2 * p.m;
    }
    throw std::invalid_argument("unknown index kind");
}

std::vector<std::pair<double, IndexReport>> index_chamber_scan(const LambdaFamily& family,
                                                               const std::vector<double>& lambdas, double p,
                                                               const Schedule& schedule) {
    for (double l : lambdas) {
        const double x = l + 2.0 / p;
        if (std::abs(x - std::round(x)) < 0.1)
            throw std::invalid_argument("index_chamber_scan: lambda too close to an exceptional weight");
    }
    std::vector<std::pair<double, IndexReport>> out;
    for (double l : lambdas)
        out.emplace_back(l, estimate_index([&](const Grid2D& g) { return family(g, l); }, schedule));
    return out;
}

}  // namespace vortexlab
