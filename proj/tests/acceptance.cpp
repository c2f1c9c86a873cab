// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>
#include <string>

#include <Eigen/SparseLU>

#include "vortexlab/cli.hpp"
#include "vortexlab/index_estimator.hpp"
#include "vortexlab/linearized_operator.hpp"
#include "vortexlab/model_operators.hpp"

using namespace vortexlab;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kP = 4.0;
constexpr double kLambda = 0.75;

struct Verdict {
    bool pass = true;
    std::ostringstream detail;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

json run_cli(const std::vector<std::string>& args, int& code) {
    std::ostringstream out, err;
    code = cli::run(args, out, err);
    if (code == 1) return json{{"error", err.str()}};
    return json::parse(out.str());
}

Eigen::VectorXd dofs(const GridField& f, int extra) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(f.values().size()) + extra);
    for (std::size_t k = 0; k < f.values().size(); ++k) v[static_cast<Eigen::Index>(k)] = f.values()[k];
    return v;
}

void criterion1(Verdict& v) {
    for (int d = -2; d <= 2; ++d) {
        const auto t0 = Clock::now();
        const IndexReport r = estimate_index([d](const Grid2D& g) { return assemble_dbar_index(g, kP, kLambda, d); },
                                             default_schedule(), 2 + 2 * d);
        const double secs = seconds_since(t0);
        v.detail << " d=" << d << ":" << r.index << "(gap " << std::scientific << std::setprecision(1) << r.gap_ratio
                 << std::defaultfloat << ", " << std::fixed << std::setprecision(1) << secs << "s)"
                 << std::defaultfloat;
        v.require(r.index == 2 + 2 * d && r.stable && r.gap_ratio >= 10, "index d=" + std::to_string(d));
        v.require(secs <= 120, "runtime d=" + std::to_string(d));
    }
}

void criterion2(Verdict& v) {
    const Grid2D g(4, 0.25);
    double worst = 0;
    for (int d = 1; d <= 3; ++d) {
        const OperatorMatrix op = assemble_dbar(g, kP, kLambda, d);
        for (const GridField& p : polynomial_kernel_basis(g, d)) {
            GridField conj = p;
            for (int j = 0; j < g.n(); ++j)
                for (int i = 0; i < g.n(); ++i) {
                    const std::size_t node = g.index(i, j);
                    const double w = std::pow(1 + g.s(i) * g.s(i) + g.t(j) * g.t(j), op.domain.weight / 2);
                    conj.set_complex(node, 0, p.complex_at(node, 0) * w);
                }
            const Eigen::VectorXd out = op.entries * dofs(conj, 2);
            // Residual relative to the size of the discrete derivative applied to the input.
            const double scale = dofs(conj, 0).cwiseAbs().maxCoeff() / g.h();
            double interior = 0;
            for (int j = 1; j < g.n() - 1; ++j)
                for (int i = 1; i < g.n() - 1; ++i) {
                    const auto k = static_cast<Eigen::Index>(g.index(i, j)) * 2;
                    interior = std::max(interior, std::hypot(out[k], out[k + 1]));
                }
            worst = std::max(worst, interior / scale);
        }
        const RefinementEntry e = measure_index(assemble_dbar_index(Grid2D(8, 0.5), kP, kLambda, d, false));
        v.detail << " ker(d=" << d << ")=" << e.dim_ker;
        v.require(e.dim_ker == 2 * d, "kernel count d=" + std::to_string(d));
    }
    v.detail << " max residual " << std::scientific << std::setprecision(1) << worst << std::defaultfloat;
    v.require(worst <= 1e-12, "polynomial residual");
}

void criterion3(Verdict& v) {
    auto check = [&](const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B, double lambda, const std::string& tag) {
        const IndexReport r = estimate_index(
            [&](const Grid2D& g) { return assemble_coupled(g, kP, lambda, A, B); }, default_schedule(), 0);
        v.detail << " " << tag << ":" << r.index << "/" << r.dim_ker;
        v.require(r.index == 0 && r.dim_ker == 0 && r.stable, tag);
    };
    const Eigen::MatrixXcd one = Eigen::MatrixXcd::Identity(1, 1);
    check(one, one, 0.0, "id@0");
    check(one, one, 0.5, "id@0.5");
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.25, 4.0);
    for (int k = 0; k < 5; ++k) {
        Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(2, 2), B = A;
        for (int i = 0; i < 2; ++i) A(i, i) = u(rng), B(i, i) = u(rng);
        check(A, B, kLambda, "rand" + std::to_string(k));
    }
}

void criterion4(Verdict& v) {
    const Grid2D g(10, 0.5);
    const OperatorMatrix op = assemble_helmholtz(g, Eigen::MatrixXcd::Identity(1, 1));
    const double smin = singular_spectrum(op).front();
    const GridField rhs = sample_field(g, 2, [](double s, double t, double* f) {
        f[0] = std::exp(-(s * s + t * t));
        f[1] = 0.5 * std::exp(-((s - 1) * (s - 1) + t * t));
    });
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(op.entries);
    const Eigen::VectorXd b = dofs(rhs, 0), x = lu.solve(b);
    const double res = (op.entries * x - b).norm() / b.norm();
    v.detail << " sigma_min " << std::setprecision(4) << smin << " residual " << std::scientific << std::setprecision(1)
             << res << std::defaultfloat;
    v.require(smin >= 0.5, "sigma_min");
    v.require(res <= 1e-8, "solve residual");
}

void criterion5(Verdict& v) {
    const ToyModelConfig cfg(std::numbers::pi);
    for (int d = -1; d <= 1; ++d) {
        const int m = maslov_index(cfg, make_winding_pair(cfg, d, Grid2D(8, 0.25)));
        const auto t0 = Clock::now();
        const IndexReport r = estimate_index(
            [&](const Grid2D& g) { return assemble_augmented_index(cfg, d, g, kP, kLambda); }, default_schedule(),
            predicted_index(IndexKind::augmented_vortex, {.m = m}));
        const double secs = seconds_since(t0);
        v.detail << " d=" << d << ": m=" << m << " index=" << r.index << " (" << std::fixed << std::setprecision(1)
                 << secs << "s)" << std::defaultfloat;
        v.require(m == 2 * d, "maslov d=" + std::to_string(d));
        v.require(r.index == 2 + 4 * d && r.stable, "augmented index d=" + std::to_string(d));
        v.require(secs <= 600, "runtime d=" + std::to_string(d));
    }
}

void criterion6(Verdict& v) {
    const ToyModelConfig cfg;
    for (int d : {0, 1}) {
        const IndexReport aug = estimate_index(
            [&](const Grid2D& g) { return assemble_augmented_index(cfg, d, g, kP, kLambda); }, default_schedule());
        const IndexReport res = estimate_index(
            [&](const Grid2D& g) {
                const ConstrainedBlocks b = constrained_blocks(assemble_augmented_index(cfg, d, g, kP, kLambda));
                return restrict_to_kernel(b.Dw, b.Lw_star);
            },
            default_schedule());
        double lo = INFINITY, hi = 0;
        for (auto [R, h] : default_schedule()) {
            const Grid2D g(R, h);
            const double gap = lw_star_surjectivity_gap(cfg, make_winding_pair(cfg, d, Grid2D(4, 0.5)), g, kP, kLambda);
            lo = std::min(lo, gap);
            hi = std::max(hi, gap);
        }
        v.detail << " d=" << d << ": restricted " << res.index << " augmented " << aug.index << " gap spread "
                 << std::setprecision(3) << hi / lo;
        v.require(res.index == aug.index && res.stable && aug.stable, "restriction d=" + std::to_string(d));
        v.require(lo > 0 && hi / lo <= 2, "gap spread d=" + std::to_string(d));
    }
}

void criterion7(Verdict& v) {
    const ToyModelConfig cfg;
    const auto scan = index_chamber_scan(
        [&](const Grid2D& g, double l) { return assemble_augmented_index(cfg, 0, g, kP, l); }, {1.2, 1.8}, kP,
        default_schedule());
    const int jump = scan[0].second.index - scan[1].second.index;
    v.detail << " index(1.2)=" << scan[0].second.index << " index(1.8)=" << scan[1].second.index;
    v.require(jump == ToyModelConfig::dim_M - 2 * ToyModelConfig::dim_G, "jump");
    v.require(scan[0].second.stable && scan[1].second.stable, "stability");
}

void criterion8(Verdict& v) {
    for (auto [p, l] : {std::pair{"3", "0.1"}, {"4", "0.25"}, {"4", "0.75"}}) {
        int code = 0;
        const json r = run_cli({"check", "hardy", "--samples", "100", "--p", p, "--lambda", l}, code);
        const int violations = code == 1 ? -1 : r["result"]["violations"].get<int>();
        v.detail << " (" << p << "," << l << "):" << violations;
        v.require(code == 0 && violations == 0, std::string("hardy p=") + p + " lambda=" + l);
    }
}

void criterion9(Verdict& v) {
    for (int d = -2; d <= 1; ++d) {
        int code = 0;
        const json r = run_cli({"check", "pd-bound", "--d", std::to_string(d), "--samples", "50"}, code);
        const int violations = code == 1 ? -1 : r["result"]["violations"].get<int>();
        v.detail << " d=" << d << ":" << violations;
        v.require(code == 0 && violations == 0, "pd-bound d=" + std::to_string(d));
    }
}

void criterion10(Verdict& v) {
    int code = 0;
    const json r = run_cli({"check", "identities"}, code);
    if (code == 1) {
        v.require(false, r["error"].get<std::string>());
        return;
    }
    const json& res = r["result"];
    v.detail << " adjointness " << std::scientific << std::setprecision(1)
             << res["adjointness"]["max_relative_defect"].get<double>() << " projection "
             << res["projection_identity"]["max_relative_residual"].get<double>() << std::defaultfloat
             << " orders";
    for (const auto& o : res["connection_identity"]["orders"]) v.detail << " " << std::setprecision(3) << o.get<double>();
    v.require(res["adjointness"]["pass"], "adjointness");
    v.require(res["projection_identity"]["pass"], "projection identity");
    v.require(res["connection_identity"]["pass"], "connection identity order");
    v.require(code == 0, "identities verdict");
}

void criterion11(Verdict& v) {
    for (int d : {0, 1}) {
        int code = 0;
        const json r = run_cli({"trivialization", "--winding", std::to_string(d)}, code);
        if (code == 1) {
            v.require(false, r["error"].get<std::string>());
            continue;
        }
        const json& res = r["result"];
        v.detail << " d=" << d << ": split " << std::scientific << std::setprecision(1)
                 << res["splitting_residual"].get<double>() << " sandwich " << std::defaultfloat
                 << std::setprecision(3) << res["sandwich_constant"].get<double>() << " remainder "
                 << res["remainder_verdict"].get<std::string>();
        v.require(res["splitting_residual"].get<double>() <= 1e-10, "splitting d=" + std::to_string(d));
        v.require(res["sandwich_constant"].get<double>() <= 100, "sandwich d=" + std::to_string(d));
        v.require(res["remainder_verdict"] == "decaying", "remainder decay d=" + std::to_string(d));
        v.require(code == 0, "trivialization verdict d=" + std::to_string(d));
    }
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Verdict&)>>> criteria = {
        {"model Cauchy-Riemann index 2+2d", criterion1},
        {"polynomial kernel structure", criterion2},
        {"coupled operator index 0", criterion3},
        {"Helmholtz invertibility", criterion4},
        {"augmented vortex index 2+2m", criterion5},
        {"restriction to ker L_w^*", criterion6},
        {"chamber jump", criterion7},
        {"Hardy inequality", criterion8},
        {"multiplication bound", criterion9},
        {"identity suites", criterion10},
        {"trivialization quality", criterion11},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Verdict v;
        const auto t0 = Clock::now();
        try {
            criteria[k].second(v);
        } catch (const std::exception& e) {
            v.require(false, std::string("exception: ") + e.what());
        }
        std::cout << (v.pass ? "PASS" : "FAIL") << " " << k + 1 << " " << criteria[k].first << ":"
                  << v.detail.str() << " (" << std::fixed << std::setprecision(1) << seconds_since(t0) << "s)"
                  << std::defaultfloat << std::endl;
        failed += v.pass ? 0 : 1;
    }
    std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria failed") << std::endl;
    return failed == 0 ? 0 : 1;
}
