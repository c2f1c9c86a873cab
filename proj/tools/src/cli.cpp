#include "vortexlab/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>

#include "vortexlab/index_estimator.hpp"
#include "vortexlab/linearized_operator.hpp"
#include "vortexlab/pair_synthesis.hpp"
#include "vortexlab/weighted_spaces.hpp"

namespace vortexlab::cli {

namespace {

using json = nlohmann::ordered_json;
constexpr double pi = std::numbers::pi;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;
    double p = 4.0;
    double lambda = 0.75;
    double tau = pi;
    int d = 0;
    std::string schedule_text = "8:0.5,12:0.5,12:0.375";
    std::string grid_text;
    std::string out;
    unsigned seed = 0;
    int samples = 0;
    int dim = 1;
    bool augmented = false;
    std::string lambdas;
    std::string diag_a, diag_b;
};

struct Outcome {
    json result;
    bool pass = false;
};

std::vector<double> parse_csv(const std::string& text, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError(std::string("malformed ") + what + ": '" + text + "'");
        }
    }
    if (out.empty()) throw UsageError(std::string("empty ") + what);
    return out;
}

Schedule parse_schedule(const std::string& text) {
    Schedule out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw UsageError("schedule entries are R:h, got '" + item + "'");
        const auto r = parse_csv(item.substr(0, colon), "schedule radius");
        const auto h = parse_csv(item.substr(colon + 1), "schedule spacing");
        if (!(r[0] > 0 && h[0] > 0)) throw UsageError("schedule entries must be positive");
        out.emplace_back(r[0], h[0]);
    }
    if (out.empty()) throw UsageError("empty schedule");
    return out;
}

Grid2D parse_grid(const std::string& text) {
    const Schedule s = parse_schedule(text);
    if (s.size() != 1) throw UsageError("--grid takes a single R:h pair");
    return Grid2D(s[0].first, s[0].second);
}

void require_window(const RunConfig& c) {
    if (!(c.lambda > 1 - 2 / c.p && c.lambda < 2 - 2 / c.p))
        throw UsageError("lambda must lie in (1 - 2/p, 2 - 2/p)");
}

json schedule_json(const Schedule& s) {
    json a = json::array();
    for (auto [r, h] : s) a.push_back({r, h});
    return a;
}

json report_json(const IndexReport& r) {
    json j;
    j["dim_ker"] = r.dim_ker;
    j["dim_coker"] = r.dim_coker;
    j["index"] = r.index;
    j["gap_ratio"] = r.gap_ratio;
    j["verdict"] = r.verdict();
    j["predicted"] = r.predicted ? json(*r.predicted) : json(nullptr);
    j["match"] = r.match ? json(*r.match) : json(nullptr);
    json hist = json::array();
    for (const auto& e : r.refinement_history)
        hist.push_back({{"R", e.R},
                        {"h", e.h},
                        {"dim_ker", e.dim_ker},
                        {"dim_coker", e.dim_coker},
                        {"gap_ratio", e.gap_ratio},
                        {"smallest_singular_values", e.smallest}});
    j["refinement_history"] = hist;
    return j;
}

bool report_pass(const IndexReport& r) { return r.stable && r.match.value_or(true); }

int maslov_oracle(const ToyModelConfig& cfg, int d) {
    return maslov_index(cfg, make_winding_pair(cfg, d, Grid2D(8, 0.25)));
}

// ---------------------------------------------------------------------------

Outcome index_model_cr(const RunConfig& c, json& config) {
    require_window(c);
    const Schedule s = parse_schedule(c.schedule_text);
    config["d"] = c.d;
    config["schedule"] = schedule_json(s);
    const IndexReport r = estimate_index(
        [&](const Grid2D& g) { return assemble_dbar_index(g, c.p, c.lambda, c.d); }, s,
        predicted_index(IndexKind::model_cr, {c.d}));
    return {report_json(r), report_pass(r)};
}

Outcome index_coupled(const RunConfig& c, json& config) {
    if (c.dim < 1 || c.dim > 3) throw UsageError("--dim must be 1, 2 or 3");
    auto diag = [&](const std::string& text, const char* what) {
        std::vector<double> v = text.empty() ? std::vector<double>(c.dim, 1.0) : parse_csv(text, what);
        if (static_cast<int>(v.size()) != c.dim) throw UsageError(std::string(what) + " needs --dim entries");
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(c.dim, c.dim);
        for (int k = 0; k < c.dim; ++k) m(k, k) = v[k];
        return std::make_pair(m, v);
    };
    const auto [A, av] = diag(c.diag_a, "--a");
    const auto [B, bv] = diag(c.diag_b, "--b");
    const Schedule s = parse_schedule(c.schedule_text);
    config["dim"] = c.dim;
    config["a"] = av;
    config["b"] = bv;
    config["schedule"] = schedule_json(s);
    const IndexReport r = estimate_index([&](const Grid2D& g) { return assemble_coupled(g, c.p, c.lambda, A, B); },
                                         s, predicted_index(IndexKind::coupled, {}));
    json res = report_json(r);
    return {res, report_pass(r) && r.dim_ker == 0};
}

Outcome index_vortex(const RunConfig& c, json& config) {
    require_window(c);
    const Schedule s = parse_schedule(c.schedule_text);
    const ToyModelConfig cfg(c.tau);
    config["winding"] = c.d;
    config["augmented"] = c.augmented;
    config["schedule"] = schedule_json(s);
    const int m = maslov_oracle(cfg, c.d);
    json res;
    res["maslov"] = m;
    if (c.augmented) {
        const IndexReport r =
            estimate_index([&](const Grid2D& g) { return assemble_augmented_index(cfg, c.d, g, c.p, c.lambda); }, s,
                           predicted_index(IndexKind::augmented_vortex, {0, m}));
        res.update(report_json(r));
        return {res, report_pass(r)};
    }
    std::mutex mu;
    std::map<std::pair<double, double>, double> gaps;
    const IndexReport r = estimate_index(
        [&](const Grid2D& g) {
            const ConstrainedBlocks b = constrained_blocks(assemble_augmented_index(cfg, c.d, g, c.p, c.lambda));
            const double gap = singular_spectrum(b.Lw_star).front();
            {
                std::lock_guard lock(mu);
                gaps[{g.R(), g.h()}] = gap;
            }
            return restrict_to_kernel(b.Dw, b.Lw_star);
        },
        s, predicted_index(IndexKind::vortex, {0, m}));
    res.update(report_json(r));
    json g = json::array();
    double lo = INFINITY, hi = 0;
    for (auto [rr, hh] : s) {
        const double v = gaps.at({rr, hh});
        g.push_back(v);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    res["lw_star_gap"] = g;
    res["lw_star_gap_spread"] = hi / lo;
    return {res, report_pass(r) && lo > 0 && hi / lo <= 2};
}

Outcome index_chamber(const RunConfig& c, json& config) {
    if (c.lambdas.empty()) throw UsageError("--lambdas is required");
    const std::vector<double> ls = parse_csv(c.lambdas, "--lambdas");
    const Schedule s = parse_schedule(c.schedule_text);
    const ToyModelConfig cfg(c.tau);
    config["winding"] = c.d;
    config["lambdas"] = ls;
    config["schedule"] = schedule_json(s);
    const int m = maslov_oracle(cfg, c.d);
    std::vector<std::pair<double, IndexReport>> scan;
    try {
        scan = index_chamber_scan(
            [&](const Grid2D& g, double l) { return assemble_augmented_index(cfg, c.d, g, c.p, l); }, ls, c.p, s);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    json res;
    res["maslov"] = m;
    json entries = json::array();
    bool pass = true;
    for (const auto& [l, r] : scan) {
        // Chamber k = floor(lambda + 2/p); index (2 - k)(dim M - 2 dim G) + 2m.
        const int k = static_cast<int>(std::floor(l + 2 / c.p));
        const int predicted = (2 - k) * (ToyModelConfig::dim_M - 2 * ToyModelConfig::dim_G) + 2 * m;
        json e = report_json(r);
        e["predicted"] = predicted;
        e["match"] = r.index == predicted;
        entries.push_back({{"lambda", l}, {"chamber", k}, {"report", e}});
        pass = pass && r.stable && r.index == predicted;
    }
    res["scan"] = entries;
    return {res, pass};
}

Outcome check_hardy(const RunConfig& c, json& config) {
    const Grid2D g = parse_grid(c.grid_text.empty() ? "10:0.1" : c.grid_text);
    const int n = c.samples > 0 ? c.samples : 100;
    config["samples"] = n;
    config["grid"] = {g.R(), g.h()};
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> yd(-2.0, 2.0);
    json recs = json::array();
    int violations = 0;
    for (int k = 0; k < n; ++k) {
        const double y = k % 3 == 0 ? 0.0 : yd(rng);
        const GridField u = random_admissible_field(g, 1, c.seed * 1000003ull + k, y);
        const HardyResult h = hardy_check(u, c.p, c.lambda);
        violations += !h.satisfied;
        recs.push_back({{"y_inf", h.y_inf}, {"lhs", h.lhs}, {"rhs", h.rhs}, {"satisfied", h.satisfied}});
    }
    return {json{{"records", recs}, {"violations", violations}}, violations == 0};
}

Outcome check_morrey(const RunConfig& c, json& config) {
    // The embedding constant is reported, not asserted; the check is that the
    // sampled maximum is stable when h halves.
    const Grid2D g = parse_grid(c.grid_text.empty() ? "10:0.1" : c.grid_text);
    const Grid2D fine(g.R(), g.h() / 2);
    const int n = c.samples > 0 ? c.samples : 50;
    config["samples"] = n;
    config["grid"] = {g.R(), g.h()};
    std::vector<double> ratios, fine_ratios;
    for (int k = 0; k < n; ++k) {
        const std::uint64_t s = c.seed * 1000003ull + k;
        ratios.push_back(morrey_ratio(random_admissible_field(g, 1, s), c.p, c.lambda));
        fine_ratios.push_back(morrey_ratio(random_admissible_field(fine, 1, s), c.p, c.lambda));
    }
    const double worst = *std::max_element(ratios.begin(), ratios.end());
    const double worst_fine = *std::max_element(fine_ratios.begin(), fine_ratios.end());
    const double drift = std::abs(worst_fine / worst - 1);
    return {json{{"ratios", ratios},
                 {"max_ratio", worst},
                 {"max_ratio_refined", worst_fine},
                 {"relative_drift", drift},
                 {"tolerance", 0.1}},
            drift <= 0.1};
}

Outcome check_pd_bound(const RunConfig& c, json& config) {
    const Grid2D g = parse_grid(c.grid_text.empty() ? "10:0.1" : c.grid_text);
    const int n = c.samples > 0 ? c.samples : 50;
    config["d"] = c.d;
    config["samples"] = n;
    config["grid"] = {g.R(), g.h()};
    json recs = json::array();
    int violations = 0;
    for (int k = 0; k < n; ++k) {
        const BoundResult b =
            pd_mult_bound_check(random_admissible_field(g, 2, c.seed * 1000003ull + k), c.d, c.p, c.lambda);
        violations += !b.satisfied;
        recs.push_back({{"lhs", b.lhs}, {"rhs", b.rhs}, {"satisfied", b.satisfied}});
    }
    return {json{{"constant", pd_bound_constant(c.d)}, {"records", recs}, {"violations", violations}},
            violations == 0};
}

GridField cut_off(GridField f, double radius) {
    const Grid2D& g = f.grid();
    for (int j = 0; j < g.n(); ++j)
        for (int i = 0; i < g.n(); ++i)
            if (std::hypot(g.s(i), g.t(j)) > radius)
                for (int k = 0; k < f.fiber_dim(); ++k) f.at(g.index(i, j), k) = 0;
    return f;
}

Outcome check_identities(const RunConfig& c, json& config) {
    const ToyModelConfig cfg(c.tau);
    const int n = c.samples > 0 ? c.samples : 20;
    const int d = c.d == 0 ? 1 : c.d;
    config["winding"] = d;
    config["samples"] = n;
    json res;
    bool pass = true;

    // Adjointness of L_w and L_w^* on fields supported away from the boundary.
    {
        const Grid2D g(4, 0.2);
        const EquivariantPair w = make_winding_pair(cfg, d, g);
        const OperatorMatrix L = assemble_Lw(cfg, w), Ls = assemble_Lw_star(cfg, w);
        double worst = 0;
        for (int k = 0; k < n; ++k) {
            const std::uint64_t s = c.seed * 1000003ull + 2 * k;
            const GridField xi = cut_off(random_admissible_field(g, 1, s), 3.0);
            GridField zeta(g, 6);
            for (int comp = 0; comp < 3; ++comp) {
                const GridField part = cut_off(random_admissible_field(g, 2, s + 1 + 7919 * comp), 3.0);
                for (std::size_t node = 0; node < g.size(); ++node) zeta.set_complex(node, comp, part.complex_at(node, 0));
            }
            const Eigen::Map<const Eigen::VectorXd> x(xi.values().data(), xi.values().size());
            const Eigen::Map<const Eigen::VectorXd> z(zeta.values().data(), zeta.values().size());
            const Eigen::VectorXd lx = L.entries * x, lsz = Ls.entries * z;
            const double scale = lx.norm() * z.norm() + x.norm() * lsz.norm();
            worst = std::max(worst, std::abs(lx.dot(z) - x.dot(lsz)) / scale);
        }
        const bool ok = worst <= 1e-12;
        res["adjointness"] = {{"max_relative_defect", worst}, {"tolerance", 1e-12}, {"pass", ok}};
        pass = pass && ok;
    }
    // L (L^* L)^{-1} L^* = Pr.
    {
        std::mt19937_64 rng(c.seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        double worst = 0;
        for (int k = 0; k < n; ++k) {
            const Point x(std::complex<double>(gauss(rng), gauss(rng)), std::complex<double>(gauss(rng), gauss(rng)));
            const Point v(std::complex<double>(gauss(rng), gauss(rng)), std::complex<double>(gauss(rng), gauss(rng)));
            worst = std::max(worst, rmk_c_projection_residual(x, v) / v.norm());
        }
        const bool ok = worst <= 1e-12;
        res["projection_identity"] = {{"max_relative_residual", worst}, {"tolerance", 1e-12}, {"pass", ok}};
        pass = pass && ok;
    }
    // nabla^A L_u xi - L_u d xi = nabla_{d_A u} X_xi: second-order product-rule defect.
    {
        const std::vector<double> hs = {0.1, 0.05, 0.025};
        std::vector<double> resid, orders;
        for (double h : hs) {
            const Grid2D g(4, h);
            const EquivariantPair w = make_winding_pair(cfg, d, g);
            resid.push_back(na_lu_identity_residual(cfg, w, random_admissible_field(g, 1, c.seed)));
        }
        for (std::size_t k = 1; k < resid.size(); ++k) orders.push_back(std::log2(resid[k - 1] / resid[k]));
        const bool ok = *std::min_element(orders.begin(), orders.end()) >= 1.8;
        res["connection_identity"] = {
            {"h", hs}, {"residuals", resid}, {"orders", orders}, {"min_order", 1.8}, {"pass", ok}};
        pass = pass && ok;
    }
    // The nabla J term vanishes for the constant complex structure.
    {
        const Grid2D g(4, 0.25);
        const EquivariantPair w = make_winding_pair(cfg, d, g);
        LinearizedOptions with, without;
        without.nabla_j_term = false;
        const double diff = (assemble_Dw(cfg, w, with).entries - assemble_Dw(cfg, w, without).entries).norm();
        res["nabla_j_term"] = {{"difference", diff}, {"pass", diff == 0}};
        pass = pass && diff == 0;
    }
    return {res, pass};
}

Outcome maslov(const RunConfig& c, json& config) {
    const ToyModelConfig cfg(c.tau);
    const Grid2D g = parse_grid(c.grid_text.empty() ? "8:0.25" : c.grid_text);
    config["winding"] = c.d;
    config["grid"] = {g.R(), g.h()};
    const int m = maslov_index(cfg, make_winding_pair(cfg, c.d, g));
    return {json{{"maslov", m}, {"predicted", 2 * c.d}, {"match", m == 2 * c.d}}, m == 2 * c.d};
}

Outcome trivialization(const RunConfig& c, json& config) {
    const ToyModelConfig cfg(c.tau);
    const Grid2D g = parse_grid(c.grid_text.empty() ? "8:0.25" : c.grid_text);
    config["winding"] = c.d;
    config["grid"] = {g.R(), g.h()};
    const EquivariantPair w = make_winding_pair(cfg, c.d, g);
    const Trivialization tr = good_trivialization(cfg, w, c.p, c.lambda);
    const RemainderReport rem = trivialized_remainder(cfg, w, tr, c.p, c.lambda);
    const double floor = 10 * g.h() * g.h();
    const auto annuli = dyadic_annuli(g);
    bool outer_small = true;
    json ann = json::array();
    for (std::size_t k = 0; k < annuli.size(); ++k) {
        ann.push_back({{"inner", annuli[k].first},
                       {"outer", annuli[k].second},
                       {"frame_derivative", tr.derivative_annulus_norms[k]},
                       {"remainder", rem.annulus_norms[k]}});
        if (annuli[k].first >= tr.r_split) outer_small = outer_small && rem.annulus_norms[k] <= floor;
    }
    json res{{"m", tr.m},
             {"r_split", tr.r_split},
             {"splitting_residual", tr.splitting_residual},
             {"sandwich_constant", tr.sandwich_constant},
             {"max_condition", tr.max_condition},
             {"derivative_verdict", tr.derivative_verdict},
             {"s_inf", rem.s_inf},
             {"remainder_tail_max", rem.tail_max},
             {"remainder_verdict", rem.tail_decay},
             {"remainder_floor", floor},
             {"annuli", ann}};
    const bool pass = tr.splitting_residual <= 1e-10 && tr.sandwich_constant <= 100 && rem.tail_decay == "decaying" &&
                      tr.derivative_verdict == "decaying" && outer_small;
    return {res, pass};
}

Outcome pair_dump(const RunConfig& c, json& config) {
    if (c.out.empty()) throw UsageError("pair dump needs --out <directory>");
    const ToyModelConfig cfg(c.tau);
    const Grid2D g = parse_grid(c.grid_text.empty() ? "8:0.25" : c.grid_text);
    config["winding"] = c.d;
    config["grid"] = {g.R(), g.h()};
    const EquivariantPair w = make_winding_pair(cfg, c.d, g);
    std::filesystem::create_directories(c.out);
    write_field((std::filesystem::path(c.out) / "u.vfield").string(), w.u);
    write_field((std::filesystem::path(c.out) / "A.vfield").string(), w.A);
    return {json{{"u", "u.vfield"}, {"A", "A.vfield"}}, true};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig c;
    CLI::App app{"vortexlab: index and identity experiments for linearized vortex operators", "vortexlab"};
    app.require_subcommand(1);
    std::string leaf;

    auto common = [&](CLI::App* sub, const std::string& name) {
        sub->add_option("--p", c.p, "Lebesgue exponent")->capture_default_str();
        sub->add_option("--lambda", c.lambda, "weight exponent")->capture_default_str();
        sub->add_option("--tau", c.tau, "moment map level")->capture_default_str();
        sub->add_option("--seed", c.seed, "seed for randomized suites")->capture_default_str();
        sub->add_option("--out", c.out, "report path (directory for pair dump)");
        sub->callback([&leaf, name] { leaf = name; });
    };
    auto schedule = [&](CLI::App* sub) {
        sub->add_option("--schedule", c.schedule_text, "refinement schedule R:h,R:h,...")->capture_default_str();
    };
    auto grid = [&](CLI::App* sub) { sub->add_option("--grid", c.grid_text, "grid R:h"); };

    CLI::App* index = app.add_subcommand("index", "Fredholm index estimation");
    index->require_subcommand(1);
    CLI::App* mcr = index->add_subcommand("model-cr", "weighted Cauchy-Riemann operator on C rho0 z^d + W");
    common(mcr, "index model-cr");
    schedule(mcr);
    mcr->add_option("--d", c.d, "degree")->required();
    CLI::App* cpl = index->add_subcommand("coupled", "[[dbar, A], [B, d/dz]]");
    common(cpl, "index coupled");
    schedule(cpl);
    cpl->add_option("--dim", c.dim, "dimension of V")->capture_default_str();
    cpl->add_option("--a", c.diag_a, "diagonal of A (csv)");
    cpl->add_option("--b", c.diag_b, "diagonal of B (csv)");
    CLI::App* vtx = index->add_subcommand("vortex", "linearized operator of the winding pair");
    common(vtx, "index vortex");
    schedule(vtx);
    vtx->add_option("--winding", c.d, "winding number")->required();
    vtx->add_flag("--augmented", c.augmented, "measure the augmented operator");
    CLI::App* chs = index->add_subcommand("chamber-scan", "augmented index across weight chambers");
    common(chs, "index chamber-scan");
    schedule(chs);
    chs->add_option("--winding", c.d, "winding number")->capture_default_str();
    chs->add_option("--lambdas", c.lambdas, "weights (csv)")->required();

    CLI::App* check = app.add_subcommand("check", "inequality and identity suites");
    check->require_subcommand(1);
    CLI::App* hardy = check->add_subcommand("hardy", "weighted Hardy inequality");
    common(hardy, "check hardy");
    grid(hardy);
    hardy->add_option("--samples", c.samples, "number of fields");
    CLI::App* morrey = check->add_subcommand("morrey", "weighted Morrey ratio");
    common(morrey, "check morrey");
    grid(morrey);
    morrey->add_option("--samples", c.samples, "number of fields");
    CLI::App* pd = check->add_subcommand("pd-bound", "multiplication by z^d");
    common(pd, "check pd-bound");
    grid(pd);
    pd->add_option("--d", c.d, "degree")->required();
    pd->add_option("--samples", c.samples, "number of fields");
    CLI::App* ids = check->add_subcommand("identities", "adjointness, projection and connection identities");
    common(ids, "check identities");
    ids->add_option("--winding", c.d, "winding number of the pair (0 selects 1)");
    ids->add_option("--samples", c.samples, "samples per suite");

    CLI::App* msl = app.add_subcommand("maslov", "Maslov index of the winding pair");
    common(msl, "maslov");
    grid(msl);
    msl->add_option("--winding", c.d, "winding number")->required();
    CLI::App* trv = app.add_subcommand("trivialization", "good trivialization diagnostics");
    common(trv, "trivialization");
    grid(trv);
    trv->add_option("--winding", c.d, "winding number")->required();
    CLI::App* pair = app.add_subcommand("pair", "winding pair utilities");
    pair->require_subcommand(1);
    CLI::App* dump = pair->add_subcommand("dump", "write u and A as vortexfield files");
    common(dump, "pair dump");
    grid(dump);
    dump->add_option("--winding", c.d, "winding number")->required();

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kPass;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kPass;
    } catch (const CLI::ParseError& e) {
        err << "vortexlab: " << e.what() << "\n";
        return kFailure;
    }

    const auto start = std::chrono::steady_clock::now();
    json config{{"p", c.p}, {"lambda", c.lambda}, {"tau", c.tau}, {"seed", c.seed}};
    Outcome outcome;
    try {
        if (leaf == "index model-cr") outcome = index_model_cr(c, config);
        else if (leaf == "index coupled") outcome = index_coupled(c, config);
        else if (leaf == "index vortex") outcome = index_vortex(c, config);
        else if (leaf == "index chamber-scan") outcome = index_chamber(c, config);
        else if (leaf == "check hardy") outcome = check_hardy(c, config);
        else if (leaf == "check morrey") outcome = check_morrey(c, config);
        else if (leaf == "check pd-bound") outcome = check_pd_bound(c, config);
        else if (leaf == "check identities") outcome = check_identities(c, config);
        else if (leaf == "maslov") outcome = maslov(c, config);
        else if (leaf == "trivialization") outcome = trivialization(c, config);
        else if (leaf == "pair dump") outcome = pair_dump(c, config);
        else throw UsageError("unknown command");
    } catch (const UsageError& e) {
        err << "vortexlab: " << e.what() << "\n";
        return kFailure;
    } catch (const std::exception& e) {
        err << "vortexlab: " << leaf << " failed: " << e.what() << "\n";
        return kFailure;
    }

    json report;
    report["command"] = leaf;
    report["config"] = config;
    report["result"] = outcome.result;
    report["verdict"] = outcome.pass ? "pass" : "fail";
    report["runtime_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const std::string text = report.dump(2) + "\n";

    std::string path = c.out;
    if (leaf == "pair dump") path = (std::filesystem::path(c.out) / "report.json").string();
    if (!path.empty()) {
        std::ofstream f(path);
        if (!(f << text)) {
            err << "vortexlab: cannot write " << path << "\n";
            return kFailure;
        }
        if (leaf == "pair dump") out << text;
    } else {
        out << text;
    }
    return outcome.pass ? kPass : kMismatch;
}

}  // namespace vortexlab::cli
