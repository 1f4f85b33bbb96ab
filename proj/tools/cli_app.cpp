#include "cli_app.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "hilbert/body_io.hpp"
#include "hilbert/errors.hpp"
#include "hilbert/estimators.hpp"
#include "hilbert/metric.hpp"

namespace hilbert::cli {
namespace {

struct Options {
    std::string config_path;
    std::string body_path;
    std::string kind = "holmes-thompson";
    std::string ball = "metric";
    double radius = -1.0;
    double r_max = 9.0;
    double eps = 1e-2;
    std::vector<double> r_ladder;
    std::vector<double> eps_ladder;
    std::vector<double> p_point, q_point;
    int directions = 0;
    int radial_nodes = 0;
    int density_dirs = 0;
    int grid = 0;
    long mc_samples = 0;
    std::uint64_t seed = 12345;
    double window_min = 6.0;
    std::string out;
    std::string lattice_out;
};

VolumeKind parse_kind(const std::string& s) {
    if (s == "busemann") return VolumeKind::busemann;
    if (s == "holmes-thompson" || s == "ht") return VolumeKind::holmes_thompson;
    throw BadConfig("unknown volume kind: " + s);
}

BallKind parse_ball(const std::string& s) {
    if (s == "metric") return BallKind::metric;
    if (s == "asymptotic") return BallKind::asymptotic;
    throw BadConfig("unknown ball kind: " + s);
}

Vec to_vec(const std::vector<double>& v) {
    Vec out(static_cast<int>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<int>(i)) = v[i];
    return out;
}

VolumeBudget budget_from(const Options& o) {
    VolumeBudget b;
    b.directions = o.directions;
    b.radial_nodes = o.radial_nodes;
    b.density_dirs = o.density_dirs;
    return b;
}

// Config file values act as defaults; explicitly passed flags win because
// CLI11 writes over the bound variables during parse.
void apply_config(Options& o) {
    if (o.config_path.empty()) return;
    std::ifstream in(o.config_path);
    if (!in) throw BadConfig("cannot open config: " + o.config_path);
    nlohmann::json j;
    in >> j;
    if (j.contains("body")) o.body_path = j["body"].get<std::string>();
    if (j.contains("kind")) o.kind = j["kind"].get<std::string>();
    if (j.contains("ball")) o.ball = j["ball"].get<std::string>();
    if (j.contains("R")) o.radius = j["R"].get<double>();
    if (j.contains("R_max")) o.r_max = j["R_max"].get<double>();
    if (j.contains("eps")) o.eps = j["eps"].get<double>();
    if (j.contains("R_ladder")) o.r_ladder = j["R_ladder"].get<std::vector<double>>();
    if (j.contains("eps_ladder")) o.eps_ladder = j["eps_ladder"].get<std::vector<double>>();
    if (j.contains("directions")) o.directions = j["directions"].get<int>();
    if (j.contains("radial_nodes")) o.radial_nodes = j["radial_nodes"].get<int>();
    if (j.contains("density_dirs")) o.density_dirs = j["density_dirs"].get<int>();
    if (j.contains("seed")) o.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("window_min")) o.window_min = j["window_min"].get<double>();
    if (j.contains("out")) o.out = j["out"].get<std::string>();
}

ConvexBody load_required_body(const Options& o) {
    if (o.body_path.empty()) throw BadConfig("missing --body (flag or config)");
    return load_body(o.body_path);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw BadConfig("cannot write: " + path);
    out << text;
}

void emit(const Options& o, const std::string& text) {
    if (o.out.empty()) std::cout << text;
    else write_text(o.out, text);
}

nlohmann::json report_json(const std::string& quantity, double estimate, double uncertainty,
                           const std::string& window, const Options& o) {
    nlohmann::json j;
    j["quantity"] = quantity;
    j["estimate"] = estimate;
    j["uncertainty"] = uncertainty;
    j["window"] = window;
    j["fixtures"] = nlohmann::json::array({o.body_path});
    return j;
}

std::string csv_curve(const std::vector<std::pair<double, VolumeEstimate>>& curve,
                      const std::string& kind, const std::string& body_id) {
    std::string s = "R,volume,stderr,kind,body\n";
    for (const auto& [r, est] : curve) {
        s += format_number(r) + "," + format_number(est.value) + "," +
             format_number(est.std_error) + "," + kind + "," + body_id + "\n";
    }
    return s;
}

std::vector<double> resolved_r_ladder(const Options& o) {
    if (!o.r_ladder.empty()) return o.r_ladder;
    return default_radius_ladder(o.r_max);
}

std::vector<double> resolved_eps_ladder(const Options& o, int dim) {
    if (!o.eps_ladder.empty()) return o.eps_ladder;
    return default_epsilon_ladder(dim);
}

int cmd_distance(const Options& o, bool funk) {
    ConvexBody body = load_required_body(o);
    double d = funk ? funk_distance(body, to_vec(o.p_point), to_vec(o.q_point))
                    : hilbert_distance(body, to_vec(o.p_point), to_vec(o.q_point));
    std::printf("%.7f\n", d);
    return 0;
}

int cmd_density(const Options& o) {
    ConvexBody body = load_required_body(o);
    if (!o.p_point.empty()) {
        TangentBall tb = tangent_ball(body, to_vec(o.p_point), o.density_dirs);
        std::printf("busemann=%.10g holmes-thompson=%.10g\n", tb.busemann_density,
                    tb.holmes_thompson_density);
        return 0;
    }
    if (o.grid <= 1) throw BadConfig("density needs --p or --grid N");
    const Certificate& cert = body.certificate();
    const int d = body.dim();
    std::string csv = "x,y,busemann,holmes_thompson\n";
    double L = cert.outer_radius;
    for (int i = 0; i < o.grid; ++i)
        for (int j = 0; j < o.grid; ++j) {
            Vec x = cert.center;
            x(0) += -L + 2.0 * L * (i + 0.5) / o.grid;
            if (d >= 2) x(1) += -L + 2.0 * L * (j + 0.5) / o.grid;
            if (body.interior_margin(x) <= 1e-9 * L) continue;
            TangentBall tb = tangent_ball(body, x, o.density_dirs > 0 ? o.density_dirs : 256);
            csv += format_number(x(0)) + "," + format_number(d >= 2 ? x(1) : 0.0) + "," +
                   format_number(tb.busemann_density) + "," +
                   format_number(tb.holmes_thompson_density) + "\n";
        }
    emit(o, csv);
    return 0;
}

int cmd_ball_volume(const Options& o) {
    ConvexBody body = load_required_body(o);
    VolumeKind kind = parse_kind(o.kind);
    BallKind ball = parse_ball(o.ball);
    VolumeBudget b = budget_from(o);
    if (!o.r_ladder.empty()) {
        b.max_radius = o.r_ladder.back() + 0.5;
        auto curve = ball_growth_curve(body, body.certificate().center, ball, kind,
                                       o.r_ladder, b);
        emit(o, csv_curve(curve, o.kind, o.body_path));
        return 0;
    }
    if (o.radius < 0) throw BadConfig("ball-volume needs --R or --R-ladder");
    b.max_radius = o.radius + 0.5;
    BallSpec spec{body, body.certificate().center, o.radius, ball, std::nullopt};
    VolumeEstimate est = region_volume(spec, kind, b);
    std::printf("volume=%.10g stderr=%.3g evaluations=%lld\n", est.value, est.std_error,
                est.evaluations);
    if (o.mc_samples > 0) {
        VolumeEstimate mc = region_volume_mc(spec, kind, o.mc_samples, o.seed);
        std::printf("monte-carlo=%.10g stderr=%.3g\n", mc.value, mc.std_error);
    }
    return 0;
}

int cmd_flags(const Options& o) {
    ConvexBody body = load_required_body(o);
    auto poly = body.as_polytope();
    if (!poly) throw NonPolytopeBody("flags: body spec is not a polytope");
    std::printf("%lld\n", poly->flag_count());
    if (!o.lattice_out.empty()) {
        std::ofstream lat(o.lattice_out);
        poly->write_lattice(lat);
    }
    return 0;
}

int cmd_decompose(const Options& o) {
    ConvexBody body = load_required_body(o);
    auto poly = body.as_polytope();
    if (!poly) throw NonPolytopeBody("decompose: body spec is not a polytope");
    auto dec = poly->flag_decomposition();
    std::string csv = "flag";
    for (int k = 0; k <= poly->dim(); ++k)
        for (int c = 0; c < poly->dim(); ++c)
            csv += ",v" + std::to_string(k) + "_" + std::to_string(c);
    csv += ",volume\n";
    for (std::size_t i = 0; i < dec.size(); ++i) {
        csv += std::to_string(i);
        for (const auto& v : dec[i].vertices)
            for (int c = 0; c < poly->dim(); ++c) csv += "," + format_number(v(c));
        csv += "," + format_number(dec[i].volume()) + "\n";
    }
    emit(o, csv);
    if (!o.lattice_out.empty()) {
        std::ofstream lat(o.lattice_out);
        poly->write_lattice(lat);
    }
    return 0;
}

int cmd_asvol(const Options& o) {
    ConvexBody body = load_required_body(o);
    VolumeKind kind = parse_kind(o.kind);
    auto ladder = resolved_r_ladder(o);
    AsvolEstimate est = asvol_estimate(body, kind, ladder, budget_from(o));
    nlohmann::json j = report_json("asvol", est.value, est.sandwich_gap * est.value,
                                   "R in [" + format_number(ladder.front()) + ", " +
                                       format_number(ladder.back()) + "]",
                                   o);
    j["from_metric_balls"] = est.from_metric;
    j["from_asymptotic_balls"] = est.from_asymptotic;
    j["kind"] = o.kind;
    emit(o, j.dump(2) + "\n");
    return 0;
}

int cmd_entropy(const Options& o) {
    ConvexBody body = load_required_body(o);
    VolumeKind kind = parse_kind(o.kind);
    auto ladder = resolved_r_ladder(o);
    SlopeFit fit = entropy_estimate(body, kind, ladder, budget_from(o), o.window_min);
    nlohmann::json j = report_json("entropy", fit.value, fit.residual_rms,
                                   "R >= " + format_number(o.window_min), o);
    j["kind"] = o.kind;
    j["converged"] = fit.converged;
    emit(o, j.dump(2) + "\n");
    return fit.converged ? 0 : 2;
}

int cmd_approximate(const Options& o) {
    ConvexBody body = load_required_body(o);
    auto poly = approximate_polytope(body, o.eps);
    double achieved =
        hausdorff_distance(body, ConvexBody::polytope_body(poly),
                           std::max<std::size_t>(4096, 8 * poly->vertices().size()));
    std::printf("vertices=%zu flags=%lld hausdorff=%.6g\n", poly->vertices().size(),
                poly->flag_count(), achieved);
    if (!o.out.empty()) save_body_json(ConvexBody::polytope_body(poly), o.out);
    if (!o.lattice_out.empty()) {
        std::ofstream lat(o.lattice_out);
        poly->write_lattice(lat);
    }
    return 0;
}

int cmd_flag_approx(const Options& o) {
    ConvexBody body = load_required_body(o);
    auto ladder = resolved_eps_ladder(o, body.dim());
    SlopeFit fit = flag_approx_estimate(body, ladder);
    std::string csv = "epsilon,flags\n";
    for (std::size_t i = 0; i < ladder.size(); ++i)
        csv += format_number(ladder[i]) + "," +
               format_number(std::exp(fit.ordinate[i])) + "\n";
    nlohmann::json j = report_json("flag-approximability", fit.value, fit.residual_rms,
                                   "eps in [" + format_number(ladder.back()) + ", " +
                                       format_number(ladder.front()) + "]",
                                   o);
    j["converged"] = fit.converged;
    if (!o.out.empty()) {
        write_text(o.out, csv);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << csv << j.dump(2) << "\n";
    }
    return fit.converged ? 0 : 2;
}

int cmd_verify_ratio(const Options& o) {
    ConvexBody body = load_required_body(o);
    VolumeKind kind = parse_kind(o.kind);
    FlagRatioReport rep = verify_flag_ratio(body, kind, o.r_max, budget_from(o));
    nlohmann::json j = report_json("asvol-flag-ratio", rep.measured_ratio,
                                   std::abs(rep.rel_discrepancy) * rep.expected_ratio,
                                   "R <= " + format_number(o.r_max), o);
    j["kind"] = o.kind;
    j["flags"] = rep.flags;
    j["expected_ratio"] = rep.expected_ratio;
    j["ratio"] = rep.measured_ratio;
    j["rel_discrepancy"] = rep.rel_discrepancy;
    j["asvol_body"] = rep.asvol_body;
    j["asvol_simplex"] = rep.asvol_simplex;
    j["per_flag_cone_values"] = rep.cone_values;
    j["cone_expected"] = rep.cone_expected;
    j["cone_max_rel_dev"] = rep.cone_max_rel_dev;
    emit(o, j.dump(2) + "\n");
    return 0;
}

int cmd_verify_identity(const Options& o) {
    ConvexBody body = load_required_body(o);
    auto r_ladder = resolved_r_ladder(o);
    auto eps_ladder = resolved_eps_ladder(o, body.dim());
    EntropyIdentityReport rep = verify_entropy_identity(body, r_ladder, eps_ladder,
                                                        budget_from(o), o.window_min);
    nlohmann::json j = report_json("entropy-vs-flag-approximability", rep.ratio,
                                   rep.uncertainty, "R >= " + format_number(o.window_min), o);
    j["entropy"] = rep.ent;
    j["twice_flag_approx"] = rep.twice_flag_approx;
    j["entropy_upper_bound_ok"] = rep.entropy_bound_ok;
    j["entropy_converged"] = rep.entropy.converged;
    j["flag_approx_converged"] = rep.flag_approx.converged;
    emit(o, j.dump(2) + "\n");
    return (rep.entropy.converged && rep.flag_approx.converged) ? 0 : 2;
}

} // namespace

int run(const std::vector<std::string>& args) {
    Options o;
    CLI::App app{"Hilbert geometry toolkit: metric computations, flag combinatorics and "
                 "volume-growth experiments on convex bodies"};
    app.require_subcommand(1);
    app.footer("HILBERT_THREADS caps the worker count; outputs are deterministic for a "
               "fixed seed and config.");

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config_path, "JSON config; flags override its values");
        // not required at parse time: the config file may provide it
        sub->add_option("--body", o.body_path, "body spec (.json or vertex list)");
        sub->add_option("--seed", o.seed, "RNG seed");
        sub->add_option("--out", o.out, "output path (default stdout)");
        sub->add_option("--directions", o.directions, "direction budget");
        sub->add_option("--radial-nodes", o.radial_nodes, "radial node budget");
        sub->add_option("--density-dirs", o.density_dirs, "tangent-ball net size");
    };

    auto* distance = app.add_subcommand("distance", "Hilbert distance between two points");
    add_common(distance);
    bool use_funk = false;
    distance->add_option("--p", o.p_point, "first point")->required()->expected(-1);
    distance->add_option("--q", o.q_point, "second point")->required()->expected(-1);
    distance->add_flag("--funk", use_funk, "Funk distance instead (asymmetric)");

    auto* density = app.add_subcommand("density", "volume densities at a point or on a grid");
    add_common(density);
    density->add_option("--p", o.p_point, "evaluation point")->expected(-1);
    density->add_option("--grid", o.grid, "grid resolution for CSV export");

    auto* ball = app.add_subcommand("ball-volume", "volume of a metric or asymptotic ball");
    add_common(ball);
    ball->add_option("--R", o.radius, "ball radius");
    ball->add_option("--R-ladder", o.r_ladder, "radius ladder (CSV output)")->expected(-1);
    ball->add_option("--ball", o.ball, "metric|asymptotic");
    ball->add_option("--kind", o.kind, "busemann|holmes-thompson");
    ball->add_option("--mc", o.mc_samples, "Monte Carlo cross-check samples");

    auto* flags = app.add_subcommand("flags", "number of maximal flags of a polytope");
    add_common(flags);
    flags->add_option("--lattice-out", o.lattice_out, "write the face-lattice dump");

    auto* decompose = app.add_subcommand("decompose", "barycentric flag decomposition");
    add_common(decompose);
    decompose->add_option("--lattice-out", o.lattice_out, "write the face-lattice dump");

    auto* asvol = app.add_subcommand("asvol", "asymptotic volume of a polytope");
    add_common(asvol);
    asvol->add_option("--kind", o.kind, "busemann|holmes-thompson");
    asvol->add_option("--R-max", o.r_max, "ladder top");
    asvol->add_option("--R-ladder", o.r_ladder, "explicit radius ladder")->expected(-1);

    auto* entropy = app.add_subcommand("entropy", "volume entropy slope fit");
    add_common(entropy);
    entropy->add_option("--kind", o.kind, "busemann|holmes-thompson");
    entropy->add_option("--R-max", o.r_max, "ladder top");
    entropy->add_option("--R-ladder", o.r_ladder, "explicit radius ladder")->expected(-1);
    entropy->add_option("--window-min", o.window_min, "tail window start");

    auto* approx = app.add_subcommand("approximate", "inscribed polytope within eps");
    add_common(approx);
    approx->add_option("--eps", o.eps, "Hausdorff tolerance")->required();
    approx->add_option("--lattice-out", o.lattice_out, "write the face-lattice dump");

    auto* fapprox = app.add_subcommand("flag-approx", "flag approximability slope");
    add_common(fapprox);
    fapprox->add_option("--eps-ladder", o.eps_ladder, "epsilon ladder (decreasing)")
        ->expected(-1);

    auto* vratio = app.add_subcommand("verify-ratio", "asvol vs flag-count ratio check");
    add_common(vratio);
    vratio->add_option("--kind", o.kind, "busemann|holmes-thompson");
    vratio->add_option("--R", o.r_max, "ladder top");

    auto* videntity = app.add_subcommand("verify-identity",
                                         "entropy = 2 x flag approximability check");
    add_common(videntity);
    videntity->add_option("--R-max", o.r_max, "radius ladder top");
    videntity->add_option("--eps-ladder", o.eps_ladder, "epsilon ladder")->expected(-1);
    videntity->add_option("--window-min", o.window_min, "entropy window start");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        apply_config(o);
        // Re-parse so explicit flags override config values.
        std::vector<std::string> again(args.rbegin(), args.rend());
        app.clear();
        app.parse(again);

        if (app.got_subcommand(distance)) return cmd_distance(o, use_funk);
        if (app.got_subcommand(density)) return cmd_density(o);
        if (app.got_subcommand(ball)) return cmd_ball_volume(o);
        if (app.got_subcommand(flags)) return cmd_flags(o);
        if (app.got_subcommand(decompose)) return cmd_decompose(o);
        if (app.got_subcommand(asvol)) return cmd_asvol(o);
        if (app.got_subcommand(entropy)) return cmd_entropy(o);
        if (app.got_subcommand(approx)) return cmd_approximate(o);
        if (app.got_subcommand(fapprox)) return cmd_flag_approx(o);
        if (app.got_subcommand(vratio)) return cmd_verify_ratio(o);
        if (app.got_subcommand(videntity)) return cmd_verify_identity(o);
        std::cerr << "unknown command\n";
        return 1;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace hilbert::cli
