// nvlab: numerical laboratory for the Novikov-Veselov equation at fixed
// energy. Subcommands: simulate, stationary-points, dispersion-scan,
// solutions, verify-lemmas. Every run writes a replayable manifest next to
// its outputs.
#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "nvlab/csv.hpp"
#include "nvlab/manifest.hpp"
#include "nvlab/oscillatory.hpp"
#include "nvlab/solutions.hpp"
#include "nvlab/solver.hpp"
#include "nvlab/stationary.hpp"
#include "nvlab/symbol.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using nvlab::cplx;

void apply_thread_cap() {
#ifdef _OPENMP
    if (const char* env = std::getenv("NVLAB_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) omp_set_num_threads(n);
    }
#endif
}

// flat key=value config file; command-line flags override file entries, so a
// file key is only injected when the flag is absent from argv
std::vector<std::string> merge_config(const std::string& path, std::vector<std::string> args) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("config: cannot open " + path);
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        const std::string flag = "--" + line.substr(0, eq);
        if (std::find(args.begin(), args.end(), flag) != args.end()) continue;
        args.push_back(flag);
        args.push_back(line.substr(eq + 1));
    }
    return args;
}

// pull '--config <path>' out of argv before CLI11 sees it
std::string extract_config(std::vector<std::string>& args) {
    for (size_t i = 0; i + 1 < args.size(); ++i) {
        if (args[i] == "--config") {
            const std::string path = args[i + 1];
            args.erase(args.begin() + i, args.begin() + i + 2);
            return path;
        }
    }
    return {};
}

nvlab::ExperimentManifest make_manifest(const std::string& command,
                                        const std::vector<std::pair<std::string, std::string>>& params,
                                        uint64_t seed) {
    nvlab::ExperimentManifest m;
    m.command = command;
    m.parameters = params;
    m.seed = seed;
    m.started_at = nvlab::now_iso8601_utc();
    return m;
}

int run_stationary_points(double ure, double uim, const std::string& out) {
    const auto sps = nvlab::stationary_set(cplx(ure, uim));
    const auto rep = nvlab::verify_lemmas(sps);
    nlohmann::ordered_json j;
    j["case"] = nvlab::to_string(sps.case_tag);
    nlohmann::ordered_json lam = nlohmann::ordered_json::array();
    for (const auto& l : sps.lambdas) lam.push_back({{"re", l.real()}, {"im", l.imag()}});
    j["lambdas"] = lam;
    j["omega"] = sps.omega;
    j["phi"] = sps.phi;
    j["omega1"] = sps.omega1;
    j["omega2"] = sps.omega2;
    j["pairs"] = {{"omega1", {sps.pair1.first, sps.pair1.second}},
                  {"omega2", {sps.pair2.first, sps.pair2.second}}};
    j["lemma_report"] = {{"base_point_ok", rep.base_point_ok},
                         {"cluster_ok", rep.cluster_ok},
                         {"ordering_ok", rep.ordering_ok},
                         {"circle_dist_ratio", rep.circle_dist_ratio},
                         {"degenerate_dist_ratio", rep.degenerate_dist_ratio},
                         {"in_ball_K", rep.in_ball_K}};
    const std::string text = j.dump(2) + "\n";
    if (out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out, std::ios::binary);
        f.write(text.data(), static_cast<std::streamsize>(text.size()));
    }
    return 0;
}

std::vector<cplx> parse_u_grid(const std::string& sel) {
    if (sel == "vertices") return nvlab::worst_case_u_grid();
    if (sel.rfind("ring:", 0) == 0) {
        const auto rest = sel.substr(5);
        const auto colon = rest.find(':');
        if (colon == std::string::npos) throw CLI::ValidationError("--u-grid ring:<radius>:<n>");
        const double radius = std::stod(rest.substr(0, colon));
        const int n = std::stoi(rest.substr(colon + 1));
        std::vector<cplx> us;
        for (int k = 0; k < n; ++k)
            us.push_back(radius * std::exp(cplx(0.0, 2.0 * M_PI * k / n)));
        return us;
    }
    if (sel.rfind("single:", 0) == 0) {
        const auto rest = sel.substr(7);
        const auto colon = rest.find(':');
        if (colon == std::string::npos) throw CLI::ValidationError("--u-grid single:<re>:<im>");
        return {cplx(std::stod(rest.substr(0, colon)), std::stod(rest.substr(colon + 1)))};
    }
    throw CLI::ValidationError("unknown --u-grid selector: " + sel);
}

int run_dispersion_scan(const nvlab::IntegralSpec& base, const std::vector<cplx>& us, double tmin,
                        double tmax, int tpoints, const std::string& out) {
    std::vector<double> ts;
    for (int i = 0; i < tpoints; ++i)
        ts.push_back(tpoints == 1 ? tmin : tmin * std::pow(tmax / tmin, double(i) / (tpoints - 1)));

    nvlab::CsvWriter csv(out.empty() ? "dispersion_scan.csv" : out);
    csv.header({"t", "u_re", "u_im", "abs_I", "re_I", "im_I", "apost_err"});
    bool ok = true;
    double worst_slope = -1e30, worst_ci = 0.0;
    bool have = false;
    for (const auto& u : us) {
        nvlab::IntegralSpec spec = base;
        spec.u = u;
        const auto probe = nvlab::fit_decay(spec, ts);
        if (!probe.resolution_ok) ok = false;
        for (size_t i = 0; i < probe.t.size(); ++i) {
            nvlab::IntegralSpec s1 = spec;
            s1.t = probe.t[i];
            const auto r = nvlab::eval_I(s1);
            csv.row({probe.t[i], u.real(), u.imag(), std::abs(r.value), r.value.real(),
                     r.value.imag(), r.apost_err});
        }
        if (!have || probe.slope > worst_slope) {
            worst_slope = probe.slope;
            worst_ci = probe.slope_ci;
            have = true;
        }
    }
    std::ostringstream summary;
    summary << "slope=" << nvlab::format_double(worst_slope) << ",ci="
            << nvlab::format_double(worst_ci);
    csv.raw_line(summary.str());
    csv.close();
    std::cout << summary.str() << "\n";
    if (!ok) {
        std::cerr << "resolution-insufficient: a-posteriori error above 1% of |I|\n";
        return 1;
    }
    return 0;
}

nvlab::SolutionSpec parse_family(const std::string& family, const std::string& params) {
    std::vector<double> p;
    std::stringstream ss(params);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) p.push_back(std::stod(item));
    if (family == "q1ab") {
        if (p.size() != 2) throw CLI::ValidationError("q1ab needs --params a,b");
        return nvlab::SolutionSpec::q1ab(p[0], p[1]);
    }
    if (family == "q2c") {
        if (p.size() != 1) throw CLI::ValidationError("q2c needs --params c");
        return nvlab::SolutionSpec::q2c(p[0]);
    }
    if (family == "qn0") {
        if (p.size() != 1) throw CLI::ValidationError("qn0 needs --params n");
        return nvlab::SolutionSpec::qn0(static_cast<int>(p[0]));
    }
    throw CLI::ValidationError("unknown family: " + family);
}

int run_solutions(const std::string& family, const std::string& params, const std::string& action,
                  const std::string& grid, const std::vector<double>& ts, const std::string& out) {
    const auto spec = parse_family(family, params);
    nvlab::CsvWriter csv(out.empty() ? ("solutions_" + action + ".csv") : out);
    if (action == "eval") {
        double L = 10.0;
        int N = 32;
        if (!grid.empty()) {
            const auto colon = grid.find(':');
            L = std::stod(grid.substr(0, colon));
            N = std::stoi(grid.substr(colon + 1));
        }
        const double t = ts.empty() ? 0.0 : ts[0];
        csv.header({"x", "y", "v", "log_arg"});
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) {
                const double x = -L + 2.0 * L * i / N;
                const double y = -L + 2.0 * L * j / N;
                const auto r = nvlab::eval_solution(spec, t, x, y);
                csv.row({x, y, r.v, r.log_arg});
            }
    } else if (action == "mass") {
        csv.header({"t", "mass", "rel_tol"});
        for (double t : (ts.empty() ? std::vector<double>{0.0} : ts))
            csv.row({t, nvlab::mass(spec, t), 1e-4});
    } else if (action == "blowup") {
        const double tmax = ts.empty() ? 100.0 : ts.back();
        const auto scan = nvlab::blowup_scan(spec, tmax);
        csv.header({"crossed", "t_star", "min_denom_t0"});
        csv.row({scan.crossed ? 1.0 : 0.0, scan.t_star, scan.min_denom_t0});
    } else if (action == "l2growth") {
        std::vector<double> grid_t = ts;
        if (grid_t.empty())
            for (double t = 1.0; t <= 64.0; t *= 2.0) grid_t.push_back(t);
        const auto fit = nvlab::l2_growth(spec.n, grid_t);
        csv.header({"t", "l2sq"});
        for (size_t i = 0; i < fit.t.size(); ++i) csv.row({fit.t[i], fit.l2sq[i]});
        std::ostringstream s;
        s << "slope=" << nvlab::format_double(fit.slope)
          << ",increasing=" << (fit.increasing ? 1 : 0)
          << ",root_ratio=" << nvlab::format_double(fit.root_ratio);
        csv.raw_line(s.str());
        std::cout << s.str() << "\n";
    } else if (action == "residual") {
        int N = 512;
        double L = 60.0;
        if (!grid.empty()) {
            const auto colon = grid.find(':');
            L = std::stod(grid.substr(0, colon));
            N = std::stoi(grid.substr(colon + 1));
        }
        const double t = ts.empty() ? 0.0 : ts[0];
        csv.header({"t", "residual", "N", "L"});
        csv.row({t, nvlab::nv_residual(spec, t, N, L), double(N), L});
    } else {
        throw CLI::ValidationError("unknown action: " + action);
    }
    csv.close();
    return 0;
}

int run_verify_lemmas(int samples, uint64_t seed, const std::string& out) {
    nvlab::SplitRng rng{seed};
    nvlab::CsvWriter csv(out.empty() ? "lemma_report.csv" : out);
    csv.header({"u_re", "u_im", "case", "omega1", "omega2", "base_point_ok", "cluster_ok",
                "ordering_ok", "circle_ratio", "degenerate_ratio", "in_ball_K"});
    int fails = 0;
    double max_circle = 0.0, max_degen = 0.0;
    for (int i = 0; i < samples; ++i) {
        const auto [x, y] = rng.disk_point(0, i, 36.0);
        const auto sps = nvlab::stationary_set(cplx(x, y));
        const auto rep = nvlab::verify_lemmas(sps);
        if (!rep.base_point_ok || !rep.cluster_ok || !rep.ordering_ok) ++fails;
        if (rep.in_ball_K) {
            max_circle = std::max(max_circle, rep.circle_dist_ratio);
            max_degen = std::max(max_degen, rep.degenerate_dist_ratio);
        }
        csv.row({x, y, double(static_cast<int>(sps.case_tag)), sps.omega1, sps.omega2,
                 double(rep.base_point_ok), double(rep.cluster_ok), double(rep.ordering_ok),
                 rep.circle_dist_ratio, rep.degenerate_dist_ratio, double(rep.in_ball_K)});
    }
    std::ostringstream s;
    s << "fails=" << fails << ",max_circle_ratio=" << nvlab::format_double(max_circle)
      << ",max_degenerate_ratio=" << nvlab::format_double(max_degen);
    csv.raw_line(s.str());
    csv.close();
    std::cout << s.str() << "\n";
    return fails == 0 ? 0 : 1;
}

std::vector<double> build_ic(const std::string& ic, int N, double L) {
    auto sample_spec = [&](const nvlab::SolutionSpec& s) {
        std::vector<double> v(size_t(N) * N);
        for (int i = 0; i < N; ++i) {
            const double x = -L + 2.0 * L * i / N;
            for (int j = 0; j < N; ++j) {
                const double y = -L + 2.0 * L * j / N;
                v[size_t(i) * N + j] = nvlab::eval_solution(s, 0.0, x, y).v;
            }
        }
        return v;
    };
    std::vector<std::string> parts;
    std::stringstream ss(ic);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.empty()) throw CLI::ValidationError("empty --ic");
    if (parts[0] == "q1ab" && parts.size() == 3)
        return sample_spec(nvlab::SolutionSpec::q1ab(std::stod(parts[1]), std::stod(parts[2])));
    if (parts[0] == "q2c" && parts.size() == 2)
        return sample_spec(nvlab::SolutionSpec::q2c(std::stod(parts[1])));
    if (parts[0] == "qn0" && parts.size() == 2)
        return sample_spec(nvlab::SolutionSpec::qn0(std::stoi(parts[1])));
    if (parts[0] == "gaussian" && parts.size() == 3)
        return nvlab::sample_gaussian(N, L, std::stod(parts[1]), std::stod(parts[2]));
    if (parts[0] == "file" && parts.size() >= 2) {
        const auto snap = nvlab::read_snapshot(ic.substr(5));
        if (snap.N != N) throw CLI::ValidationError("snapshot N mismatch");
        return snap.values;
    }
    throw CLI::ValidationError("bad --ic: " + ic);
}

int run_simulate(double E, int N, double L, double dt, double t_final, const std::string& ic,
                 bool dealias, double snapshot_every, const std::string& prefix) {
    nvlab::Solver solver(N, L, E,
                         dealias ? nvlab::DealiasRule::TwoThirds : nvlab::DealiasRule::None);
    solver.set_field(build_ic(ic, N, L));

    nvlab::StepperConfig cfg;
    cfg.dt = dt;
    cfg.dealias = dealias ? nvlab::DealiasRule::TwoThirds : nvlab::DealiasRule::None;

    nvlab::CsvWriter csv(prefix + "_observers.csv");
    csv.header({"time", "mass", "l2", "linf"});
    {
        const auto s0 = solver.state();
        csv.row({0.0, s0.mass(), s0.l2_norm(), s0.linf()});
    }
    double next_snapshot = snapshot_every > 0 ? snapshot_every : -1.0;
    int snap_id = 0;
    const auto outcome = solver.evolve(t_final, cfg, [&](const nvlab::Observer& o) {
        csv.row({o.time, o.mass, o.l2, o.linf});
        if (next_snapshot > 0 && o.time >= next_snapshot - 1e-12) {
            nvlab::write_snapshot(prefix + "_t" + std::to_string(snap_id++) + ".nvf",
                                  solver.state());
            next_snapshot += snapshot_every;
        }
    });
    csv.close();
    nvlab::write_snapshot(prefix + "_final.nvf", solver.state());
    if (outcome == nvlab::StepOutcome::BlowupSuspected) {
        std::cerr << "blow-up-suspected at t=" << solver.time() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    apply_thread_cap();
    CLI::App app{"numerical laboratory for the Novikov-Veselov equation at fixed energy"};
    app.require_subcommand(1);

    // stationary-points
    auto* sp = app.add_subcommand("stationary-points", "solve and classify the six phase-critical points");
    double ure = 0.0, uim = 0.0;
    std::string sp_out;
    sp->add_option("--u-re", ure, "Re of the parameter")->required();
    sp->add_option("--u-im", uim, "Im of the parameter")->required();
    sp->add_option("--output", sp_out, "output path (default stdout)");

    // dispersion-scan
    auto* ds = app.add_subcommand("dispersion-scan", "time-decay scan of the oscillatory integral");
    double alpha = 0.0, beta = 0.0, energy = 1.0, cutoff_R = 3.0, tmin = 10.0, tmax = 1000.0;
    int tpoints = 8, bump = 0;
    std::string region = "full", ugrid = "single:0:0", ds_out;
    ds->add_option("--alpha", alpha, "smoothing exponent in [0,1)");
    ds->add_option("--beta", beta, "imaginary power exponent");
    ds->add_option("--energy", energy, "energy parameter E > 0");
    ds->add_option("--region", region)->check(CLI::IsMember({"full", "in", "out", "largefreq"}));
    ds->add_option("--cutoff-R", cutoff_R, "large-frequency cutoff radius (> 2)");
    ds->add_option("--bump-profile", bump, "0 smooth exp, 1 raised cosine");
    ds->add_option("--t-min", tmin);
    ds->add_option("--t-max", tmax);
    ds->add_option("--t-points", tpoints);
    ds->add_option("--u-grid", ugrid, "vertices | ring:<radius>:<n> | single:<re>:<im>");
    ds->add_option("--output", ds_out, "CSV output path");

    // solutions
    auto* so = app.add_subcommand("solutions", "closed-form solution families");
    std::string family = "q1ab", params = "0,0", action = "eval", grid, so_out;
    std::vector<double> so_t;
    so->add_option("--family", family)->check(CLI::IsMember({"q1ab", "q2c", "qn0"}))->required();
    so->add_option("--params", params, "family parameters, comma separated");
    so->add_option("--action", action)
        ->check(CLI::IsMember({"eval", "mass", "blowup", "l2growth", "residual"}))
        ->required();
    so->add_option("--grid", grid, "L:N evaluation grid");
    so->add_option("--t", so_t, "time value(s)");
    so->add_option("--output", so_out, "CSV output path");

    // verify-lemmas
    auto* vl = app.add_subcommand("verify-lemmas", "Monte-Carlo sweep of the stationary-point lemmas");
    int samples = 1000;
    uint64_t seed = 1;
    std::string vl_out;
    vl->add_option("--samples", samples);
    vl->add_option("--seed", seed);
    vl->add_option("--output", vl_out, "CSV output path");

    // simulate
    auto* sim = app.add_subcommand("simulate", "pseudospectral evolution on a periodic box");
    double E = 0.0, boxL = 40.0, dt = 1e-3, t_final = 0.1, snap_every = 0.0;
    int N = 256;
    std::string ic = "gaussian:0.5:4", dealias = "on", prefix = "sim";
    sim->add_option("--energy", E);
    sim->add_option("--grid", N, "N (power of two)");
    sim->add_option("--box", boxL, "half length L");
    sim->add_option("--dt", dt);
    sim->add_option("--t-final", t_final);
    sim->add_option("--ic", ic, "q1ab:a:b | q2c:c | qn0:n | gaussian:amp:width | file:<path>");
    sim->add_option("--dealias", dealias)->check(CLI::IsMember({"on", "off"}));
    sim->add_option("--snapshot-every", snap_every);
    sim->add_option("--output-prefix", prefix);

    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        const std::string config_path = extract_config(args);
        if (!config_path.empty()) args = merge_config(config_path, args);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (sp->parsed()) {
            auto m = make_manifest("stationary-points",
                                   {{"u-re", nvlab::format_double(ure)},
                                    {"u-im", nvlab::format_double(uim)}},
                                   0);
            m.write((sp_out.empty() ? std::string("stationary_points") : sp_out) + ".manifest.json");
            return run_stationary_points(ure, uim, sp_out);
        }
        if (ds->parsed()) {
            nvlab::IntegralSpec base;
            base.alpha = alpha;
            base.beta = beta;
            base.E = energy;
            base.cutoff_R = cutoff_R;
            base.bump_profile = bump;
            base.region = region == "full" ? nvlab::Region::Full
                          : region == "in" ? nvlab::Region::InsideB2
                          : region == "out" ? nvlab::Region::OutsideB2
                                            : nvlab::Region::LargeFreq;
            auto m = make_manifest("dispersion-scan",
                                   {{"alpha", nvlab::format_double(alpha)},
                                    {"beta", nvlab::format_double(beta)},
                                    {"energy", nvlab::format_double(energy)},
                                    {"region", region},
                                    {"cutoff-R", nvlab::format_double(cutoff_R)},
                                    {"t-min", nvlab::format_double(tmin)},
                                    {"t-max", nvlab::format_double(tmax)},
                                    {"t-points", std::to_string(tpoints)},
                                    {"u-grid", ugrid}},
                                   0);
            m.write((ds_out.empty() ? std::string("dispersion_scan.csv") : ds_out) + ".manifest.json");
            return run_dispersion_scan(base, parse_u_grid(ugrid), tmin, tmax, tpoints, ds_out);
        }
        if (so->parsed()) {
            std::vector<std::pair<std::string, std::string>> mp = {
                {"family", family}, {"params", params}, {"action", action}};
            if (!grid.empty()) mp.emplace_back("grid", grid);
            std::ostringstream tjoin;
            for (size_t i = 0; i < so_t.size(); ++i)
                tjoin << (i ? "," : "") << nvlab::format_double(so_t[i]);
            if (!so_t.empty()) mp.emplace_back("t", tjoin.str());
            auto m = make_manifest("solutions", mp, 0);
            m.write((so_out.empty() ? ("solutions_" + action + ".csv") : so_out) + ".manifest.json");
            return run_solutions(family, params, action, grid, so_t, so_out);
        }
        if (vl->parsed()) {
            auto m = make_manifest("verify-lemmas",
                                   {{"samples", std::to_string(samples)},
                                    {"seed", std::to_string(seed)}},
                                   seed);
            m.write((vl_out.empty() ? std::string("lemma_report.csv") : vl_out) + ".manifest.json");
            return run_verify_lemmas(samples, seed, vl_out);
        }
        if (sim->parsed()) {
            auto m = make_manifest("simulate",
                                   {{"energy", nvlab::format_double(E)},
                                    {"grid", std::to_string(N)},
                                    {"box", nvlab::format_double(boxL)},
                                    {"dt", nvlab::format_double(dt)},
                                    {"t-final", nvlab::format_double(t_final)},
                                    {"ic", ic},
                                    {"dealias", dealias},
                                    {"snapshot-every", nvlab::format_double(snap_every)},
                                    {"output-prefix", prefix}},
                                   0);
            m.write(prefix + ".manifest.json");
            return run_simulate(E, N, boxL, dt, t_final, ic, dealias == "on", snap_every, prefix);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
