#include "annulus/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "annulus/io.hpp"

namespace annulus::cli {

namespace {

namespace fs = std::filesystem;
using io::json;

int rank(int code) {
    switch (code) {
        case ExitCode::input_error: return 3;
        case ExitCode::numerical_failure: return 2;
        case ExitCode::check_failed: return 1;
        default: return 0;
    }
}

int worse(int a, int b) { return rank(a) >= rank(b) ? a : b; }

fs::path with_suffix(const fs::path& p, const std::string& suffix, const std::string& ext) {
    return p.parent_path() / (p.stem().string() + suffix + ext);
}

std::ofstream open_out(const fs::path& p) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream os(p, std::ios::binary);
    if (!os) throw io::InputError("cannot write " + p.string());
    return os;
}

void write_json(const fs::path& p, const json& j) { open_out(p) << j.dump(2) << '\n'; }

std::vector<Complex> parse_points(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_array() || it->empty())
        throw io::InputError(std::string("'") + key + "' must be a non-empty array");
    std::vector<Complex> out;
    for (const auto& p : *it) out.push_back(io::parse_complex(p));
    return out;
}

double number(const json& j, const char* key, std::optional<double> fallback = std::nullopt) {
    auto it = j.find(key);
    if (it == j.end()) {
        if (fallback) return *fallback;
        throw io::InputError(std::string("missing key '") + key + "'");
    }
    if (!it->is_number()) throw io::InputError(std::string("'") + key + "' must be a number");
    return it->get<double>();
}

IntegratorConfig integrator_of(const json& payload) {
    auto it = payload.find("integrator");
    return io::parse_integrator(it == payload.end() ? json() : *it);
}

std::string cplx(Complex z) { return io::format_double(z.real()) + "," + io::format_double(z.imag()); }

int run_kernel_probe(const io::Scenario& sc, const fs::path& out_path, std::ostream& log) {
    const double r = number(sc.payload, "r");
    KernelEvalConfig kc;
    kc.rel_tol = number(sc.payload, "rel_tol", kc.rel_tol);
    const AnnulusParam ap(r);
    json rows = json::array();
    std::ostringstream csv;
    csv << "re_z,im_z,re_K,im_K\n";
    for (Complex z : parse_points(sc.payload, "points")) {
        const Complex k = villat_kernel(ap, z, kc);
        csv << cplx(z) << ',' << cplx(k) << '\n';
        rows.push_back({z.real(), z.imag(), k.real(), k.imag()});
    }
    if (sc.format == io::OutputFormat::csv) open_out(out_path) << csv.str();
    else write_json(out_path, {{"id", sc.id}, {"r", r}, {"columns", {"re_z", "im_z", "re_K", "im_K"}}, {"rows", rows}});
    log << sc.id << ": " << rows.size() << " kernel values -> " << out_path.string() << '\n';
    return ExitCode::ok;
}

int run_evolve(const io::Scenario& sc, const fs::path& out_path, std::ostream& log) {
    const FieldSpec spec = io::parse_field(io::json(sc.payload.at("field")));
    const IntegratorConfig cfg = integrator_of(sc.payload);
    const double s = number(sc.payload, "s", 0.0);
    const double t_end = number(sc.payload, "t_end");
    const auto points = parse_points(sc.payload, "points");

    int code = ExitCode::ok;
    json all = json::array();
    for (std::size_t k = 0; k < points.size(); ++k) {
        const Trajectory tr = integrate(spec, s, points[k], t_end, cfg);
        if (!tr.complete()) {
            code = ExitCode::numerical_failure;
            log << sc.id << ": point " << k << " stopped at t=" << io::format_double(tr.validity_end) << " ("
                << to_string(tr.status) << "): " << tr.message << '\n';
        }
        if (sc.format == io::OutputFormat::csv) {
            const fs::path p = points.size() == 1 ? out_path : with_suffix(out_path, "_p" + std::to_string(k), ".csv");
            auto os = open_out(p);
            io::write_trajectory_csv(os, tr, spec.domain());
        } else {
            all.push_back(io::trajectory_json(tr, spec.domain()));
        }
    }
    if (sc.format == io::OutputFormat::json)
        write_json(out_path, {{"id", sc.id}, {"field", spec.label}, {"trajectories", all}});
    log << sc.id << ": " << points.size() << " trajectories -> " << out_path.string() << '\n';
    return code;
}

int run_verify(const io::Scenario& sc, const fs::path& out_path, std::optional<unsigned long long> seed,
               std::ostream& log) {
    const FieldSpec spec = io::parse_field(io::json(sc.payload.at("field")));
    const IntegratorConfig cfg = integrator_of(sc.payload);
    auto pit = sc.payload.find("plan");
    ProbePlan plan = io::parse_plan(pit == sc.payload.end() ? json() : *pit);
    if (auto it = sc.payload.find("seed"); it != sc.payload.end()) {
        if (!it->is_number_unsigned()) throw io::InputError("'seed' must be a non-negative integer");
        plan.seed = it->get<unsigned long long>();
    }
    if (seed) plan.seed = *seed;
    std::optional<FixedPointPlan> fp;
    if (auto it = sc.payload.find("fixed_points"); it != sc.payload.end()) {
        const json& n = it->at("N");
        if (!n.is_number_integer() || n.get<int>() < 1) throw io::InputError("fixed_points.N must be >= 1");
        fp = FixedPointPlan{n.get<int>(), number(*it, "r0"), number(*it, "r_star")};
    }
    VerificationReport rep = verify_spec(spec, plan, cfg, fp);
    rep.scenario = sc.id;
    const json j = io::report_json(rep);
    if (sc.format == io::OutputFormat::json) {
        write_json(out_path, j);
    } else {
        auto os = open_out(out_path);
        os << "name,pass,residual,tol,detail\n";
        for (const auto& c : rep.checks)
            os << c.name << ',' << (c.pass ? 1 : 0) << ',' << io::format_double(c.residual) << ','
               << io::format_double(c.tol) << ",\"" << c.detail << "\"\n";
    }
    for (const auto& c : rep.checks)
        log << sc.id << ": " << (c.pass ? "PASS " : "FAIL ") << c.name << " residual=" << io::format_double(c.residual)
            << " tol=" << io::format_double(c.tol) << '\n';
    log << sc.id << ": " << (rep.all_pass() ? "all checks pass" : "check failures") << " -> " << out_path.string()
        << '\n';
    return rep.all_pass() ? ExitCode::ok : ExitCode::check_failed;
}

void check_lambda_range(const LebedevSpec& spec, double horizon) {
    std::vector<double> ts = spec.lambda.jumps();
    const int n = 1024;
    for (int i = 0; i <= n; ++i) ts.push_back(horizon * i / n);
    for (double t : ts) {
        if (t < 0.0 || t > horizon) continue;
        const double lam = spec.lambda(t);
        if (!(lam >= 0.0 && lam <= 1.0))
            throw io::InputError("lambda(" + io::format_double(t) + ") = " + io::format_double(lam) +
                                 " outside [0,1]");
    }
}

int run_lebedev(const io::Scenario& sc, const fs::path& out_path, std::ostream& log) {
    constexpr double kRoundTripTol = 1e-6;
    const LebedevSpec spec = io::parse_lebedev(sc.payload);
    const IntegratorConfig cfg = integrator_of(sc.payload);
    const double horizon = number(sc.payload, "horizon");
    if (!(horizon >= 0.0)) throw io::InputError("'horizon' must be >= 0");
    const auto seeds = parse_points(sc.payload, "seeds");
    for (Complex z : seeds)
        if (!(std::abs(z) > spec.m && std::abs(z) < spec.M))
            throw io::InputError("seed " + cplx(z) + " is not in m < |zeta| < M");
    std::vector<double> ladder;
    if (auto it = sc.payload.find("monitor"); it != sc.payload.end()) {
        for (const auto& x : *it) ladder.push_back(x.get<double>());
        for (std::size_t k = 0; k < ladder.size(); ++k)
            if (ladder[k] < 0.0 || (k > 0 && !(ladder[k] > ladder[k - 1])))
                throw io::InputError("'monitor' must be an increasing list of times >= 0");
    }
    check_lambda_range(spec, std::max(horizon, ladder.empty() ? 0.0 : ladder.back()));

    auto path = std::make_shared<const MtPath>(integrate_mt(spec, horizon, cfg));
    const DomainSystem ds = validate(RadiusPath::exponential(spec.m / spec.M, 1.0), std::max(horizon, 1.0));

    int code = ExitCode::ok;
    std::vector<Trajectory> trs;
    for (Complex z : seeds) {
        trs.push_back(integrate_slit(spec, *path, z, horizon, cfg));
        if (!trs.back().complete()) {
            code = ExitCode::numerical_failure;
            log << sc.id << ": seed " << cplx(z) << " stopped: " << trs.back().message << '\n';
        }
    }

    double residual = 0.0;
    if (code == ExitCode::ok && horizon > 0.0) {
        const EvolutionMap family(to_canonical_field(spec, path), cfg);
        for (std::size_t k = 0; k < seeds.size(); ++k) {
            const Complex f = trs[k].endpoint();
            const Complex g = lebedev_from_family(spec, *path, family, seeds[k], horizon);
            residual = std::max(residual, std::abs(f - g) / std::max(1.0, std::abs(f)));
        }
    }
    json monitor = json::array();
    if (ladder.size() >= 2)
        for (const auto& row : long_time_monitor(spec, seeds, ladder, cfg))
            monitor.push_back({{"t_from", row.t_from}, {"t_to", row.t_to}, {"increment", row.increment}});

    const bool round_trip_ok = residual < kRoundTripTol;
    if (code == ExitCode::ok && !round_trip_ok) code = ExitCode::check_failed;
    json summary = {{"id", sc.id},
                    {"m", spec.m},
                    {"M", spec.M},
                    {"horizon", horizon},
                    {"m_t_end", path->values().back()},
                    {"band_margin", path->min_band_margin()},
                    {"round_trip_residual", residual},
                    {"round_trip_tol", kRoundTripTol},
                    {"round_trip_pass", round_trip_ok},
                    {"monitor", monitor}};

    if (sc.format == io::OutputFormat::csv) {
        {
            auto os = open_out(with_suffix(out_path, "_mt", ".csv"));
            io::write_mt_csv(os, *path, spec);
        }
        for (std::size_t k = 0; k < trs.size(); ++k) {
            auto os = open_out(with_suffix(out_path, "_seed" + std::to_string(k), ".csv"));
            io::write_trajectory_csv(os, trs[k], ds);
        }
        write_json(with_suffix(out_path, "_summary", ".json"), summary);
    } else {
        json mt = json::array();
        for (std::size_t i = 0; i < path->times().size(); ++i)
            mt.push_back({path->times()[i], path->values()[i], spec.r(path->times()[i])});
        json seeds_j = json::array();
        for (const auto& tr : trs) seeds_j.push_back(io::trajectory_json(tr, ds));
        summary["m_t"] = {{"columns", {"t", "m_t", "r_t"}}, {"rows", mt}};
        summary["seeds"] = seeds_j;
        write_json(out_path, summary);
    }
    log << sc.id << ": m_t(" << io::format_double(horizon) << ")=" << io::format_double(path->values().back())
        << " round-trip residual=" << io::format_double(residual) << " -> " << out_path.string() << '\n';
    return code;
}

int run_one(const io::Scenario& sc, const fs::path& out_dir, std::optional<unsigned long long> seed,
            std::ostream& log, std::ostream& diag) {
    const fs::path out_path = sc.output_path.is_absolute() ? sc.output_path : out_dir / sc.output_path;
    try {
        switch (sc.kind) {
            case io::ScenarioKind::kernel_probe: return run_kernel_probe(sc, out_path, log);
            case io::ScenarioKind::evolve: return run_evolve(sc, out_path, log);
            case io::ScenarioKind::verify: return run_verify(sc, out_path, seed, log);
            case io::ScenarioKind::lebedev: return run_lebedev(sc, out_path, log);
        }
    } catch (const ConvergenceError& e) {
        diag << sc.id << ": numerical failure: " << e.what() << '\n';
        return ExitCode::numerical_failure;
    } catch (const StepFailure& e) {
        diag << sc.id << ": numerical failure: " << e.what() << '\n';
        return ExitCode::numerical_failure;
    } catch (const BoundaryExit& e) {
        diag << sc.id << ": numerical failure: " << e.what() << '\n';
        return ExitCode::numerical_failure;
    } catch (const LiftingFailure& e) {
        diag << sc.id << ": numerical failure: " << e.what() << '\n';
        return ExitCode::numerical_failure;
    } catch (const GridEvaluationError& e) {
        diag << sc.id << ": numerical failure: " << e.what() << '\n';
        return ExitCode::numerical_failure;
    } catch (const RangeViolation& e) {
        // input ranges are checked up front, so this is an invariant breach
        diag << sc.id << ": numerical failure: " << e.what() << '\n';
        return ExitCode::numerical_failure;
    } catch (const json::exception& e) {
        diag << sc.id << ": input error: " << e.what() << '\n';
        return ExitCode::input_error;
    } catch (const std::invalid_argument& e) {
        diag << sc.id << ": input error: " << e.what() << '\n';
        return ExitCode::input_error;
    } catch (const std::domain_error& e) {
        diag << sc.id << ": input error: " << e.what() << '\n';
        return ExitCode::input_error;
    } catch (const std::logic_error& e) {
        diag << sc.id << ": input error: " << e.what() << '\n';
        return ExitCode::input_error;
    } catch (const fs::filesystem_error& e) {
        diag << sc.id << ": input error: " << e.what() << '\n';
        return ExitCode::input_error;
    } catch (const std::exception& e) {
        diag << sc.id << ": numerical failure: " << e.what() << '\n';
        return ExitCode::numerical_failure;
    }
    return ExitCode::input_error;
}

int run_batch(const std::string& config, io::ScenarioKind expected, const fs::path& out_dir,
              std::optional<unsigned long long> seed, std::ostream& out, std::ostream& err) {
    std::vector<io::Scenario> batch;
    try {
        batch = io::load_scenario_file(config);
    } catch (const std::exception& e) {
        err << "input error: " << e.what() << '\n';
        return ExitCode::input_error;
    }
    for (const auto& sc : batch)
        if (sc.kind != expected) {
            err << "input error: scenario '" << sc.id << "' has kind " << io::to_string(sc.kind)
                << ", expected " << io::to_string(expected) << '\n';
            return ExitCode::input_error;
        }

    struct Result {
        int code = ExitCode::ok;
        std::ostringstream log, diag;
    };
    std::vector<Result> results(batch.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < batch.size(); i = next++)
            results[i].code = run_one(batch[i], out_dir, seed, results[i].log, results[i].diag);
    };
    const std::size_t n = std::min<std::size_t>(worker_count(), batch.size());
    if (n <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t k = 0; k < n; ++k) pool.emplace_back(worker);
    }

    int code = ExitCode::ok;
    for (auto& r : results) {
        out << r.log.str();
        err << r.diag.str();
        code = worse(code, r.code);
    }
    return code;
}

Complex parse_cli_complex(const std::string& s) {
    const auto comma = s.find(',');
    try {
        std::size_t used = 0;
        if (comma == std::string::npos) {
            const double re = std::stod(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return {re, 0.0};
        }
        const std::string a = s.substr(0, comma), b = s.substr(comma + 1);
        const double re = std::stod(a, &used);
        if (used != a.size()) throw std::invalid_argument(s);
        const double im = std::stod(b, &used);
        if (used != b.size()) throw std::invalid_argument(s);
        return {re, im};
    } catch (const std::exception&) {
        throw io::InputError("cannot parse complex number '" + s + "' (expected RE,IM)");
    }
}

int run_kernel_direct(double r, const std::vector<std::string>& zs, std::ostream& out, std::ostream& err) {
    try {
        const AnnulusParam ap(r);
        out << "re_z,im_z,re_K,im_K\n";
        for (const auto& s : zs) {
            const Complex z = parse_cli_complex(s);
            out << cplx(z) << ',' << cplx(villat_kernel(ap, z)) << '\n';
        }
        return ExitCode::ok;
    } catch (const std::exception& e) {
        err << "input error: " << e.what() << '\n';
        return ExitCode::input_error;
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Loewner evolution on annuli: kernels, evolution families, verification and slit flows"};
    app.require_subcommand(1);
    std::string out_dir = ".";
    app.add_option("--out-dir", out_dir, "Directory for relative output paths")->capture_default_str();

    auto* kernel = app.add_subcommand("kernel", "Evaluate the Villat kernel K_r(z)");
    double r = 0.0;
    std::vector<std::string> zs;
    std::string kernel_config;
    kernel->add_option("--r", r, "Annulus parameter 0 < r < 1");
    kernel->add_option("--z", zs, "Point RE,IM (repeatable)");
    kernel->add_option("--config", kernel_config, "Scenario file with kernel_probe scenarios");

    std::string config;
    std::optional<unsigned long long> seed;
    auto* evolve = app.add_subcommand("evolve", "Integrate trajectories of a field");
    evolve->add_option("--config", config, "Scenario file")->required();
    auto* verify = app.add_subcommand("verify", "Run the verification battery on a field");
    verify->add_option("--config", config, "Scenario file")->required();
    verify->add_option("--seed", seed, "Override the probe seed");
    auto* lebedev = app.add_subcommand("lebedev", "Simulate a Komatu-Lebedev slit evolution");
    lebedev->add_option("--config", config, "Scenario file")->required();
    app.add_subcommand("schema", "Print the scenario JSON schema");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ExitCode::ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ExitCode::ok;
    } catch (const CLI::ParseError& e) {
        err << "input error: " << e.what() << '\n';
        return ExitCode::input_error;
    }

    const auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "schema") {
        out << io::scenario_schema().dump(2) << '\n';
        return ExitCode::ok;
    }
    if (name == "kernel") {
        if (!kernel_config.empty())
            return run_batch(kernel_config, io::ScenarioKind::kernel_probe, out_dir, std::nullopt, out, err);
        if (kernel->count("--r") == 0 || zs.empty()) {
            err << "input error: kernel needs --r and at least one --z, or --config\n";
            return ExitCode::input_error;
        }
        return run_kernel_direct(r, zs, out, err);
    }
    const io::ScenarioKind kind = name == "evolve"   ? io::ScenarioKind::evolve
                                  : name == "verify" ? io::ScenarioKind::verify
                                                     : io::ScenarioKind::lebedev;
    return run_batch(config, kind, out_dir, seed, out, err);
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace annulus::cli
