// Command-line front end: closed-form multipliers, solvers, duality
// verification, value-function grids, denoising, and fixture generation.
//
// Exit codes (stable contract):
//   0  success
//   2  invalid input / parse error
//   3  method inapplicable (condition violated, no closed form)
//   4  solver non-convergence or singular system
//   5  verification FAIL

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "boxlasso/boxlasso.hpp"

namespace {

using namespace boxlasso;

constexpr const char* kSchemaNote =
    "Problem JSON schema:\n"
    "  { \"m\": int, \"n\": int, \"A\": [m*n floats, row-major],\n"
    "    \"b\": [m floats], \"tau\": [n floats] }\n"
    "Parsing is strict: wrong lengths or negative tau are rejected with the\n"
    "field name. Lambda files hold either a bare array of weights or any\n"
    "object with a \"lambda\" array (multipliers output pipes back in).";

Problem load_problem(const std::string& path) {
    return parse_problem(read_text_file(path));
}

Multipliers load_multipliers(const std::string& path) {
    json j;
    try {
        j = json::parse(read_text_file(path));
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("lambda JSON: parse error: ") + e.what());
    }
    return multipliers_from_json(j);
}

MultiplierResult run_method(const Problem& p, const std::string& method, double diag_tol) {
    if (method == "auto") return auto_multipliers(p, diag_tol);
    if (method == "scalar") {
        const ZeroTauReduction red = reduce_zero_tau(p);
        if (red.reduced.n() != 1 || red.reduced.m() != 1 || red.reduced.a(0, 0) == 0.0)
            throw Inapplicable("scalar method needs a 1x1 problem with a nonzero entry", -1.0);
        const double lam =
            scalar_multiplier(red.reduced.a(0, 0), red.reduced.b[0], red.reduced.tau[0]);
        return MultiplierResult{Multipliers(red.embed({lam})), MultiplierMethod::Scalar,
                                std::nullopt, red.reduced.tau[0]};
    }
    if (method == "diagonal") return diagonal_multipliers(p, diag_tol);
    if (method == "gradient-sign") return gradient_sign_multipliers(p);
    if (method == "signature") return gradient_sign_with_signature(p);
    throw InvalidInput("unknown method: " + method);
}

struct GridArgs {
    std::string axes;
    std::string range;
    double step = 0.0;
    std::string out;
};

GridSpec parse_grid_spec(const GridArgs& args) {
    GridSpec spec;
    std::stringstream ss(args.axes);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t pos = 0;
            const long v = std::stol(tok, &pos);
            if (pos != tok.size() || v < 0) throw std::invalid_argument("axis");
            spec.axes.push_back(static_cast<std::size_t>(v));
        } catch (const std::exception&) {
            throw InvalidInput("gfunc: cannot parse axis \"" + tok + "\"");
        }
    }
    const auto colon = args.range.find(':');
    if (colon == std::string::npos)
        throw InvalidInput("gfunc: --range must look like lo:hi");
    try {
        spec.lo = std::stod(args.range.substr(0, colon));
        spec.hi = std::stod(args.range.substr(colon + 1));
    } catch (const std::exception&) {
        throw InvalidInput("gfunc: cannot parse --range \"" + args.range + "\"");
    }
    spec.step = args.step;
    return spec;
}

// Fixture generators. Every kind satisfies its method's applicability
// condition by construction and is reproducible byte-for-byte per seed.

Problem gen_scalar(CounterRng& rng) {
    const double mag = rng.uniform(0.5, 3.0);
    const double a = rng.uniform() < 0.5 ? -mag : mag;
    const double b = rng.uniform(-5.0, 5.0);
    const double tau = rng.uniform(0.1, 3.0);
    return Problem(DenseMatrix(1, 1, {a}), {b}, {tau});
}

Problem gen_diagonal(CounterRng& rng, std::size_t n, std::size_t m) {
    if (n > m)
        throw InvalidInput("gen: diagonal kind needs n <= m (orthogonal columns)");
    const DenseMatrix dct = dct2_matrix(m);
    DenseMatrix a(m, n);
    for (std::size_t j = 0; j < n; ++j) {
        const double scale = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.5, 2.0);
        for (std::size_t i = 0; i < m; ++i) a.at(i, j) = scale * dct(j, i);
    }
    Vector b(m), tau(n);
    for (double& v : b) v = rng.uniform(-2.0, 2.0);
    for (double& v : tau) v = rng.uniform(0.05, 2.0);
    return Problem(std::move(a), std::move(b), std::move(tau));
}

Problem gen_gradient_sign(CounterRng& rng, std::size_t n, std::size_t m) {
    if (m < n) m = n;
    for (int attempt = 0; attempt < 100; ++attempt) {
        DenseMatrix a(m, n);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) a.at(i, j) = rng.uniform(-1.0, 1.0);
        Vector tau(n);
        for (double& v : tau) v = rng.uniform(0.1, 1.0);

        DenseMatrix gram(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                const double v = a.gram_entry(i, j);
                gram.at(i, j) = v;
                gram.at(j, i) = v;
            }
        // Want A^T b = s with s_k = sum_j tau_j |G_jk| + delta_k, which
        // makes the corner margins exactly delta. Needs G nonsingular.
        Vector s(n);
        for (std::size_t k = 0; k < n; ++k) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += tau[j] * std::fabs(gram(j, k));
            s[k] = acc + rng.uniform(0.1, 1.0);
        }
        try {
            const Vector y = dense_spd_solve(gram, s);
            return Problem(a, a.mul(y), tau);
        } catch (const SingularSystem&) {
            continue; // rank-deficient draw, try again
        }
    }
    throw InvalidInput("gen: could not draw a full-rank gradient-sign instance");
}

Problem gen_random(CounterRng& rng, std::size_t n, std::size_t m) {
    DenseMatrix a(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) a.at(i, j) = rng.uniform(-1.0, 1.0);
    Vector b(m), tau(n);
    for (double& v : b) v = rng.uniform(-2.0, 2.0);
    for (double& v : tau) v = rng.uniform(0.05, 1.0);
    return Problem(std::move(a), std::move(b), std::move(tau));
}

int run(int argc, char** argv) {
    CLI::App app{"boxlasso: closed-form Lagrange multipliers turning box-constrained "
                 "least squares into weighted-l1 problems, with solvers, duality "
                 "verification, value-function grids, and signal denoising."};
    app.footer(kSchemaNote);
    app.require_subcommand(1);

    // multipliers
    auto* cmd_mult = app.add_subcommand("multipliers",
                                        "Compute closed-form multipliers for a problem file");
    std::string mult_file, mult_method = "auto";
    double mult_diag_tol = 1e-10;
    cmd_mult->add_option("problem", mult_file, "problem JSON file")->required();
    cmd_mult->add_option("--method", mult_method, "auto|scalar|diagonal|gradient-sign|signature")
        ->check(CLI::IsMember({"auto", "scalar", "diagonal", "gradient-sign", "signature"}));
    cmd_mult->add_option("--diag-tol", mult_diag_tol, "relative off-diagonal Gram tolerance");

    // solve
    auto* cmd_solve = app.add_subcommand("solve", "Run a solver on a problem file");
    std::string solve_file, solve_form, solve_lambda_file;
    double solve_tol = 1e-10;
    int solve_max_iters = 100000;
    cmd_solve->add_option("problem", solve_file, "problem JSON file")->required();
    cmd_solve->add_option("--formulation", solve_form, "box|lasso|tikhonov")
        ->required()
        ->check(CLI::IsMember({"box", "lasso", "tikhonov"}));
    cmd_solve->add_option("--lambda-file", solve_lambda_file,
                          "weights for lasso/tikhonov (array or {\"lambda\": [...]})");
    cmd_solve->add_option("--tol", solve_tol, "solver tolerance");
    cmd_solve->add_option("--max-iters", solve_max_iters, "iteration cap");

    // verify
    auto* cmd_verify = app.add_subcommand("verify",
                                          "Check strong duality and KKT residuals for computed "
                                          "(or supplied) multipliers");
    std::string verify_file, verify_method = "auto", verify_lambda_file;
    double verify_gap_tol = 1e-6, verify_kkt_tol = 1e-6, verify_diag_tol = 1e-10;
    double verify_tol = 1e-10;
    int verify_max_iters = 100000;
    cmd_verify->add_option("problem", verify_file, "problem JSON file")->required();
    cmd_verify->add_option("--method", verify_method,
                           "auto|scalar|diagonal|gradient-sign|signature")
        ->check(CLI::IsMember({"auto", "scalar", "diagonal", "gradient-sign", "signature"}));
    cmd_verify->add_option("--lambda-file", verify_lambda_file,
                           "bypass the closed forms and verify these weights");
    cmd_verify->add_option("--gap-tol", verify_gap_tol, "duality gap threshold");
    cmd_verify->add_option("--kkt-tol", verify_kkt_tol, "max KKT residual threshold");
    cmd_verify->add_option("--diag-tol", verify_diag_tol, "relative off-diagonal Gram tolerance");
    cmd_verify->add_option("--tol", verify_tol, "solver tolerance");
    cmd_verify->add_option("--max-iters", verify_max_iters, "iteration cap");

    // gfunc
    auto* cmd_gfunc = app.add_subcommand("gfunc", "Export a value-function grid as CSV");
    std::string gfunc_file;
    GridArgs grid_args;
    cmd_gfunc->add_option("problem", gfunc_file, "problem JSON file")->required();
    cmd_gfunc->add_option("--axes", grid_args.axes, "one or two 0-based coordinates, e.g. 0 or 0,2")
        ->required();
    cmd_gfunc->add_option("--range", grid_args.range, "lo:hi swept by every axis")->required();
    cmd_gfunc->add_option("--step", grid_args.step, "grid step > 0")->required();
    cmd_gfunc->add_option("--out", grid_args.out, "output CSV path")->required();

    // denoise
    auto* cmd_denoise = app.add_subcommand("denoise", "Denoise a signal CSV");
    std::string den_file, den_transform = "identity", den_tau_file, den_out;
    double den_sigma = 0.0, den_headroom = 1.0;
    bool den_have_sigma = false;
    cmd_denoise->add_option("signal", den_file, "signal CSV (one float per line)")->required();
    cmd_denoise->add_option("--transform", den_transform, "identity|dct|dft")
        ->check(CLI::IsMember({"identity", "dct", "dft"}));
    cmd_denoise->add_option("--tau-file", den_tau_file, "box radii CSV, one float per line");
    cmd_denoise->add_option("--tau-gaussian", den_sigma,
                            "estimate radii from a Gaussian-filtered copy with this sigma")
        ->each([&](const std::string&) { den_have_sigma = true; });
    cmd_denoise->add_option("--headroom", den_headroom,
                            "multiplier on estimated radii (tau-gaussian only)");
    cmd_denoise->add_option("--out", den_out, "output CSV path; sidecar goes to <out>.json")
        ->required();

    // gen
    auto* cmd_gen = app.add_subcommand("gen", "Generate a reproducible fixture problem");
    std::string gen_kind, gen_out;
    std::size_t gen_n = 4, gen_m = 0;
    std::uint64_t gen_seed = 0;
    cmd_gen->add_option("--kind", gen_kind, "scalar|diagonal|gradient-sign|random")
        ->required()
        ->check(CLI::IsMember({"scalar", "diagonal", "gradient-sign", "random"}));
    cmd_gen->add_option("--n", gen_n, "columns (default 4)");
    cmd_gen->add_option("--m", gen_m, "rows (default: kind-dependent)");
    cmd_gen->add_option("--seed", gen_seed, "RNG seed");
    cmd_gen->add_option("--out", gen_out, "output problem JSON path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (cmd_mult->parsed()) {
        const Problem p = load_problem(mult_file);
        const MultiplierResult r = run_method(p, mult_method, mult_diag_tol);
        std::cout << multiplier_result_to_json(r).dump(2) << "\n";
        return 0;
    }

    if (cmd_solve->parsed()) {
        const Problem p = load_problem(solve_file);
        SolverConfig cfg;
        cfg.tol = solve_tol;
        cfg.max_iters = solve_max_iters;
        cfg.validate();

        SolveResult result;
        if (solve_form == "box") {
            result = solve_box_ls(p, cfg);
        } else {
            if (solve_lambda_file.empty())
                throw InvalidInput("solve: --lambda-file is required for " + solve_form);
            const Multipliers lam = load_multipliers(solve_lambda_file);
            if (lam.size() != p.n())
                throw InvalidInput("solve: lambda has length " + std::to_string(lam.size()) +
                                   ", expected n = " + std::to_string(p.n()));
            if (solve_form == "lasso") {
                result = solve_weighted_lasso(p.a, p.b, lam, cfg);
            } else {
                result.x = solve_weighted_tikhonov(p.a, p.b, lam);
                result.objective = tikhonov_objective(p.a, p.b, lam, result.x);
                result.converged = true;
                result.tolerance_used = cfg.tol;
            }
        }
        std::cout << solve_result_to_json(result).dump(2) << "\n";
        if (!result.converged) {
            std::cerr << "solve: no convergence within " << cfg.max_iters << " iterations\n";
            return 4;
        }
        return 0;
    }

    if (cmd_verify->parsed()) {
        const Problem p = load_problem(verify_file);
        SolverConfig cfg;
        cfg.tol = verify_tol;
        cfg.max_iters = verify_max_iters;
        cfg.validate();

        Multipliers lam = verify_lambda_file.empty()
                              ? run_method(p, verify_method, verify_diag_tol).lambda
                              : load_multipliers(verify_lambda_file);
        if (lam.size() != p.n())
            throw InvalidInput("verify: lambda has length " + std::to_string(lam.size()) +
                               ", expected n = " + std::to_string(p.n()));
        const VerifyReport rep = verify_equivalence(p, lam, cfg);
        std::cout << verify_report_to_json(rep).dump(2) << "\n";
        const bool pass = rep.gap <= verify_gap_tol && rep.max_kkt_residual <= verify_kkt_tol;
        std::cout << (pass ? "PASS" : "FAIL") << "\n";
        return pass ? 0 : 5;
    }

    if (cmd_gfunc->parsed()) {
        const Problem p = load_problem(gfunc_file);
        const GridSpec spec = parse_grid_spec(grid_args);
        const GridTable table = export_g_grid(p, spec);
        std::ofstream out(grid_args.out, std::ios::binary);
        if (!out) throw InvalidInput("gfunc: cannot open output file " + grid_args.out);
        write_grid_csv(out, table);
        return 0;
    }

    if (cmd_denoise->parsed()) {
        std::ifstream in(den_file, std::ios::binary);
        if (!in) throw InvalidInput("denoise: cannot open signal file " + den_file);
        const Signal sig = read_signal_csv(in);

        const bool have_file = !den_tau_file.empty();
        if (have_file == den_have_sigma)
            throw InvalidInput("denoise: give exactly one of --tau-file and --tau-gaussian");

        TransformKind kind = TransformKind::Identity;
        if (den_transform == "dct") kind = TransformKind::DCT2Orthonormal;
        if (den_transform == "dft") {
            if (sig.size() % 2 != 0)
                throw InvalidInput("denoise: dft needs an even-length signal "
                                   "(interleaved re/im pairs)");
            kind = TransformKind::RealEmbeddedDFT;
        }
        const Transform t = Transform::make(kind, sig.size());

        Vector tau;
        if (have_file) {
            std::ifstream tin(den_tau_file, std::ios::binary);
            if (!tin) throw InvalidInput("denoise: cannot open tau file " + den_tau_file);
            tau = read_signal_csv(tin).samples;
            if (tau.size() != sig.size())
                throw InvalidInput("denoise: tau has length " + std::to_string(tau.size()) +
                                   ", expected " + std::to_string(sig.size()));
            for (std::size_t j = 0; j < tau.size(); ++j)
                if (!(tau[j] >= 0.0))
                    throw InvalidInput("denoise: tau[" + std::to_string(j) + "] is negative");
        } else {
            tau = estimate_tau_gaussian(sig, den_sigma, t, den_headroom);
        }

        const Vector lambda = identity_multipliers(t.analyze(sig.samples), tau);
        const Signal out_sig = denoise_transform(sig, tau, t);

        std::ofstream out(den_out, std::ios::binary);
        if (!out) throw InvalidInput("denoise: cannot open output file " + den_out);
        write_signal_csv(out, out_sig);

        json sidecar{{"method", have_file ? "tau-file" : "tau-gaussian"},
                     {"transform", den_transform},
                     {"sigma", have_file ? json(nullptr) : json(den_sigma)},
                     {"lambda", lambda},
                     {"tau", tau}};
        write_text_file(den_out + ".json", sidecar.dump(2) + "\n");
        return 0;
    }

    if (cmd_gen->parsed()) {
        if (gen_n < 1) throw InvalidInput("gen: --n must be >= 1");
        CounterRng rng(gen_seed);
        Problem p = [&]() {
            if (gen_kind == "scalar") return gen_scalar(rng);
            const std::size_t m = gen_m > 0 ? gen_m : gen_n;
            if (gen_kind == "diagonal") return gen_diagonal(rng, gen_n, m);
            if (gen_kind == "gradient-sign") return gen_gradient_sign(rng, gen_n, m);
            return gen_random(rng, gen_n, m);
        }();
        write_text_file(gen_out, problem_to_json(p).dump(2) + "\n");
        return 0;
    }

    return 2;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const boxlasso::Inapplicable& e) {
        std::cerr << "inapplicable: " << e.what() << "\n";
        return 3;
    } catch (const boxlasso::SingularSystem& e) {
        std::cerr << "singular system: " << e.what() << "\n";
        return 4;
    } catch (const boxlasso::SolverFailure& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 4;
    } catch (const boxlasso::InvalidInput& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
