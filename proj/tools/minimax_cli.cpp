// minimax: command-line front end for the transductive aggregation game.
//
//   minimax solve     F.csv (--b b.json | --labeled S.csv) [flags]
//   minimax estimate-b S.csv --n N [--delta D]
//   minimax generate  {caseA|caseB|cyclic|table1|random} [--out DIR]
//   minimax evaluate  g.json z.json
//   minimax baseline  F.csv --b b.json --kind {erm|majority} [--subset 0,1,2]
//
// Exit codes: 0 optimal, 1 parse or input error, 2 infeasible bounds,
// 3 solver did not converge.

#include <charconv>
#include <chrono>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "minimax/io.hpp"
#include "minimax/minimax.hpp"

namespace {

using namespace minimax;
using minimax::io::json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitNotConverged = 3;

template <typename T>
std::vector<T> parse_list(const std::string& text, const char* what) {
    std::vector<T> out;
    std::size_t start = 0;
    if (text.empty()) return out;
    for (;;) {
        const std::size_t comma = text.find(',', start);
        const std::string field = text.substr(start, comma == std::string::npos ? std::string::npos
                                                                                : comma - start);
        T v{};
        const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
        if (field.empty() || res.ec != std::errc{} || res.ptr != field.data() + field.size())
            throw io::parse_error(std::string("--") + what, 1, out.size() + 1,
                                  "bad list element '" + field + "'");
        out.push_back(v);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty())
        std::cout << text;
    else
        io::write_file(out_path, text);
}

// --- solve -----------------------------------------------------------------

struct SolveArgs {
    std::string matrix;
    std::string b_file;
    std::string labeled;
    std::string method = "lp";
    std::size_t iters = 50000;
    double tol = 1e-6;
    double tau = kDefaultTau;
    std::uint64_t seed = 0;
    double delta = 0.05;
    std::size_t batch = 1;
    std::string noise;
    std::string out;
    bool timing = false;
};

int run_solve(const SolveArgs& a) {
    const auto start = std::chrono::steady_clock::now();
    const PredictionMatrix f = io::read_matrix_csv(a.matrix);

    CorrelationVector b;
    if (!a.b_file.empty()) {
        b = CorrelationVector(io::read_vector_json(a.b_file));
    } else {
        const LabeledSet s = io::read_labeled_csv(a.labeled);
        if (s.p() != f.p()) throw dimension_error("labeled set and matrix disagree on p");
        b = estimate_b(s, {a.delta, f.n(), true});
    }
    validate_inputs(f, b);

    std::optional<NoiseProfile> noise;
    if (!a.noise.empty()) noise = io::read_noise_json(a.noise);

    SolverConfig cfg;
    if (a.method == "lp")
        cfg.method = Method::exact_lp;
    else if (a.method == "subgradient")
        cfg.method = Method::subgradient;
    else
        cfg.method = Method::stochastic_subgradient;
    cfg.max_iters = a.iters;
    cfg.tolerance = a.tol;
    cfg.tau = a.tau;
    cfg.seed = a.seed;
    cfg.batch_size = a.batch;

    const GameSolution sol = solve_game(f, b, cfg, noise);

    io::RunReport r;
    r.status = to_string(sol.status);
    r.b = b.values();
    r.iterations = sol.iterations;
    r.config = json{{"method", to_string(cfg.method)}, {"iters", cfg.max_iters},
                    {"tol", cfg.tolerance},            {"tau", cfg.tau},
                    {"seed", cfg.seed},                {"batch", cfg.batch_size},
                    {"b_source", a.b_file.empty() ? "estimated" : "file"},
                    {"noise", !a.noise.empty()}};
    if (a.b_file.empty()) r.config["delta"] = a.delta;

    if (sol.status != SolveStatus::infeasible) {
        r.value = sol.value;
        r.sigma = sol.sigma.values();
        r.g = sol.g.values();
        r.z = sol.z.values();
        for (Region reg : sol.partition.region) r.partition += region_code(reg);
        r.zbr = sol.zbr;
        if (!std::isnan(sol.zbr_value)) r.zbr_value = sol.zbr_value;
        r.borderline_coeffs = sol.borderline_coeffs;
        r.residual = sol.residual;
        const auto cert = sol.certificate ? *sol.certificate : lp_adversary(f, b, noise);
        if (cert.status == lp::Status::optimal) r.duality_gap = std::abs(cert.primal_value - sol.value);
        if (!noise) r.worst_case_correlation = worst_case_correlation(f, b, sol.g);
    }
    if (a.timing)
        r.timing_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                          .count();
    emit(io::format_report(r), a.out);

    switch (sol.status) {
        case SolveStatus::optimal: return kExitOk;
        case SolveStatus::infeasible: return kExitInfeasible;
        case SolveStatus::not_converged: return kExitNotConverged;
    }
    return kExitOk;
}

// --- estimate-b ------------------------------------------------------------

int run_estimate(const std::string& labeled, double delta, std::size_t n, bool no_clamp,
                 const std::string& out) {
    const LabeledSet s = io::read_labeled_csv(labeled);
    const BoundConfig cfg{delta, n, !no_clamp};
    const auto eps = penalties(s.p(), s.m(), n, delta);
    const Vector b = no_clamp ? estimate_b_raw(s, cfg) : estimate_b(s, cfg).values();
    json j{{"b", b},         {"corr_S", train_correlations(s)}, {"eps_S", eps.train},
           {"eps_U", eps.test}, {"delta", delta},                {"m", s.m()},
           {"n", n},         {"clamped", !no_clamp}};
    emit(j.dump(2) + "\n", out);
    return kExitOk;
}

// --- generate --------------------------------------------------------------

struct GenerateArgs {
    std::string kind;
    std::size_t p = 5;
    std::size_t n = 100;
    std::string flips;
    std::string accuracies;
    double margin = 0.0;
    std::uint64_t seed = 0;
    std::string out = ".";
};

int run_generate(const GenerateArgs& a) {
    GeneratedInstance inst;
    json params = json::object();
    if (a.kind == "caseA") {
        inst = gen_intro_case(IntroCase::A);
    } else if (a.kind == "caseB") {
        inst = gen_intro_case(IntroCase::B);
    } else if (a.kind == "table1") {
        inst = gen_table1();
    } else if (a.kind == "cyclic") {
        const auto flips = parse_list<std::size_t>(a.flips, "flips");
        inst = gen_cyclic(a.p, flips);
        params = json{{"p", a.p}, {"flips", flips}};
    } else if (a.kind == "random") {
        Vector acc = parse_list<double>(a.accuracies, "accuracies");
        if (acc.empty()) acc.assign(a.p, 0.75);
        inst = gen_random(a.p, a.n, acc, a.seed, a.margin);
        params = json{{"p", a.p}, {"n", a.n}, {"accuracies", acc}, {"margin", a.margin}, {"seed", a.seed}};
    } else {
        throw domain_error("unknown instance kind '" + a.kind + "'");
    }

    const std::filesystem::path dir(a.out);
    std::filesystem::create_directories(dir);
    io::write_file((dir / "F.csv").string(), io::format_matrix_csv(inst.f));
    io::write_file((dir / "b.json").string(), io::format_vector_json(inst.b.values()));
    io::write_file((dir / "z_true.json").string(), io::format_vector_json(inst.z_true.values()));
    json meta{{"kind", a.kind},
              {"description", inst.description},
              {"p", inst.f.p()},
              {"n", inst.f.n()},
              {"expected_value", inst.expected_value ? json(*inst.expected_value) : json(nullptr)},
              {"params", params}};
    io::write_file((dir / "meta.json").string(), meta.dump(2) + "\n");
    return kExitOk;
}

// --- evaluate / baseline ---------------------------------------------------

int run_evaluate(const std::string& g_file, const std::string& z_file, const std::string& out) {
    const LabelVector g(io::read_vector_json(g_file));
    const LabelVector z(io::read_vector_json(z_file));
    const auto e = evaluate(g, z);
    emit(json{{"correlation", e.correlation}, {"error", e.error}}.dump(2) + "\n", out);
    return kExitOk;
}

int run_baseline(const std::string& matrix, const std::string& b_file, const std::string& kind,
                 const std::string& subset, const std::string& out) {
    const PredictionMatrix f = io::read_matrix_csv(matrix);
    LabelVector g;
    if (kind == "erm") {
        if (b_file.empty()) throw domain_error("--b is required for the erm baseline");
        g = baseline_erm(f, CorrelationVector(io::read_vector_json(b_file)));
    } else {
        auto idx = parse_list<std::size_t>(subset, "subset");
        if (idx.empty()) {
            idx.resize(f.p());
            std::iota(idx.begin(), idx.end(), std::size_t{0});
        }
        g = baseline_majority(f, idx);
    }
    emit(io::format_vector_json(g.values()), out);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Minimax aggregation of classifier ensembles on unlabeled data"};
    app.require_subcommand(1);

    SolveArgs sa;
    auto* solve = app.add_subcommand("solve", "Solve the game for a prediction matrix");
    solve->add_option("matrix", sa.matrix, "Prediction matrix CSV (classifiers x examples)")
        ->required()
        ->check(CLI::ExistingFile);
    auto* b_opt = solve->add_option("--b", sa.b_file, "Correlation bounds JSON");
    auto* lab_opt = solve->add_option("--labeled", sa.labeled, "Labeled CSV to estimate b from");
    b_opt->excludes(lab_opt);
    solve->add_option("--method", sa.method, "lp | subgradient | sgd")
        ->check(CLI::IsMember({"lp", "subgradient", "sgd"}));
    solve->add_option("--iters", sa.iters, "Iteration cap for subgradient methods");
    solve->add_option("--tol", sa.tol, "Convergence tolerance");
    solve->add_option("--tau", sa.tau, "Borderline margin tolerance");
    solve->add_option("--seed", sa.seed, "PRNG seed");
    solve->add_option("--delta", sa.delta, "Failure probability when estimating b");
    solve->add_option("--batch", sa.batch, "Mini-batch size for sgd");
    solve->add_option("--noise", sa.noise, "Noise profile JSON");
    solve->add_option("--out", sa.out, "Write the report here instead of stdout");
    solve->add_flag("--timing", sa.timing, "Include wall-clock timing in the report");

    std::string est_file, est_out;
    double est_delta = 0.05;
    std::size_t est_n = 0;
    bool est_no_clamp = false;
    auto* est = app.add_subcommand("estimate-b", "Estimate correlation bounds from labeled data");
    est->add_option("labeled", est_file, "Labeled CSV")->required()->check(CLI::ExistingFile);
    est->add_option("--delta", est_delta, "Failure probability");
    est->add_option("--n", est_n, "Number of unlabeled examples")->required();
    est->add_flag("--no-clamp", est_no_clamp, "Keep negative bounds");
    est->add_option("--out", est_out, "Output file");

    GenerateArgs ga;
    auto* gen = app.add_subcommand("generate", "Write a worked or random instance");
    gen->add_option("kind", ga.kind, "caseA | caseB | cyclic | table1 | random")
        ->required()
        ->check(CLI::IsMember({"caseA", "caseB", "cyclic", "table1", "random"}));
    gen->add_option("--p", ga.p, "Classifier count (cyclic, random)");
    gen->add_option("--n", ga.n, "Example count (random)");
    gen->add_option("--flips", ga.flips, "Comma-separated 0-based columns to invert (cyclic)");
    gen->add_option("--accuracies", ga.accuracies, "Comma-separated per-classifier accuracies (random)");
    gen->add_option("--margin", ga.margin, "Safety margin subtracted from b (random)");
    gen->add_option("--seed", ga.seed, "PRNG seed (random)");
    gen->add_option("--out", ga.out, "Output directory");

    std::string ev_g, ev_z, ev_out;
    auto* ev = app.add_subcommand("evaluate", "Correlation and error of predictions");
    ev->add_option("g", ev_g, "Predictions JSON")->required()->check(CLI::ExistingFile);
    ev->add_option("z", ev_z, "True labels JSON")->required()->check(CLI::ExistingFile);
    ev->add_option("--out", ev_out, "Output file");

    std::string bl_matrix, bl_b, bl_kind = "erm", bl_subset, bl_out;
    auto* bl = app.add_subcommand("baseline", "Best-single-rule or majority-vote predictions");
    bl->add_option("matrix", bl_matrix, "Prediction matrix CSV")->required()->check(CLI::ExistingFile);
    bl->add_option("--b", bl_b, "Correlation bounds JSON (erm)");
    bl->add_option("--kind", bl_kind, "erm | majority")->check(CLI::IsMember({"erm", "majority"}));
    bl->add_option("--subset", bl_subset, "Comma-separated 0-based classifiers (majority)");
    bl->add_option("--out", bl_out, "Output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (*solve) {
            if (sa.b_file.empty() && sa.labeled.empty())
                throw domain_error("solve needs --b or --labeled");
            return run_solve(sa);
        }
        if (*est) return run_estimate(est_file, est_delta, est_n, est_no_clamp, est_out);
        if (*gen) return run_generate(ga);
        if (*ev) return run_evaluate(ev_g, ev_z, ev_out);
        if (*bl) return run_baseline(bl_matrix, bl_b, bl_kind, bl_subset, bl_out);
    } catch (const infeasible_error& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
