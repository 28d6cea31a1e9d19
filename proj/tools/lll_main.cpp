#include <lll/derandomize.hpp>
#include <lll/engine_parallel.hpp>
#include <lll/engine_sequential.hpp>
#include <lll/engine_wdenum.hpp>
#include <lll/experiments.hpp>
#include <lll/generators.hpp>
#include <lll/prf.hpp>
#include <lll/shearer.hpp>
#include <lll/witness_dag.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCriterion = 2;
constexpr int kExitCap = 3;
constexpr int kExitModel = 4;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw lll::ParseError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw lll::ParseError("cannot write " + path);
    out << text;
}

lll::EventSystem load_model(const std::string& path) {
    std::string text = read_file(path);
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') return lll::parse_native(text);
    return lll::parse_dimacs(text);
}

std::vector<lll::Rational> parse_rational_list(const std::string& csv) {
    std::vector<lll::Rational> out;
    std::stringstream stream(csv);
    std::string item;
    while (std::getline(stream, item, ',')) out.push_back(lll::parse_rational(item));
    return out;
}

std::vector<lll::Rational> x_preset(const lll::EventSystem& sys, const std::string& name) {
    std::vector<lll::Rational> x;
    if (name == "ep") {
        for (int b = 0; b < sys.event_count(); ++b) {
            lll::Rational ep = lll::euler_upper_bound() * sys.event_prob(b);
            x.push_back(ep / (1 + ep));
        }
    } else if (name == "1/d") {
        int d = std::max(2, sys.max_degree());
        for (int b = 0; b < sys.event_count(); ++b) x.push_back(lll::Rational(1, d));
    } else {
        x = parse_rational_list(name);
    }
    return x;
}

bool criterion_gate(const lll::EventSystem& sys, const std::string& engine,
                    const lll::Rational& eps) {
    if (engine == "det") return lll::check_symmetric_power(sys, eps);
    if (sys.event_count() <= lll::kDefaultEventCap) return lll::check_shearer(sys, 1 + eps);
    return lll::check_symmetric(sys, eps);
}

nlohmann::json stats_json(const lll::EngineStats& stats) {
    nlohmann::json out{{"resamplings", stats.resamplings},
                       {"steps", stats.steps},
                       {"rounds", stats.rounds},
                       {"mis_rounds", stats.mis_rounds},
                       {"mis_invocations", stats.mis_invocations},
                       {"retries", stats.retries}};
    if (stats.gamma_size >= 0) out["gamma"] = stats.gamma_size;
    if (stats.cwd_count >= 0) out["cwds"] = stats.cwd_count;
    if (stats.max_wd_size > 0) out["max_wd"] = stats.max_wd_size;
    if (stats.cap_K > 0) out["K"] = stats.cap_K;
    return out;
}

nlohmann::json assignment_json(const lll::Assignment& x) {
    nlohmann::json values = nlohmann::json::array();
    for (int v : x.values) values.push_back(v);
    return values;
}

struct SolveArgs {
    std::string model;
    std::string engine = "seq";
    std::uint64_t seed = 0;
    std::string eps = "1/4";
    long long max_steps = 1 << 20;
    int max_rounds = 1 << 16;
    std::string rule = "first";
    bool force = false;
    std::string c = "8";
    long long s_cap = 1 << 20;
    int cap_nodes = 0;
    int columns = 0;
    int degree = 2;
    std::uint64_t q = 0;
    int threads = 1;
    std::string table_in;
    std::string log_out;
    std::string gamma_out;
};

int run_solve(const SolveArgs& args) {
    lll::EventSystem sys = load_model(args.model);
    lll::Rational eps = lll::parse_rational(args.eps);

    if (!args.force && !criterion_gate(sys, args.engine, eps)) {
        std::cerr << "criterion unsatisfied at slack " << lll::rational_str(eps)
                  << "; rerun with --force to attempt anyway\n";
        return kExitCriterion;
    }

    nlohmann::json report;
    lll::RunStatus status = lll::RunStatus::ok;
    lll::Assignment assignment;

    if (args.engine == "seq" || args.engine == "par") {
        int columns = args.columns > 0 ? args.columns
                                       : lll::default_column_cap(sys.variable_count(), eps);
        std::unique_ptr<lll::ResamplingTable> table;
        if (!args.table_in.empty()) {
            table = std::make_unique<lll::ExplicitTable>(
                lll::load_table_json(sys, read_file(args.table_in)));
        } else {
            table = std::make_unique<lll::SeededTable>(sys, args.seed, columns);
        }
        lll::RunResult run;
        if (args.engine == "seq") {
            lll::SelectionRule rule = lll::SelectionRule::first_true;
            if (args.rule == "lowvar") rule = lll::SelectionRule::lowest_variable;
            else if (args.rule == "random") rule = lll::SelectionRule::random_true;
            else if (args.rule != "first") throw lll::ParseError("unknown rule " + args.rule);
            run = lll::run_sequential(sys, *table, rule, args.max_steps, lll::prf2(args.seed, 1));
        } else {
            run = lll::run_parallel(sys, *table, args.seed, args.max_rounds);
        }
        status = run.status;
        assignment = run.assignment;
        report["stats"] = stats_json(run.stats);
        if (!args.log_out.empty()) write_file(args.log_out, lll::log_json(run.log));
    } else if (args.engine == "wdenum") {
        lll::WdEnumOptions opt;
        opt.seed = args.seed;
        opt.epsilon_hint = eps;
        opt.c = lll::parse_rational(args.c);
        opt.s_cap = args.s_cap;
        opt.cap_override = args.cap_nodes;
        lll::RunResult run = lll::run_wdenum(sys, opt);
        status = run.status;
        assignment = run.assignment;
        report["stats"] = stats_json(run.stats);
        if (!args.gamma_out.empty() && status == lll::RunStatus::ok) {
            lll::SeededTable table(sys, args.seed, run.stats.cap_K + 2);
            auto enumerated = lll::enumerate_wds(sys, table, run.stats.cap_K, args.s_cap);
            nlohmann::json dags = nlohmann::json::array();
            for (int idx : enumerated.gamma) {
                dags.push_back(nlohmann::json::parse(
                    lll::dag_json(enumerated.family.member(idx))));
            }
            write_file(args.gamma_out, dags.dump());
        }
    } else if (args.engine == "det") {
        lll::DetOptions opt;
        opt.cap_nodes = args.cap_nodes;
        opt.epsilon = eps;
        opt.c = lll::parse_rational(args.c);
        opt.s_cap = args.s_cap;
        opt.degree = args.degree;
        opt.q_override = args.q;
        opt.threads = args.threads;
        lll::DetResult det = lll::solve_deterministic(sys, opt);
        assignment = det.assignment;
        report["stats"] = stats_json(det.stats);
        report["q"] = det.q;
        report["winner"] = det.winner;
        report["criterion_ok"] = det.criterion_ok;
    } else {
        throw lll::ParseError("unknown engine " + args.engine);
    }

    std::vector<int> still_true = sys.true_events(assignment);
    report["status"] = status == lll::RunStatus::ok ? "ok" : "cap_exceeded";
    report["assignment"] = assignment_json(assignment);
    nlohmann::json bad = nlohmann::json::array();
    for (int b : still_true) bad.push_back(b + 1);
    report["true_events"] = bad;
    std::cout << report.dump(2) << '\n';

    if (status != lll::RunStatus::ok) return kExitCap;
    return still_true.empty() ? kExitOk : kExitCriterion;
}

int run_check(const std::string& model_path, const std::string& scale, const std::string& eps,
              int cap, const std::string& x_spec, const std::string& mu_spec) {
    lll::EventSystem sys = load_model(model_path);
    lll::ReportOptions opts;
    opts.scale = lll::parse_rational(scale);
    opts.eps = lll::parse_rational(eps);
    opts.cap = cap;
    if (!x_spec.empty()) opts.x = x_preset(sys, x_spec);
    if (!mu_spec.empty()) opts.mu_tilde = parse_rational_list(mu_spec);
    lll::ShearerReport report = lll::shearer_report(sys, opts);
    std::cout << lll::report_json(report) << '\n';
    bool ok = report.exact ? report.shearer_satisfied : report.symmetric_satisfied;
    return ok ? kExitOk : kExitCriterion;
}

int run_enumerate(const std::string& model_path, std::uint64_t seed, int cap, long long s_cap,
                  const std::string& out_path) {
    lll::EventSystem sys = load_model(model_path);
    lll::SeededTable table(sys, seed, cap + 2);
    auto enumerated = lll::enumerate_wds(sys, table, cap, s_cap);
    nlohmann::json dags = nlohmann::json::array();
    for (int idx : enumerated.gamma) {
        dags.push_back(nlohmann::json::parse(lll::dag_json(enumerated.family.member(idx))));
    }
    nlohmann::json out{{"gamma", std::move(dags)},
                       {"cwds", enumerated.family.size()},
                       {"max_wd", enumerated.family.max_size},
                       {"status", enumerated.status == lll::RunStatus::ok ? "ok" : "cap_exceeded"}};
    std::string text = out.dump(2);
    if (out_path.empty()) std::cout << text << '\n';
    else write_file(out_path, text);
    return enumerated.status == lll::RunStatus::ok ? kExitOk : kExitCap;
}

struct ExperimentArgs {
    std::string name;
    std::string model;
    std::string family = "tiny";
    int n = 50;
    std::uint64_t q = 0;
    int trials = 100;
    std::uint64_t seed = 0;
    std::string eps = "3/10";
    std::string out;
    bool timings = false;
    int threads = 1;
    int cap_nodes = 0;
    long long compat_trials = 100000;
    std::string dag_path;
};

int run_experiment(const ExperimentArgs& args) {
    lll::EventSystem sys = args.model.empty()
                               ? (args.family == "tiny"
                                      ? (args.q ? lll::tiny_a_qadic(args.q) : lll::tiny_a())
                                      : lll::three_sat_pairs(args.seed, {args.n, args.q}))
                               : load_model(args.model);
    lll::Rational eps = lll::parse_rational(args.eps);

    if (!criterion_gate(sys, "rand", eps)) {
        std::cerr << "instance fails its declared criterion at slack " << lll::rational_str(eps)
                  << '\n';
        return kExitCriterion;
    }

    if (args.name == "compat_prob") {
        lll::WitnessDag dag =
            args.dag_path.empty()
                ? lll::WitnessDag::from_label_sequence(sys, sys.event_count() > 1
                                                                ? std::vector<int>{0, 1}
                                                                : std::vector<int>{0})
                : lll::dag_from_json(sys, read_file(args.dag_path));
        lll::CompatEstimate est =
            lll::experiment_compat_prob(sys, dag, args.compat_trials, args.seed);
        std::ostringstream csv;
        csv << "frequency,stderr,exact,trials\n"
            << est.frequency << ',' << est.stderr_est << ',' << est.exact << ',' << est.trials
            << '\n';
        if (args.out.empty()) std::cout << csv.str();
        else write_file(args.out, csv.str());
        return kExitOk;
    }

    lll::ExperimentSpec spec;
    spec.sys = &sys;
    spec.eps = eps;
    spec.trials = args.trials;
    spec.base_seed = args.seed;
    spec.timings = args.timings;
    spec.threads = args.threads;
    spec.cap_override = args.cap_nodes;

    lll::ExperimentOutput output;
    if (args.name == "resamplings") output = lll::experiment_resamplings(spec);
    else if (args.name == "rounds") output = lll::experiment_rounds(spec);
    else if (args.name == "wd_counts") output = lll::experiment_wd_counts(spec);
    else throw lll::ParseError("unknown experiment " + args.name);

    std::string csv = lll::rows_csv(output.rows);
    if (args.out.empty()) std::cout << csv;
    else write_file(args.out, csv);
    std::cerr << lll::summary_text(output.summary);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lovász local lemma toolkit: criteria, resampling engines, witness-DAG "
                 "enumeration, deterministic search"};
    app.require_subcommand(1);

    std::string check_model, check_scale = "1", check_eps = "0", check_x, check_mu;
    int check_cap = lll::kDefaultEventCap;
    CLI::App* check = app.add_subcommand("check", "Evaluate LLL criteria on a model");
    check->add_option("model", check_model)->required();
    check->add_option("--scale", check_scale, "Probability scale factor, e.g. 5/4");
    check->add_option("--eps", check_eps, "Slack for the scaled criteria");
    check->add_option("--cap", check_cap, "Exact-computation event cap");
    check->add_option("--x", check_x, "Asymmetric weights: 'ep', '1/d', or rationals");
    check->add_option("--mu-tilde", check_mu, "Cluster-expansion weights (rationals)");

    SolveArgs solve_args;
    CLI::App* solve = app.add_subcommand("solve", "Find an assignment avoiding every event");
    solve->add_option("model", solve_args.model)->required();
    solve->add_option("--engine", solve_args.engine, "seq | par | wdenum | det");
    solve->add_option("--seed", solve_args.seed);
    solve->add_option("--eps", solve_args.eps, "Declared slack");
    solve->add_option("--max-steps", solve_args.max_steps);
    solve->add_option("--max-rounds", solve_args.max_rounds);
    solve->add_option("--rule", solve_args.rule, "first | lowvar | random");
    solve->add_flag("--force", solve_args.force, "Skip the criterion gate");
    solve->add_option("--c", solve_args.c, "Node-cap constant");
    solve->add_option("--s-cap", solve_args.s_cap, "Family size safety valve");
    solve->add_option("--K", solve_args.cap_nodes, "Node cap override");
    solve->add_option("--columns", solve_args.columns, "Table column cap override");
    solve->add_option("--degree", solve_args.degree, "Independence parameter (det)");
    solve->add_option("--q", solve_args.q, "Field size override (det)");
    solve->add_option("--threads", solve_args.threads, "Worker count (det)");
    solve->add_option("--table", solve_args.table_in, "Load a dumped table (seq/par)");
    solve->add_option("--log-out", solve_args.log_out, "Write the execution log JSON");
    solve->add_option("--dump-gamma", solve_args.gamma_out, "Write the single-sink WDs (wdenum)");

    std::string enum_model, enum_out;
    std::uint64_t enum_seed = 0;
    int enum_cap = 8;
    long long enum_scap = 1 << 20;
    CLI::App* enumerate = app.add_subcommand("enumerate", "Dump the single-sink witness DAGs");
    enumerate->add_option("model", enum_model)->required();
    enumerate->add_option("--seed", enum_seed);
    enumerate->add_option("--cap", enum_cap, "Node cap K");
    enumerate->add_option("--s-cap", enum_scap);
    enumerate->add_option("--out", enum_out);

    std::string table_model;
    std::uint64_t table_seed = 0;
    int table_tmax = 4;
    std::string table_out;
    CLI::App* table_cmd = app.add_subcommand("table", "Dump a seeded resampling table");
    table_cmd->add_option("model", table_model)->required();
    table_cmd->add_option("--seed", table_seed);
    table_cmd->add_option("--t-max", table_tmax, "Columns to materialize");
    table_cmd->add_option("--out", table_out);

    ExperimentArgs exp_args;
    CLI::App* experiment = app.add_subcommand("experiment", "Run a Monte Carlo experiment");
    experiment->add_option("name", exp_args.name, "resamplings | rounds | wd_counts | compat_prob")
        ->required();
    experiment->add_option("--model", exp_args.model, "Model file (default: generated family)");
    experiment->add_option("--family", exp_args.family, "tiny | pairs");
    experiment->add_option("--n", exp_args.n, "Variables for the pairs family");
    experiment->add_option("--q", exp_args.q, "Odd prime for q-adic probabilities");
    experiment->add_option("--trials", exp_args.trials);
    experiment->add_option("--seed", exp_args.seed);
    experiment->add_option("--eps", exp_args.eps, "Declared slack");
    experiment->add_option("--out", exp_args.out, "CSV output path");
    experiment->add_flag("--timings", exp_args.timings, "Record real runtimes");
    experiment->add_option("--threads", exp_args.threads);
    experiment->add_option("--cap", exp_args.cap_nodes, "Node cap override (wd_counts)");
    experiment->add_option("--compat-trials", exp_args.compat_trials);
    experiment->add_option("--dag", exp_args.dag_path, "WD JSON for compat_prob");

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) {
            return run_check(check_model, check_scale, check_eps, check_cap, check_x, check_mu);
        }
        if (solve->parsed()) return run_solve(solve_args);
        if (enumerate->parsed()) {
            return run_enumerate(enum_model, enum_seed, enum_cap, enum_scap, enum_out);
        }
        if (table_cmd->parsed()) {
            lll::EventSystem sys = load_model(table_model);
            lll::SeededTable table(sys, table_seed, table_tmax);
            std::string text = lll::dump_table_json(table, table_tmax);
            if (table_out.empty()) std::cout << text << '\n';
            else write_file(table_out, text);
            return kExitOk;
        }
        if (experiment->parsed()) return run_experiment(exp_args);
    } catch (const lll::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitModel;
    } catch (const lll::InvalidModel& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitModel;
    } catch (const lll::CapExceeded& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitCap;
    } catch (const lll::CriterionUnsatisfied& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitCriterion;
    } catch (const lll::UnsupportedDistribution& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitModel;
    } catch (const lll::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitModel;
    }
    return kExitOk;
}
