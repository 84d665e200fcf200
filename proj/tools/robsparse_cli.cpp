#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "robsparse/ellipsoid.hpp"
#include "robsparse/errors.hpp"
#include "robsparse/harness.hpp"
#include "robsparse/io.hpp"
#include "robsparse/models.hpp"
#include "robsparse/simulator.hpp"

namespace {

using namespace robsparse;

bool paired_kind(const std::string& kind) {
    return kind == "regression" || kind == "glm" || kind == "logistic";
}

// Estimation-time adapter: true parameters unknown, so constants are taken
// at the zero parameter with the declared norm budget.
ModelAdapter blank_model(const std::string& kind, int d, int s, double rho,
                         const std::string& link) {
    if (kind == "mean") return make_mean_model(Vector::Zero(d), s);
    if (kind == "covariance") return make_covariance_model(Matrix::Zero(d, d), s);
    if (kind == "regression") return make_regression_model(Vector::Zero(d), rho, s);
    if (kind == "glm") return make_glm_model(Vector::Zero(d), rho, make_link(link), s);
    return make_logistic_model(Vector::Zero(d), rho, make_link("logistic"), s);
}

int resolve_threads(int cli_threads, int config_threads) {
    if (cli_threads > 0) return cli_threads;
    if (const char* env = std::getenv("ROBSPARSE_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return config_threads > 0 ? config_threads : 1;
}

void add_pipeline_options(CLI::App* cmd, PipelineConfig& pipe) {
    cmd->add_option("--tau-prune", pipe.tau_prune, "pruning failure probability");
    cmd->add_option("--c-prune", pipe.c_prune, "pruning threshold constant");
    cmd->add_option("--c-sep", pipe.c_sep, "separation tolerance constant");
    cmd->add_option("--spca-tol", pipe.spca_tol, "relaxation solver tolerance (<=0: auto)");
    cmd->add_option("--spca-max-iters", pipe.spca_max_iters, "relaxation solver iteration cap");
    cmd->add_option("--screen-threshold", pipe.screen_threshold,
                    "dimension above which coordinates are screened");
    cmd->add_option("--screen-size", pipe.screen_size, "screened working-set size");
    cmd->add_option("--max-iters", pipe.run.max_iters, "ellipsoid iteration cap (<=0: 500 m^2)");
    cmd->add_option("--volume-floor", pipe.run.volume_floor,
                    "ellipsoid volume floor radius (<0: model default)");
    cmd->add_option("--cut-pool", pipe.run.cut_pool, "recycled oracle-cut pool size");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"robust estimation of sparse functionals from contaminated samples"};
    app.require_subcommand(1);

    // ---------- simulate ----------
    auto* sim = app.add_subcommand("simulate", "draw a contaminated dataset and write it out");
    ModelSpec sim_model;
    ContaminationSetting sim_contam;
    int sim_n = 200;
    double sim_eps = 0.1;
    std::uint64_t sim_seed = 1;
    std::string sim_output;
    bool sim_with_labels = false;
    sim->add_option("--kind", sim_model.kind, "model family")
        ->check(CLI::IsMember({"mean", "covariance", "regression", "glm", "logistic"}));
    sim->add_option("--d", sim_model.d, "covariate dimension");
    sim->add_option("--s", sim_model.s, "sparsity level");
    sim->add_option("--signal", sim_model.signal, "planted parameter magnitude");
    sim->add_option("--rho", sim_model.rho, "parameter norm budget (regression family)");
    sim->add_option("--link", sim_model.link, "GLM link")
        ->check(CLI::IsMember({"identity", "logistic"}));
    sim->add_option("--n", sim_n, "sample count")->check(CLI::PositiveNumber);
    sim->add_option("--epsilon", sim_eps, "contamination fraction")
        ->check(CLI::Range(0.0, 0.4999));
    sim->add_option("--seed", sim_seed, "random seed");
    sim->add_option("--law", sim_contam.law, "outlier law")
        ->check(CLI::IsMember({"point_mass", "clustered_shift", "variance_inflation",
                               "response_flip"}));
    sim->add_option("--align", sim_contam.align, "outlier direction")
        ->check(CLI::IsMember({"spread", "first", "last"}));
    sim->add_option("--shift", sim_contam.shift, "outlier center norm");
    sim->add_option("--spread", sim_contam.spread, "cluster spread");
    sim->add_option("--factor", sim_contam.factor, "variance inflation factor");
    sim->add_option("--magnitude", sim_contam.magnitude, "response-flip covariate norm");
    sim->add_option("--y-value", sim_contam.y_value, "outlier response value");
    sim->add_option("-o,--output", sim_output, "output path (default stdout)");
    sim->add_flag("--with-labels", sim_with_labels,
                  "include the hidden contamination labels as a column");

    // ---------- estimate ----------
    auto* est = app.add_subcommand("estimate", "run the robust estimator on a dataset");
    std::string est_input, est_output, est_kind = "mean", est_link = "logistic";
    int est_s = 2;
    double est_rho = 2.0, est_eps = -1.0;
    bool est_weights = false;
    PipelineConfig est_pipe;
    est->add_option("-i,--input", est_input, "dataset file")->required();
    est->add_option("--kind", est_kind, "model family")
        ->check(CLI::IsMember({"mean", "covariance", "regression", "glm", "logistic"}));
    est->add_option("--s", est_s, "sparsity level")->check(CLI::PositiveNumber);
    est->add_option("--rho", est_rho, "parameter norm budget (regression family)");
    est->add_option("--link", est_link, "GLM link")
        ->check(CLI::IsMember({"identity", "logistic"}));
    est->add_option("--epsilon", est_eps,
                    "contamination fraction (default: the dataset's recorded value)");
    est->add_flag("--weights", est_weights, "include the final sample weights in the output");
    est->add_option("-o,--output", est_output, "output path (default stdout)");
    add_pipeline_options(est, est_pipe);

    // ---------- sweep ----------
    auto* swp = app.add_subcommand("sweep", "run an experiment grid from a JSON config");
    std::string swp_config, swp_output;
    int swp_threads = 0;
    swp->add_option("-c,--config", swp_config, "JSON config file")->required();
    swp->add_option("-o,--out,--output", swp_output, "CSV destination (overrides the config)");
    swp->add_option("--threads", swp_threads,
                    "worker threads (default: ROBSPARSE_THREADS or the config)");

    // ---------- verify ----------
    auto* ver = app.add_subcommand("verify", "run a self-check suite");
    std::string ver_suite;
    ver->add_option("--suite,suite", ver_suite, "one of: lemmas, moments, spca, oracle")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sim) {
            const ModelAdapter model = build_model(sim_model);
            const Dataset data = sample_contaminated(
                model, sim_n, sim_seed, build_contamination(sim_contam, sim_model, sim_eps));
            const bool paired = paired_kind(sim_model.kind);
            if (sim_output.empty())
                write_dataset(std::cout, data, paired, sim_with_labels);
            else
                write_dataset_file(sim_output, data, paired, sim_with_labels);
            return 0;
        }

        if (*est) {
            Dataset data = read_dataset_file(est_input);
            if (data.size() == 0) throw input_error("dataset is empty");
            if (est_eps >= 0.0) data.epsilon = est_eps;
            const int d = int(data.samples[0].x.size());
            const ModelAdapter model = blank_model(est_kind, d, est_s, est_rho, est_link);
            const EstimateBundle bundle = estimate_functional(data, model, est_pipe);

            nlohmann::json out;
            out["kind"] = est_kind;
            out["epsilon"] = data.epsilon;
            out["n_used"] = int(bundle.kept.size());
            out["theta_hat"] = std::vector<double>(
                bundle.theta_hat.data(), bundle.theta_hat.data() + bundle.theta_hat.size());
            out["lambda_best"] = bundle.lambda_best;
            out["oracle_calls"] = bundle.oracle_calls;
            out["iterations"] = bundle.iterations;
            switch (bundle.terminated_by) {
                case TerminationReason::OracleYes: out["terminated_by"] = "yes"; break;
                case TerminationReason::IterationCap: out["terminated_by"] = "cap"; break;
                default: out["terminated_by"] = "floor"; break;
            }
            if (est_weights) {
                out["kept"] = bundle.kept;
                out["weights"] = std::vector<double>(
                    bundle.weights.data(), bundle.weights.data() + bundle.weights.size());
            }
            if (est_output.empty()) {
                std::cout << out.dump(2) << "\n";
            } else {
                std::ofstream os(est_output);
                if (!os) throw input_error("cannot open for writing: " + est_output);
                os << out.dump(2) << "\n";
            }
            return 0;
        }

        if (*swp) {
            RunConfig cfg = load_run_config(swp_config);
            cfg.threads = resolve_threads(swp_threads, cfg.threads);
            if (!swp_output.empty()) cfg.output = swp_output;
            const std::vector<ResultRecord> rows = run_sweep(cfg);
            if (cfg.output.empty()) {
                write_results_csv(std::cout, rows);
            } else {
                std::ofstream os(cfg.output);
                if (!os) throw input_error("cannot open for writing: " + cfg.output);
                write_results_csv(os, rows);
                std::cerr << rows.size() << " rows -> " << cfg.output << "\n";
            }
            return 0;
        }

        return run_verify_suite(ver_suite, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
