// otoclab: run seeded OTOC experiments and verify their records.
//
//   otoclab run <config-file> [--out DIR] [--seed N] [--threads N] [--set key=value ...]
//   otoclab run --experiment NAME [--set key=value ...]
//   otoclab verify <record.csv | record.json>
//   otoclab list-experiments
//
// Exit codes: 0 pass, 1 assertion failure, 2 usage or malformed input,
// 3 resource limit. OTOCLAB_OUT_DIR sets the default output directory.

#include <Eigen/Core>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <new>

#include "CLI11.hpp"
#include "otoclab/experiments.hpp"
#include "otoclab/kernels.hpp"

namespace fs = std::filesystem;
using namespace otoclab;

namespace {

constexpr int kPass = 0;
constexpr int kAssertion = 1;
constexpr int kUsage = 2;
constexpr int kResource = 3;

struct RunArgs {
    std::string config_path;
    std::string experiment;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int threads = 0;
    std::vector<std::string> sets;
};

int do_run(const RunArgs& args) {
    Config cfg = args.config_path.empty() ? Config{} : Config::load(args.config_path);
    if (!args.experiment.empty()) cfg.set("experiment", args.experiment);
    for (const std::string& kv : args.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) throw DomainError("--set expects key=value, got '" + kv + "'");
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (args.seed_given) cfg.set("seed", std::to_string(args.seed));
    if (!cfg.has("seed")) cfg.set("seed", "1");
    if (args.threads > 0) kernels::set_num_threads(args.threads);

    std::string out_dir = args.out_dir;
    if (out_dir.empty()) {
        const char* env = std::getenv("OTOCLAB_OUT_DIR");
        out_dir = env && *env ? env : ".";
    }
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw ResourceError("cannot create output directory '" + out_dir + "': " + ec.message());

    const auto start = std::chrono::steady_clock::now();
    const ExperimentOutput out = run_experiment(cfg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const std::string stem =
        args.config_path.empty() ? out.experiment : fs::path(args.config_path).stem().string();
    const fs::path csv = fs::path(out_dir) / (stem + ".csv");
    const fs::path meta = fs::path(out_dir) / (stem + ".json");
    write_file(csv.string(), to_csv(out.table));
    write_file(meta.string(), sidecar(cfg, out, secs, kernels::max_threads()).dump(2) + "\n");

    std::cout << out.experiment << ": " << out.table.size() << " rows -> " << csv.string() << "\n";
    if (!out.violations.empty()) {
        for (const auto& v : out.violations) std::cerr << "violation: " << v << "\n";
        std::cerr << out.violations.size() << " invariant violation(s)\n";
        return kAssertion;
    }
    return kPass;
}

int do_verify(const std::string& record) {
    fs::path p(record);
    fs::path csv = p, meta = p;
    if (p.extension() == ".json") {
        csv.replace_extension(".csv");
    } else {
        meta.replace_extension(".json");
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(meta.string()));
    } catch (const nlohmann::json::parse_error& e) {
        throw DomainError(meta.string() + ": " + e.what());
    }
    if (!j.contains("experiment") || !j["experiment"].is_string()) {
        throw DomainError(meta.string() + ": sidecar lacks an \"experiment\" string");
    }
    const Table t = parse_csv(read_file(csv.string()), csv.string());
    if (j.contains("columns") && j["columns"].get<std::vector<std::string>>() != t.columns()) {
        throw DomainError(csv.string() + ": header does not match the sidecar column list");
    }
    const auto violations = check_record(j["experiment"].get<std::string>(), t, j.value("summary", nlohmann::json{}));
    if (!violations.empty()) {
        for (const auto& v : violations) std::cout << "FAIL " << v << "\n";
        std::cout << "FAIL " << csv.string() << ": " << violations.size() << " violation(s)\n";
        return kAssertion;
    }
    std::cout << "PASS " << csv.string() << " (" << t.size() << " rows)\n";
    return kPass;
}

}  // namespace

int main(int argc, char** argv) {
    Eigen::setNbThreads(1);
    CLI::App app{"Seeded OTOC experiments on brickwork circuits"};
    app.require_subcommand(1);
    app.set_version_flag("--version", OTOCLAB_VERSION);

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "Run one experiment from a key = value config file");
    run_cmd->add_option("config", run.config_path, "Config file")->check(CLI::ExistingFile);
    run_cmd->add_option("--experiment", run.experiment, "Experiment name (overrides the config)");
    run_cmd->add_option("--out", run.out_dir, "Output directory (default: $OTOCLAB_OUT_DIR or .)");
    auto* seed_opt = run_cmd->add_option("--seed", run.seed, "Seed (overrides the config)");
    run_cmd->add_option("--threads", run.threads, "OpenMP threads")->check(CLI::PositiveNumber);
    run_cmd->add_option("--set", run.sets, "Extra key=value settings");

    std::string record;
    auto* verify_cmd = app.add_subcommand("verify", "Re-check the invariants of a stored record");
    verify_cmd->add_option("record", record, "Record CSV or JSON sidecar")->required();

    auto* list_cmd = app.add_subcommand("list-experiments", "List experiment names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kPass : kUsage;
    }

    try {
        if (*run_cmd) {
            run.seed_given = seed_opt->count() > 0;
            if (run.config_path.empty() && run.experiment.empty()) {
                std::cerr << "run: give a config file or --experiment\n";
                return kUsage;
            }
            return do_run(run);
        }
        if (*verify_cmd) return do_verify(record);
        if (*list_cmd) {
            for (const auto& e : experiment_catalog()) std::cout << e.name << "\t" << e.description << "\n";
            return kPass;
        }
    } catch (const ResourceError& e) {
        std::cerr << "resource: " << e.what() << "\n";
        return kResource;
    } catch (const std::bad_alloc&) {
        std::cerr << "resource: out of memory\n";
        return kResource;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
