// paclab: command-line front end.
//
//   paclab experiment [--config FILE] [--task conjunction|threshold] [--n N] ...
//   paclab bound [--kind finite-h|vc] [--h-size H | --log-h-size L] [--vc-dim D] ...
//   paclab kl P.csv Q.csv [--m M] [--p-source P] [--q-source Q]
//
// Exit status: 0 success, 1 invalid configuration or input, 2 I/O failure.

#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "paclab/paclab.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;

struct ExperimentFlags {
    std::string config_path;
    std::map<std::string, std::string> overrides;
    std::string out_dir = "paclab_out";
    unsigned threads = 0;
};

struct KlFlags {
    std::string p_path;
    std::string q_path;
    std::uint64_t m = 0;
    std::string p_source;
    std::string q_source;
    double floor = paclab::kKlFloor;
};

struct BoundFlags {
    std::string kind = "finite-h";
    double h_size = 1e9;
    double log_h_size = 0.0;
    std::uint64_t vc_dim = 1;
    std::vector<std::uint64_t> ms{22, 35, 100};
    std::size_t slots = 100;
    std::size_t grid_points = 1000;
    std::string out_dir = "paclab_bound";
};

int run_experiment_cmd(const ExperimentFlags& flags) {
    std::map<std::string, std::string> kv;
    if (!flags.config_path.empty()) kv = paclab::parse_config_text(paclab::read_file(flags.config_path));
    for (const auto& [key, value] : flags.overrides) kv[key] = value;
    if (!kv.contains("seed")) {
        if (const char* env = std::getenv("PACLAB_SEED"); env && *env) kv["seed"] = env;
    }
    const paclab::ExperimentConfig config = paclab::config_from_key_values(kv);
    const auto result = paclab::write_experiment(config, flags.out_dir, flags.threads);
    std::cout << "wrote " << result.curve.size() << " curve rows to " << flags.out_dir << "\n";
    return kExitOk;
}

int run_bound_cmd(const BoundFlags& flags, bool log_h_given) {
    paclab::BoundRequest req;
    if (flags.kind == "finite-h") {
        req.kind = paclab::BoundKind::FiniteH;
        if (log_h_given) {
            req.log_h_size = flags.log_h_size;
        } else {
            if (!(flags.h_size >= 1.0)) throw paclab::ConfigError("--h-size must be >= 1");
            req.log_h_size = std::log(flags.h_size);
        }
    } else if (flags.kind == "vc") {
        req.kind = paclab::BoundKind::FiniteVC;
        req.vc_dim = flags.vc_dim;
    } else {
        throw paclab::ConfigError("--kind must be finite-h or vc");
    }
    req.ms = flags.ms;
    req.slots = flags.slots;
    req.grid_points = flags.grid_points;
    paclab::write_bound(req, flags.out_dir);
    std::cout << "wrote bound tables for " << req.ms.size() << " sample sizes to " << flags.out_dir << "\n";
    return kExitOk;
}

int run_kl_cmd(const KlFlags& flags, bool m_given) {
    paclab::DistributionSelector ps, qs;
    if (m_given) ps.m = qs.m = flags.m;
    if (!flags.p_source.empty()) ps.source = flags.p_source;
    if (!flags.q_source.empty()) qs.source = flags.q_source;
    const auto p = paclab::parse_distribution_csv(paclab::read_file(flags.p_path), ps);
    const auto q = paclab::parse_distribution_csv(paclab::read_file(flags.q_path), qs);
    if (p.num_slots() != q.num_slots()) throw paclab::ConfigError("slot counts differ");
    std::cout << paclab::format_real(paclab::kl_divergence(p, q, flags.floor)) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"PAC lower-bound and learning-curve laboratory"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(paclab::kToolVersion));

    ExperimentFlags ex;
    auto* exp_cmd = app.add_subcommand("experiment", "run a learning-curve experiment");
    exp_cmd->add_option("--config", ex.config_path, "key=value config file or a previous manifest.json");
    exp_cmd->add_option("--out-dir", ex.out_dir, "output directory")->capture_default_str();
    exp_cmd->add_option("--threads", ex.threads, "worker threads for trials (0 = all cores)")
        ->capture_default_str();
    // Every config key is also a flag; a flag beats the config file.
    const std::vector<std::pair<std::string, std::string>> keyed = {
        {"--task", "task"},       {"--n", "n"},           {"--vc-dim", "vc_dim"},
        {"--slots", "slots"},     {"--trials", "trials"}, {"--m-start", "m_start"},
        {"--m-step", "m_step"},   {"--m-max", "m_max"},   {"--seed", "seed"},
        {"--gt-mode", "gt_mode"},
    };
    std::map<std::string, std::string> raw;
    std::vector<std::pair<CLI::Option*, std::string>> keyed_opts;
    for (const auto& [flag, key] : keyed) {
        keyed_opts.emplace_back(exp_cmd->add_option(flag, raw[key]), key);
    }

    BoundFlags bd;
    auto* bound_cmd = app.add_subcommand("bound", "tabulate theoretical bound distributions");
    bound_cmd->add_option("--kind", bd.kind, "finite-h or vc")->capture_default_str();
    bound_cmd->add_option("--h-size", bd.h_size, "|H| for finite-h")->capture_default_str();
    auto* log_h_opt = bound_cmd->add_option("--log-h-size", bd.log_h_size, "ln|H| for finite-h");
    bound_cmd->add_option("--vc-dim", bd.vc_dim, "VC dimension for vc")->capture_default_str();
    bound_cmd->add_option("--m-list", bd.ms, "comma-separated sample sizes")->delimiter(',');
    bound_cmd->add_option("--slots", bd.slots, "slot count for Q_m")->capture_default_str();
    bound_cmd->add_option("--grid-points", bd.grid_points, "CDF/density grid size")->capture_default_str();
    bound_cmd->add_option("--out-dir", bd.out_dir, "output directory")->capture_default_str();

    KlFlags kl;
    auto* kl_cmd = app.add_subcommand("kl", "KL divergence between two distribution CSVs");
    kl_cmd->add_option("p", kl.p_path, "CSV holding P")->required();
    kl_cmd->add_option("q", kl.q_path, "CSV holding Q")->required();
    auto* m_opt = kl_cmd->add_option("--m", kl.m, "select rows with this m");
    kl_cmd->add_option("--p-source", kl.p_source, "select P rows by source column");
    kl_cmd->add_option("--q-source", kl.q_source, "select Q rows by source column");
    kl_cmd->add_option("--floor", kl.floor, "floor for zero Q masses")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*exp_cmd) {
            for (const auto& [opt, key] : keyed_opts) {
                if (opt->count() > 0) ex.overrides[key] = raw[key];
            }
            return run_experiment_cmd(ex);
        }
        if (*bound_cmd) return run_bound_cmd(bd, log_h_opt->count() > 0);
        if (*kl_cmd) return run_kl_cmd(kl, m_opt->count() > 0);
    } catch (const paclab::IoError& e) {
        std::cerr << "paclab: " << e.what() << "\n";
        return kExitIo;
    } catch (const paclab::ConfigError& e) {
        std::cerr << "paclab: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "paclab: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "paclab: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitConfig;
}
