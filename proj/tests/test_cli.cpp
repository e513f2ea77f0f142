// Drives the paclab executable end to end.
#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "paclab/report.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int status;
    std::string out;
};

RunResult run(const std::string& args, const std::string& env = "") {
    const auto out_file = fs::temp_directory_path() / "paclab_cli_stdout.txt";
    const std::string cmd = env + " \"" PACLAB_CLI_PATH "\" " + args + " > \"" + out_file.string() + "\" 2>&1";
    const int raw = std::system(cmd.c_str());
    std::ifstream in(out_file);
    std::stringstream ss;
    ss << in.rdbuf();
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, ss.str()};
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("paclab_cli_" + name);
    fs::remove_all(dir);
    return dir;
}

}  // namespace

TEST(Cli, ExperimentThenKlMatchesCurve) {
    const auto dir = scratch("exp");
    const auto r = run("experiment --task threshold --trials 200 --m-max 100 --seed 5 --out-dir " + dir.string());
    ASSERT_EQ(r.status, 0) << r.out;
    const auto curve = paclab::read_file(dir / "curve.csv");
    EXPECT_EQ(std::count(curve.begin(), curve.end(), '\n'), 6);  // header + m = 20..100

    // Second row is m = 20; its kl column is the last cell.
    std::string_view rest = curve;
    rest.remove_prefix(rest.find('\n') + 1);
    const auto row = rest.substr(0, rest.find('\n'));
    const auto kl_cell = std::string(row.substr(row.rfind(',') + 1));

    const auto dist = (dir / "distributions.csv").string();
    const auto k = run("kl " + dist + " " + dist + " --m 20 --p-source P --q-source Q");
    ASSERT_EQ(k.status, 0) << k.out;
    EXPECT_EQ(k.out, kl_cell + "\n");

    const auto self = run("kl " + dist + " " + dist + " --m 40 --p-source P --q-source P");
    ASSERT_EQ(self.status, 0);
    EXPECT_EQ(self.out, "0\n");
}

TEST(Cli, KlCeilingOnDisjointFixtures) {
    const auto dir = scratch("kl");
    fs::create_directories(dir);
    std::string p = "slot_index,mass\n", q = "slot_index,mass\n";
    for (int i = 0; i < 100; ++i) {
        p += std::to_string(i) + "," + (i == 0 ? "1" : "0") + "\n";
        q += std::to_string(i) + "," + (i == 99 ? "1" : "0") + "\n";
    }
    paclab::write_file_atomic(dir / "p.csv", p);
    paclab::write_file_atomic(dir / "q.csv", q);
    const auto r = run("kl " + (dir / "p.csv").string() + " " + (dir / "q.csv").string());
    ASSERT_EQ(r.status, 0) << r.out;
    EXPECT_NEAR(std::stod(r.out), 52.15, 0.01);

    std::string short_q = "slot_index,mass\n0,0.5\n1,0.5\n";
    paclab::write_file_atomic(dir / "short.csv", short_q);
    EXPECT_EQ(run("kl " + (dir / "p.csv").string() + " " + (dir / "short.csv").string()).status, 1);
    EXPECT_EQ(run("kl " + (dir / "p.csv").string() + " " + (dir / "missing.csv").string()).status, 2);
}

TEST(Cli, ConfigFileFlagsAndEnvSeed) {
    const auto dir = scratch("cfg");
    fs::create_directories(dir);
    paclab::write_file_atomic(dir / "run.cfg", "task = conjunction\nn = 6\ntrials = 50\nm-max = 75\nseed = 3\n");
    const auto a = dir / "a", b = dir / "b", c = dir / "c", d = dir / "d";
    ASSERT_EQ(run("experiment --config " + (dir / "run.cfg").string() + " --out-dir " + a.string()).status, 0);
    // Flag beats config.
    ASSERT_EQ(run("experiment --config " + (dir / "run.cfg").string() + " --seed 4 --out-dir " + b.string()).status, 0);
    auto manifest_a = nlohmann::json::parse(paclab::read_file(a / "manifest.json"));
    auto manifest_b = nlohmann::json::parse(paclab::read_file(b / "manifest.json"));
    EXPECT_EQ(manifest_a["config"]["seed"], 3);
    EXPECT_EQ(manifest_a["config"]["n"], 6);
    EXPECT_EQ(manifest_b["config"]["seed"], 4);

    // Environment seed applies only when neither config nor flag sets one.
    ASSERT_EQ(run("experiment --task threshold --trials 10 --m-max 20 --out-dir " + c.string(), "PACLAB_SEED=777")
                  .status,
              0);
    EXPECT_EQ(nlohmann::json::parse(paclab::read_file(c / "manifest.json"))["config"]["seed"], 777);

    // Re-running from a manifest reproduces the outputs byte for byte.
    ASSERT_EQ(run("experiment --config " + (a / "manifest.json").string() + " --out-dir " + d.string()).status, 0);
    EXPECT_EQ(paclab::read_file(a / "distributions.csv"), paclab::read_file(d / "distributions.csv"));
    EXPECT_EQ(paclab::read_file(a / "curve.csv"), paclab::read_file(d / "curve.csv"));
    EXPECT_EQ(paclab::read_file(a / "manifest.json"), paclab::read_file(d / "manifest.json"));
}

TEST(Cli, ExitCodes) {
    const auto dir = scratch("codes");
    EXPECT_EQ(run("experiment --task dnf --out-dir " + dir.string()).status, 1);
    EXPECT_EQ(run("experiment --slots 1 --out-dir " + dir.string()).status, 1);
    EXPECT_EQ(run("experiment --no-such-flag").status, 1);
    EXPECT_EQ(run("").status, 1);
    EXPECT_EQ(run("experiment --config /nonexistent/cfg").status, 2);
    fs::create_directories(dir);
    paclab::write_file_atomic(dir / "blocker", "x");
    EXPECT_EQ(run("experiment --trials 5 --m-max 25 --out-dir " + (dir / "blocker" / "sub").string()).status, 2);
    EXPECT_EQ(run("bound --kind vc --vc-dim 0 --out-dir " + dir.string()).status, 1);
    EXPECT_EQ(run("bound --kind nope --out-dir " + dir.string()).status, 1);
    EXPECT_EQ(run("--help").status, 0);
}

TEST(Cli, BoundWritesTables) {
    const auto dir = scratch("bound");
    ASSERT_EQ(run("bound --out-dir " + dir.string()).status, 0);
    for (const char* f : {"bound_summary.csv", "bound_curve.csv", "bound_distributions.csv", "manifest.json"}) {
        EXPECT_TRUE(fs::exists(dir / f)) << f;
    }
    const auto vc = scratch("bound_vc");
    ASSERT_EQ(run("bound --kind vc --vc-dim 1 --m-list 20,1000 --slots 50 --out-dir " + vc.string()).status, 0);
    const auto q = paclab::parse_distribution_csv(paclab::read_file(vc / "bound_distributions.csv"), {1000, "Q"});
    EXPECT_EQ(q, paclab::discretize_bound(paclab::BoundSpec::vc(1, 1000), 50));
}

TEST(Cli, ShippedConfigsParse) {
    for (const char* name : {"conjunction.cfg", "threshold.cfg"}) {
        const auto path = fs::path(PACLAB_SOURCE_DIR) / "configs" / name;
        EXPECT_NO_THROW(paclab::config_from_key_values(paclab::parse_config_text(paclab::read_file(path))))
            << name;
    }
    const auto c = paclab::config_from_key_values(
        paclab::parse_config_text(paclab::read_file(fs::path(PACLAB_SOURCE_DIR) / "configs" / "conjunction.cfg")));
    EXPECT_EQ(c, paclab::ExperimentConfig::conjunction_defaults());
}
