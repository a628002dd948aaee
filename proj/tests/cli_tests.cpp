// End-to-end tests of the command-line binary. The first argument is the
// path to the built executable; remaining arguments go to doctest.
#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string g_cli;
fs::path g_dir;

int run_cli(const std::string& args)
{
    const std::string cmd = "\"" + g_cli + "\" " + args + " >cli_stdout.txt 2>cli_stderr.txt";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    out << text;
}

json load_json(const std::string& path) { return json::parse(slurp(path)); }

void write_ident_csv()
{
    write_text("ident.csv",
               "# sample_rate_hz 200\n"
               "# kinds joint_angle,joint_angle,muscle_activation,"
               "muscle_activation\n"
               "trial,timestep,q0,q1,a0,a1\n"
               "0,0,0.1,0.2,0,0\n0,1,0.3,0.4,0,0\n0,2,0.5,0.6,0,0\n"
               "0,3,0.7,0.8,0,0\n0,4,0.9,1.0,0,0\n0,5,1.1,1.2,0,0\n"
               "0,6,1.3,1.4,0,0\n0,7,1.5,1.6,0,0\n");
}

} // namespace

TEST_CASE("synth-generate writes three csv files and a summary")
{
    REQUIRE(run_cli("synth-generate --trials 3 --seed 11 --out syn") == 0);
    for (const char* suffix :
         {"_kinematics.csv", "_activations.csv", "_emg.csv", "_summary.json"})
        CHECK(fs::exists(std::string("syn") + suffix));
    const auto summary = load_json("syn_summary.json");
    CHECK(summary["trials"] == 3);
    CHECK(summary["samples_per_trial"] == 60);
    CHECK(summary["emg_samples_per_trial"] == 9000);
    CHECK(summary["config"]["synth"]["trials"] == 3);
    CHECK(summary["config"]["synth"]["seed"] == 11);
}

TEST_CASE("the full pipeline runs off the synthetic data")
{
    REQUIRE(run_cli("synth-generate --trials 4 --seed 3 --out pipe") == 0);

    CHECK(run_cli("emg-process --in pipe_emg.csv --out pipe_env") == 0);
    CHECK(fs::exists("pipe_env_envelope.csv"));
    const auto env = load_json("pipe_env_summary.json");
    CHECK(env["samples_per_trial"] == 60);

    CHECK(run_cli("edm --in pipe_kinematics.csv --source q_shoulder "
                  "--target q_elbow --E 3 --tau -1 --Tp 1 --out pipe_fc") == 0);
    CHECK(fs::exists("pipe_fc_forecast.csv"));
    CHECK(fs::exists("pipe_fc_forecast.svg"));
    const auto fc = load_json("pipe_fc_summary.json");
    CHECK(fc["rho"].get<double>() > 0.3);
    CHECK(fc["config"]["edm"]["E"] == 3);

    CHECK(run_cli("edm --in pipe_kinematics.csv --source q_elbow "
                  "--target q_elbow --sweep --E-range 1..2 "
                  "--tau-range=-1..-1 --Tp-range 1..2 --out pipe_gr") == 0);
    const auto grid_text = slurp("pipe_gr_grid.csv");
    CHECK(grid_text.rfind("E,tau,Tp,rho,n_pred,best", 0) == 0);
    const auto gr = load_json("pipe_gr_summary.json");
    CHECK(gr["rows"] == 4);
    CHECK(gr["best"]["rho"].get<double>() > 0.5);

    CHECK(run_cli("pca --in pipe_activations.csv --out pipe_pc") == 0);
    CHECK(fs::exists("pipe_pc_embedding.csv"));
    CHECK(fs::exists("pipe_pc_embedding.svg"));
    const auto pc = load_json("pipe_pc_summary.json");
    CHECK(pc["variance_ratio"].size() == 3);
    CHECK(pc["variance_ratio_sum"].get<double>() <= 1.0 + 1e-12);
}

TEST_CASE("reward-eval reproduces the joint-only identity")
{
    // two joint channels plus zeroed action channels; rollout == reference
    write_ident_csv();
    write_text("joint_only.json",
               R"({"reward": {"lambda_ctrl": 0.0, "lambda_energy": 0.0}})");
    REQUIRE(run_cli("reward-eval --rollout ident.csv --reference ident.csv "
                    "--config joint_only.json --out ident") == 0);
    const auto summary = load_json("ident_summary.json");
    CHECK(summary["mean_r_total"].get<double>() == 5.0);
    CHECK(summary["mae"]["overall"].get<double>() == 0.0);
    const auto trace = slurp("ident_reward.csv");
    CHECK(trace.rfind("trial,timestep,r_joint,c_ctrl,c_energy,r_total", 0) ==
          0);
}

TEST_CASE("reward-eval requires forces when the energy term is active")
{
    write_ident_csv();
    CHECK(run_cli("reward-eval --rollout ident.csv --reference ident.csv "
                  "--out efail") == 2);
    const auto err = slurp("cli_stderr.txt");
    CHECK(err.find("forces") != std::string::npos);
}

TEST_CASE("sweep aggregation matches the t-interval oracle")
{
    write_text("seeds.csv", "param,value\n"
                            "1,0\n1,0\n1,0\n1,0\n1,10\n"
                            "0.5,2\n0.5,2\n");
    REQUIRE(run_cli("reward-eval --sweep-in seeds.csv --out sw") == 0);
    const auto text = slurp("sw_sweep.csv");
    CHECK(text.rfind("param,mean,ci_lo,ci_hi,n", 0) == 0);
    std::istringstream lines(text);
    std::string header, row1, row2;
    std::getline(lines, header);
    std::getline(lines, row1);
    std::getline(lines, row2);
    CHECK(row1.rfind("0.5,2,2,2,2", 0) == 0); // equal seeds, zero width
    double param, mean, lo, hi;
    int n;
    REQUIRE(std::sscanf(row2.c_str(), "%lf,%lf,%lf,%lf,%d", &param, &mean,
                        &lo, &hi, &n) == 5);
    CHECK(param == 1.0);
    CHECK(mean == doctest::Approx(2.0));
    CHECK((hi - lo) / 2.0 == doctest::Approx(5.552).epsilon(0.01 / 5.552));
    CHECK(n == 5);
}

TEST_CASE("config show is idempotent and respects precedence")
{
    REQUIRE(run_cli("config show") == 0);
    const auto first = slurp("cli_stdout.txt");
    write_text("echo.json", first);
    REQUIRE(run_cli("config show --config echo.json") == 0);
    CHECK(slurp("cli_stdout.txt") == first);

    // flags beat the config file; the summary echoes the effective value
    REQUIRE(run_cli("synth-generate --trials 3 --seed 2 --out pk") == 0);
    write_text("e4.json", R"({"edm": {"E": 4}})");
    REQUIRE(run_cli("edm --in pk_kinematics.csv --source q_elbow "
                    "--target q_elbow --config e4.json --E 2 --out prec") ==
            0);
    const auto summary = load_json("prec_summary.json");
    CHECK(summary["E"] == 2);
    CHECK(summary["config"]["edm"]["E"] == 2);

    REQUIRE(run_cli("edm --in pk_kinematics.csv --source q_elbow "
                    "--target q_elbow --config e4.json --out prec2") == 0);
    CHECK(load_json("prec2_summary.json")["E"] == 4);
}

TEST_CASE("csv format flag round-trips through the long layout")
{
    REQUIRE(run_cli("synth-generate --trials 2 --seed 1 --format long "
                    "--out lng") == 0);
    CHECK(run_cli("pca --in lng_activations.csv --format long --out lngpc") ==
          0);
    CHECK(fs::exists("lngpc_embedding.csv"));
}

TEST_CASE("exit codes distinguish io from validation failures")
{
    REQUIRE(run_cli("synth-generate --trials 2 --seed 4 --out ek") == 0);
    CHECK(run_cli("emg-process --in missing.csv --out x") == 1);
    CHECK(run_cli("edm --in ek_kinematics.csv --source q_elbow "
                  "--target q_elbow --E 0 --out x") == 2);
    CHECK(run_cli("edm --in ek_kinematics.csv --source nope "
                  "--target q_elbow --out x") == 2);
    CHECK(run_cli("frobnicate") == 2);
    CHECK(run_cli("edm --in ek_kinematics.csv --bogus-flag 1 --out x") == 2);
    CHECK(run_cli("synth-generate --trials 0 --out x") == 2);
    CHECK(run_cli("--help") == 0);
    CHECK(run_cli("edm --help") == 0);
    write_text("bad.json", "{broken");
    CHECK(run_cli("config show --config bad.json") == 2);
}

TEST_CASE("reruns are bit-identical")
{
    REQUIRE(run_cli("synth-generate --trials 2 --seed 21 --out da") == 0);
    REQUIRE(run_cli("synth-generate --trials 2 --seed 21 --out db") == 0);
    CHECK(slurp("da_kinematics.csv") == slurp("db_kinematics.csv"));
    CHECK(slurp("da_emg.csv") == slurp("db_emg.csv"));

    REQUIRE(run_cli("edm --in da_kinematics.csv --source q_shoulder "
                    "--target q_shoulder --out fa") == 0);
    REQUIRE(run_cli("edm --in db_kinematics.csv --source q_shoulder "
                    "--target q_shoulder --out fb") == 0);
    CHECK(slurp("fa_forecast.csv") == slurp("fb_forecast.csv"));
    CHECK(slurp("fa_forecast.svg") == slurp("fb_forecast.svg"));
}

int run_all(int argc, char** argv)
{
    doctest::Context context;
    context.applyCommandLine(argc - 1, argv + 1);
    return context.run();
}

int main(int argc, char** argv)
{
    if (argc < 2) {
        std::fprintf(stderr, "usage: cli_tests <path-to-cli> [doctest args]\n");
        return 1;
    }
    g_cli = fs::absolute(argv[1]).string();
    g_dir = fs::temp_directory_path() /
            ("neurodyn_cli_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(g_dir);
    fs::current_path(g_dir);
    const int rc = run_all(argc, argv);
    fs::current_path(fs::temp_directory_path());
    fs::remove_all(g_dir);
    return rc;
}
