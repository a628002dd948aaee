#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "neurodyn/trial_data.hpp"

using namespace neurodyn;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir()
    {
        path = fs::temp_directory_path() /
               ("neurodyn_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const
    {
        return (path / name).string();
    }
};

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    out << text;
}

TrialSet random_set(std::size_t trials, std::size_t steps, std::size_t chans,
                    unsigned seed)
{
    std::vector<ChannelSpec> specs;
    for (std::size_t c = 0; c < chans; c++)
        specs.push_back({"ch" + std::to_string(c),
                         c == 0 ? ChannelKind::joint_angle : ChannelKind::other,
                         c == 0 ? "rad" : ""});
    TrialSet set(trials, steps, specs, 200.0);
    std::mt19937 rng(seed);
    std::normal_distribution<double> dist(0.0, 3.0);
    for (double& v : set.raw()) v = dist(rng);
    return set;
}

} // namespace

TEST_CASE("long csv shape bookkeeping")
{
    TempDir dir;
    const auto path = dir.file("tiny.csv");
    write_text(path, "trial,timestep,channel,value\n"
                     "0,0,x,1\n0,1,x,2\n0,2,x,3\n"
                     "1,0,x,4\n1,1,x,5\n1,2,x,6\n");
    const auto set = load_trialset(path, CsvFormat::csv_long);
    CHECK(set.trials() == 2);
    CHECK(set.steps() == 3);
    CHECK(set.channels() == 1);
    CHECK(set(1, 2, 0) == 6.0);
}

TEST_CASE("save then load is the identity in both formats")
{
    TempDir dir;
    const auto set = random_set(3, 17, 4, 42);
    for (auto fmt : {CsvFormat::csv_wide, CsvFormat::csv_long}) {
        const auto path = dir.file(fmt == CsvFormat::csv_wide ? "w.csv"
                                                              : "l.csv");
        save_trialset(set, path, fmt);
        const auto back = load_trialset(path, fmt);
        CHECK(back == set);
    }
}

TEST_CASE("empty trial set round-trips")
{
    TempDir dir;
    TrialSet empty(0, 0, {{"x", ChannelKind::other, ""}}, 100.0);
    const auto path = dir.file("empty.csv");
    save_trialset(empty, path, CsvFormat::csv_wide);
    const auto back = load_trialset(path, CsvFormat::csv_wide);
    CHECK(back.trials() == 0);
    CHECK(back.channels() == 1);
}

TEST_CASE("trials are sorted by file index and reindexed from zero")
{
    TempDir dir;
    const auto path = dir.file("shuffled.csv");
    write_text(path, "trial,timestep,x\n"
                     "7,0,70\n7,1,71\n"
                     "2,0,20\n2,1,21\n");
    const auto set = load_trialset(path, CsvFormat::csv_wide);
    CHECK(set.trials() == 2);
    CHECK(set(0, 0, 0) == 20.0); // file trial 2 comes first
    CHECK(set(1, 1, 0) == 71.0);
}

TEST_CASE("ragged and malformed inputs are rejected")
{
    TempDir dir;
    const auto path = dir.file("bad.csv");

    write_text(path, "trial,timestep,x\n0,0,1\n0,1,2\n1,0,3\n");
    CHECK_THROWS_WITH_AS(load_trialset(path, CsvFormat::csv_wide),
                         doctest::Contains("RaggedTrials"), Error);

    write_text(path, "trial,timestep,x\n0,0,1\n0,2,2\n");
    CHECK_THROWS_AS(load_trialset(path, CsvFormat::csv_wide), Error);

    write_text(path, "trial,timestep,channel,value\n0,0,x,1\n0,0,x,2\n"
                     "0,1,x,1\n0,1,x,2\n");
    CHECK_THROWS_WITH_AS(load_trialset(path, CsvFormat::csv_long),
                         doctest::Contains("DuplicateCell"), Error);

    write_text(path, "trial,x\n0,1\n");
    CHECK_THROWS_WITH_AS(load_trialset(path, CsvFormat::csv_wide),
                         doctest::Contains("MissingColumn"), Error);

    write_text(path, "trial,timestep,x\n0,0,nan\n");
    CHECK_THROWS_WITH_AS(load_trialset(path, CsvFormat::csv_wide),
                         doctest::Contains("NonFinite"), Error);

    CHECK_THROWS_WITH_AS(load_trialset(dir.file("absent.csv"),
                                       CsvFormat::csv_wide),
                         doctest::Contains("IoFailure"), Error);
}

TEST_CASE("channel metadata survives a round-trip")
{
    TempDir dir;
    TrialSet set(1, 2,
                 {{"q", ChannelKind::joint_angle, "rad"},
                  {"a", ChannelKind::muscle_activation, ""}},
                 200.0);
    set(0, 1, 0) = 1.5;
    for (auto fmt : {CsvFormat::csv_wide, CsvFormat::csv_long}) {
        const auto path = dir.file("meta.csv");
        save_trialset(set, path, fmt);
        const auto back = load_trialset(path, fmt);
        CHECK(back.sample_rate_hz() == 200.0);
        CHECK(back.channel(0).kind == ChannelKind::joint_angle);
        CHECK(back.channel(0).units == "rad");
        CHECK(back.channel(1).units == "");
        CHECK(back == set);
    }
}

TEST_CASE("select_channels reorders and rejects unknown names")
{
    const auto set = random_set(2, 5, 3, 1);
    const auto sub = select_channels(set, {"ch2", "ch0"});
    CHECK(sub.channels() == 2);
    CHECK(sub.channel(0).name == "ch2");
    CHECK(sub(1, 3, 0) == set(1, 3, 2));
    CHECK(sub(1, 3, 1) == set(1, 3, 0));
    CHECK_THROWS_WITH_AS(select_channels(set, {"nope"}),
                         doctest::Contains("UnknownChannel"), Error);
}

TEST_CASE("format_double round-trips exactly")
{
    for (double v : {0.1, 1.0 / 3.0, -0.0, 1e-300, 6.02214076e23, 2.5,
                     -123456.789, 5e-324}) {
        const auto text = format_double(v);
        CHECK(std::strtod(text.c_str(), nullptr) == v);
    }
    CHECK(format_double(2.0) == "2");
}

TEST_CASE("trial slice views the parent")
{
    const auto set = random_set(3, 4, 2, 9);
    TrialSlice slice(set, 2);
    CHECK(slice.steps() == 4);
    CHECK(slice(3, 1) == set(2, 3, 1));
    CHECK_THROWS_AS(TrialSlice(set, 3), Error);
}

TEST_CASE("check_finite rejects NaN")
{
    auto set = random_set(1, 3, 1, 4);
    CHECK_NOTHROW(set.check_finite());
    set(0, 1, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(set.check_finite(), Error);
}

TEST_CASE("series and set_series copy one channel of one trial")
{
    auto set = random_set(2, 6, 2, 11);
    const std::vector<double> wave{1, 2, 3, 4, 5, 6};
    set.set_series(1, 0, wave);
    CHECK(set.series(1, 0) == wave);
    CHECK(set(1, 5, 0) == 6.0);
}
