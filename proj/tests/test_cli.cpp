#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <prepot/cli.hpp>
#include <prepot/io.hpp>

using namespace prepot;
using io::json;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args)
{
    args.insert(args.begin(), "prepot");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(int(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path scratch_dir()
{
    auto p = std::filesystem::temp_directory_path() / "prepot_test_cli";
    std::filesystem::create_directories(p);
    return p;
}

} // namespace

TEST_CASE("format_real round-trips")
{
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> U(-1, 1);
    std::uniform_int_distribution<int> E(-300, 300);
    for (int i = 0; i < 10000; ++i) {
        const double v = std::ldexp(U(rng), E(rng));
        CHECK(io::parse_real(io::format_real(v)) == v);
    }
    CHECK(io::format_real(-0.25) == "-0.25");
    CHECK(io::parse_real(io::format_real(1.0 / 9)) == 1.0 / 9);
    CHECK(std::isinf(io::parse_real(io::format_real(-HUGE_VAL))));
    CHECK_THROWS_AS(io::parse_real("1.5x"), ValidationError);
    CHECK_THROWS_AS(io::parse_real(""), ValidationError);
}

TEST_CASE("CSV and JSON round-trip")
{
    std::vector<io::SpectrumRow> rows{{0, -1.0, 0.0, true}, {1, -0.25, 0.75, true}, {2, -1.0 / 9, 8.0 / 9, true}};
    std::stringstream s;
    io::write_csv(s, io::spectrum_table(rows));
    CHECK(s.str().find('\r') == std::string::npos);
    const auto back = io::spectrum_rows(io::read_csv(s));
    REQUIRE(back.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(back[i].N == rows[i].N);
        CHECK(back[i].energy == rows[i].energy);
        CHECK(back[i].susy_energy == rows[i].susy_energy);
        CHECK(back[i].bound == rows[i].bound);
        const auto j = io::spectrum_row_from_json(json::parse(io::to_json(rows[i]).dump()));
        CHECK(j.energy == rows[i].energy);
        CHECK(j.susy_energy == rows[i].susy_energy);
    }
    std::stringstream bad("a,b\n1\n");
    CHECK_THROWS_AS(io::read_csv(bad), ValidationError);
}

TEST_CASE("spectrum")
{
    const auto r = run({"spectrum", "--model", "coulomb", "--A", "1", "--B", "1", "--levels", "3", "--format", "csv"});
    CHECK(r.code == 0);
    std::istringstream in(r.out);
    const auto rows = io::spectrum_rows(io::read_csv(in));
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].energy == -1.0);
    CHECK(rows[1].energy == -0.25);
    CHECK(rows[2].energy == doctest::Approx(-0.111111111111));
    CHECK(rows[1].susy_energy == 0.75);

    const auto e = run({"spectrum", "--model", "eckart", "--A", "2", "--B", "3", "--levels", "1"});
    CHECK(e.code == 0);
    CHECK(e.err.find("no bound states") != std::string::npos);
    const auto j = json::parse(e.out);
    CHECK(j["results"]["rows"].empty());
    CHECK(j["model"] == "eckart");
    CHECK(j["meta"]["version"] == io::version());
    CHECK(j.contains("params"));

    const auto few = run({"spectrum", "--model", "eckart", "--A", "2", "--B", "16", "--levels", "5"});
    CHECK(few.code == 0);
    CHECK(json::parse(few.out)["results"]["rows"].size() == 2);
    CHECK(few.err.find("warning") != std::string::npos);

    CHECK(run({"spectrum", "--model", "coulomb", "--A", "-1", "--B", "1"}).code == 2);
    CHECK(run({"spectrum", "--model", "rm2", "--A", "2", "--B", "5"}).err.find("|B| < A^2") != std::string::npos);
}

TEST_CASE("invalid invocations")
{
    CHECK(run({"spectrum", "--model", "coulomb", "--A", "1", "--B", "1", "--bogus"}).code == 2);
    CHECK(run({"spectrum", "--model", "morse", "--A", "1", "--B", "1"}).code == 2);
    CHECK(run({"spectrum", "--model", "coulomb", "--A", "one", "--B", "1"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"roots", "--model", "eckart", "--A", "2", "--B", "16", "--N", "2"}).code == 2);
    CHECK(run({"roots", "--model", "eckart", "--A", "2", "--B", "16", "--N", "-1"}).code == 2);
    const auto help = run({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("rm2") != std::string::npos);
    CHECK(help.out.find("A -> -A, B -> -B") != std::string::npos);
    CHECK(run({"--version"}).code == 0);
}

TEST_CASE("roots")
{
    const auto r = run({"roots", "--model", "eckart", "--A", "2", "--B", "16", "--N", "1"});
    CHECK(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["results"]["roots"][0].get<double>() == doctest::Approx(2.6666667));
    CHECK(j["results"]["crosscheck_diff"].get<double>() < 1e-9);

    const auto c = run({"roots", "--model", "coulomb", "--A", "1", "--B", "1", "--N", "0"});
    CHECK(c.code == 0);
    CHECK(json::parse(c.out)["results"]["roots"].empty());

    const auto m = run({"roots", "--model", "rm1", "--A", "1", "--B", "0", "--N", "1", "--format", "csv"});
    CHECK(m.code == 0);
    std::istringstream in(m.out);
    const auto t = io::read_csv(in);
    CHECK(io::parse_real(t.rows.at(0).at(t.column("z"))) == 0.0);

    const auto p = run({"roots", "--model", "rm2", "--A", "5", "--B", "3", "--N", "3", "--seed-strategy", "polynomial"});
    CHECK(p.code == 0);
    CHECK(json::parse(p.out)["results"]["roots"].size() == 3);

    CHECK(run({"roots", "--model", "coulomb", "--A", "1", "--B", "1", "--N", "5", "--tolerance", "1e-300"}).code == 3);
}

TEST_CASE("wavefunction")
{
    const auto r = run({"wavefunction", "--model", "coulomb", "--A", "1", "--B", "1", "--N", "0"});
    CHECK(r.code == 0);
    const auto j = json::parse(r.out);
    const auto& res = j["results"];
    CHECK(res["node_count"] == 0);
    const auto xs = res["samples"]["x"].get<std::vector<double>>();
    const auto phi = res["samples"]["phi"].get<std::vector<double>>();
    const auto peak = std::max_element(phi.begin(), phi.end()) - phi.begin();
    CHECK(xs[peak] == doctest::Approx(1.0).epsilon(1e-2));
    CHECK(res["schrodinger_residual"]["residual"].get<double>() < 1e-4);

    const auto e = run({"wavefunction", "--model", "eckart", "--A", "2", "--B", "16", "--N", "1"});
    CHECK(json::parse(e.out)["results"]["node_count"] == 1);

    CHECK(run({"wavefunction", "--model", "coulomb", "--A", "1", "--B", "1", "--xmin", "1e-3", "--xmax", "2"}).code == 4);
    const auto zero = run({"wavefunction", "--model", "coulomb", "--A", "1", "--B", "1", "--xmin", "0", "--xmax", "2"});
    CHECK(zero.code == 4);
    CHECK(run({"wavefunction", "--model", "coulomb", "--A", "1", "--B", "1", "--xmin", "3", "--xmax", "2"}).code == 2);
    CHECK(run({"wavefunction", "--model", "coulomb", "--A", "1", "--B", "1", "--points", "2"}).code == 2);
}

TEST_CASE("CSV files, sidecar and output directory")
{
    const auto dir = scratch_dir();
    const auto file = dir / "w.csv";
    const auto r = run({"wavefunction", "--model", "rm2", "--A", "5", "--B", "3", "--N", "2", "--format", "csv", "--points",
                        "2001", "--output", file.string()});
    CHECK(r.code == 0);
    std::ifstream in(file);
    const auto t = io::read_csv(in);
    CHECK(t.header == std::vector<std::string>{"x", "phi"});
    CHECK(t.rows.size() == 2001);
    std::ifstream side(file.string() + ".json");
    const auto meta = json::parse(side);
    CHECK(meta["results"]["node_count"] == 2);
    CHECK(meta["results"]["grid"]["points"] == 2001);

    ::setenv("PREPOT_OUTPUT_DIR", dir.c_str(), 1);
    const auto s = run({"spectrum", "--model", "rm1", "--A", "1.5", "--B", "2", "--output", "spectrum.json"});
    ::unsetenv("PREPOT_OUTPUT_DIR");
    CHECK(s.code == 0);
    std::ifstream sj(dir / "spectrum.json");
    CHECK(json::parse(sj)["results"]["rows"].size() == 5);
}

TEST_CASE("config file")
{
    const auto path = scratch_dir() / "run.cfg";
    {
        std::ofstream cfg(path);
        cfg << "# defaults\nmodel = eckart\nA = 2\nB = 16\nlevels = 1\npoints = 501\n";
    }
    const auto r = run({"spectrum", "--config", path.string(), "--format", "csv"});
    CHECK(r.code == 0);
    std::istringstream in(r.out);
    const auto rows = io::spectrum_rows(io::read_csv(in));
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].energy == -66.0);

    const auto o = run({"spectrum", "--config", path.string(), "--levels", "2"});
    CHECK(json::parse(o.out)["results"]["rows"].size() == 2);

    {
        std::ofstream cfg(path);
        cfg << "model = eckart\nwibble = 3\n";
    }
    CHECK(run({"spectrum", "--config", path.string(), "--A", "2", "--B", "16"}).code == 2);
    CHECK(run({"spectrum", "--config", (scratch_dir() / "missing.cfg").string(), "--A", "2", "--B", "16"}).code == 2);
}

TEST_CASE("verify")
{
    const auto r = run({"verify", "--suite", "oracle", "--model", "coulomb"});
    CHECK(r.code == 0);
    const auto j = json::parse(r.out);
    const auto& suites = j["results"]["suites"];
    REQUIRE(suites.size() == 1);
    CHECK(suites[0]["name"] == "oracle");
    CHECK(suites[0]["cases"] == 2);
    CHECK(j["results"]["passed"] == true);

    const auto p = run({"verify", "--suite", "poles,symmetry", "--perturb-roots", "1e-3"});
    CHECK(p.code == 1);
    CHECK(json::parse(p.out)["results"]["first_failure"] == "poles");
    CHECK(p.err.find("poles") != std::string::npos);

    CHECK(run({"verify", "--suite", "nonsense"}).code == 2);
    CHECK(run({"verify", "--perturb-roots", "-1"}).code == 2);
    const auto seeded = run({"verify", "--suite", "equivalence", "--seed", "7", "--format", "csv"});
    CHECK(seeded.code == 0);
    CHECK(seeded.out.rfind("suite,passed", 0) == 0);
}
