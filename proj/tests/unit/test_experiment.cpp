// test_experiment.cpp — Config validation, round trips, tabular output, determinism

#include "dtc/experiment.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace dtc;

namespace {

const char* kConfig = R"({
  "name": "t",
  "runs": [{
    "name": "energy",
    "experiment": "ground_energy",
    "model": {"Omega": 20.0, "G": 0.1},
    "panels": [{"label": "a", "N": 5, "K": 4.5}, {"label": "b", "N": 20, "K": 17.3}],
    "sweep": {"axis": "g", "min": 0.5, "max": 1.5, "points": 7}
  }],
  "output": {"directory": "unused"}
})";

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("experiment: config round-trips losslessly") {
    const auto c = parse_config(kConfig);
    CHECK(c.runs.size() == 1);
    CHECK(c.runs[0].panels[1].K == 17.3);
    const auto text = dump_config(c);
    const auto back = parse_config(text);
    CHECK(back == c);
    CHECK(dump_config(back) == text);
}

TEST_CASE("experiment: doubles survive serialization bit for bit") {
    std::string cfg = kConfig;
    cfg.replace(cfg.find("0.1}"), 3, "0.1000000000000000055511151231257827");
    auto c = parse_config(cfg);
    c.runs[0].model.G = std::nextafter(0.1, 1.0);
    CHECK(parse_config(dump_config(c)).runs[0].model.G == c.runs[0].model.G);
}

TEST_CASE("experiment: unknown keys and bad values are rejected") {
    std::string bad = kConfig;
    bad.replace(bad.find("\"G\""), 3, "\"Gamma\"");
    CHECK_THROWS_WITH_AS(parse_config(bad), doctest::Contains("unknown key 'Gamma'"), ConfigError);

    std::string neg = kConfig;
    neg.replace(neg.find("\"N\": 5"), 6, "\"N\": 0");
    CHECK_THROWS_AS(parse_config(neg), ConfigError);

    std::string axis = kConfig;
    axis.replace(axis.find("\"axis\": \"g\""), 11, "\"axis\": \"t\"");
    CHECK_THROWS_AS(parse_config(axis), ConfigError);

    CHECK_THROWS_AS(parse_config("{\"runs\": []}"), ConfigError);
    CHECK_THROWS_AS(parse_config("not json"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"runs": [{"name": "x", "experiment": "ratio_beta", "model": {"g": 1.2},
        "sweep": {"axis": "beta", "values": [10]}}]})"), ConfigError);
}

TEST_CASE("experiment: schema is valid JSON and lists every run key") {
    const auto s = config_schema();
    CHECK(s.find("\"additionalProperties\": false") != std::string::npos);
    CHECK(s.find("\"finite_beta_model\"") != std::string::npos);
}

TEST_CASE("experiment: numbers carry 17 significant digits") {
    CHECK(format_number(0.1) == "1.0000000000000001e-01");
    CHECK(format_number(-2.0) == "-2.0000000000000000e+00");
    CHECK(format_number(std::nan("")) == "nan");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("experiment: CSV and plot data") {
    Table t;
    t.columns = {"panel", "x", "n"};
    t.add({std::string("a"), 0.5, 3LL});
    CHECK(to_csv(t) == "panel,x,n\na,5.0000000000000000e-01,3\n");
    CHECK(to_plot_data(t) == "# panel x n\na 5.0000000000000000e-01 3\n");
    CHECK_THROWS_AS(t.add({1.0}), std::logic_error);
}

TEST_CASE("experiment: outputs are byte-identical across thread counts") {
    const auto c = parse_config(kConfig);
    const auto dir = std::filesystem::temp_directory_path() / "dtc_unit_experiment";
    std::filesystem::remove_all(dir);
    run_experiment(c, (dir / "one").string(), 1);
    run_experiment(c, (dir / "four").string(), 4);
    CHECK(slurp(dir / "one" / "energy.csv") == slurp(dir / "four" / "energy.csv"));
    CHECK(slurp(dir / "one" / "energy_a.dat") == slurp(dir / "four" / "energy_a.dat"));
    const std::string meta = slurp(dir / "one" / "metadata.json");
    CHECK(meta.find("\"wall_seconds\"") != std::string::npos);
    CHECK(meta.find("\"eigen\"") != std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("experiment: ground-energy rows") {
    const auto r = execute_run(parse_config(kConfig).runs[0], 1);
    CHECK(r.table.columns[5] == "E_G");
    CHECK(r.table.rows.size() == 14);
    // g = 0.5 on panel a: d2E from finite differences matches the closed form.
    const double exact = std::get<double>(r.table.rows[0][6]);
    const double fd = std::get<double>(r.table.rows[0][7]);
    CHECK(std::abs(fd - exact) < 1e-8);
}

TEST_CASE("experiment: verify suites are registered") {
    CHECK(verify_suite_names().size() == 5);
    CHECK_THROWS_AS(verify_suite("nope"), ConfigError);
    const auto rep = verify_suite("operators");
    CHECK(rep.passed());
}
