#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "halfint/io.hpp"

using namespace halfint;
using namespace halfint::io;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("halfint_io_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("coefficient cache round-trips bit-exactly") {
    TempDir tmp;
    CacheHeader header{4, 5, "eta2_12_theta_m3", "exact"};
    std::vector<CacheRow> rows;
    SplitMix64 rng(21);
    std::vector<double> tricky{1.0, -1.0 / 3.0, 0.1, 1e-300, 6.02e23, -1.7838106725040866};
    for (i64 n = 1; n <= 5; ++n) {
        double base = tricky[static_cast<size_t>(n)];
        rows.push_back({n, base, base / 7.0, std::fabs(base) * 1e-12});
    }
    std::string path = tmp.file("f.csv");
    write_coeff_cache(path, header, rows);
    CoeffCache cache = read_coeff_cache(path);
    CHECK(cache.header.ell == 4);
    CHECK(cache.header.N == 5);
    CHECK(cache.header.source == "eta2_12_theta_m3");
    CHECK(cache.header.kind == "exact");
    REQUIRE(cache.rows.size() == rows.size());
    for (size_t k = 0; k < rows.size(); ++k) {
        CHECK(cache.rows[k].n == rows[k].n);
        CHECK(cache.rows[k].re == rows[k].re);  // bit-exact
        CHECK(cache.rows[k].im == rows[k].im);
        CHECK(cache.rows[k].err == rows[k].err);
    }
    // byte-identical on rewrite
    std::string first = slurp(path);
    write_coeff_cache(path, header, rows);
    CHECK(slurp(path) == first);
}

TEST_CASE("cache parse errors") {
    TempDir tmp;
    {
        std::ofstream out(tmp.file("bad1.csv"));
        out << "not a header\n";
    }
    CHECK_THROWS(read_coeff_cache(tmp.file("bad1.csv")));
    {
        std::ofstream out(tmp.file("bad2.csv"));
        out << "# halfint ell=4 N=2 source=s kind=exact\n1;0.5;0;0\n";
    }
    CHECK_THROWS(read_coeff_cache(tmp.file("bad2.csv")));
    CHECK_THROWS(read_coeff_cache(tmp.file("missing.csv")));
}

TEST_CASE("config: defaults, file, overrides, rejection of unknown keys") {
    TempDir tmp;
    std::string cfg_path = tmp.file("run.cfg");
    {
        std::ofstream out(cfg_path);
        out << "# comment line\n";
        out << "N=50000\n";
        out << "y0=0.125\n";
    }
    RunConfig cfg = load_config(cfg_path, {{"n_max", "64"}});
    CHECK(cfg.N == 50000);
    CHECK(cfg.y0 == 0.125);
    CHECK(cfg.n_max == 64);
    CHECK(cfg.ell == 4);  // default survives

    CHECK_THROWS_AS(load_config(cfg_path, {{"bogus", "1"}}), std::invalid_argument);
    CHECK_THROWS_AS(load_config(cfg_path, {{"S", "1000"}}), std::invalid_argument);   // not a power of 2
    CHECK_THROWS_AS(load_config(cfg_path, {{"rho", "0.7"}}), std::invalid_argument);  // out of range
    CHECK_THROWS_AS(load_config(cfg_path, {{"n_max", "2000"}}), std::invalid_argument);

    // environment names the cache dir; explicit override wins
    setenv("HALFINT_CACHE_DIR", tmp.file("envcache").c_str(), 1);
    RunConfig env_cfg = load_config("", {});
    CHECK(env_cfg.cache_dir == tmp.file("envcache"));
    RunConfig over_cfg = load_config("", {{"cache_dir", "elsewhere"}});
    CHECK(over_cfg.cache_dir == "elsewhere");
    unsetenv("HALFINT_CACHE_DIR");
}

TEST_CASE("cache lock excludes concurrent writers") {
    TempDir tmp;
    std::string dir = tmp.file("cache");
    {
        CacheLock lock(dir);
        CHECK_THROWS(CacheLock(dir));
    }
    // released on destruction
    CacheLock again(dir);
}

TEST_CASE("rows_from_cache maps n-indexed rows") {
    CoeffCache cache;
    cache.rows = {{3, 0.5, 0.01, 0.02}, {1, -2.0, 0.0, 0.0}};
    auto rows = rows_from_cache(cache);
    REQUIRE(rows.size() == 4);
    CHECK(rows[1].lambda == -2.0);
    CHECK(rows[3].lambda == 0.5);
    CHECK(rows[3].im == 0.01);
    CHECK(rows[3].abs_err == 0.02);
    CHECK(rows[2].lambda == 0.0);
}
