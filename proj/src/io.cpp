#include "halfint/io.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace halfint::io {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_coeff_cache(const std::string& path, const CacheHeader& header,
                       const std::vector<CacheRow>& rows) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open cache file for writing: " + path);
    out << "# halfint ell=" << header.ell << " N=" << header.N << " source=" << header.source
        << " kind=" << header.kind << "\n";
    for (const auto& r : rows) {
        out << r.n << ',' << format_double(r.re) << ',' << format_double(r.im) << ','
            << format_double(r.err) << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

CoeffCache read_coeff_cache(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open cache file: " + path);
    CoeffCache cache;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty cache file: " + path);
    {
        std::istringstream hs(line);
        std::string hash, name, tok;
        hs >> hash >> name;
        if (hash != "#" || name != "halfint")
            throw std::runtime_error("bad cache header: " + path);
        while (hs >> tok) {
            auto eq = tok.find('=');
            if (eq == std::string::npos) throw std::runtime_error("bad cache header token: " + tok);
            std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
            if (key == "ell") cache.header.ell = std::stoi(val);
            else if (key == "N") cache.header.N = std::stoll(val);
            else if (key == "source") cache.header.source = val;
            else if (key == "kind") cache.header.kind = val;
            else throw std::runtime_error("unknown cache header key: " + key);
        }
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        CacheRow row;
        char* end = nullptr;
        const char* s = line.c_str();
        row.n = std::strtoll(s, &end, 10);
        if (*end != ',') throw std::runtime_error("bad cache row: " + line);
        row.re = std::strtod(end + 1, &end);
        if (*end != ',') throw std::runtime_error("bad cache row: " + line);
        row.im = std::strtod(end + 1, &end);
        if (*end != ',') throw std::runtime_error("bad cache row: " + line);
        row.err = std::strtod(end + 1, &end);
        cache.rows.push_back(row);
    }
    return cache;
}

void RunConfig::apply(const std::string& key, const std::string& value) {
    try {
        if (key == "ell") ell = std::stoi(value);
        else if (key == "N") N = std::stoll(value);
        else if (key == "rho") rho = std::stod(value);
        else if (key == "y0") y0 = std::stod(value);
        else if (key == "S") S = std::stoi(value);
        else if (key == "n_max") n_max = std::stoi(value);
        else if (key == "tail_tol") tail_tol = std::stod(value);
        else if (key == "cache_dir") cache_dir = value;
        else if (key == "format") format = value;
        else if (key == "seed") seed = std::stoull(value);
        else throw std::invalid_argument("unknown configuration key: " + key);
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception&) {
        throw std::invalid_argument("bad value for configuration key " + key + ": " + value);
    }
}

void RunConfig::validate() const {
    if (ell < 2) throw std::invalid_argument("config: ell must be >= 2");
    if (N < 25) throw std::invalid_argument("config: N must be >= 25");
    if (!(rho > 0.0 && rho <= 0.5)) throw std::invalid_argument("config: rho must lie in (0, 1/2]");
    if (!(y0 > 0.0 && y0 < 4.0)) throw std::invalid_argument("config: y0 must lie in (0, 4)");
    if (S < 4 || (S & (S - 1)) != 0) throw std::invalid_argument("config: S must be a power of two >= 4");
    if (n_max < 1 || n_max > S / 4) throw std::invalid_argument("config: need 1 <= n_max <= S/4");
    if (!(tail_tol > 0.0 && tail_tol < 1e-6)) throw std::invalid_argument("config: tail_tol out of range");
    if (format != "csv" && format != "json") throw std::invalid_argument("config: format must be csv or json");
    if (cache_dir.empty()) throw std::invalid_argument("config: cache_dir must be nonempty");
}

RunConfig load_config(const std::string& config_path,
                      const std::vector<std::pair<std::string, std::string>>& overrides) {
    RunConfig cfg;
    if (const char* env = std::getenv("HALFINT_CACHE_DIR")) {
        if (*env) cfg.cache_dir = env;
    }
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw std::runtime_error("cannot open config file: " + config_path);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            auto eq = line.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("bad config line (expected key=value): " + line);
            cfg.apply(line.substr(0, eq), line.substr(eq + 1));
        }
    }
    for (const auto& [k, v] : overrides) cfg.apply(k, v);
    cfg.validate();
    return cfg;
}

CacheLock::CacheLock(const std::string& cache_dir) {
    std::filesystem::create_directories(cache_dir);
    path_ = cache_dir + "/.lock";
    int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd < 0) {
        if (errno == EEXIST)
            throw std::runtime_error("cache directory is locked by another writer: " + path_);
        throw std::runtime_error("cannot create lock file: " + path_);
    }
    ::close(fd);
}

CacheLock::~CacheLock() {
    if (!path_.empty()) ::unlink(path_.c_str());
}

std::string form_cache_path(const std::string& cache_dir) { return cache_dir + "/f.csv"; }

std::string cusp_cache_path(const std::string& cache_dir, char which) {
    return cache_dir + std::string("/") + which + ".csv";
}

std::vector<cusp::ExtractedRow> rows_from_cache(const CoeffCache& cache) {
    i64 n_max = 0;
    for (const auto& r : cache.rows) n_max = std::max(n_max, r.n);
    std::vector<cusp::ExtractedRow> rows(static_cast<size_t>(n_max + 1));
    for (const auto& r : cache.rows) {
        if (r.n >= 1) rows[static_cast<size_t>(r.n)] = {r.re, r.err, r.im};
    }
    return rows;
}

}  // namespace halfint::io
