#pragma once

// Coefficient cache files, run configuration, and the cache-directory lock.
//
// Cache format: one header line
//   # halfint ell=<ell> N=<N> source=<tag> kind=<exact|numeric>
// followed by rows `n,lambda_re,lambda_im,abs_err` with 17-significant-digit
// decimal serialization (doubles round-trip bit-exactly).

#include <map>
#include <string>

#include "halfint/base.hpp"
#include "halfint/cusp.hpp"

namespace halfint::io {

std::string format_double(double v);  // %.17g, deterministic

struct CacheHeader {
    int ell = 4;
    i64 N = 0;
    std::string source;
    std::string kind;  // "exact" or "numeric"
};

struct CacheRow {
    i64 n = 0;
    double re = 0, im = 0, err = 0;
};

struct CoeffCache {
    CacheHeader header;
    std::vector<CacheRow> rows;
};

void write_coeff_cache(const std::string& path, const CacheHeader& header,
                       const std::vector<CacheRow>& rows);
CoeffCache read_coeff_cache(const std::string& path);

// ---------------------------------------------------------------------------
// Flat key=value configuration.  Precedence: defaults < HALFINT_CACHE_DIR
// environment < config file < command-line overrides.  Unknown keys are
// rejected; numeric fields are validated against their documented ranges.
// ---------------------------------------------------------------------------
struct RunConfig {
    int ell = 4;
    i64 N = 110000;
    double rho = 1.0 / 6.0;
    double y0 = 0.25;
    int S = 4096;
    int n_max = 50;
    double tail_tol = 1e-18;
    std::string cache_dir = "cache";
    std::string format = "csv";  // csv | json
    u64 seed = 1;

    void apply(const std::string& key, const std::string& value);  // throws on unknown key
    void validate() const;
};

RunConfig load_config(const std::string& config_path,
                      const std::vector<std::pair<std::string, std::string>>& overrides);

// Exclusive advisory lock on a cache directory (lock file, removed on
// destruction).  Throws if another writer holds it.
class CacheLock {
  public:
    explicit CacheLock(const std::string& cache_dir);
    ~CacheLock();
    CacheLock(const CacheLock&) = delete;
    CacheLock& operator=(const CacheLock&) = delete;

  private:
    std::string path_;
};

// Cache filenames inside the cache dir.
std::string form_cache_path(const std::string& cache_dir);
std::string cusp_cache_path(const std::string& cache_dir, char which);  // 'g' or 'h'

std::vector<cusp::ExtractedRow> rows_from_cache(const CoeffCache& cache);

}  // namespace halfint::io
