#pragma once

// Shared fixtures and independent oracles for the test suite. The oracles
// deliberately avoid the library's own code paths: least squares goes
// through normal equations instead of QR, tail probabilities through
// adaptive quadrature instead of the continued fraction.

#include "citefit/corpus.hpp"
#include "citefit/inference.hpp"
#include "citefit/models.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <unistd.h>

namespace testutil {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// ---------------------------------------------------------------- fixtures

// Three-paper graph with hand-checkable metrics:
//   A (2000, by X), B (2002, by X and Y, cites A), C (2003, by Y, cites A, B).
// k = (2, 1, 0); C's reference prior-citation total is 1; C's authors had
// no pre-2003 citations; fractional credit: X = 2 + 1/2, Y = 1/2.
inline std::vector<citefit::RawPaper> toy_records() {
    return {
        {"A", 2000, "VisConf", {"X"}, {}},
        {"B", 2002, "VisConf", {"X", "Y"}, {"A"}},
        {"C", 2003, "VisConf", {"Y"}, {"A", "B"}},
    };
}

inline citefit::Corpus toy_corpus() {
    return citefit::build_corpus(toy_records()).first;
}

// ---------------------------------------------------------------- RNG

// Same 53-bit mapping the simulator uses; keeps test data platform-stable.
inline double u01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double gaussian(std::mt19937_64& rng) {
    // Box-Muller; u1 > 0 guaranteed by the retry.
    double u1 = 0.0;
    while (u1 == 0.0) u1 = u01(rng);
    double u2 = u01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

// ---------------------------------------------------------------- corpora

// Random corpus with author overlap (scholars author several papers) so
// both fitness models stay full rank. Papers advance ~4 per year, cite up
// to 6 distinct earlier papers, and carry 1..4 authors from a shared pool.
inline std::vector<citefit::RawPaper> random_records(uint64_t seed, size_t n_papers = 90,
                                                     size_t n_scholars = 40,
                                                     size_t n_venues = 3) {
    std::mt19937_64 rng(seed);
    std::vector<citefit::RawPaper> records;
    records.reserve(n_papers);
    for (size_t i = 0; i < n_papers; ++i) {
        citefit::RawPaper p;
        p.id = "p" + std::to_string(i);
        p.year = 1980 + static_cast<int>(i / 4);
        p.venue = "venue " + std::to_string(i % n_venues);
        size_t n_auth = 1 + static_cast<size_t>(u01(rng) * 4.0);
        while (p.raw_authors.size() < n_auth) {
            std::string a = "scholar a" + std::to_string(static_cast<size_t>(u01(rng) * static_cast<double>(n_scholars)));
            bool dup = false;
            for (const auto& e : p.raw_authors) dup = dup || e == a;
            if (!dup) p.raw_authors.push_back(a);
        }
        if (i > 0) {
            size_t n_refs = static_cast<size_t>(u01(rng) * 7.0);
            n_refs = std::min(n_refs, i);
            while (p.references.size() < n_refs) {
                std::string r = "p" + std::to_string(static_cast<size_t>(u01(rng) * static_cast<double>(i)));
                bool dup = false;
                for (const auto& e : p.references) dup = dup || e == r;
                if (!dup) p.references.push_back(r);
            }
        }
        records.push_back(std::move(p));
    }
    return records;
}

inline citefit::Corpus random_corpus(uint64_t seed, size_t n_papers = 90,
                                     size_t n_scholars = 40, size_t n_venues = 3) {
    return citefit::build_corpus(random_records(seed, n_papers, n_scholars, n_venues)).first;
}

inline void write_jsonl(const std::vector<citefit::RawPaper>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    auto quote = [](const std::string& s) {
        std::string r = "\"";
        for (char c : s) {
            if (c == '"' || c == '\\') r += '\\';
            r += c;
        }
        return r + "\"";
    };
    for (const auto& p : records) {
        out << "{\"id\": " << quote(p.id) << ", \"year\": " << p.year << ", \"venue\": "
            << quote(p.venue) << ", \"authors\": [";
        for (size_t i = 0; i < p.raw_authors.size(); ++i)
            out << (i ? ", " : "") << quote(p.raw_authors[i]);
        out << "], \"references\": [";
        for (size_t i = 0; i < p.references.size(); ++i)
            out << (i ? ", " : "") << quote(p.references[i]);
        out << "]}\n";
    }
}

// ---------------------------------------------------------------- OLS oracle

struct OracleFit {
    std::vector<double> coefficients;
    std::vector<double> standard_errors;
    double r_squared = 0.0;
    double adj_r_squared = 0.0;
    double f_value = 0.0;
    size_t f_df1 = 0;
    size_t f_df2 = 0;
    double residual_std = 0.0;
};

// Least squares via the normal equations: forms X'X explicitly and solves
// with Gauss elimination (partial pivoting), inverting X'X for the
// standard errors. Numerically cruder than QR but an independent path.
inline OracleFit normal_equations_fit(const citefit::inference::DesignMatrix& d) {
    size_t n = d.n_rows(), p = d.n_cols();
    if (n <= p) throw std::runtime_error("oracle needs n > p");
    // Augmented [X'X | X'y | I] so one elimination yields both the solve
    // and the inverse.
    size_t w = p + 1 + p;
    std::vector<std::vector<double>> a(p, std::vector<double>(w, 0.0));
    for (size_t i = 0; i < p; ++i) {
        for (size_t j = 0; j < p; ++j) {
            double s = 0.0;
            for (size_t r = 0; r < n; ++r) s += d.columns[i][r] * d.columns[j][r];
            a[i][j] = s;
        }
        double sy = 0.0;
        for (size_t r = 0; r < n; ++r) sy += d.columns[i][r] * d.response[r];
        a[i][p] = sy;
        a[i][p + 1 + i] = 1.0;
    }
    for (size_t c = 0; c < p; ++c) {
        size_t pivot = c;
        for (size_t r = c + 1; r < p; ++r)
            if (std::fabs(a[r][c]) > std::fabs(a[pivot][c])) pivot = r;
        if (a[pivot][c] == 0.0) throw std::runtime_error("oracle: singular normal equations");
        std::swap(a[c], a[pivot]);
        for (size_t r = 0; r < p; ++r) {
            if (r == c) continue;
            double f = a[r][c] / a[c][c];
            for (size_t k = c; k < w; ++k) a[r][k] -= f * a[c][k];
        }
    }
    OracleFit out;
    out.coefficients.resize(p);
    std::vector<std::vector<double>> inv(p, std::vector<double>(p));
    for (size_t i = 0; i < p; ++i) {
        out.coefficients[i] = a[i][p] / a[i][i];
        for (size_t j = 0; j < p; ++j) inv[i][j] = a[i][p + 1 + j] / a[i][i];
    }
    double ssr = 0.0;
    for (size_t r = 0; r < n; ++r) {
        double fit = 0.0;
        for (size_t j = 0; j < p; ++j) fit += out.coefficients[j] * d.columns[j][r];
        double e = d.response[r] - fit;
        ssr += e * e;
    }
    bool has_intercept = false;
    for (size_t j = 0; j < p && !has_intercept; ++j) {
        auto [lo, hi] = std::minmax_element(d.columns[j].begin(), d.columns[j].end());
        has_intercept = (*lo == *hi);
    }
    double sst = 0.0;
    if (has_intercept) {
        double mean = std::accumulate(d.response.begin(), d.response.end(), 0.0) / static_cast<double>(n);
        for (double y : d.response) sst += (y - mean) * (y - mean);
    } else {
        for (double y : d.response) sst += y * y;
    }
    double sigma2 = ssr / static_cast<double>(n - p);
    out.standard_errors.resize(p);
    for (size_t j = 0; j < p; ++j) out.standard_errors[j] = std::sqrt(sigma2 * inv[j][j]);
    out.r_squared = sst == 0.0 ? 0.0 : 1.0 - ssr / sst;
    out.adj_r_squared = 1.0 - (1.0 - out.r_squared) *
                                  (static_cast<double>(n) - (has_intercept ? 1.0 : 0.0)) /
                                  static_cast<double>(n - p);
    out.f_df1 = has_intercept ? p - 1 : p;
    out.f_df2 = n - p;
    out.f_value = ((sst - ssr) / static_cast<double>(out.f_df1)) / (ssr / static_cast<double>(out.f_df2));
    out.residual_std = std::sqrt(sigma2);
    return out;
}

// Convenience: random well-conditioned design with an intercept column.
inline citefit::inference::DesignMatrix random_design(uint64_t seed, size_t n = 200, size_t p = 5) {
    std::mt19937_64 rng(seed);
    citefit::inference::DesignMatrix d;
    d.column_names.push_back("intercept");
    d.columns.emplace_back(n, 1.0);
    for (size_t j = 1; j < p; ++j) {
        d.column_names.push_back("x" + std::to_string(j));
        std::vector<double> col(n);
        for (auto& v : col) v = gaussian(rng);
        d.columns.push_back(std::move(col));
    }
    std::vector<double> truth(p);
    for (auto& b : truth) b = 2.0 * u01(rng) - 1.0;
    d.response.resize(n);
    for (size_t r = 0; r < n; ++r) {
        double y = 0.0;
        for (size_t j = 0; j < p; ++j) y += truth[j] * d.columns[j][r];
        d.response[r] = y + gaussian(rng);
    }
    return d;
}

// ---------------------------------------------------------------- t oracle

inline double t_density(double x, double df) {
    double lg = std::lgamma((df + 1.0) / 2.0) - std::lgamma(df / 2.0) -
                0.5 * std::log(df * kPi);
    return std::exp(lg - (df + 1.0) / 2.0 * std::log1p(x * x / df));
}

inline double simpson_rec(double (*f)(double, double), double df, double a, double b,
                          double fa, double fm, double fb, double whole, double eps,
                          int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm, df), frm = f(rm, df);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * eps)
        return left + right + (left + right - whole) / 15.0;
    return simpson_rec(f, df, a, m, fa, flm, fm, left, eps / 2.0, depth - 1) +
           simpson_rec(f, df, m, b, fm, frm, fb, right, eps / 2.0, depth - 1);
}

inline double integrate(double (*f)(double, double), double df, double a, double b,
                        double eps = 1e-13) {
    double fa = f(a, df), fb = f(b, df), fm = f(0.5 * (a + b), df);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, df, a, b, fa, fm, fb, whole, eps, 60);
}

// Two-sided tail mass by quadrature over the central interval.
inline double t_pvalue_quadrature(double t, double df) {
    double at = std::fabs(t);
    if (at == 0.0) return 1.0;
    return 1.0 - 2.0 * integrate(&t_density, df, 0.0, at);
}

// ---------------------------------------------------------------- ranks

inline std::vector<double> rank_vector(const std::vector<double>& v) {
    size_t n = v.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(n, 0.0);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        double avg = 0.5 * static_cast<double>(i + j) + 1.0; // average 1-based rank
        for (size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    return citefit::models::pearson(rank_vector(x), rank_vector(y));
}

// ---------------------------------------------------------------- fs/env

class TempDir {
public:
    TempDir() {
        static std::atomic<unsigned> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("citefit_test_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter.fetch_add(1)));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string str(const std::string& rel = "") const {
        return rel.empty() ? path_.string() : (path_ / rel).string();
    }

private:
    std::filesystem::path path_;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << text;
}

// Captures a std::ostream for the lifetime of the object.
class CaptureStream {
public:
    explicit CaptureStream(std::ostream& os) : os_(os), old_(os.rdbuf(buffer_.rdbuf())) {}
    ~CaptureStream() { os_.rdbuf(old_); }
    std::string text() const { return buffer_.str(); }

private:
    std::ostream& os_;
    std::stringstream buffer_;
    std::streambuf* old_;
};

} // namespace testutil
