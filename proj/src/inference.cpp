#include "citefit/inference.hpp"

#include "citefit/errors.hpp"
#include "citefit/util.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

namespace citefit::inference {

namespace {

constexpr double kRcondThreshold = 1e-12;

} // namespace

void DesignMatrix::validate() const {
    if (column_names.size() != columns.size())
        throw domain_error("design has " + std::to_string(columns.size()) + " columns but " +
                           std::to_string(column_names.size()) + " names");
    std::unordered_set<std::string> seen;
    for (const auto& name : column_names)
        if (!seen.insert(name).second)
            throw domain_error("duplicate design column \"" + name + "\"");
    size_t n = response.size();
    for (size_t j = 0; j < columns.size(); ++j)
        if (columns[j].size() != n)
            throw domain_error("column \"" + column_names[j] + "\" has " +
                               std::to_string(columns[j].size()) + " rows, response has " +
                               std::to_string(n));
    if (n <= columns.size())
        throw domain_error("need more observations (" + std::to_string(n) +
                           ") than predictors (" + std::to_string(columns.size()) + ")");
    for (size_t j = 0; j < columns.size(); ++j)
        for (double v : columns[j])
            if (!std::isfinite(v))
                throw domain_error("non-finite entry in design column \"" + column_names[j] + "\"");
    for (double v : response)
        if (!std::isfinite(v))
            throw domain_error("non-finite entry in response");
}

size_t FitResult::index_of(const std::string& name) const {
    for (size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return i;
    throw domain_error("no coefficient named \"" + name + "\"");
}

double FitResult::coefficient(const std::string& name) const {
    return coefficients[index_of(name)];
}

double FitResult::standard_error(const std::string& name) const {
    return standard_errors[index_of(name)];
}

FitResult ols_fit(const DesignMatrix& design) {
    design.validate();
    const size_t n = design.n_rows();
    const size_t p = design.n_cols();

    // Column-major working copy; Householder reflectors overwrite the
    // subdiagonal, R lands in the upper triangle.
    std::vector<std::vector<double>> a = design.columns;
    std::vector<double> qty = design.response;

    for (size_t j = 0; j < p; ++j) {
        double norm = 0.0;
        for (size_t i = j; i < n; ++i) norm = std::hypot(norm, a[j][i]);
        if (norm > 0.0) {
            if (a[j][j] > 0.0) norm = -norm;
            for (size_t i = j; i < n; ++i) a[j][i] /= norm;
            a[j][j] -= 1.0;
            // Apply reflector I - v v^T / v_j to trailing columns and response.
            for (size_t k = j + 1; k < p; ++k) {
                double s = 0.0;
                for (size_t i = j; i < n; ++i) s += a[j][i] * a[k][i];
                s /= a[j][j];
                for (size_t i = j; i < n; ++i) a[k][i] += s * a[j][i];
            }
            double s = 0.0;
            for (size_t i = j; i < n; ++i) s += a[j][i] * qty[i];
            s /= a[j][j];
            for (size_t i = j; i < n; ++i) qty[i] += s * a[j][i];
        }
        a[j][j] = norm; // diagonal of R (|norm| = column norm after reflections)
    }

    double max_diag = 0.0, min_diag = std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < p; ++j) {
        double d = std::abs(a[j][j]);
        max_diag = std::max(max_diag, d);
        min_diag = std::min(min_diag, d);
    }
    if (max_diag == 0.0 || min_diag / max_diag < kRcondThreshold) {
        std::vector<std::string> offenders;
        for (size_t j = 0; j < p; ++j)
            if (std::abs(a[j][j]) <= kRcondThreshold * std::max(max_diag, 1e-300))
                offenders.push_back(design.column_names[j]);
        std::string what = "design is rank deficient (rcond " +
                           util::format_double(max_diag == 0.0 ? 0.0 : min_diag / max_diag) + ")";
        if (!offenders.empty()) {
            what += "; offending columns:";
            for (const auto& name : offenders) what += " " + name;
        }
        throw rank_deficiency_error(what, offenders);
    }

    FitResult out;
    out.names = design.column_names;
    out.n_obs = n;
    out.coefficients.assign(p, 0.0);
    for (size_t j = p; j-- > 0;) {
        double s = qty[j];
        for (size_t k = j + 1; k < p; ++k) s -= a[k][j] * out.coefficients[k];
        out.coefficients[j] = s / a[j][j];
    }

    // Residuals from the original data so fitted + residual == response.
    out.fitted.assign(n, 0.0);
    for (size_t j = 0; j < p; ++j) {
        double b = out.coefficients[j];
        const auto& col = design.columns[j];
        for (size_t i = 0; i < n; ++i) out.fitted[i] += b * col[i];
    }
    out.residuals.assign(n, 0.0);
    double ssr = 0.0;
    for (size_t i = 0; i < n; ++i) {
        out.residuals[i] = design.response[i] - out.fitted[i];
        ssr += out.residuals[i] * out.residuals[i];
    }

    bool has_intercept = false;
    for (size_t j = 0; j < p && !has_intercept; ++j) {
        auto [lo, hi] = std::minmax_element(design.columns[j].begin(), design.columns[j].end());
        has_intercept = (*lo == *hi);
    }
    double mean = 0.0;
    for (double y : design.response) mean += y;
    mean /= static_cast<double>(n);
    double sst = 0.0;
    for (double y : design.response) {
        double d = has_intercept ? y - mean : y;
        sst += d * d;
    }

    out.r_squared = sst > 0.0 ? 1.0 - ssr / sst : (ssr <= 0.0 ? 1.0 : 0.0);
    out.r_squared = std::clamp(out.r_squared, 0.0, 1.0);
    const double df2 = static_cast<double>(n - p);
    const double df1 = static_cast<double>(has_intercept ? p - 1 : p);
    out.adj_r_squared = 1.0 - (1.0 - out.r_squared) *
                                  (static_cast<double>(n) - (has_intercept ? 1.0 : 0.0)) / df2;
    out.f.df1 = static_cast<size_t>(df1);
    out.f.df2 = static_cast<size_t>(df2);
    out.f.value = df1 > 0.0
                      ? ((sst - ssr) / df1) / (ssr / df2)
                      : 0.0;

    const double sigma2 = ssr / df2;
    out.residual_std = std::sqrt(sigma2);

    // diag((X'X)^-1) = row norms of R^-1: back-solve R z = e_j per column.
    out.standard_errors.assign(p, 0.0);
    std::vector<std::vector<double>> rinv(p, std::vector<double>(p, 0.0));
    for (size_t c = 0; c < p; ++c) {
        for (size_t j = c + 1; j-- > 0;) {
            double s = (j == c) ? 1.0 : 0.0;
            for (size_t k = j + 1; k <= c; ++k) s -= a[k][j] * rinv[c][k];
            rinv[c][j] = s / a[j][j];
        }
    }
    out.t_values.assign(p, 0.0);
    out.p_values.assign(p, 0.0);
    for (size_t j = 0; j < p; ++j) {
        double diag = 0.0;
        for (size_t c = j; c < p; ++c) diag += rinv[c][j] * rinv[c][j];
        out.standard_errors[j] = std::sqrt(sigma2 * diag);
        if (out.standard_errors[j] > 0.0)
            out.t_values[j] = out.coefficients[j] / out.standard_errors[j];
        else
            out.t_values[j] = out.coefficients[j] == 0.0
                                  ? 0.0
                                  : std::numeric_limits<double>::infinity() *
                                        (out.coefficients[j] > 0 ? 1 : -1);
        out.p_values[j] = t_pvalue(out.t_values[j], df2);
    }
    return out;
}

namespace detail {

namespace {

// Continued fraction for I_x(a, b), modified Lentz.
double beta_cf(double a, double b, double x) {
    constexpr int kMaxIter = 10000;
    constexpr double kEps = 3e-16;
    constexpr double kFpMin = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) return h;
    }
    throw domain_error("incomplete beta continued fraction did not converge");
}

} // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0))
        throw domain_error("incomplete beta requires positive shape parameters");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * beta_cf(a, b, x) / a;
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

} // namespace detail

double t_pvalue(double t, double df) {
    if (!(df >= 1.0)) throw domain_error("t_pvalue requires df >= 1");
    if (t == 0.0) return 1.0;
    if (std::isnan(t)) throw domain_error("t_pvalue requires a finite or infinite t");
    if (std::isinf(t)) return 0.0;
    const double x = df / (df + t * t);
    return detail::regularized_incomplete_beta(df / 2.0, 0.5, x);
}

std::string significance_stars(double p) {
    if (p <= 0.001) return "***";
    if (p <= 0.01) return "**";
    if (p <= 0.05) return "*";
    if (p <= 0.1) return ".";
    return "";
}

} // namespace citefit::inference
