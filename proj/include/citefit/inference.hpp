#ifndef CITEFIT_INFERENCE_HPP
#define CITEFIT_INFERENCE_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace citefit::inference {

// Column-major design for least squares. `columns[j]` holds predictor j;
// every column and `response` must share the same length.
struct DesignMatrix {
    std::vector<std::string> column_names;
    std::vector<std::vector<double>> columns;
    std::vector<double> response;
    std::string response_name = "ln_k";

    size_t n_rows() const { return response.size(); }
    size_t n_cols() const { return columns.size(); }

    // Throws domain_error unless: columns and names agree, every column
    // matches the response length, names are unique, all entries finite,
    // and n_rows > n_cols.
    void validate() const;
};

struct FStatistic {
    double value = 0.0;
    size_t df1 = 0;
    size_t df2 = 0;
};

struct FitResult {
    std::vector<std::string> names;
    std::vector<double> coefficients;
    std::vector<double> standard_errors;
    std::vector<double> t_values;
    std::vector<double> p_values;
    double r_squared = 0.0;
    double adj_r_squared = 0.0;
    FStatistic f;
    std::vector<double> fitted;
    std::vector<double> residuals;
    double residual_std = 0.0;
    size_t n_obs = 0;

    size_t index_of(const std::string& name) const; // throws domain_error if absent
    double coefficient(const std::string& name) const;
    double standard_error(const std::string& name) const;
};

// Householder QR least squares with full inference statistics.
// Near-singular designs (reciprocal condition of R below 1e-12) raise
// rank_deficiency_error naming the offending columns.
FitResult ols_fit(const DesignMatrix& design);

// Two-sided p-value for a Student-t statistic with df degrees of freedom.
double t_pvalue(double t, double df);

// "***" p<=0.001, "**" p<=0.01, "*" p<=0.05, "." p<=0.1, else "".
std::string significance_stars(double p);

namespace detail {

// I_x(a, b), continued-fraction evaluation (Lentz).
double regularized_incomplete_beta(double a, double b, double x);

} // namespace detail

} // namespace citefit::inference

#endif
