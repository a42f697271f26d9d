#include "eigenrank/products.h"

#include "eigenrank/error.h"

#include <cmath>
#include <string>

namespace eigenrank {

std::pair<int, int> pair_at(int p) {
    int j = static_cast<int>((std::sqrt(8.0 * p + 1.0) - 1.0) / 2.0);
    while (j * (j + 1) / 2 > p)
        --j;
    while ((j + 1) * (j + 2) / 2 <= p)
        ++j;
    return {p - j * (j + 1) / 2, j};
}

GridFunction product_function(int i, int j, const SpectralBasis &basis) {
    if (i < 0 || j < 0 || i >= basis.count() || j >= basis.count())
        throw InvalidArgument("products", "product index out of range");
    return GridFunction(basis.grid,
                        basis.vectors.col(i).cwiseProduct(basis.vectors.col(j)));
}

Mat product_matrix(const SpectralBasis &basis, int n) {
    if (n < 1 || n > basis.count())
        throw InvalidArgument("products", "n out of range for the source basis");
    Mat f(basis.vectors.rows(), pair_count(n));
#pragma omp parallel for schedule(static)
    for (int p = 0; p < pair_count(n); ++p) {
        const auto [i, j] = pair_at(p);
        f.col(p) = basis.vectors.col(i).cwiseProduct(basis.vectors.col(j));
    }
    return f;
}

ProductCoefficients leading_pairs(const ProductCoefficients &coeffs, int n) {
    if (n < 1 || n > coeffs.n)
        throw InvalidArgument("products", "leading_pairs: n out of range");
    ProductCoefficients out = coeffs;
    out.n = n;
    out.coeffs = coeffs.coeffs.leftCols(pair_count(n));
    out.product_norms = coeffs.product_norms.head(pair_count(n));
    return out;
}

ProductCoefficients expansion_coefficients(const SpectralBasis &source,
                                           const SpectralBasis &target, int n, int m) {
    require_same_grid(source.grid, target.grid, "products");
    if (m < 1 || m > target.count())
        throw InvalidArgument("products", "m out of range for the target basis");
    const Mat f = product_matrix(source, n);
    const double w = source.grid.quadrature_weight();

    ProductCoefficients out;
    out.n = n;
    out.m = m;
    out.target = target.kind;
    out.boundary = source.grid.boundary();
    out.complete = static_cast<std::size_t>(m) == source.grid.size();
    out.coeffs.resize(m, f.cols());
    // Column blocks are independent, so the result does not depend on the
    // thread count.
    constexpr int chunk = 16;
    const int blocks = static_cast<int>((f.cols() + chunk - 1) / chunk);
#pragma omp parallel for schedule(static)
    for (int b = 0; b < blocks; ++b) {
        const Eigen::Index first = static_cast<Eigen::Index>(b) * chunk;
        const Eigen::Index cols = std::min<Eigen::Index>(chunk, f.cols() - first);
        out.coeffs.middleCols(first, cols).noalias() =
            w * (target.vectors.leftCols(m).transpose() * f.middleCols(first, cols));
    }
    out.product_norms = std::sqrt(w) * f.colwise().norm().transpose();
    return out;
}

double quadratic_form_value(int i, int j, const ProductCoefficients &coeffs,
                            const SpectralBasis &target) {
    if (coeffs.target != target.kind)
        throw InvalidArgument("products", "coefficient target tag " +
                                              std::string(to_string(coeffs.target)) +
                                              " does not match eigenvalues of " +
                                              std::string(to_string(target.kind)));
    if (target.count() < coeffs.m)
        throw InvalidArgument("products", "too few eigenvalues for the coefficients");
    if (i < 0 || j < 0 || i >= coeffs.n || j >= coeffs.n)
        throw InvalidArgument("products", "pair index out of range");
    const auto c = coeffs.column(i, j);
    double sum = 0.0;
    for (int k = 0; k < coeffs.m; ++k)
        sum += target.values[k] * c[k] * c[k];
    return sum;
}

double stencil_quadratic_form(const DiscreteOperator &op, const GridFunction &f) {
    return inner(op.apply(f), f);
}

double quadratic_form_bound(const SpectralBasis &source, const CoefficientField &field,
                            int n) {
    require_same_grid(source.grid, field.grid, "products");
    const double s = sup_norms(source, n).max_over_n;
    const double lambda_n = source.values[n - 1];
    const double grad = 2.0 * std::sqrt((lambda_n + field.v_sup) / field.a_min) * s;
    return field.v_sup * s * s + field.a_max * grad * grad;
}

QuadraticFormChain check_quadratic_form_chain(const ProductCoefficients &coeffs,
                                              const SpectralBasis &source,
                                              const CoefficientField &field) {
    QuadraticFormChain out;
    out.bound = quadratic_form_bound(source, field, coeffs.n);
    for (int p = 0; p < coeffs.pairs(); ++p) {
        const auto [i, j] = pair_at(p);
        const double value = quadratic_form_value(i, j, coeffs, source);
        out.max_value = std::max(out.max_value, value);
        ++out.checked;
        if (value > out.bound)
            ++out.violations;
    }
    return out;
}

} // namespace eigenrank
