#include "eigenrank/coefficients.h"
#include "eigenrank/error.h"
#include "eigenrank/products.h"
#include "fixtures.h"
#include "oracles.h"

#include <catch2/catch_amalgamated.hpp>

using namespace eigenrank;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("pair numbering", "[products]") {
    REQUIRE(pair_count(1) == 1);
    REQUIRE(pair_count(8) == 36);
    int p = 0;
    for (int j = 0; j < 10; ++j)
        for (int i = 0; i <= j; ++i, ++p) {
            REQUIRE(pair_index(i, j) == p);
            REQUIRE(pair_index(j, i) == p);
            REQUIRE(pair_at(p) == std::pair{i, j});
        }
    // smaller n is a prefix
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i <= j; ++i)
            REQUIRE(pair_index(i, j) < pair_count(4));
}

TEST_CASE("coefficients of phi_1^2 match the closed form", "[products]") {
    const int N = 63;
    const Grid g = fixture::line(N);
    const SpectralBasis b = fixture::full_basis(assemble_laplacian(g));
    const ProductCoefficients c = expansion_coefficients(b, b, 1, N);
    REQUIRE(c.complete);
    for (int k = 0; k < N; ++k)
        REQUIRE_THAT(c(0, 0, k), WithinAbs(oracle::square_coefficient_discrete(k + 1, N), 1e-13));
    // and approach the continuum values
    for (int k : {1, 3, 5})
        REQUIRE_THAT(c(0, 0, k - 1), WithinRel(oracle::square_coefficient_continuum(k), 1e-2));
}

TEST_CASE("Parseval holds for complete targets", "[products]") {
    const Grid g = fixture::square(9);
    const auto field = sample_coefficients(
        CoefficientSpec::random_fourier(4, 3, 1.0, 0.3, 0.1, 0.1), g);
    const SpectralBasis l = fixture::full_basis(assemble_schrodinger(field, g));
    const SpectralBasis lap = fixture::full_basis(assemble_laplacian(g));
    for (const SpectralBasis *target : {&l, &lap}) {
        const ProductCoefficients c = expansion_coefficients(l, *target, 6, target->count());
        for (int p = 0; p < c.pairs(); ++p) {
            const auto [i, j] = pair_at(p);
            const double direct = norm(product_function(i, j, l));
            REQUIRE_THAT(c.product_norms[p], WithinRel(direct, 1e-13));
            REQUIRE_THAT(c.coeffs.col(p).norm(), WithinRel(direct, 1e-12));
        }
    }
}

TEST_CASE("truncated targets are marked incomplete", "[products]") {
    const Grid g = fixture::line(32);
    const SpectralBasis b = fixture::full_basis(assemble_laplacian(g));
    const ProductCoefficients c = expansion_coefficients(b, b, 4, 10);
    REQUIRE_FALSE(c.complete);
    REQUIRE(c.coeffs.rows() == 10);
    REQUIRE_THROWS_AS(expansion_coefficients(b, b, 4, 40), InvalidArgument);
    REQUIRE_THROWS_AS(expansion_coefficients(b, b, 40, 10), InvalidArgument);
}

TEST_CASE("product matrix holds pointwise products", "[products]") {
    const Grid g = fixture::line(20);
    const SpectralBasis b = lowest_eigenpairs(assemble_laplacian(g), 5);
    const Mat prods = product_matrix(b, 5);
    REQUIRE(prods.cols() == 15);
    const Vec expected = b.vectors.col(1).cwiseProduct(b.vectors.col(3));
    REQUIRE((prods.col(pair_index(1, 3)) - expected).norm() == 0.0);
}

TEST_CASE("leading pairs are a prefix of a larger expansion", "[products]") {
    const Grid g = fixture::line(40);
    const SpectralBasis b = fixture::full_basis(assemble_laplacian(g));
    const ProductCoefficients big = expansion_coefficients(b, b, 8, 40);
    const ProductCoefficients small = expansion_coefficients(b, b, 5, 40);
    const ProductCoefficients lead = leading_pairs(big, 5);
    REQUIRE(lead.n == 5);
    REQUIRE((lead.coeffs - small.coeffs).cwiseAbs().maxCoeff() < 1e-14);
    REQUIRE_THROWS_AS(leading_pairs(big, 9), InvalidArgument);
}

TEST_CASE("spectral and stencil quadratic forms agree", "[products]") {
    const Grid g = fixture::square(10);
    const auto field = sample_coefficients(
        CoefficientSpec::random_fourier(6, 4, 1.0, 0.3, 0.25, 0.25), g);
    const DiscreteOperator op = assemble_schrodinger(field, g);
    const SpectralBasis l = fixture::full_basis(op);
    const ProductCoefficients c = expansion_coefficients(l, l, 6, l.count());
    for (int j = 0; j < 6; ++j)
        for (int i = 0; i <= j; ++i) {
            const double spectral = quadratic_form_value(i, j, c, l);
            const double stencil = stencil_quadratic_form(op, product_function(i, j, l));
            REQUIRE_THAT(spectral, WithinRel(stencil, 1e-10));
        }

    SECTION("coefficients must be paired with their own target basis") {
        const SpectralBasis lap = fixture::full_basis(assemble_laplacian(g));
        REQUIRE_THROWS_AS(quadratic_form_value(0, 0, c, lap), InvalidArgument);
    }
}

TEST_CASE("traced product-rule chain bounds every pair", "[products]") {
    const Grid g = fixture::square(12);
    const auto field = sample_coefficients(
        CoefficientSpec::random_fourier(7, 4, 1.0, 0.3, 0.25, 0.25), g);
    const SpectralBasis l = fixture::full_basis(assemble_schrodinger(field, g));
    const ProductCoefficients c = expansion_coefficients(l, l, 10, l.count());
    const QuadraticFormChain chain = check_quadratic_form_chain(c, l, field);
    REQUIRE(chain.checked == pair_count(10));
    REQUIRE(chain.violations == 0);
    REQUIRE(chain.max_value <= chain.bound);

    // The bound is the formula evaluated on its own ingredients.
    const double S = sup_norms(l, 10).max_over_n;
    const double lam = l.values[9];
    const double grad = 2.0 * std::sqrt((lam + field.v_sup) / field.a_min) * S;
    REQUIRE_THAT(quadratic_form_bound(l, field, 10),
                 WithinRel(field.v_sup * S * S + field.a_max * grad * grad, 1e-14));
}
