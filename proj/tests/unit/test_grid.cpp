#include "eigenrank/coefficients.h"
#include "eigenrank/error.h"
#include "eigenrank/grid.h"
#include "fixtures.h"
#include "oracles.h"

#include <catch2/catch_amalgamated.hpp>

using namespace eigenrank;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("grid spacing and nodes", "[grid]") {
    SECTION("dirichlet holds interior nodes") {
        const Grid g = fixture::line(9, 1.0);
        REQUIRE(g.size() == 9);
        REQUIRE_THAT(g.spacing(0), WithinRel(0.1, 1e-15));
        REQUIRE_THAT(g.coordinate(0, 0), WithinRel(0.1, 1e-15));
        REQUIRE_THAT(g.coordinate(8, 0), WithinRel(0.9, 1e-15));
        REQUIRE_THAT(g.quadrature_weight(), WithinRel(0.1, 1e-15));
    }
    SECTION("periodic starts at the origin") {
        const Grid g = fixture::line(10, 1.0, Boundary::periodic);
        REQUIRE_THAT(g.spacing(0), WithinRel(0.1, 1e-15));
        REQUIRE(g.coordinate(0, 0) == 0.0);
    }
    SECTION("3D weight is the product of spacings") {
        const Grid g = fixture::box({8, 9, 10}, {1.0, 2.0, 3.0});
        REQUIRE(g.size() == 720);
        REQUIRE_THAT(g.quadrature_weight(), WithinRel((1.0 / 9) * (2.0 / 10) * (3.0 / 11), 1e-14));
        REQUIRE_FALSE(g.dense_solver_hazard());
    }
}

TEST_CASE("lexicographic order has axis 0 fastest", "[grid]") {
    const Grid g = fixture::box({8, 9, 10}, {1.0, 1.0, 1.0});
    REQUIRE(g.stride(0) == 1);
    REQUIRE(g.stride(1) == 8);
    REQUIRE(g.stride(2) == 72);
    for (std::size_t node : {std::size_t{0}, std::size_t{7}, std::size_t{8}, std::size_t{500}}) {
        const auto idx = g.multi_index(node);
        REQUIRE(static_cast<std::size_t>(idx[0] + 8 * idx[1] + 72 * idx[2]) == node);
    }
}

TEST_CASE("make_grid rejects bad input", "[grid]") {
    const std::array<double, 1> l{1.0};
    const std::array<int, 1> few{3};
    REQUIRE_THROWS_AS(make_grid(1, l, few, Boundary::dirichlet), InvalidArgument);
    const std::array<double, 1> neg{-1.0};
    const std::array<int, 1> ok{8};
    REQUIRE_THROWS_AS(make_grid(1, neg, ok, Boundary::dirichlet), InvalidArgument);
    const std::array<double, 4> l4{1, 1, 1, 1};
    const std::array<int, 4> p4{8, 8, 8, 8};
    REQUIRE_THROWS_AS(make_grid(4, l4, p4, Boundary::dirichlet), InvalidArgument);
    REQUIRE_THROWS_AS(make_grid(2, l, ok, Boundary::dirichlet), InvalidArgument);
}

TEST_CASE("large 3D grids carry the dense solver hazard flag", "[grid]") {
    REQUIRE(fixture::box({41, 41, 41}, {1, 1, 1}).dense_solver_hazard());
    REQUIRE_FALSE(fixture::box({40, 40, 40}, {1, 1, 1}).dense_solver_hazard());
}

TEST_CASE("discrete inner product integrates sine pairs exactly", "[grid]") {
    const int N = 31;
    const Grid g = fixture::line(N);
    for (int j = 1; j <= 5; ++j)
        for (int k = 1; k <= 5; ++k) {
            const GridFunction a(g, oracle::dirichlet_eigenvector(j, N, oracle::pi));
            const GridFunction b(g, oracle::dirichlet_eigenvector(k, N, oracle::pi));
            REQUIRE_THAT(inner(a, b), WithinAbs(j == k ? 1.0 : 0.0, 1e-13));
        }
}

TEST_CASE("functions on different grids do not mix", "[grid]") {
    const GridFunction a(fixture::line(8));
    const GridFunction b(fixture::line(9));
    REQUIRE_THROWS_AS(inner(a, b), InvalidArgument);
    REQUIRE_THROWS_AS(GridFunction(fixture::line(8), Vec::Zero(3)), InvalidArgument);
}

TEST_CASE("constant coefficients", "[grid][coefficients]") {
    const Grid g = fixture::square(8);
    const CoefficientField f = sample_coefficients(CoefficientSpec::constant(2.0, 0.5), g);
    REQUIRE(f.a_min == 2.0);
    REQUIRE(f.a_max == 2.0);
    REQUIRE(f.v_sup == 0.5);
    REQUIRE(f.a_face.size() == 2);
    REQUIRE(f.a_face[0].size() == 9 * 8);
    REQUIRE((f.a_face[1].array() == 2.0).all());
}

TEST_CASE("periodic faces wrap", "[grid][coefficients]") {
    const Grid g = fixture::square(8, oracle::pi, Boundary::periodic);
    const CoefficientField f = sample_coefficients(CoefficientSpec::constant(1.0, 0.0), g);
    REQUIRE(f.face_count(0) == 8);
    REQUIRE(f.a_face[0].size() == 8 * 8);
}

TEST_CASE("harmonic potential is centred", "[grid][coefficients]") {
    const Grid g = fixture::line(9, 2.0);
    const CoefficientField f = sample_coefficients(CoefficientSpec::harmonic(1.0, 3.0), g);
    // node 4 sits at x = 1, the box centre
    REQUIRE_THAT(f.v_node[4], WithinAbs(0.0, 1e-15));
    REQUIRE_THAT(f.v_node[0], WithinRel(3.0 * 0.8 * 0.8, 1e-14));
    REQUIRE_THAT(f.v_sup, WithinRel(3.0 * 0.8 * 0.8, 1e-14));
}

TEST_CASE("random fourier coefficients stay in their band", "[grid][coefficients]") {
    const Grid g = fixture::square(24);
    const auto spec = CoefficientSpec::random_fourier(7, 4, 1.0, 0.3, 0.25, 0.25);
    const CoefficientField f = sample_coefficients(spec, g);
    REQUIRE(f.a_min >= 0.7);
    REQUIRE(f.a_max <= 1.3);
    REQUIRE(f.a_max - f.a_min > 0.1);
    REQUIRE(f.v_sup <= 0.5);
    REQUIRE((f.v_node.array() >= 0.0).all());

    SECTION("same seed, same field") {
        const CoefficientField again = sample_coefficients(spec, g);
        REQUIRE(again.a_face[0] == f.a_face[0]);
        REQUIRE(again.v_node == f.v_node);
    }
    SECTION("another seed, another field") {
        const auto other = sample_coefficients(
            CoefficientSpec::random_fourier(8, 4, 1.0, 0.3, 0.25, 0.25), g);
        REQUIRE(other.a_face[0] != f.a_face[0]);
    }
}

TEST_CASE("coefficient specs that cannot stay positive are rejected", "[grid][coefficients]") {
    REQUIRE_THROWS_AS(CoefficientSpec::random_fourier(1, 4, 1.0, 1.0).validate(),
                      InvalidArgument);
    REQUIRE_THROWS_AS(CoefficientSpec::constant(0.0, 0.0).validate(), InvalidArgument);
    REQUIRE_THROWS_AS(CoefficientSpec::constant(1.0, -1.0).validate(), InvalidArgument);
}
