#include <cmath>
#include <random>
#include <string>

#include "doctest.h"
#include "nnlif/grid.hpp"
#include "nnlif/params.hpp"

using namespace nnlif;

namespace {

bool lists(const ParameterError& e, const std::string& message) {
    for (const auto& v : e.violations())
        if (v == message) return true;
    return false;
}

}  // namespace

TEST_CASE("default parameters are valid") {
    CHECK_NOTHROW(validate_parameters(ModelParameters{}));
    CHECK_NOTHROW(validate_parameters(OnePopParameters{}));
    CHECK(ModelParameters{}.V_F == 2.0);
    CHECK(ModelParameters{}.V_R == 1.0);
    CHECK(OnePopParameters{}.d0 == 1.0);
}

TEST_CASE("each violated constraint is reported by name") {
    ModelParameters p;
    p.V_R = 2.0;
    p.tau_E = -0.1;
    p.D_IE = -1.0;
    try {
        validate_parameters(p);
        FAIL("expected a ParameterError");
    } catch (const ParameterError& e) {
        CHECK(e.violations().size() == 3);
        CHECK(lists(e, "V_R must be < V_F"));
        CHECK(lists(e, "tau_E must be > 0"));
        CHECK(lists(e, "D_IE must be >= 0"));
        CHECK(std::string(e.what()).find("tau_E") != std::string::npos);
    }

    OnePopParameters q;
    q.d0 = 0.0;
    q.D = -0.5;
    CHECK_THROWS_AS(validate_parameters(q), ParameterError);
    q = OnePopParameters{};
    q.b = -4.0;  // inhibitory networks are allowed
    CHECK_NOTHROW(validate_parameters(q));
}

TEST_CASE("refractory mode names") {
    for (auto m : {RefractoryMode::Ratio, RefractoryMode::Delayed, RefractoryMode::None})
        CHECK(refractory_mode_from_string(to_string(m)) == m);
    CHECK_THROWS_AS(refractory_mode_from_string("instant"), std::invalid_argument);
}

TEST_CASE("drift and diffusion of each population") {
    ModelParameters p;
    p.b_EE = 3.0;
    p.b_IE = 7.0;
    p.b_EI = 0.01;
    p.b_II = 2.0;
    p.nu_E_ext = 1.5;
    p.dcoef_EE = 0.1;
    p.dcoef_IE = 0.2;
    p.dcoef_EI = 0.3;
    p.dcoef_II = 0.4;
    const Drive e = drive(p, Population::E, 2.0, 0.5);
    CHECK(e.V0 == doctest::Approx(3.0 * 2.0 - 7.0 * 0.5));
    CHECK(e.a == doctest::Approx(1.0 + 0.1 * 2.0 + 0.2 * 0.5));
    const Drive i = drive(p, Population::I, 2.0, 0.5);
    CHECK(i.V0 == doctest::Approx(0.01 * 2.0 - 2.0 * 0.5 + (0.01 - 3.0) * 1.5));
    CHECK(i.a == doctest::Approx(1.0 + 0.3 * 2.0 + 0.4 * 0.5));

    OnePopParameters q;
    q.b = -4.0;
    q.nu_ext = 20.0;
    q.d1 = 0.5;
    const Drive o = drive(q, 3.0);
    CHECK(o.V0 == doctest::Approx(8.0));
    CHECK(o.a == doctest::Approx(2.5));
}

TEST_CASE("default grid") {
    const Grid g(2.0, 1.0);
    CHECK(g.size() == 1000);
    CHECK(g.dv() == doctest::Approx(0.008).epsilon(1e-12));
    CHECK(g.v(g.size() - 1) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(g.v(g.reset_index()) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g.reset_index() == 874);
    CHECK(g.v(0) == doctest::Approx(-5.992).epsilon(1e-12));
    CHECK(g.nearest_index(1.25) == 905);
    CHECK_THROWS_AS(Grid(1.0, 1.0), std::invalid_argument);
}

TEST_CASE("Gaussian initial data") {
    const Grid g(2.0, 1.0);

    SUBCASE("spike carries the requested mass") {
        const auto rho = gaussian_initial(g, 1.83, 0.0003, 0.8);
        CHECK(total_mass(rho, g) == doctest::Approx(0.8).epsilon(1e-12));
        CHECK(rho[g.size() - 1] == 0.0);
        for (std::size_t j = 0; j < g.size(); ++j) CHECK(rho[j] >= 0.0);
    }
    SUBCASE("spike peaks at the nearest node") {
        const auto rho = gaussian_initial(g, 1.25, 0.0003, 1.0);
        std::size_t peak = 0;
        for (std::size_t j = 1; j < g.size(); ++j)
            if (rho[j] > rho[peak]) peak = j;
        CHECK(peak == g.nearest_index(1.25));
        CHECK(total_mass(rho, g) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("resolved profile is a Gaussian") {
        const auto rho = gaussian_initial(g, 0.0, 0.5, 1.0);
        const std::size_t j0 = g.nearest_index(0.0);
        for (std::size_t j : {j0 - 50, j0 + 30, j0 + 100}) {
            const double v = g.v(j), w = g.v(j0);
            CHECK(rho[j] / rho[j0] ==
                  doctest::Approx(std::exp(-(v * v - w * w) / (2.0 * 0.25))).epsilon(1e-9));
        }
        CHECK(total_mass(rho, g) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("random centres and widths stay non-negative") {
        std::mt19937 rng(3);
        std::uniform_real_distribution<double> centre(-3.0, 1.99), width(1e-4, 1.0);
        for (int k = 0; k < 50; ++k) {
            const auto rho = gaussian_initial(g, centre(rng), width(rng), 0.9);
            for (std::size_t j = 0; j < g.size(); ++j) REQUIRE(rho[j] >= 0.0);
            CHECK(total_mass(rho, g) == doctest::Approx(0.9).epsilon(1e-12));
        }
    }
    SUBCASE("invalid arguments") {
        CHECK_THROWS_AS(gaussian_initial(g, 2.0, 0.1), std::invalid_argument);
        CHECK_THROWS_AS(gaussian_initial(g, 1.0, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(gaussian_initial(g, 1.0, 0.1, 1.5), std::invalid_argument);
    }
}

TEST_CASE("stationary profile") {
    const Grid g(2.0, 1.0);
    OnePopParameters p;
    p.b = -4.0;
    p.nu_ext = 20.0;

    const auto rho = stationary_initial(g, 3.669, p);
    CHECK(rho[g.size() - 1] == 0.0);
    CHECK(total_mass(rho, g) == doctest::Approx(1.0 - 0.025 * 3.669).epsilon(1e-3));
    for (std::size_t j = 0; j < g.size(); ++j) CHECK(rho[j] >= 0.0);

    // linear in N at a fixed drive
    const Drive d{1.3, 0.7};
    const auto one = stationary_profile(g, 1.5, d);
    const auto two = stationary_profile(g, 3.0, d);
    for (std::size_t j = 0; j < g.size(); ++j) CHECK(two[j] == 2.0 * one[j]);
}

TEST_CASE("trapezoidal mass") {
    const Grid g(2.0, 1.0, 6.0, 101);
    CHECK(total_mass(DensityField(g.size()), g) == 0.0);
    DensityField lin(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) lin[j] = g.v(j) + 7.0;
    const double a = g.v(0), b = g.v(g.size() - 1);
    CHECK(total_mass(lin, g) ==
          doctest::Approx(0.5 * (b * b - a * a) + 7.0 * (b - a)).epsilon(1e-13));
    CHECK(l1_distance(lin, lin, g) == 0.0);
}
