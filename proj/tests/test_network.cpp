#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "nnlif/network.hpp"

using namespace nnlif;

namespace {

TimeSeries synthetic(double t_end, double dt, auto&& f) {
    TimeSeries s;
    for (int k = 0; k * dt <= t_end + 1e-12; ++k) {
        Sample smp;
        smp.t = k * dt;
        smp.N_E = f(smp.t);
        smp.N_I = std::numeric_limits<double>::quiet_NaN();
        s.samples.push_back(smp);
    }
    return s;
}

RunConfig short_two_population_run() {
    RunConfig c;
    c.populations = 2;
    c.two.refractory_mode = RefractoryMode::Delayed;
    c.two.D_EE = 0.01;
    c.two.D_IE = 0.02;
    c.two.D_EI = 0.005;
    c.two.D_II = 0.0;
    c.initial.E = {0.5, 0.3, 0.1};
    c.initial.I = {-0.5, 0.4, 0.05};
    c.grid.n_cells = 300;
    c.t_end = 0.05;
    c.snapshot_times = {0.02};
    return c;
}

}  // namespace

TEST_CASE("relative entropy vanishes at the reference and is non-negative") {
    const Grid grid(2.0, 1.0, 6.0, 400);
    const DensityField ref = stationary_profile(grid, 1.0, Drive{0.5, 1.0});
    CHECK(relative_entropy(ref, 0.025, ref, 0.025, grid) == 0.0);

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> jitter(-0.05, 0.05);
    for (int trial = 0; trial < 20; ++trial) {
        DensityField rho = ref;
        for (std::size_t j = 0; j < rho.size(); ++j) rho[j] = std::max(0.0, rho[j] + jitter(rng));
        CHECK(relative_entropy(rho, 0.02 + 0.01 * jitter(rng), ref, 0.025, grid) >= 0.0);
    }
}

TEST_CASE("relative entropy ignores the far tail and rejects R_inf = 0") {
    const Grid grid(2.0, 1.0, 6.0, 100);
    DensityField ref(grid.size(), 1.0);
    ref[0] = 1e-15;
    DensityField rho = ref;
    rho[0] = 1.0;
    CHECK(relative_entropy(rho, 0.1, ref, 0.1, grid) == 0.0);
    CHECK_THROWS_AS(relative_entropy(rho, 0.1, ref, 0.0, grid), std::invalid_argument);
}

TEST_CASE("two-population entropy is the sum of both terms") {
    const Grid grid(2.0, 1.0, 6.0, 200);
    SteadyStateSolution ref;
    ref.profile_E = stationary_profile(grid, 1.0, Drive{0.5, 1.0});
    ref.profile_I = stationary_profile(grid, 0.5, Drive{-0.5, 1.0});
    ref.R_E = 0.02;
    ref.R_I = 0.01;
    DensityField a = ref.profile_E, b = ref.profile_I;
    a[150] += 0.1;
    b[100] += 0.2;
    const double sum = relative_entropy(a, 0.03, ref.profile_E, 0.02, grid) +
                       relative_entropy(b, 0.01, ref.profile_I, 0.01, grid);
    CHECK(relative_entropy(a, 0.03, b, 0.01, ref, grid) == doctest::Approx(sum).epsilon(1e-15));
}

TEST_CASE("blow-up thresholds") {
    BlowupThresholds thr;
    thr.N_cap = 10.0;
    CHECK_FALSE(detect_blowup(9.0, 1e-5, true, thr));
    CHECK(detect_blowup(11.0, 1e-5, true, thr) == std::string("N > N_cap"));
    CHECK(detect_blowup(1.0, 1e-11, true, thr) == std::string("dt < dt_floor"));
    CHECK(detect_blowup(1.0, 1e-5, false, thr) == std::string("non-finite state"));
    CHECK(detect_blowup(std::nan(""), 1e-5, true, thr) == std::string("non-finite state"));
    CHECK_FALSE(detect_blowup(1.0, 1e-5, true, thr, 99.0));
    CHECK(detect_blowup(1.0, 1e-5, true, thr, 101.0) == std::string("self drive > self_drive_cap"));
}

TEST_CASE("classification of synthetic series") {
    const ClassificationSettings s;

    SUBCASE("constant is steady") {
        auto ts = synthetic(5.0, 0.01, [](double) { return 2.5; });
        const auto out = classify_outcome(ts, s);
        CHECK(out.kind == OutcomeKind::Steady);
        CHECK(out.terminal_N == 2.5);
        CHECK(out.l1_to_reference == -1.0);
    }
    SUBCASE("regular oscillation is periodic") {
        auto ts = synthetic(5.0, 0.005, [](double t) {
            return 3.0 + std::sin(2.0 * std::numbers::pi * t / 0.25);
        });
        const auto out = classify_outcome(ts, s);
        REQUIRE(out.kind == OutcomeKind::Periodic);
        CHECK(out.period == doctest::Approx(0.25).epsilon(1e-3));
        CHECK(out.amplitude == doctest::Approx(1.0).epsilon(1e-3));
        CHECK(out.peaks >= 4);
        CHECK(out.cycle_mean_N == doctest::Approx(3.0).epsilon(1e-4));
    }
    SUBCASE("damped oscillation is not periodic") {
        auto ts = synthetic(5.0, 0.005, [](double t) {
            return 3.0 + std::exp(-t) * std::sin(2.0 * std::numbers::pi * t / 0.25);
        });
        CHECK(classify_outcome(ts, s).kind == OutcomeKind::Undetermined);
    }
    SUBCASE("irregular spacing is not periodic") {
        auto ts = synthetic(5.0, 0.002, [](double t) { return 3.0 + std::sin(20.0 * t * t); });
        CHECK(classify_outcome(ts, s).kind == OutcomeKind::Undetermined);
    }
    SUBCASE("a flagged run is blow-up") {
        auto ts = synthetic(1.0, 0.01, [](double t) { return t; });
        ts.blowup_time = 0.73;
        ts.blowup_trigger = "N > N_cap";
        const auto out = classify_outcome(ts, s);
        CHECK(out.kind == OutcomeKind::Blowup);
        CHECK(out.t_star == 0.73);
        CHECK(out.trigger == "N > N_cap");
    }
    SUBCASE("empty series") {
        CHECK(classify_outcome(TimeSeries{}, s).kind == OutcomeKind::Undetermined);
    }
}

TEST_CASE("run configuration validation") {
    RunConfig c;
    c.t_end = 0.0;
    CHECK_THROWS_AS(validate_run_config(c), ParameterError);
    c.t_end = 1.0;
    c.blowup.N_cap = 0.0;
    CHECK_THROWS_AS(validate_run_config(c), ParameterError);
    c.blowup.N_cap = 1e4;
    CHECK_NOTHROW(validate_run_config(c));
}

TEST_CASE("two populations step identically in sequence and concurrently") {
    RunConfig c = short_two_population_run();
    const auto seq = simulate(c);
    c.concurrent = true;
    const auto par = simulate(c);
    const auto again = simulate(c);

    REQUIRE(seq.series.samples.size() == par.series.samples.size());
    for (std::size_t k = 0; k < seq.series.samples.size(); ++k) {
        const Sample& a = seq.series.samples[k];
        const Sample& b = par.series.samples[k];
        const Sample& r = again.series.samples[k];
        CHECK(a.t == b.t);
        CHECK(a.N_E == b.N_E);
        CHECK(a.N_I == b.N_I);
        CHECK(a.R_E == b.R_E);
        CHECK(a.R_I == b.R_I);
        CHECK(b.N_E == r.N_E);
        CHECK(b.N_I == r.N_I);
    }
    CHECK(seq.final_state.rho_E == par.final_state.rho_E);
    CHECK(seq.final_state.rho_I == par.final_state.rho_I);
    REQUIRE(par.series.snapshots.size() == 1);
    CHECK(par.series.snapshots[0].t == doctest::Approx(0.02).epsilon(1e-14));
}

TEST_CASE("sample times increase and mass plus refractory stays at one") {
    const auto r = simulate(short_two_population_run());
    REQUIRE(r.series.samples.size() >= 5);
    for (std::size_t k = 1; k < r.series.samples.size(); ++k)
        CHECK(r.series.samples[k].t > r.series.samples[k - 1].t);
    for (const auto& s : r.series.samples) {
        CHECK(std::abs(s.mass_E + s.R_E - 1.0) < 1e-6);
        CHECK(std::abs(s.mass_I + s.R_I - 1.0) < 1e-6);
    }
}

TEST_CASE("discharge integral follows the sampled rate on a smooth run") {
    const auto r = simulate(short_two_population_run());
    const auto& smp = r.series.samples;
    const auto& dis = r.series.discharged_E;
    REQUIRE(dis.size() == smp.size());
    CHECK(dis.front() == 0.0);
    double trapezoid = 0.0;
    for (std::size_t k = 1; k < smp.size(); ++k)
        trapezoid += 0.5 * (smp[k].t - smp[k - 1].t) * (smp[k].N_E + smp[k - 1].N_E);
    CHECK(dis.back() == doctest::Approx(trapezoid).epsilon(0.02));
}

TEST_CASE("periodic cycle mean uses the discharge integral when present") {
    const double w = 2.0 * std::numbers::pi / 0.25;
    auto s = synthetic(5.0, 0.01, [&](double t) { return 2.0 + std::sin(w * t); });
    for (const auto& smp : s.samples)
        s.discharged_E.push_back(2.0 * smp.t + (1.0 - std::cos(w * smp.t)) / w + 0.5 * smp.t);
    const auto out = classify_outcome(s);
    REQUIRE(out.kind == OutcomeKind::Periodic);
    // the integral carries an extra 0.5 t the samples do not show
    CHECK(out.cycle_mean_N == doctest::Approx(2.5).epsilon(1e-9));
}

TEST_CASE("fast ratio closure drives R toward tau N") {
    // tau -> 0 sanity: with M = R / tau the compartment tracks tau N within a few tau.
    RunConfig c;
    c.one.b = 0.5;
    c.one.tau = 0.002;
    c.initial.kind = InitialKind::SteadyRoot;
    c.initial.perturbation = -0.05;  // moves 5% of the density into R
    c.grid.n_cells = 400;
    c.t_end = 0.3;
    c.output_interval = 0.05;
    const auto r = simulate(c);
    const Sample& last = r.series.samples.back();
    CHECK(last.R_E == doctest::Approx(c.one.tau * last.N_E).epsilon(0.02));
}

TEST_CASE("blow-up comes sooner as the initial spike approaches V_F") {
    std::vector<double> t_star;
    for (double v0 : {1.8, 1.86, 1.92}) {
        RunConfig c;
        c.one.b = 0.5;
        c.one.refractory_mode = RefractoryMode::None;
        c.initial.E = {v0, 0.0003, 0.0};
        c.t_end = 1.0;
        const auto r = simulate(c);
        REQUIRE(r.outcome.kind == OutcomeKind::Blowup);
        t_star.push_back(r.outcome.t_star);
    }
    CHECK(t_star[0] > t_star[1]);
    CHECK(t_star[1] > t_star[2]);
}
