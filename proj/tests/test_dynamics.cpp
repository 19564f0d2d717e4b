#include <doctest.h>

#include "nsshell/errors.hpp"
#include "test_helpers.hpp"

using namespace nsshell;
using namespace nsshell::test;

namespace {

RunConfig config_for(const SpectrumTable& table, LaplacianVariant v, double nu, double dt,
                     double t_end, TimeScheme scheme = TimeScheme::IntegratingFactorRk4) {
    RunConfig rc;
    rc.manifold = {table.kind, v, table.cutoff, table.quad_degree};
    rc.nu = nu;
    rc.dt = dt;
    rc.t_end = t_end;
    rc.scheme = scheme;
    return rc;
}

}  // namespace

TEST_CASE("rhs on single modes") {
    SUBCASE("torus single-mode advection vanishes") {
        auto table = torus_table(kTwoPi * 1.6);
        auto triads = build_triads(table);
        auto rc = config_for(table, LaplacianVariant::Hodge, 0.0, 1e-3, 0.0);
        GalerkinRhs sys(table, triads, rc);
        SpectralField f(table);
        f[mode_by_label(table, 1, 0, 0)] = 1.0;
        auto d = sys(make_state(table, f));
        CHECK(d.domega.norm_l2() == 0.0);
    }
    SUBCASE("sphere single-mode advection vanishes") {
        auto table = sphere_table(4.0);
        auto triads = build_triads(table);
        auto rc = config_for(table, LaplacianVariant::Hodge, 0.0, 1e-3, 0.0);
        GalerkinRhs sys(table, triads, rc);
        SpectralField f(table);
        f[mode_by_label(table, 2, 1)] = 1.0;
        auto d = sys(make_state(table, f));
        CHECK(d.domega.norm_l2() < 1e-12);
    }
    SUBCASE("pure diffusion eigenmode") {
        auto table = torus_table(kTwoPi * 1.6);
        auto triads = build_triads(table);
        auto rc = config_for(table, LaplacianVariant::Hodge, 0.01, 1e-3, 0.0);
        GalerkinRhs sys(table, triads, rc);
        SpectralField f(table);
        ModeId id = mode_by_label(table, 1, 0, 0);
        f[id] = 1.0;
        auto d = sys(make_state(table, f));
        CHECK(d.domega[id] ==
              doctest::Approx(-0.01 * 4.0 * std::numbers::pi * std::numbers::pi).epsilon(1e-14));
    }
}

TEST_CASE("step behavior") {
    auto table = torus_table(kTwoPi * 1.6);
    auto triads = build_triads(table);

    SUBCASE("integrating factor handles the linear part exactly") {
        auto rc = config_for(table, LaplacianVariant::Hodge, 0.3, 0.05, 0.0);
        GalerkinRhs sys(table, triads, rc);
        SpectralField f(table);
        ModeId id = mode_by_label(table, 1, 0, 0);
        f[id] = 2.0;
        auto next = step(make_state(table, f), sys, 0.05);
        double expect = 2.0 * std::exp(-0.3 * 4.0 * std::numbers::pi * std::numbers::pi * 0.05);
        CHECK(next.omega[id] == expect);  // bit-exact: one exp, one multiply
    }

    SUBCASE("dt = 0 returns the state unchanged") {
        auto rc = config_for(table, LaplacianVariant::Hodge, 0.3, 0.0, 0.0);
        GalerkinRhs sys(table, triads, rc);
        auto s = make_state(table, random_mean_zero(table, 9));
        auto next = step(s, sys, 0.0);
        CHECK(next.omega.coeffs() == s.omega.coeffs());
        CHECK(next.t == s.t);
    }

    SUBCASE("RK4 order: halving dt cuts the single-step energy drift by >= 16x") {
        // the amplitude drives the advection rate high enough that the drift sits
        // far above rounding at both step sizes
        auto big = torus_table(2.0 * kTwoPi);
        auto btriads = build_triads(big);
        auto rc = config_for(big, LaplacianVariant::Hodge, 0.0, 1e-2, 0.0);
        GalerkinRhs sys(big, btriads, rc);
        auto s0 = make_state(big, random_mean_zero(big, 21, 100.0));
        double e0 = velocity_energy(s0.omega, s0.harmonic);
        auto drift = [&](double dt) {
            auto s1 = step(s0, sys, dt);
            return std::abs(velocity_energy(s1.omega, s1.harmonic) - e0);
        };
        double d1 = drift(2e-3);
        double d2 = drift(1e-3);
        REQUIRE(d2 > 1e-13);  // above rounding, so the ratio is meaningful
        CHECK(d1 / d2 >= 16.0);
    }

    SUBCASE("imex euler decays stably") {
        auto rc = config_for(table, LaplacianVariant::Hodge, 1.0, 0.5, 0.0, TimeScheme::ImexEuler);
        GalerkinRhs sys(table, triads, rc);
        SpectralField f(table);
        ModeId id = mode_by_label(table, 1, 0, 0);
        f[id] = 1.0;
        auto next = step(make_state(table, f), sys, 0.5);
        double expect = 1.0 / (1.0 + 0.5 * 4.0 * std::numbers::pi * std::numbers::pi);
        CHECK(next.omega[id] == doctest::Approx(expect).epsilon(1e-14));
    }

    SUBCASE("blow-up detection") {
        auto rc = config_for(table, LaplacianVariant::Hodge, 0.0, 1.0, 3.0);
        GalerkinRhs sys(table, triads, rc);
        auto s = make_state(table, random_mean_zero(table, 2, 1e28));
        CHECK_THROWS_AS(
            [&] {
                GalerkinState cur = s;
                for (int i = 0; i < 200; ++i) cur = step(cur, sys, 1.0);
            }(),
            BlowupError);
    }
}

TEST_CASE("exact decay oracle") {
    // omega(t) = omega(0) exp(-nu lambda_eff t) with lambda_eff = s^2 - c
    auto sph = sphere_table(4.0);
    auto triads = build_triads(sph);
    for (auto variant : {LaplacianVariant::Hodge, LaplacianVariant::Bochner,
                         LaplacianVariant::Deformation}) {
        ManifoldConfig mc{ManifoldKind::Sphere, variant, 4.0, 0};
        auto rc = config_for(sph, variant, 0.7, 1e-3, 0.1);
        GalerkinRhs sys(sph, triads, rc);
        SpectralField f(sph);
        ModeId id = mode_by_label(sph, 2, -1);
        f[id] = 0.8;
        auto rr = run(rc, make_state(sph, f), sys);
        double lam_eff = 6.0 - mc.ricci_shift();
        double expect = 0.8 * std::exp(-0.7 * lam_eff * 0.1);
        CHECK(std::abs(rr.final_state.omega[id] - expect) / expect < 1e-6);
    }
}

TEST_CASE("killing stationarity") {
    auto sph = sphere_table(4.0);
    auto triads = build_triads(sph);
    auto rc = config_for(sph, LaplacianVariant::Deformation, 1.0, 1e-2, 1.0);
    GalerkinRhs sys(sph, triads, rc);
    SpectralField f(sph);
    f[mode_by_label(sph, 1, 0)] = 1.0;
    f[mode_by_label(sph, 1, 1)] = -0.4;
    auto s0 = make_state(sph, f);
    auto rr = run(rc, s0, sys);
    for (std::size_t i = 0; i < f.size(); ++i)
        CHECK(std::abs(rr.final_state.omega.coeffs()[i] - f.coeffs()[i]) < 1e-10);
}

TEST_CASE("inviscid conservation and reproducibility") {
    auto table = torus_table(2.0 * kTwoPi);
    auto triads = build_triads(table);
    auto rc = config_for(table, LaplacianVariant::Hodge, 0.0, 1e-3, 0.05);
    GalerkinRhs sys(table, triads, rc);
    GalerkinState s0 = make_state(table, random_mean_zero(table, 31));
    s0.harmonic = {0.2, -0.1};
    auto r1 = run(rc, s0, sys);
    CHECK(std::abs(r1.records.back().energy - r1.records.front().energy) < 1e-12);
    CHECK(std::abs(r1.records.back().enstrophy - r1.records.front().enstrophy) < 1e-11);
    CHECK(r1.final_state.harmonic == s0.harmonic);  // mean momentum is steady

    // bit-identical reruns: the computable shadow of uniqueness
    auto r2 = run(rc, s0, sys);
    CHECK(r1.final_state.omega.coeffs() == r2.final_state.omega.coeffs());
    REQUIRE(r1.records.size() == r2.records.size());
    for (std::size_t i = 0; i < r1.records.size(); ++i)
        CHECK(r1.records[i].enstrophy == r2.records[i].enstrophy);
}

TEST_CASE("truncation consistency") {
    auto table = torus_table(kTwoPi * 2.3);
    auto triads = build_triads(table);

    SUBCASE("closed data agrees across truncations") {
        // single-mode data has an empty triad image
        RunConfig small = config_for(table, LaplacianVariant::Hodge, 0.01, 1e-3, 0.02);
        small.shells = {0};
        RunConfig big = small;
        big.shells = {};
        SpectralField f(table);
        ModeId id = mode_by_label(table, 1, 0, 0);
        f[id] = 1.0;
        GalerkinRhs sys_small(table, triads, small);
        GalerkinRhs sys_big(table, triads, big);
        GalerkinState st;
        st.omega = f;
        st.harmonic = {0.0, 0.0};
        st.shells = sys_small.shells();
        auto rs = run(small, st, sys_small);
        st.shells = sys_big.shells();
        auto rb = run(big, st, sys_big);
        CHECK(std::abs(rs.final_state.omega[id] - rb.final_state.omega[id]) < 1e-13);
    }

    SUBCASE("non-closed data diverges after t = 0") {
        // data on shells {0, 2} (q = 1 and q = 2) feeds q = 5 wavevectors such as
        // (1,0) + (1,1) = (2,1), which only the wider truncation retains
        RunConfig small = config_for(table, LaplacianVariant::Hodge, 0.0, 1e-3, 0.05);
        small.shells = {0, 2};
        RunConfig big = small;
        big.shells = {};
        SpectralField f(table);
        f[mode_by_label(table, 1, 0, 0)] = 1.0;
        f[mode_by_label(table, 1, 1, 0)] = 0.8;
        GalerkinState st;
        st.omega = f;
        st.harmonic = {0.0, 0.0};
        GalerkinRhs sys_small(table, triads, small);
        GalerkinRhs sys_big(table, triads, big);
        st.shells = sys_small.shells();
        auto rs = run(small, st, sys_small);
        st.shells = sys_big.shells();
        auto rb = run(big, st, sys_big);
        double diff = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i)
            diff = std::max(diff, std::abs(rs.final_state.omega.coeffs()[i] -
                                           rb.final_state.omega.coeffs()[i]));
        CHECK(diff > 1e-8);
    }
}

TEST_CASE("diagnostics") {
    auto sph = sphere_table(3.0);
    SpectralField f(sph);
    f[mode_by_label(sph, 1, 0)] = 1.0;
    auto rec = diagnostics(make_state(sph, f));
    CHECK(rec.enstrophy == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(rec.energy == doctest::Approx(0.5).epsilon(1e-15));

    auto tor = torus_table(kTwoPi * 1.2);
    GalerkinState ts = make_state(tor, SpectralField(tor));
    ts.harmonic = {1.0, 0.0};
    auto rec2 = diagnostics(ts);
    CHECK(rec2.energy == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(rec2.enstrophy == 0.0);

    // superposition adds by Parseval
    SpectralField g(tor);
    g[mode_by_label(tor, 1, 0, 0)] = 1.0;
    GalerkinState ts2 = make_state(tor, g);
    ts2.harmonic = {1.0, 0.0};
    auto rec3 = diagnostics(ts2);
    CHECK(rec3.energy ==
          doctest::Approx(1.0 + 1.0 / (4.0 * std::numbers::pi * std::numbers::pi))
              .epsilon(1e-14));
}

TEST_CASE("zero data stays zero") {
    auto table = torus_table(kTwoPi * 1.6);
    auto triads = build_triads(table);
    auto rc = config_for(table, LaplacianVariant::Hodge, 0.05, 1e-2, 0.1);
    GalerkinRhs sys(table, triads, rc);
    auto rr = run(rc, make_state(table, SpectralField(table)), sys);
    for (const auto& rec : rr.records) {
        CHECK(rec.energy == 0.0);
        CHECK(rec.enstrophy == 0.0);
        CHECK(rec.energy_residual == 0.0);
    }
}

TEST_CASE("monitor cadence") {
    auto table = torus_table(kTwoPi * 1.6);
    auto triads = build_triads(table);
    auto rc = config_for(table, LaplacianVariant::Hodge, 0.01, 1e-2, 0.1);
    rc.monitor_cadence = 5;
    GalerkinRhs sys(table, triads, rc);
    auto rr = run(rc, make_state(table, random_mean_zero(table, 3)), sys);
    CHECK(rr.records.size() == 3);  // t = 0, 0.05, 0.1
    CHECK(rr.records.back().t == doctest::Approx(0.1));
}
