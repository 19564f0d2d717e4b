#include <doctest.h>

#include "nsshell/errors.hpp"
#include "test_helpers.hpp"

using namespace nsshell;
using namespace nsshell::test;

TEST_CASE("sphere spectrum at cutoff 3") {
    auto table = sphere_table(3.0);
    CHECK(table.size() == 9);  // l = 0, 1, 2
    CHECK(table.lambda1 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    int l0 = 0, l1 = 0, l2 = 0;
    for (const Mode& m : table.modes) {
        if (m.s == 0.0) ++l0;
        if (std::abs(m.s - std::sqrt(2.0)) < 1e-12) ++l1;
        if (std::abs(m.s - std::sqrt(6.0)) < 1e-12) ++l2;
    }
    CHECK(l0 == 1);
    CHECK(l1 == 3);
    CHECK(l2 == 5);
    // shell map: {sqrt2: l=1 modes, 1+sqrt2: l=2 modes}
    REQUIRE(table.shells.size() == 2);
    CHECK(table.shells.at(0).size() == 3);
    CHECK(table.shells.at(1).size() == 5);
    CHECK(table.shell_key(0) == doctest::Approx(std::sqrt(2.0)));
    CHECK(table.shell_key(1) == doctest::Approx(1.0 + std::sqrt(2.0)));
}

TEST_CASE("torus lattice enumeration") {
    // below 2 pi sqrt(2): constant plus the four |n| = 1 modes
    auto small = torus_table(kTwoPi * 1.2);
    CHECK(small.size() == 5);
    // 2 pi sqrt(2) < 2 pi * 1.5, so the diagonal wavevectors come in as well
    auto bigger = torus_table(kTwoPi * 1.5);
    CHECK(bigger.size() == 9);
    for (const Mode& m : bigger.modes) {
        if (m.s == 0.0) continue;
        double expect = kTwoPi * std::hypot(double(m.a), double(m.b));
        CHECK(m.s == doctest::Approx(expect).epsilon(1e-15));
    }
    CHECK(bigger.lambda1 == doctest::Approx(kTwoPi));
}

TEST_CASE("shell_of") {
    auto sph = sphere_table(3.0);
    CHECK(sph.shell_of(std::sqrt(6.0)).value() == 1);  // in [1+sqrt2, 2+sqrt2)
    CHECK(sph.shell_of(std::sqrt(2.0)).value() == 0);  // lambda1 opens its own shell
    CHECK_FALSE(sph.shell_of(0.0).has_value());        // the constant has no shell
    CHECK_THROWS_AS(sph.shell_of(-1.0), DomainError);

    auto tor = torus_table(kTwoPi * 1.5);
    CHECK(tor.shell_of(kTwoPi).value() == 0);  // the lowest shell contains lambda1
    CHECK(tor.shell_key(tor.shell_of(kTwoPi).value()) == doctest::Approx(kTwoPi));
}

TEST_CASE("configuration errors") {
    CHECK_THROWS_AS(sphere_table(1.0), ConfigError);            // below lambda1
    CHECK_THROWS_AS(sphere_table(std::sqrt(2.0)), ConfigError); // only the constant retained
    CHECK_THROWS_AS(torus_table(2.0), ConfigError);
}

TEST_CASE("orthonormality by quadrature") {
    for (auto table : {sphere_table(5.0), torus_table(kTwoPi * 2.3)}) {
        Transform tr(table);
        std::vector<std::vector<double>> vals;
        for (ModeId i = 0; i < table.size(); ++i) vals.push_back(tr.mode_values(i));
        double worst = 0.0;
        for (ModeId i = 0; i < table.size(); ++i)
            for (ModeId j = i; j < table.size(); ++j) {
                double ip = tr.inner(vals[i], vals[j]);
                worst = std::max(worst, std::abs(ip - (i == j ? 1.0 : 0.0)));
            }
        CHECK(worst < 1e-10);
    }
}

TEST_CASE("eigen-residual by quadrature") {
    // the pointwise Laplacian assembled from second-derivative synthesis must
    // reproduce s^2 delta_ij against the basis
    for (auto table : {sphere_table(4.0), torus_table(kTwoPi * 1.6)}) {
        Transform tr(table);
        double worst = 0.0;
        for (ModeId i = 0; i < table.size(); ++i) {
            std::vector<double> c(table.size(), 0.0);
            c[i] = 1.0;
            std::vector<double> h11, h12, h22;
            tr.synthesize_hessian(c, h11, h12, h22);
            std::vector<double> neg_lap(tr.n_points());
            for (std::size_t p = 0; p < neg_lap.size(); ++p) neg_lap[p] = -(h11[p] + h22[p]);
            for (ModeId j = 0; j < table.size(); ++j) {
                double ip = tr.inner(neg_lap, tr.mode_values(j));
                double expect = i == j ? table.modes[i].s * table.modes[i].s : 0.0;
                worst = std::max(worst, std::abs(ip - expect));
            }
        }
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("fingerprints and determinism") {
    auto a = sphere_table(4.0);
    auto b = sphere_table(4.0);
    CHECK(a.fingerprint() == b.fingerprint());
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.modes[i].s == b.modes[i].s);
        CHECK(a.modes[i].a == b.modes[i].a);
        CHECK(a.modes[i].b == b.modes[i].b);
    }
}

TEST_CASE("shells partition the nonzero modes") {
    for (auto table : {sphere_table(7.0), torus_table(kTwoPi * 2.7)}) {
        std::size_t constants = 0, in_shells = 0;
        for (const Mode& m : table.modes) {
            if (m.s == 0.0) {
                ++constants;
                CHECK(m.shell == -1);
                continue;
            }
            CHECK(m.s < table.cutoff);
            CHECK(m.shell == *table.shell_of(m.s));
            CHECK(m.s >= table.shell_key(m.shell));
            CHECK(m.s < table.shell_key(m.shell) + 1.0);
        }
        for (const auto& [n, ids] : table.shells) in_shells += ids.size();
        CHECK(constants == 1);
        CHECK(in_shells + 1 == table.size());
    }
}
