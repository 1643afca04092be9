// Zone decomposition of the (t, r) phase plane: classification thresholds,
// separating-line roots, traversal order, and diagnostics.
#include <catch_amalgamated.hpp>

#include <cmath>
#include <map>

#include "viscowave/phase_space.hpp"

using namespace vw;

namespace {

// Traversal position of a label with growing t at fixed r, per regime.
int zone_index(Regime rg, ZoneLabel z) {
    using Z = ZoneLabel;
    switch (rg) {
        case Regime::A:
            if (z == Z::PseudoDifferential) return 0;
            if (z == Z::Elliptic) return 1;
            break;
        case Regime::B:
        case Regime::C:
        case Regime::D:
            if (z == Z::Elliptic) return 0;
            if (z == Z::Reduced) return 1;
            if (z == Z::Hyperbolic) return 2;
            break;
        case Regime::E:
            if (z == Z::Hyperbolic) return 0;
            if (z == Z::Reduced) return 1;
            if (z == Z::PseudoDifferential) return 2;
            if (z == Z::Elliptic) return 3;
            break;
        default: break;
    }
    return -1;
}

}  // namespace

TEST_CASE("has_zone_geometry covers exactly the five decay regimes") {
    CHECK(has_zone_geometry(Regime::A));
    CHECK(has_zone_geometry(Regime::B));
    CHECK(has_zone_geometry(Regime::C));
    CHECK(has_zone_geometry(Regime::D));
    CHECK(has_zone_geometry(Regime::E));
    CHECK(!has_zone_geometry(Regime::ScaleInvariant));
    CHECK(!has_zone_geometry(Regime::Custom));
}

TEST_CASE("theta matches its defining formula") {
    Coefficient c = parse_coefficient("power:-0.5");
    for (double t : {0.0, 1.0, 10.0}) {
        for (double r : {0.1, 1.0, 4.0}) {
            double h = 1.0 - 0.5 * c.g1(t);
            double want = 1.0 - sq(c.g(t) * r) / (4.0 * h);
            CHECK(std::abs(theta(c, t, r) - want) < 1e-14 * std::max(1.0, std::abs(want)));
        }
    }
}

TEST_CASE("curve_names per regime") {
    CHECK(curve_names(Regime::A) == std::vector<std::string>{"t_xi"});
    CHECK(curve_names(Regime::B) == std::vector<std::string>{"t_xi1", "t_xi2"});
    CHECK(curve_names(Regime::C) == std::vector<std::string>{"t_xi1", "t_xi2"});
    CHECK(curve_names(Regime::D) == std::vector<std::string>{"t_xi1", "t_xi2"});
    CHECK(curve_names(Regime::E) == std::vector<std::string>{"t_xi1", "t_xi2", "t_xi3"});
    CHECK(curve_names(Regime::Custom).empty());
    CHECK(curve_names(Regime::ScaleInvariant).empty());
}

TEST_CASE("separating lines solve their defining thresholds to 1e-10") {
    ZoneConstants zc;
    struct Case {
        const char* spec;
        Regime rg;
        std::vector<double> rs;
    };
    // r values chosen so every curve crosses strictly inside (0, t_max).
    std::vector<Case> cases = {
        {"exp3", Regime::A, {0.3, 1.0, 4.0}},
        {"exp_neg", Regime::B, {150.0, 2000.0}},
        {"power:-0.5", Regime::D, {3.0, 8.0, 30.0}},
        {"power:0.5", Regime::E, {0.5, 0.9, 1.4}},
    };
    for (const auto& cs : cases) {
        Coefficient c = parse_coefficient(cs.spec);
        for (double r : cs.rs) {
            for (const auto& name : curve_names(cs.rg)) {
                INFO(cs.spec << " " << name << " r=" << r);
                double t = separating_line(cs.rg, c, name, r, zc);
                REQUIRE(t > 0.0);
                REQUIRE(t < zc.t_max);
                // Residual of the defining equation at the root.
                double resid = 0.0;
                if (cs.rg == Regime::A) {
                    resid = c.G_half(t) * r * r - zc.N;
                } else if (cs.rg == Regime::B || cs.rg == Regime::C) {
                    double thr = (name == "t_xi1") ? zc.N : zc.eps;
                    resid = c.g(t) * r - thr;
                } else {
                    double thr;
                    if (cs.rg == Regime::D) {
                        thr = (name == "t_xi1") ? -0.25 : 0.25;
                    } else {
                        thr = (name == "t_xi1") ? -zc.N : (name == "t_xi2" ? -0.25 : 0.25);
                    }
                    resid = theta(c, t, r) - thr;
                }
                CHECK(std::abs(resid) <= 1e-10 * std::max(1.0, std::abs(zc.N)));
            }
        }
    }
}

TEST_CASE("classification flips across each separating line") {
    ZoneConstants zc;
    using Z = ZoneLabel;
    struct Flip {
        const char* spec;
        Regime rg;
        const char* name;
        double r;
        Z before, after;
    };
    std::vector<Flip> flips = {
        {"exp3", Regime::A, "t_xi", 1.0, Z::PseudoDifferential, Z::Elliptic},
        {"exp_neg", Regime::B, "t_xi1", 2000.0, Z::Elliptic, Z::Reduced},
        {"exp_neg", Regime::B, "t_xi2", 2000.0, Z::Reduced, Z::Hyperbolic},
        {"power:-0.5", Regime::D, "t_xi1", 8.0, Z::Elliptic, Z::Reduced},
        {"power:-0.5", Regime::D, "t_xi2", 8.0, Z::Reduced, Z::Hyperbolic},
        {"power:0.5", Regime::E, "t_xi1", 1.2, Z::PseudoDifferential, Z::Elliptic},
        {"power:0.5", Regime::E, "t_xi2", 1.2, Z::Reduced, Z::PseudoDifferential},
        {"power:0.5", Regime::E, "t_xi3", 1.2, Z::Hyperbolic, Z::Reduced},
    };
    for (const auto& f : flips) {
        INFO(f.spec << " " << f.name << " r=" << f.r);
        Coefficient c = parse_coefficient(f.spec);
        double t = separating_line(f.rg, c, f.name, f.r, zc);
        REQUIRE(t > 0.0);
        double lo = t * (1.0 - 1e-9);
        double hi = t * (1.0 + 1e-9);
        CHECK(classify(f.rg, c, lo, f.r, zc) == f.before);
        CHECK(classify(f.rg, c, hi, f.r, zc) == f.after);
    }
}

TEST_CASE("zone traversal along growing t is one-directional without skips") {
    ZoneConstants zc;
    struct Case {
        const char* spec;
        Regime rg;
        double r;
    };
    std::vector<Case> cases = {
        {"exp3", Regime::A, 0.7},          {"exp_neg", Regime::B, 500.0},
        {"exp_negexp", Regime::C, 800.0},  {"power:-0.5", Regime::D, 10.0},
        {"power:0.5", Regime::E, 1.5},     {"t_over_log", Regime::E, 0.4},
    };
    for (const auto& cs : cases) {
        Coefficient c = parse_coefficient(cs.spec);
        int prev = -1;
        int transitions = 0;
        for (double t : logspace(1e-3, 1e5, 4000)) {
            int idx = zone_index(cs.rg, classify(cs.rg, c, t, cs.r, zc));
            INFO(cs.spec << " t=" << t);
            REQUIRE(idx >= 0);  // label is one of the regime's zones
            if (prev >= 0) {
                CHECK(idx >= prev);            // never moves backwards
                CHECK(idx - prev <= 1);        // never skips the band between
                if (idx != prev) ++transitions;
            }
            prev = idx;
        }
        INFO(cs.spec);
        CHECK(transitions >= 1);  // the sweep actually crosses zone boundaries
    }
}

TEST_CASE("separating_line reports 0 when the threshold is already passed at t=0") {
    // exp_neg: g(0) r = 5 is already below N = 100, so the elliptic zone is
    // empty at this frequency and the boundary collapses to the axis.
    Coefficient en = parse_coefficient("exp_neg");
    CHECK(separating_line(Regime::B, en, "t_xi1", 5.0) == 0.0);
    // power:-0.5 at small r starts hyperbolic: both curves sit at 0.
    Coefficient pm = parse_coefficient("power:-0.5");
    CHECK(separating_line(Regime::D, pm, "t_xi1", 0.5) == 0.0);
    CHECK(separating_line(Regime::D, pm, "t_xi2", 0.5) == 0.0);
}

TEST_CASE("separating_line throws NoRootError when the threshold is never reached") {
    // power_cd: G_half ~ t^3/6, so tiny r never reaches G_half r^2 = N
    // inside the horizon.
    Coefficient pc = parse_coefficient("power_cd:2");
    CHECK_THROWS_AS(separating_line(Regime::A, pc, "t_xi", 1e-9), NoRootError);
    // power:0.5 at small r: Theta stays above -N through t_max.
    Coefficient pe = parse_coefficient("power:0.5");
    CHECK_THROWS_AS(separating_line(Regime::E, pe, "t_xi1", 1e-3), NoRootError);
}

TEST_CASE("zone API validates inputs and regime pairing") {
    Coefficient e3 = parse_coefficient("exp3");
    Coefficient cbad = parse_coefficient("const:1");

    CHECK_THROWS_AS(classify(Regime::A, e3, -1.0, 1.0), ZoneError);
    CHECK_THROWS_AS(classify(Regime::A, e3, 1.0, 0.0), ZoneError);
    CHECK_THROWS_AS(classify(Regime::A, e3, 1.0, -2.0), ZoneError);

    // Regime mismatch between request and coefficient tag.
    Coefficient en = parse_coefficient("exp_neg");
    CHECK_THROWS_AS(classify(Regime::A, en, 1.0, 1.0), ZoneError);
    CHECK_THROWS_AS(separating_line(Regime::D, e3, "t_xi1", 1.0), ZoneError);

    // B and C share their geometry, so the pairing is interchangeable.
    Coefficient eg = parse_coefficient("exp_negexp");
    CHECK_NOTHROW(classify(Regime::B, eg, 1.0, 50.0));
    CHECK_NOTHROW(classify(Regime::C, en, 1.0, 50.0));

    // Custom-tagged coefficients pass the pairing gate but have no geometry.
    CHECK_THROWS_AS(classify(Regime::Custom, cbad, 1.0, 1.0), ZoneError);
    CHECK_THROWS_AS(separating_line(Regime::Custom, cbad, "t_xi", 1.0), ZoneError);

    // Unknown curve names.
    CHECK_THROWS_AS(separating_line(Regime::A, e3, "t_xi9", 1.0), ZoneError);
    CHECK_THROWS_AS(separating_line(Regime::B, en, "t_xi", 1.0), ZoneError);

    // Constant validation.
    ZoneConstants bad;
    bad.N = -1.0;
    CHECK_THROWS_AS(classify(Regime::A, e3, 1.0, 1.0, bad), ZoneError);
    bad = ZoneConstants{};
    bad.eps = 1.5;
    CHECK_THROWS_AS(classify(Regime::A, e3, 1.0, 1.0, bad), ZoneError);
    bad = ZoneConstants{};
    bad.eps = 0.5;
    bad.N = 0.4;
    CHECK_THROWS_AS(classify(Regime::A, e3, 1.0, 1.0, bad), ZoneError);
    bad = ZoneConstants{};
    bad.t_max = 0.0;
    CHECK_THROWS_AS(separating_line(Regime::A, e3, "t_xi", 1.0, bad), ZoneError);
}

TEST_CASE("make_separating_lines bundles every curve with its threshold") {
    ZoneConstants zc;
    Coefficient pe = parse_coefficient("power:0.5");
    SeparatingLines lines = make_separating_lines(Regime::E, pe, zc);
    REQUIRE(lines.curves.size() == 3);
    CHECK(lines.regime == Regime::E);
    CHECK(lines.curves[0].name == "t_xi1");
    CHECK(lines.curves[0].threshold == -zc.N);
    CHECK(lines.curves[1].threshold == -0.25);
    CHECK(lines.curves[2].threshold == 0.25);
    // The baked solver agrees with the free function.
    double r = 2.0;
    CHECK(lines.curves[1].t_of_r(r) == separating_line(Regime::E, pe, "t_xi2", r, zc));

    Coefficient e3 = parse_coefficient("exp3");
    SeparatingLines la = make_separating_lines(Regime::A, e3, zc);
    REQUIRE(la.curves.size() == 1);
    CHECK(la.curves[0].name == "t_xi");
    CHECK(la.curves[0].threshold == zc.N);
}

TEST_CASE("region_boundary_times finds the sign changes of the reduced symbol") {
    // power:0.5 at r=1: q(t) = 1 - (1+t)/4 - (1+t)^{-1/2}/4 starts positive,
    // decreases, crosses once.
    Coefficient pe = parse_coefficient("power:0.5");
    auto roots = region_boundary_times(pe, 1.0);
    REQUIRE(roots.size() == 1);
    double t0 = roots[0];
    double q = 1.0 - 0.25 * sq(pe.g(t0) * 1.0) - 0.5 * pe.g1(t0);
    CHECK(std::abs(q) < 1e-9);

    // const:1 keeps q constant: no crossing on either side of zero.
    Coefficient c1 = parse_coefficient("const:1");
    CHECK(region_boundary_times(c1, 3.0).empty());   // q = -5/4 throughout
    CHECK(region_boundary_times(c1, 1.0).empty());   // q = +3/4 throughout

    CHECK_THROWS_AS(region_boundary_times(pe, -1.0), ZoneError);
    CHECK_THROWS_AS(region_boundary_times(pe, 1.0, {}, 1), ZoneError);
}
