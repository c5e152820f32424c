#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "curvecast/curve_model.hpp"
#include "curvecast/errors.hpp"

using namespace curvecast;

namespace {

// Central difference of eval in one parameter, step scaled to its magnitude.
double fd_b1(const CurveParams& p, double x) {
    const double h = 1e-6 * std::max(1.0, std::abs(p.b1()));
    return (eval(CurveParams(p.b1() + h, p.b2()), x) - eval(CurveParams(p.b1() - h, p.b2()), x)) / (2 * h);
}

double fd_b2(const CurveParams& p, double x) {
    const double h = 1e-6 * std::max(1.0, std::abs(p.b2()));
    return (eval(CurveParams(p.b1(), p.b2() + h), x) - eval(CurveParams(p.b1(), p.b2() - h), x)) / (2 * h);
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

} // namespace

TEST_CASE("CurveParams rejects parameters outside the valid sign region") {
    CHECK_NOTHROW(CurveParams(-200, -1));
    CHECK_NOTHROW(CurveParams(0, -1));
    CHECK_THROWS_AS(CurveParams(1, -1), ContractError);
    CHECK_THROWS_AS(CurveParams(-1, 0), ContractError);
    CHECK_THROWS_AS(CurveParams(-1, 0.5), ContractError);
    CHECK_THROWS_AS(CurveParams(NAN, -1), ContractError);
}

TEST_CASE("eval closed forms") {
    CHECK(eval(CurveParams(-200, -1), 10) == doctest::Approx(80.0).epsilon(1e-15));
    CHECK(eval(CurveParams(0, -1), 7) == 100.0);
    CHECK(eval(CurveParams(-50, -1), 1) == 50.0);
    // Unclamped for small x.
    CHECK(eval(CurveParams(-200, -1), 1) == -100.0);
    CHECK_THROWS_AS(eval(CurveParams(-200, -1), 0), DomainError);
    CHECK_THROWS_AS(eval(CurveParams(-200, -1), -3), DomainError);
}

TEST_CASE("jacobian_row closed forms") {
    const auto row = jacobian_row(CurveParams(-200, -1), 10);
    CHECK(row.d_b1 == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(row.d_b2 == doctest::Approx(-46.0517).epsilon(1e-6));

    const auto at_one = jacobian_row(CurveParams(-37.5, -0.3), 1);
    CHECK(at_one.d_b1 == 1.0);
    CHECK(at_one.d_b2 == 0.0);

    CHECK(jacobian_row(CurveParams(0, -0.3), 50).d_b2 == 0.0);
    CHECK_THROWS_AS(jacobian_row(CurveParams(-1, -1), 0), DomainError);
}

TEST_CASE("jacobian_row matches central finite differences") {
    const CurveParams p(-200, -1);
    const auto row = jacobian_row(p, 10);
    CHECK(rel_err(row.d_b1, fd_b1(p, 10)) <= 1e-6);
    CHECK(rel_err(row.d_b2, fd_b2(p, 10)) <= 1e-6);

    std::mt19937_64 gen(20260101);
    std::uniform_real_distribution<double> lb1(std::log(1.0), std::log(5000.0));
    std::uniform_real_distribution<double> ub2(-2.0, -0.05);
    std::uniform_real_distribution<double> lx(std::log(1.5), std::log(1e5));
    for (int samples = 0; samples < 100;) {
        const CurveParams q(-std::exp(lb1(gen)), ub2(gen));
        const double x = std::exp(lx(gen));
        // Outside this region the +100 offset swamps a 1e-6 step in eval.
        if (eval(q, x) > 99.0 || std::pow(x, q.b2()) < 0.05) continue;
        ++samples;
        const auto r = jacobian_row(q, x);
        CHECK(r.d_b1 > 0.0);
        CHECK(rel_err(r.d_b1, fd_b1(q, x)) <= 1e-6);
        CHECK(rel_err(r.d_b2, fd_b2(q, x)) <= 1e-6);
    }
}

TEST_CASE("invert_for_size") {
    const CurveParams p(-200, -1);
    CHECK(invert_for_size(p, 99.5).size == doctest::Approx(400.0).epsilon(1e-13));
    CHECK(invert_for_size(p, 80).size == doctest::Approx(10.0).epsilon(1e-13));
    CHECK(invert_for_size(p, 80).status == SizeStatus::ok);

    SUBCASE("sub-unit sizes are returned with a warning status") {
        const auto r = invert_for_size(p, -150);
        CHECK(r.size == doctest::Approx(0.8));
        CHECK(r.status == SizeStatus::sub_unit_size);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(invert_for_size(CurveParams(0, -1), 90), FlatCurveError);
        CHECK_THROWS_AS(invert_for_size(p, 100), UnreachableTargetError);
        CHECK_THROWS_AS(invert_for_size(p, 100.5), UnreachableTargetError);
    }
    SUBCASE("round trip over log-spaced sizes") {
        const std::vector<CurveParams> curves{CurveParams(-200, -1), CurveParams(-385.7, -0.8),
                                              CurveParams(-12, -0.25)};
        for (const auto& c : curves) {
            for (int i = 0; i < 50; ++i) {
                const double x = std::pow(10.0, std::log10(2.0) + (5.0 - std::log10(2.0)) * i / 49.0);
                CHECK(rel_err(invert_for_size(c, eval(c, x)).size, x) <= 1e-9);
            }
        }
    }
}

TEST_CASE("curve is increasing and bounded by the asymptote") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> ub1(-5000, -0.1);
    std::uniform_real_distribution<double> ub2(-3.0, -0.01);
    std::uniform_real_distribution<double> lx(0.0, std::log(1e6));
    for (int i = 0; i < 200; ++i) {
        const CurveParams p(ub1(gen), ub2(gen));
        double x1 = std::exp(lx(gen));
        double x2 = std::exp(lx(gen));
        if (x1 == x2) continue;
        if (x1 > x2) std::swap(x1, x2);
        CHECK(eval(p, x2) >= eval(p, x1));
        // Strict once the change is resolvable in double precision.
        if (x2 / x1 > 1.001 && 100 - eval(p, x1) > 1e-6) CHECK(eval(p, x2) > eval(p, x1));
        CHECK(eval(p, x2) <= 100.0);
    }
    // Gets arbitrarily close: solve for a deficit below epsilon.
    const CurveParams p(-300, -0.4);
    for (double eps : {1.0, 1e-2, 1e-4}) {
        const double x = invert_for_size(p, 100 - eps / 2).size;
        CHECK(100 - eval(p, x) < eps);
    }
}
