#include <doctest.h>

#include <cmath>

#include <sgs/metrics.hpp>

#include "oracles.hpp"

using namespace sgs;
using sgs::testing::Gen;

TEST_CASE("perfect recovery and the null convention")
{
    Vector t(4);
    t << 1, 0, 2, 0;
    const auto c = confusion(t, t * 3.0);
    CHECK(c.fdr() == 0.0);
    CHECK(c.sensitivity() == 1.0);
    CHECK(c.f1() == 1.0);
    const auto null = confusion(Vector::Zero(4), Vector::Zero(4));
    CHECK(null.fp == 0);
    CHECK(null.selected() == 0);
    CHECK(null.fdr() == 0.0);
}

TEST_CASE("truth {1,2,3}, selection {2,3,4,5}")
{
    Vector t = Vector::Zero(6), e = Vector::Zero(6);
    t << 0, 1, 1, 1, 0, 0;
    e << 0, 0, 1, 1, 1, 1;
    const auto c = confusion(t, e);
    CHECK(c.tp == 2);
    CHECK(c.fp == 2);
    CHECK(c.fn == 1);
    CHECK(c.tn == 1);
    CHECK(c.fdr() == doctest::Approx(0.5));
    CHECK(c.sensitivity() == doctest::Approx(2.0 / 3.0));
    CHECK(c.f1() == doctest::Approx(4.0 / 7.0));
}

TEST_CASE("group metrics and coefficient errors")
{
    const auto part = GroupPartition::from_sizes(std::vector<std::size_t>{2, 2, 2});
    Vector t(6), e(6);
    t << 1, 0, 0, 0, 2, 2;
    e << 0, 1, 0.5, 0, 0, 0;
    const auto m = compute_metrics(t, e, part);
    CHECK(m.group.tp == 1);
    CHECK(m.group.fp == 1);
    CHECK(m.group.fn == 1);
    CHECK(m.group.total() == 3);
    CHECK(m.variable.total() == 6);
    CHECK(m.mse == doctest::Approx((1 + 1 + 0.25 + 4 + 4) / 6.0));
    CHECK(m.mae == doctest::Approx((1 + 1 + 0.5 + 2 + 2) / 6.0));
}

TEST_CASE("property: metric identities over random confusion counts")
{
    Gen gen(41);
    for (int rep = 0; rep < 10000; ++rep) {
        ConfusionCounts c{gen.integer(0, 30), gen.integer(0, 30), gen.integer(0, 30), gen.integer(0, 30)};
        if (c.tp + c.fp > 0) CHECK(c.fdr() + c.precision() == doctest::Approx(1.0));
        const double prec = c.precision(), sens = c.sensitivity();
        if (prec + sens > 0) CHECK(c.f1() == doctest::Approx(2 * prec * sens / (prec + sens)));
        CHECK(c.fdr() >= 0.0);
        CHECK(c.fdr() <= 1.0);
    }
}
