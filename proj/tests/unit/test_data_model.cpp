#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>

#include <sgs/csv.hpp>
#include <sgs/dataset.hpp>
#include <sgs/error.hpp>

#include "oracles.hpp"

using namespace sgs;
using sgs::testing::Gen;

namespace {

ErrorKind kind_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an sgs::Error");
    return ErrorKind::InvalidArgument;
}

std::filesystem::path temp_file(const std::string& name, const std::string& content)
{
    const auto dir = std::filesystem::temp_directory_path() / "sgs_unit";
    std::filesystem::create_directories(dir);
    const auto path = dir / name;
    std::ofstream(path) << content;
    return path;
}

} // namespace

TEST_CASE("partition from labels exposes members and sizes")
{
    const auto part = GroupPartition::from_labels({1, 0, 1, 2, 2, 2});
    CHECK(part.p() == 6);
    CHECK(part.m() == 3);
    CHECK(part.size(0) == 1);
    CHECK(part.size(1) == 2);
    CHECK(part.size(2) == 3);
    CHECK(part.group_of(2) == 1);
    const auto members = part.members(1);
    CHECK(std::vector<std::size_t>(members.begin(), members.end()) == std::vector<std::size_t>{0, 2});
    CHECK(part.max_size() == 3);
}

TEST_CASE("partition rejects empty labels, overlaps and gaps")
{
    CHECK(kind_of([] { GroupPartition::from_labels({0, 2, 2}); }) == ErrorKind::InvalidPartition);
    CHECK(kind_of([] { GroupPartition::from_members({{0, 1}, {1, 2}}, 3); }) == ErrorKind::InvalidPartition);
    CHECK(kind_of([] { GroupPartition::from_members({{0}, {2}}, 3); }) == ErrorKind::InvalidPartition);
    CHECK(kind_of([] { GroupPartition::from_members({{0, 1}, {}, {2}}, 3); }) == ErrorKind::InvalidPartition);
    CHECK(kind_of([] { GroupPartition::from_members({{0, 3}}, 3); }) == ErrorKind::InvalidPartition);
}

TEST_CASE("property: corrupted member lists are always rejected")
{
    Gen gen(11);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t p = gen.integer(2, 12);
        const std::size_t m = gen.integer(1, p);
        const auto part = gen.partition(p, m);
        std::vector<std::vector<std::size_t>> members;
        for (std::size_t g = 0; g < m; ++g) {
            auto s = part.members(g);
            members.emplace_back(s.begin(), s.end());
        }
        REQUIRE_NOTHROW(GroupPartition::from_members(members, p));
        auto corrupt = members;
        const std::size_t g = gen.integer(0, m - 1);
        if (gen.coin()) {
            // Duplicate a variable into another (or the same) group.
            const std::size_t h = gen.integer(0, m - 1);
            corrupt[h].push_back(corrupt[g].front());
        } else {
            // Drop a variable entirely.
            corrupt[g].pop_back();
            if (corrupt[g].empty()) corrupt.erase(corrupt.begin() + long(g));
        }
        CHECK_THROWS_AS(GroupPartition::from_members(corrupt, p), Error);
    }
}

TEST_CASE("dataset validates shapes and binomial responses")
{
    const auto part = GroupPartition::singletons(2);
    CHECK(kind_of([&] { GroupedDataset(Matrix::Zero(3, 2), Vector::Zero(2), part); }) ==
          ErrorKind::DimensionMismatch);
    CHECK(kind_of([&] { GroupedDataset(Matrix::Zero(3, 3), Vector::Zero(3), part); }) ==
          ErrorKind::DimensionMismatch);
    Vector y(3);
    y << 0, 1, 0.5;
    CHECK_THROWS_AS(GroupedDataset(Matrix::Zero(3, 2), y, part, Family::Binomial), Error);
    y[2] = 1;
    CHECK_NOTHROW(GroupedDataset(Matrix::Zero(3, 2), y, part, Family::Binomial));
}

TEST_CASE("standardize: symmetric column is scaled by one half")
{
    Matrix X(4, 1);
    X << 1, -1, 1, -1;
    const auto st = standardize(GroupedDataset(X, Vector::Zero(4), GroupPartition::singletons(1)));
    CHECK(st.record.column_centers[0] == doctest::Approx(0.0));
    CHECK(st.record.column_scales[0] == doctest::Approx(2.0));
    CHECK(st.data.X()(0, 0) == doctest::Approx(0.5));
    CHECK(st.data.X()(1, 0) == doctest::Approx(-0.5));
}

TEST_CASE("standardize: constant column is rejected")
{
    Matrix X(3, 2);
    X << 1, 4, 2, 4, 3, 4;
    const GroupedDataset d(X, Vector::Zero(3), GroupPartition::singletons(2));
    CHECK(kind_of([&] { standardize(d); }) == ErrorKind::ConstantColumn);
}

TEST_CASE("standardize: random columns have zero mean and unit norm")
{
    Gen gen(3);
    for (int rep = 0; rep < 20; ++rep) {
        const Matrix X = gen.normal_matrix(5, 3) * 3.0 + Matrix::Constant(5, 3, 7.0);
        const auto st = standardize(GroupedDataset(X, gen.normal_vector(5), GroupPartition::singletons(3)));
        for (Index j = 0; j < 3; ++j) {
            CHECK(std::abs(st.data.X().col(j).mean()) < 1e-12);
            CHECK(std::abs(st.data.X().col(j).norm() - 1.0) < 1e-12);
        }
        CHECK(std::abs(st.data.y().mean()) < 1e-12);
        // Round trip of the transform.
        Matrix back = st.data.X();
        for (Index j = 0; j < 3; ++j)
            back.col(j) = back.col(j) * st.record.column_scales[j] + Vector::Constant(5, st.record.column_centers[j]);
        CHECK((back - X).cwiseAbs().maxCoeff() <= 1e-12 * X.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("standardize: sqrt(n) convention")
{
    Gen gen(4);
    const Matrix X = gen.normal_matrix(9, 2);
    const auto st = standardize(GroupedDataset(X, gen.normal_vector(9), GroupPartition::singletons(2)),
                                ScaleConvention::SqrtN);
    CHECK(st.data.X().col(0).norm() == doctest::Approx(3.0));
}

TEST_CASE("unstandardize: identity record and null coefficients")
{
    StandardizationRecord identity{Vector::Zero(3), Vector::Ones(3), 0.0};
    Vector beta(3);
    beta << 1, -2, 3;
    const auto c = unstandardize_coefficients(beta, 0.5, identity);
    CHECK((c.beta - beta).norm() == 0.0);
    CHECK(c.intercept == 0.5);

    StandardizationRecord rec{Vector::Constant(3, 2.0), Vector::Constant(3, 4.0), 1.25};
    const auto null = unstandardize_coefficients(Vector::Zero(3), 0.0, rec);
    CHECK(null.beta.norm() == 0.0);
    CHECK(null.intercept == 1.25);
    CHECK_THROWS_AS(unstandardize_coefficients(Vector::Zero(2), 0.0, rec), Error);
}

TEST_CASE("property: predictions agree on both scales")
{
    Gen gen(5);
    for (int rep = 0; rep < 50; ++rep) {
        const Matrix X = gen.normal_matrix(20, 5) * gen.uniform(0.5, 5.0) + Matrix::Constant(20, 5, gen.normal());
        const GroupedDataset d(X, gen.normal_vector(20), GroupPartition::singletons(5));
        const auto st = standardize(d);
        const Vector beta_std = gen.normal_vector(5);
        const double int_std = gen.normal();
        const Vector pred_std = (st.data.X() * beta_std).array() + int_std + st.record.response_center;
        const auto c = unstandardize_coefficients(beta_std, int_std, st.record);
        const Vector pred = (X * c.beta).array() + c.intercept;
        CHECK((pred - pred_std).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("split: exhaustive, deterministic and sized by rounding")
{
    Gen gen(6);
    const GroupedDataset d(gen.normal_matrix(10, 2), gen.normal_vector(10), GroupPartition::singletons(2));
    const auto s1 = split(d, 0.5, 42);
    const auto s2 = split(d, 0.5, 42);
    CHECK(s1.train.n() == 5);
    CHECK(s1.test.n() == 5);
    std::set<Index> all(s1.train_rows.begin(), s1.train_rows.end());
    all.insert(s1.test_rows.begin(), s1.test_rows.end());
    CHECK(all.size() == 10);
    CHECK(s1.train_rows == s2.train_rows);
    CHECK(s1.test_rows == s2.test_rows);
    CHECK(s1.train.partition() == d.partition());

    const GroupedDataset big(gen.normal_matrix(127, 2), gen.normal_vector(127), GroupPartition::singletons(2));
    const auto s3 = split(big, 77.0 / 127.0, 1);
    CHECK(s3.train.n() == 50);
    CHECK(s3.test.n() == 77);

    const GroupedDataset tiny(gen.normal_matrix(3, 2), gen.normal_vector(3), GroupPartition::singletons(2));
    CHECK(kind_of([&] { split(tiny, 0.9, 1); }) == ErrorKind::TooFewRows);
}

TEST_CASE("csv: matrices with and without headers")
{
    const auto a = temp_file("a.csv", "x1,x2\n1,2\n3,4.5\n");
    const Matrix A = csv::read_matrix(a);
    CHECK(A.rows() == 2);
    CHECK(A(1, 1) == 4.5);
    const auto b = temp_file("b.csv", "1,2\n3,4\n");
    CHECK(csv::read_matrix(b).rows() == 2);
    const auto bad = temp_file("bad.csv", "1,2\n3\n");
    try {
        csv::read_matrix(bad);
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ParseError);
        CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }
    const auto nonnum = temp_file("nonnum.csv", "1,2\n3,abc\n");
    CHECK(kind_of([&] { csv::read_matrix(nonnum); }) == ErrorKind::ParseError);
    CHECK(kind_of([&] { csv::read_matrix("/nonexistent/file.csv"); }) == ErrorKind::IoError);
}

TEST_CASE("csv: groups relabel ids and validate coverage")
{
    const auto g = temp_file("g.csv", "variable_index,group_id\n0,10\n1,3\n2,10\n");
    const auto part = csv::read_groups(g, 3);
    CHECK(part.m() == 2);
    CHECK(part.group_of(1) == 0);
    CHECK(part.group_of(0) == 1);
    const auto missing = temp_file("g2.csv", "0,1\n2,1\n");
    CHECK_THROWS_AS(csv::read_groups(missing, 3), Error);
    const auto dup = temp_file("g3.csv", "0,1\n1,1\n1,2\n2,1\n");
    CHECK_THROWS_AS(csv::read_groups(dup, 3), Error);
}
