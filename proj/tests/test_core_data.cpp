#include <gtest/gtest.h>

#include <sstream>

#include "doqr/core_data.hpp"
#include "test_support.hpp"

using namespace doqr;

namespace {

Dataset parse(const std::string& text, bool header = false) {
    std::istringstream in(text);
    return parse_csv(in, header);
}

}

TEST(LoadCsv, ParsesRowsInOrder) {
    const auto ds = parse("1,2\n3,4\n");
    EXPECT_EQ(ds.size(), 2u);
    EXPECT_EQ(ds.dim(), 2u);
    EXPECT_EQ(ds.point(0), (Point{ 1, 2 }));
    EXPECT_EQ(ds.point(1), (Point{ 3, 4 }));
}

TEST(LoadCsv, SkipsHeader) {
    const auto ds = parse("x,y\n0,0\n", true);
    EXPECT_EQ(ds.size(), 1u);
    EXPECT_EQ(ds.point(0), (Point{ 0, 0 }));
}

TEST(LoadCsv, RaggedRowReportsRow) {
    try {
        parse("1,2\n3\n");
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.row(), 2u);
        EXPECT_NE(std::string(e.what()).find("ragged"), std::string::npos);
    }
}

TEST(LoadCsv, NonNumericCellReportsLocation) {
    try {
        parse("1,2\n3,abc\n");
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.row(), 2u);
        EXPECT_EQ(e.column(), 2u);
    }
    EXPECT_THROW(parse("1,2x\n"), ParseError);
    EXPECT_THROW(parse("1,\n"), ParseError);
    EXPECT_THROW(parse("1,nan\n"), ParseError);
}

TEST(LoadCsv, EmptyInputIsAnError) {
    EXPECT_THROW(parse(""), ParseError);
    EXPECT_THROW(parse("x,y\n", true), ParseError);
}

TEST(LoadCsv, MissingFileIsAnError) {
    EXPECT_THROW(load_csv("/nonexistent/points.csv", false), ParseError);
}

TEST(LoadCsv, WriteThenReadIsBitExact) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto engine = SeedSpec{ seed }.engine();
        std::uniform_real_distribution<double> exponent(-300, 300);
        std::uniform_real_distribution<double> mantissa(-1, 1);
        std::vector<double> values(3 * 17);
        for (auto& v : values) {
            v = mantissa(engine) * std::pow(10.0, exponent(engine));
        }
        const Dataset ds(3, values);
        std::stringstream buffer;
        write_csv(buffer, ds, { "a", "b", "c" });
        EXPECT_EQ(parse_csv(buffer, true), ds);
    }
}

TEST(Dataset, RejectsNonFiniteAndEmpty) {
    EXPECT_THROW(Dataset(2, {}), PreconditionError);
    EXPECT_THROW(Dataset(2, { 1.0, NAN }), PreconditionError);
    EXPECT_THROW(Dataset(2, { 1.0, 2.0, 3.0 }), DimensionError);
    EXPECT_THROW(Dataset::from_points({ { 1, 2 }, { 3 } }), DimensionError);
}

TEST(AffineTransform, IdentityLeavesDataUnchanged) {
    const auto ds = fixtures::normal_sample(10, 2, 1);
    EXPECT_EQ(affine_transform(ds, Matrix::identity(2), { 0, 0 }), ds);
}

TEST(AffineTransform, ScalesAndShifts) {
    const auto ds = Dataset::from_points({ { 1, 0 } });
    Matrix a = Matrix::identity(2);
    a(0, 0) = 2;
    a(1, 1) = 2;
    EXPECT_EQ(affine_transform(ds, a, { 0, 1 }).point(0), (Point{ 2, 1 }));
}

TEST(AffineTransform, RejectsSingularAndMismatched) {
    const auto ds = fixtures::normal_sample(5, 2, 2);
    EXPECT_THROW(affine_transform(ds, Matrix{ 2, { 1, 2, 2, 4 } }, { 0, 0 }), PreconditionError);
    EXPECT_THROW(affine_transform(ds, Matrix::identity(3), { 0, 0, 0 }), DimensionError);
    EXPECT_THROW(affine_transform(ds, Matrix::identity(2), { 0 }), DimensionError);
}

TEST(AffineTransform, InverseMapRecoversData) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto ds = fixtures::normal_sample(25, 2, seed);
        const Matrix a = fixtures::random_nonsingular(seed);
        const Point b{ 0.5 * seed, -1.25 };
        const Matrix inv = inverse(a);
        const Point ib = inv.apply(b);
        const auto back = affine_transform(affine_transform(ds, a, b), inv, { -ib[0], -ib[1] });
        for (std::size_t i = 0; i < ds.values().size(); ++i) {
            EXPECT_NEAR(back.values()[i], ds.values()[i], 1e-9);
        }
    }
}

TEST(GeneralPosition, Examples) {
    EXPECT_TRUE(general_position_2d(Dataset::from_points({ { 0, 0 }, { 1, 0 }, { 0, 1 } })));
    EXPECT_FALSE(general_position_2d(Dataset::from_points({ { 0, 0 }, { 1, 1 }, { 2, 2 } })));
    EXPECT_TRUE(general_position_2d(Dataset::from_points({ { 0, 0 }, { 1, 1 } })));
    EXPECT_THROW(general_position_2d(Dataset(1, { 1.0, 2.0, 3.0 })), DimensionError);
}

TEST(SeedSpec, StreamsAreReproducibleAndDistinct) {
    const SeedSpec seed{ 42 };
    auto a = seed.engine(3);
    auto b = seed.engine(3);
    auto c = seed.engine(4);
    const auto first = a();
    EXPECT_EQ(first, b());
    EXPECT_NE(first, c());
    EXPECT_NE(SeedSpec{ 1 }.derive(0), SeedSpec{ 0 }.derive(1));
    EXPECT_EQ(seed.derive(5), SeedSpec{ 42 }.derive(5));
}

TEST(Direction, NormalizesAndRejectsZero) {
    const Direction u(Point{ 3, 4 });
    EXPECT_NEAR(std::hypot(u[0], u[1]), 1.0, 1e-12);
    EXPECT_THROW(Direction(Point{ 0, 0 }), PreconditionError);
}
