#include <pdvec/diagram.hpp>

#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

using namespace pdvec;

TEST(ParseDiagram, SingleRow) {
    const auto d = parse_diagram("0,2,1");
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d.points()[0], (PersistencePoint{0.0, 2.0, 1}));
    EXPECT_EQ(d.essential_count(), 0u);
}

TEST(ParseDiagram, MultiplicityDefaultsToOne) {
    const auto d = parse_diagram("0.5, 1.5\n");
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d.points()[0].multiplicity, 1u);
}

TEST(ParseDiagram, CoincidentRowsMerge) {
    const auto d = parse_diagram("1,3,2\n1,3,1");
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d.points()[0], (PersistencePoint{1.0, 3.0, 3}));
}

TEST(ParseDiagram, CommentsAndBlankLines) {
    const auto d = parse_diagram("# header\n\n0,1\n  # indented comment\n0.25,0.75,2\n");
    EXPECT_EQ(d.size(), 2u);
    EXPECT_EQ(total_multiplicity(d), 3u);
}

TEST(ParseDiagram, InfiniteDeathBecomesEssential) {
    const auto d = parse_diagram("0,inf,1\n0.1,0.3\n0,inf\n");
    EXPECT_EQ(d.size(), 1u);
    EXPECT_EQ(d.essential_count(), 2u);
    EXPECT_EQ(total_multiplicity(d), 1u);
}

TEST(ParseDiagram, Errors) {
    EXPECT_THROW(parse_diagram("2,2,1"), parse_error);    // diagonal
    EXPECT_THROW(parse_diagram("3,2,1"), parse_error);    // below diagonal
    EXPECT_THROW(parse_diagram("0,1,0"), parse_error);    // multiplicity < 1
    EXPECT_THROW(parse_diagram("0,1,-1"), parse_error);
    EXPECT_THROW(parse_diagram("0,1,1.5"), parse_error);
    EXPECT_THROW(parse_diagram("0"), parse_error);
    EXPECT_THROW(parse_diagram("0,1,1,1"), parse_error);
    EXPECT_THROW(parse_diagram("zero,1"), parse_error);
    EXPECT_THROW(parse_diagram("0,1x"), parse_error);
    EXPECT_THROW(parse_diagram("nan,1"), parse_error);
    EXPECT_THROW(parse_diagram("0,nan"), parse_error);
    EXPECT_THROW(parse_diagram("inf,inf"), parse_error);
    EXPECT_THROW(parse_diagram("0,-inf"), parse_error);
}

TEST(ParseDiagram, ErrorReportsLine) {
    try {
        parse_diagram("0,1\n# ok\n5,4\n");
        FAIL() << "expected parse_error";
    } catch (const parse_error& e) {
        EXPECT_EQ(e.line(), 3u);
    }
}

TEST(SerializeDiagram, Empty) {
    const std::string text = serialize_diagram(PersistenceDiagram{});
    EXPECT_EQ(text, "# birth,death,multiplicity\n");
    EXPECT_EQ(parse_diagram(text), PersistenceDiagram{});
}

TEST(SerializeDiagram, SinglePoint) {
    const auto text = serialize_diagram(PersistenceDiagram({{0.0, 2.0, 1}}));
    EXPECT_EQ(text, "# birth,death,multiplicity\n0,2,1\n");
}

TEST(SerializeDiagram, SortedRowsAndEssentialLast) {
    const PersistenceDiagram d({{0.5, 0.7, 1}, {0.1, 0.9, 2}}, {{0.0, 1}});
    EXPECT_EQ(serialize_diagram(d), "# birth,death,multiplicity\n0.1,0.9,2\n0.5,0.7,1\n0,inf,1\n");
}

TEST(SerializeDiagram, RoundTripRandom) {
    test::Rng rng(7);
    std::uniform_int_distribution<int> sz(0, 20);
    for (int trial = 0; trial < 100; ++trial) {
        auto d = test::random_multiset_diagram(rng, static_cast<std::size_t>(sz(rng)));
        if (trial % 3 == 0)
            d = merge(d, PersistenceDiagram({}, {{0.125, 1}}));
        EXPECT_EQ(parse_diagram(serialize_diagram(d)), d);
    }
}

TEST(PersistenceDiagram, MergingIsOrderIndependent) {
    test::Rng rng(11);
    std::vector<PersistencePoint> rows = {{0, 1, 1}, {0, 1, 2}, {0.5, 2, 1}, {-1, 0, 1}, {0.5, 2, 4}};
    const PersistenceDiagram reference(rows);
    for (int i = 0; i < 20; ++i) {
        std::shuffle(rows.begin(), rows.end(), rng);
        EXPECT_EQ(PersistenceDiagram(rows), reference);
    }
    ASSERT_EQ(reference.size(), 3u);
    EXPECT_EQ(reference.points()[1].multiplicity, 3u);
}

TEST(PersistenceDiagram, ConstructorValidates) {
    EXPECT_THROW(PersistenceDiagram({{1, 1, 1}}), std::invalid_argument);
    EXPECT_THROW(PersistenceDiagram({{0, 1, 0}}), std::invalid_argument);
    EXPECT_THROW(PersistenceDiagram({{0, INFINITY, 1}}), std::invalid_argument);
}

TEST(TotalMultiplicity, Examples) {
    EXPECT_EQ(total_multiplicity(PersistenceDiagram{}), 0u);
    EXPECT_EQ(total_multiplicity(PersistenceDiagram({{0, 2, 3}})), 3u);
    EXPECT_EQ(total_multiplicity(PersistenceDiagram({{0, 2, 2}, {1, 3, 1}})), 3u);
}

TEST(TotalMultiplicity, AdditiveUnderUnion) {
    test::Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = test::random_multiset_diagram(rng, rng() % 10);
        const auto b = test::random_multiset_diagram(rng, rng() % 10);
        EXPECT_EQ(total_multiplicity(merge(a, b)), total_multiplicity(a) + total_multiplicity(b));
    }
}
