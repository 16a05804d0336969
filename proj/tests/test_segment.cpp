#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace pedigrad;
using testing_support::black;
using testing_support::ids;
using testing_support::range1;
using testing_support::seg;
using testing_support::white;

namespace {

const char* const kTruncationExample = "(bbb)(ww)(bbbb)(wwwww)(bbb)(w)";

std::string invariant_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const ValidationError& e) {
        return e.invariant();
    }
    return "";
}

} // namespace

TEST(Segment, ParsesBracketLiteral) {
    const auto s = seg(kTruncationExample);
    EXPECT_EQ(s.fiber_sizes(), (std::vector<std::size_t>{3, 2, 4, 5, 3, 1}));
    EXPECT_EQ(s.colors(), (std::vector<Color>{black(), white(), black(), white(), black(), white()}));
    EXPECT_EQ(s.n1(), 18u);
    EXPECT_EQ(s.n0(), 6u);
}

TEST(Segment, EmptyAndGeneralForms) {
    const auto e = seg("");
    EXPECT_EQ(e.n0(), 0u);
    EXPECT_EQ(e.n1(), 0u);
    EXPECT_EQ(seg("(3:1)(2:0)"), seg("(bbb)(ww)"));
    EXPECT_EQ(seg(" (bbb) (ww) "), seg("(bbb)(ww)"));
}

TEST(Segment, CanonicalRoundTrip) {
    EXPECT_EQ(to_string(seg(kTruncationExample)), kTruncationExample);
    EXPECT_EQ(to_string(seg("(2:1)(1:0)")), "(bb)(w)");
    const auto omega = parse_preorder("custom: lo hi ; edges: lo<hi");
    const auto s = parse_segment("(2:hi)(1:lo)", omega);
    EXPECT_EQ(to_string(s), "(2:hi)(1:lo)");
    EXPECT_EQ(parse_segment(to_string(s), omega), s);
}

TEST(Segment, ParseErrorsCarryOffsets) {
    auto offset_of = [](std::string_view src) -> std::size_t {
        try {
            parse_segment(src);
        } catch (const ParseError& e) {
            return e.offset();
        }
        return static_cast<std::size_t>(-1);
    };
    EXPECT_EQ(offset_of("(bw)"), 2u);
    EXPECT_EQ(offset_of("(bb)x"), 4u);
    EXPECT_EQ(offset_of("(bb"), 0u);
    EXPECT_EQ(offset_of("()"), 0u);
    EXPECT_EQ(offset_of("(bq)"), 2u);
    EXPECT_EQ(offset_of("(0:1)"), 1u);
    EXPECT_THROW(parse_segment("(2:red)"), ParseError);
}

TEST(Segment, InvalidFibersRejected) {
    const auto omega = PreOrder::boolean();
    EXPECT_EQ(invariant_of([&] { Segment(omega, {2, 0}, {black(), white()}); }), "segment-surjective");
    EXPECT_EQ(invariant_of([&] { Segment(omega, {2}, {black(), white()}); }), "segment-colors");
    EXPECT_EQ(invariant_of([&] { Segment(omega, {2}, {Color{7}}); }), "unknown-color");
}

TEST(Truncation, WorkedExample) {
    const auto s = seg(kTruncationExample);
    EXPECT_EQ(truncate(s, black()), ids({1, 2, 3, 6, 7, 8, 9, 15, 16, 17}));
    EXPECT_EQ(truncate(s, white()), range1(1, 18));
}

TEST(Morphism, GapInsertionIsValid) {
    const SegMorphism f(seg("(bbb)(ww)(bbbb)(bb)"), seg("(bbbbb)(www)(bbbb)(b)(ww)"),
                        ids({1, 2, 3, 6, 7, 9, 10, 11, 12, 14, 15}));
    EXPECT_EQ(f.f0(), (std::vector<std::size_t>{0, 1, 2, 4}));
}

TEST(Morphism, IdentityAndInvariants) {
    const auto s = seg(kTruncationExample);
    const auto id = SegMorphism::identity(s);
    EXPECT_TRUE(id.is_position_identity());
    EXPECT_EQ(SegMorphism(s, s, range1(1, 18)), id);

    EXPECT_EQ(invariant_of([] { SegMorphism(seg("(ww)"), seg("(bb)"), ids({1, 2})); }),
              "morphism-color-decrease");
    EXPECT_EQ(invariant_of([] { SegMorphism(seg("(bb)"), seg("(bbb)"), ids({2, 1})); }), "morphism-f1-increasing");
    EXPECT_EQ(invariant_of([] { SegMorphism(seg("(bb)"), seg("(bbb)"), ids({1, 4})); }), "morphism-f1-range");
    EXPECT_EQ(invariant_of([] { SegMorphism(seg("(bb)"), seg("(bbb)"), ids({1})); }), "morphism-f1-length");
    // one fiber split across two codomain fibers
    EXPECT_EQ(invariant_of([] { SegMorphism(seg("(bb)"), seg("(b)(b)"), ids({1, 2})); }), "morphism-square");
    EXPECT_EQ(invariant_of([] { SegMorphism(seg("(b)(b)"), seg("(b)(b)"), ids({1, 2}), ids({2, 1})); }),
              "morphism-f0-monotone");
    EXPECT_EQ(invariant_of([] { SegMorphism(seg("(b)(b)"), seg("(b)(b)"), ids({1, 2}), ids({1})); }),
              "morphism-f0-length");
    EXPECT_EQ(invariant_of([] { SegMorphism(seg("(b)(b)"), seg("(bb)"), ids({1, 2}), ids({1, 2})); }),
              "morphism-f0-range");
}

TEST(Morphism, LiteralParsing) {
    const auto lit = parse_morphism_literal("f1=[1,2,4] f0=auto");
    EXPECT_EQ(lit.f1, ids({1, 2, 4}));
    EXPECT_FALSE(lit.f0.has_value());
    const auto lit2 = parse_morphism_literal("f1=[1] f0=[1]");
    ASSERT_TRUE(lit2.f0.has_value());
    EXPECT_EQ(*lit2.f0, ids({1}));
    EXPECT_THROW(parse_morphism_literal("f0=[1]"), ParseError);
    EXPECT_THROW(parse_morphism_literal("f1=[0]"), ParseError);
    EXPECT_THROW(parse_morphism_literal("g=[1]"), ParseError);
}

TEST(Morphism, ComposeWithIdentities) {
    const SegMorphism f(seg("(bbb)(ww)(bbbb)(bb)"), seg("(bbbbb)(www)(bbbb)(b)(ww)"),
                        ids({1, 2, 3, 6, 7, 9, 10, 11, 12, 14, 15}));
    EXPECT_EQ(compose(SegMorphism::identity(f.cod()), f), f);
    EXPECT_EQ(compose(f, SegMorphism::identity(f.dom())), f);
    EXPECT_THROW(compose(f, f), ValidationError);
}

TEST(Morphism, DuplicationArrowsComposeToCoordinateInclusions) {
    // (bbb) -> (bbb)(www) and (bbb) -> (www)(bbb) followed by the legs read
    // backwards, i.e. the inclusions (bbb) -> (bbb)(bbb) are obtained from
    // the identity-on-positions legs (bbb)(bbb) -> leg.
    const auto peak = seg("(bbb)(bbb)");
    const SegMorphism left(seg("(bbb)"), peak, ids({1, 2, 3}));
    const SegMorphism right(seg("(bbb)"), peak, ids({4, 5, 6}));
    const SegMorphism leg1(peak, seg("(bbb)(www)"), range1(1, 6));
    const SegMorphism leg2(peak, seg("(www)(bbb)"), range1(1, 6));
    EXPECT_EQ(compose(leg1, left).f1(), ids({1, 2, 3}));
    EXPECT_EQ(compose(leg1, left).f0(), ids({1}));
    EXPECT_EQ(compose(leg2, right).f1(), ids({4, 5, 6}));
    EXPECT_EQ(compose(leg2, right).f0(), ids({2}));
}

TEST(Morphism, ComposeIsAssociative) {
    std::mt19937_64 rng(11);
    int checked = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const auto a = testing_support::random_segment(rng, 2);
        const auto b = testing_support::random_segment(rng, 3);
        const auto c = testing_support::random_segment(rng, 4);
        const auto d = testing_support::random_segment(rng, 4);
        for (const auto& f : enumerate_morphisms(a, b))
            for (const auto& g : enumerate_morphisms(b, c))
                for (const auto& h : enumerate_morphisms(c, d)) {
                    EXPECT_EQ(compose(h, compose(g, f)), compose(compose(h, g), f));
                    ++checked;
                }
    }
    EXPECT_GT(checked, 0);
}

TEST(QuasiHomologous, RelativityMorphism) {
    const auto m = leq_quasi_homologous(seg("(bbb)(ww)(bbbb)(bbbbb)(www)(w)"), seg("(wwwww)(bbbbbbbbb)(wwww)"));
    ASSERT_TRUE(m.has_value());
    EXPECT_EQ(m->f0(), ids({1, 1, 2, 2, 3, 3}));
}

TEST(QuasiHomologous, ReflexiveAndAbsentCases) {
    const auto s = seg(kTruncationExample);
    const auto m = leq_quasi_homologous(s, s);
    ASSERT_TRUE(m.has_value());
    EXPECT_EQ(*m, SegMorphism::identity(s));
    EXPECT_FALSE(leq_quasi_homologous(seg("(bb)"), seg("(b)(w)")).has_value());
    EXPECT_FALSE(leq_quasi_homologous(seg("(ww)"), seg("(bb)")).has_value());
    EXPECT_THROW(leq_quasi_homologous(seg("(bb)"), seg("(b)")), ValidationError);
}

TEST(Enumerate, SmallCounts) {
    EXPECT_EQ(enumerate_morphisms(seg("(b)"), seg("(b)")).size(), 1u);
    const auto two = enumerate_morphisms(seg("(b)"), seg("(b)(b)"));
    ASSERT_EQ(two.size(), 2u);
    EXPECT_EQ(two[0].f1(), ids({1}));
    EXPECT_EQ(two[1].f1(), ids({2}));
    EXPECT_EQ(enumerate_morphisms(seg(""), seg("")).size(), 1u);
    EXPECT_EQ(enumerate_morphisms(seg(""), seg("(bbb)(w)")).size(), 1u);
    EXPECT_EQ(enumerate_morphisms(seg("(bbb)"), seg("(bb)")).size(), 0u);
}

TEST(Enumerate, CapIsEnforced) {
    EXPECT_THROW(enumerate_morphisms(seg("(b)"), seg("(b)(b)(b)"), 2), CapacityError);
    EXPECT_EQ(enumerate_morphisms(seg("(b)"), seg("(b)(b)(b)"), 3).size(), 3u);
}

TEST(Enumerate, AgreesWithBruteForceAndIsSorted) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 400; ++trial) {
        std::uniform_int_distribution<std::size_t> n_dom(0, 4), n_extra(0, 3);
        const std::size_t n = n_dom(rng);
        const auto dom = testing_support::random_segment(rng, n);
        const auto cod = testing_support::random_segment(rng, n + n_extra(rng));
        const auto fast = enumerate_morphisms(dom, cod);
        const auto slow = testing_support::brute_force_morphisms(dom, cod);
        ASSERT_EQ(fast.size(), slow.size()) << to_string(dom) << " -> " << to_string(cod);
        for (std::size_t k = 0; k < fast.size(); ++k) EXPECT_EQ(fast[k], slow[k]);
    }
}

TEST(Enumerate, TruncationContract) {
    // if f1(i) lies in Tr_b(cod) then i lies in Tr_b(dom)
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 300; ++trial) {
        const auto dom = testing_support::random_segment(rng, 3);
        const auto cod = testing_support::random_segment(rng, 5);
        const auto tr_dom = truncate(dom, black());
        const auto tr_cod = truncate(cod, black());
        for (const auto& f : enumerate_morphisms(dom, cod))
            for (std::size_t i = 0; i < dom.n1(); ++i)
                if (std::count(tr_cod.begin(), tr_cod.end(), f.f1()[i])) {
                    EXPECT_TRUE(std::count(tr_dom.begin(), tr_dom.end(), i));
                }
    }
}

TEST(Inversion, WorkedExampleAndInvolution) {
    EXPECT_EQ(invert_segment(seg("(bb)(w)(bbb)(b)(w)(w)")), seg("(w)(w)(b)(bbb)(w)(bb)"));
    EXPECT_EQ(invert_segment(seg("")), seg(""));
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const auto s = testing_support::random_segment(rng, 6);
        EXPECT_EQ(invert_segment(invert_segment(s)), s);
    }
}

TEST(Inversion, MorphismsConjugateAndStayValid) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        const auto dom = testing_support::random_segment(rng, 3);
        const auto cod = testing_support::random_segment(rng, 5);
        for (const auto& f : enumerate_morphisms(dom, cod)) {
            const auto g = invert_morphism(f);
            for (std::size_t i = 0; i < dom.n1(); ++i)
                EXPECT_EQ(g.f1()[dom.n1() - 1 - i], cod.n1() - 1 - f.f1()[i]);
            EXPECT_EQ(invert_morphism(g), f);
        }
    }
}
