#include "doctest.h"

#include "towers3/classify.hpp"
#include "towers3/families.hpp"

using namespace towers3;

namespace {

Ati2 engine_ati2(GroupDescriptor d) { return ati2(*build_cached(d)); }

GroupDescriptor fam(Tree t, int c, Variant v) {
    GroupDescriptor d{GroupDescriptor::MetabelianFamily, t, c, 2};
    d.variant = v;
    return d;
}
GroupDescriptor cov(Tree t, int c, int ell) {
    GroupDescriptor d{GroupDescriptor::CoverQuotient, t, c, 2};
    d.ell = ell;
    return d;
}

} // namespace

TEST_CASE("state detection") {
    auto r = detect_state(parse_quad("[32,111,21,21]"));
    CHECK(r.n == 0);
    CHECK(r.tree_hint == Tree::Q);
    r = detect_state(parse_quad("[43,21,21,21]"));
    CHECK(r.n == 1);
    CHECK(r.tree_hint == Tree::U);
    r = detect_state(parse_quad("[33,21,21,21]"));
    CHECK(!r.determined());
    CHECK(r.reason.find("homocyclic") != std::string::npos);
    r = detect_state(parse_quad("[54,111,21,21]"));
    CHECK(r.n == 2);
    CHECK(r.tree_hint == Tree::Q);
}

TEST_CASE("simple classification from engine-computed patterns") {
    // imaginary fields decide unconditionally
    auto v = classify_simple(parse_tkt("2231"), QuadraticSignature::Imaginary, std::nullopt);
    CHECK(v.value == Length::Exactly3);

    // real, metabelianization pattern: two stages
    v = classify_simple(parse_tkt("1231"), QuadraticSignature::Real,
                        engine_ati2(fam(Tree::U, 5, Variant::E6_E8)));
    CHECK(v.value == Length::Exactly2);

    // real, cover pattern: three stages
    v = classify_simple(parse_tkt("1122"), QuadraticSignature::Real,
                        engine_ati2(cov(Tree::Q, 5, 0)));
    CHECK(v.value == Length::Exactly3);

    // excited state
    v = classify_simple(parse_tkt("2231"), QuadraticSignature::Real,
                        engine_ati2(fam(Tree::U, 7, Variant::E14a_E9a)));
    CHECK(v.value == Length::Exactly2);
    v = classify_simple(parse_tkt("3122"), QuadraticSignature::Real,
                        engine_ati2(cov(Tree::Q, 7, -1)));
    CHECK(v.value == Length::Exactly3);

    // a non-simple kernel type is rejected
    CHECK_THROWS_AS(classify_simple(parse_tkt("2122"), QuadraticSignature::Real, std::nullopt),
                    ClassifierTypeError);

    // mismatching pattern falls to Unknown with a named bracket
    Ati2 junk = engine_ati2(fam(Tree::U, 5, Variant::E6_E8));
    junk.brackets[0].tail.push_back(TypeInvariants({9}));
    v = classify_simple(parse_tkt("1231"), QuadraticSignature::Real, junk);
    CHECK(v.value == Length::Unknown);
    CHECK(v.reason.find("mismatch at [") == 0);
}

TEST_CASE("complex classification") {
    auto v = classify_complex(parse_tkt("4231"), QuadraticSignature::Imaginary, std::nullopt);
    CHECK(v.value == Length::AtLeast3);

    // transcribed ground-state rows: the all-tame pattern allows both lengths
    Ati2 tame = parse_ati2("([32;(321),(311)^3],[111;(321),(111)^3,(11)^9],[21;(321),(21)^3]^2)");
    v = classify_complex(parse_tkt("2122"), QuadraticSignature::Real, tame);
    CHECK(v.value == Length::TwoOrThree);
    CHECK(v.reason == "all tame");
    Ati2 tameS = parse_ati2("([32;(321),(311)^3],[21;(321),(21)^3]^3)");
    v = classify_complex(parse_tkt("4231"), QuadraticSignature::Real, tameS);
    CHECK(v.value == Length::TwoOrThree);

    // transcribed wild-polarization rows force at least three stages
    TypeInvariants a0({3, 2, 1});
    Ati2 wild;
    wild.brackets.push_back(
        Ati2Bracket{TypeInvariants({3, 2}),
                    {a0, {4, 1, 1}, {4, 1, 1}, {4, 1, 1}}});
    wild.brackets.push_back(parse_bracket("[111;(321),(111)^3,(11)^9]"));
    wild.brackets.push_back(parse_bracket("[21;(321),(21)^3]"));
    wild.brackets.push_back(parse_bracket("[21;(321),(21)^3]"));
    v = classify_complex(parse_tkt("2122"), QuadraticSignature::Real, wild);
    CHECK(v.value == Length::AtLeast3);
    CHECK(v.reason == "wild polarization");
}

TEST_CASE("ipad screening") {
    auto s = screen_ipad(parse_ipad("[11;21,21,21,32]"));
    CHECK(s.category == ScreenVerdict::UTree);
    CHECK(s.n == 0);
    s = screen_ipad(parse_ipad("[11;111,21,21,32]"));
    CHECK(s.category == ScreenVerdict::QTree);
    s = screen_ipad(parse_ipad("[11;11,11,11,21]"));
    CHECK(s.category == ScreenVerdict::MaximalClass);
    s = screen_ipad(parse_ipad("[11;111,111,111,21]"));
    CHECK(s.category == ScreenVerdict::SporadicBranch);
    s = screen_ipad(parse_ipad("[11;111,111,21,21]"));
    CHECK(s.category == ScreenVerdict::CoclassThreePlus);
    s = screen_ipad(parse_ipad("[11;21,21,21,22]"));
    CHECK(s.category == ScreenVerdict::HomocyclicExclusion);
    s = screen_ipad(parse_ipad("[11;111,21,21,21]"));
    CHECK(s.category == ScreenVerdict::Other);
    CHECK_THROWS_AS(screen_ipad({TypeInvariants({2, 1})}), MalformedIpadError);
}

TEST_CASE("soluble length formula") {
    CHECK(babu_soluble_length(2) == 3);
    CHECK(babu_soluble_length(5) == 4);
    CHECK(babu_soluble_length(21) == 6);
    CHECK_THROWS(babu_soluble_length(1));
    const int expect[] = {3, 3, 3, 4, 4, 4, 4, 4, 5, 5, 5, 5, 5, 5, 5, 5, 5, 5, 5, 6};
    for (long m = 2; m <= 21; ++m) CHECK(babu_soluble_length(m) == expect[m - 2]);
}

TEST_CASE("exhaustive type dispatch") {
    // every family variant lands in exactly one of the two classifiers
    for (Tree t : {Tree::Q, Tree::U})
        for (Variant v : all_variants()) {
            auto g = build_cached(fam(t, 5, v));
            Tkt k = tkt(*g);
            if (v == Variant::MainlinePair) {
                CHECK(!tkt_is_simple(k));
                CHECK(!tkt_is_complex(k));
            } else {
                CHECK((tkt_is_simple(k) != tkt_is_complex(k)));
            }
        }
}

TEST_CASE("soundness of the constructions up to the third excited state") {
    // two-stage pattern from every family leaf, three-stage from every cover
    for (int n = 0; n <= 3; ++n) {
        int c = 2 * n + 5;
        GroupDescriptor f{GroupDescriptor::MetabelianFamily, Tree::U, c, 2};
        f.variant = Variant::E6_E8;
        auto vf = classify_simple(parse_tkt("1231"), QuadraticSignature::Real,
                                  ati2(*build_cached(f)));
        CHECK(vf.value == Length::Exactly2);
        GroupDescriptor s{GroupDescriptor::CoverQuotient, Tree::U, c, 2};
        s.ell = 0;
        auto vs = classify_simple(parse_tkt("1231"), QuadraticSignature::Real,
                                  ati2(*build_cached(s)));
        CHECK(vs.value == Length::Exactly3);
        if (n == 3) {
            // the bridge extends to the third excited state
            auto M = metabelianization(*build_cached(s));
            CHECK(tkt_canonical(tkt(M)) == tkt_canonical(tkt(*build_cached(f))));
            CHECK(ati1(M).str() == ati1(*build_cached(f)).str());
        }
        GroupDescriptor fq{GroupDescriptor::MetabelianFamily, Tree::Q, c, 2};
        fq.variant = Variant::E14a_E9a;
        auto vq = classify_simple(parse_tkt("3122"), QuadraticSignature::Real,
                                  ati2(*build_cached(fq)));
        CHECK(vq.value == Length::Exactly2);
    }
}
