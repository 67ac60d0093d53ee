#include "doctest.h"

#include "towers3/families.hpp"

using namespace towers3;

TEST_CASE("tree roots and fork have the right sizes") {
    for (Tree t : {Tree::Q, Tree::U}) {
        auto root = build({GroupDescriptor::Mainline, t, 3, 2});
        auto s = series_and_sizes(root);
        CHECK(s.log_order == 5);
        CHECK(s.cls == 3);

        auto fork = build({GroupDescriptor::Mainline, t, 4, 2});
        auto sf = series_and_sizes(fork);
        CHECK(sf.log_order == 6);
        CHECK(sf.cls == 4);
        CHECK(sf.derived_length == 2);
    }
}

TEST_CASE("metabelian family at the ground state") {
    for (Tree t : {Tree::Q, Tree::U}) {
        for (Variant v : all_variants()) {
            GroupDescriptor d{GroupDescriptor::MetabelianFamily, t, 5, 2};
            d.variant = v;
            auto g = build(d);  // order gate runs inside
            auto s = series_and_sizes(g);
            CHECK(s.log_order == 7);
            CHECK(s.cls == 5);
            CHECK(s.coclass == 2);
            CHECK(s.derived_length == 2);
            CHECK(g.consistency_check().empty());
            CHECK(generator_rank(g) == 2);
        }
    }
}

TEST_CASE("cover quotient at the ground state") {
    for (Tree t : {Tree::Q, Tree::U}) {
        GroupDescriptor d{GroupDescriptor::CoverQuotient, t, 5, 2};
        d.ell = 0;
        auto g = build(d);
        auto s = series_and_sizes(g);
        CHECK(s.log_order == 8);
        CHECK(s.cls == 5);
        CHECK(s.coclass == 3);
        CHECK(s.derived_length == 3);
        auto m = metabelianization(g);
        CHECK(m.ngens == 7);
    }
}

TEST_CASE("identifier grammar round-trips") {
    // canonical strings round-trip byte for byte ("^1" is omitted)
    for (auto s : {"F", "F(-#1;1-#1;1)^2[-#1;3]", "N(-#2;1-#1;1)^3-#2;2",
                   "F(-#2;1-#1;1)[-#2;3]", "R(-#1;1)(-#1;1-#1;1)^4[-#1;2]",
                   "F(-#2;1-#1;1)[-#2;5-#1;1][-#2;1-#1;1]^2[-#2;2]"}) {
        auto id = parse_identifier(s);
        CHECK(id.str() == s);
        auto id2 = parse_identifier(id.str());
        CHECK(id2.str() == id.str());
    }
    // non-canonical spellings parse to the same canonical form
    CHECK(parse_identifier("F(-#2;1-#1;1)^1[-#2;3]").str() == "F(-#2;1-#1;1)[-#2;3]");
    CHECK(parse_identifier(" F ( -#1;1 -#1;1 ) ^2 [ -#1;3 ]").str() ==
          "F(-#1;1-#1;1)^2[-#1;3]");
    CHECK_THROWS_AS(parse_identifier("F(-#3;1)"), IdentifierSyntaxError);
    CHECK_THROWS_AS(parse_identifier("F(-#1;1"), IdentifierSyntaxError);
    CHECK_THROWS_AS(parse_identifier("(-#1;1)"), IdentifierSyntaxError);
}

TEST_CASE("identifier resolution") {
    // base only: the fork
    auto r = resolve_identifier("F", Tree::Q);
    REQUIRE(r.status == ResolvedIdentifier::Constructible);
    CHECK(r.descriptor->kind == GroupDescriptor::Mainline);
    CHECK(r.descriptor->cls == 4);

    // ground-state metabelianization on U: E.8 for i=2
    r = resolve_identifier("F(-#1;1-#1;1)^0[-#1;2]", Tree::U);
    REQUIRE(r.status == ResolvedIdentifier::Constructible);
    CHECK(r.descriptor->kind == GroupDescriptor::MetabelianFamily);
    CHECK(r.descriptor->cls == 5);
    CHECK(r.descriptor->variant == Variant::E6_E8);

    // ES1 Schur cover on U with i=3 -> ell=-1, class 7
    r = resolve_identifier("F(-#2;1-#1;1)^1[-#2;3]", Tree::U);
    REQUIRE(r.status == ResolvedIdentifier::Constructible);
    CHECK(r.descriptor->kind == GroupDescriptor::CoverQuotient);
    CHECK(r.descriptor->cls == 7);
    CHECK(r.descriptor->ell == -1);

    // Schur+1 witness: recognized but not constructible
    r = resolve_identifier("F(-#2;1-#1;1)^1(-#1;1-#1;1)^0[-#1;2]", Tree::U);
    CHECK(r.status == ResolvedIdentifier::Unconstructible);
    CHECK(r.label == "T(n=1,u=1,i=2)");

    // i=4 has no cover parameter on the Q-tree
    r = resolve_identifier("F[-#2;4]", Tree::Q);
    CHECK(r.status == ResolvedIdentifier::Unconstructible);
    r = resolve_identifier("F[-#2;4]", Tree::U);
    CHECK(r.status == ResolvedIdentifier::Constructible);
    CHECK(r.descriptor->ell == 1);

    // complex metabelianizations sit at depth 2: recognized, not constructible
    r = resolve_identifier("F[-#1;5-#1;1]", Tree::Q);
    CHECK(r.status == ResolvedIdentifier::Unconstructible);
    CHECK(r.label == "M(n=0,i=5) complex");
    r = resolve_identifier("F[-#1;5-#1;1]-#1;2", Tree::Q);
    CHECK(r.status == ResolvedIdentifier::Unconstructible);
    CHECK(r.label == "R(n=0,j=2,i=5)");
    r = resolve_identifier("F[-#2;5-#1;1][-#2;1-#1;1]^2[-#2;2]", Tree::Q);
    CHECK(r.status == ResolvedIdentifier::Unconstructible);
    CHECK(r.label == "S(n=0,t=2,i=5)");

    // sporadic-tree coordinates
    r = resolve_identifier("N(-#2;1-#1;1)^3-#2;2", Tree::Q);
    CHECK(r.status == ResolvedIdentifier::Unconstructible);
    CHECK(r.label == "BaBu(m=5)");

    // maintrunk vertices are plain mainline descriptors
    r = resolve_identifier("F(-#2;1-#1;1)", Tree::Q);
    REQUIRE(r.status == ResolvedIdentifier::Constructible);
    CHECK(r.descriptor->cls == 6);
    CHECK(r.descriptor->r == 3);

    // the excited-state path from the root
    r = resolve_identifier("R(-#1;1)(-#1;1-#1;1)^1[-#1;2]", Tree::Q);
    REQUIRE(r.status == ResolvedIdentifier::Constructible);
    CHECK(r.descriptor->cls == 7);
    CHECK(r.descriptor->variant == Variant::E6_E8);

    // nonsense stays distinct from unconstructible
    r = resolve_identifier("F(-#1;7)", Tree::Q);
    CHECK(r.status == ResolvedIdentifier::Unrecognized);
    r = resolve_identifier("X(-#1;1)", Tree::Q);
    CHECK(r.status == ResolvedIdentifier::Unrecognized);
}

TEST_CASE("re-encoded quotient is idempotent at its class") {
    GroupDescriptor d{GroupDescriptor::MetabelianFamily, Tree::Q, 5, 2};
    d.variant = Variant::E6_E8;
    auto s = with_standard_tags(*build_cached(d));
    auto r = p_quotient(encode_as_fp(s), 3, 5);
    CHECK(r.complete);
    CHECK(r.G.ngens == s.ngens);
    CHECK(series_and_sizes(r.G).cls == 5);
}

TEST_CASE("cover order law up to class 11") {
    for (Tree t : {Tree::Q, Tree::U})
        for (int c : {5, 7, 9, 11})
            for (int ell : {-1, 0, 1}) {
                if (t == Tree::Q && ell == 1) continue;
                GroupDescriptor d{GroupDescriptor::CoverQuotient, t, c, 2};
                d.ell = ell;
                int n = (c - 5) / 2;
                auto g = build_cached(d);  // order gate inside
                CHECK(g->ngens == 3 * n + 8);
            }
}
