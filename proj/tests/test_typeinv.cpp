#include "doctest.h"

#include "towers3/typeinv.hpp"

using namespace towers3;

TEST_CASE("invariant normalization and rendering") {
    TypeInvariants a({1, 2, 3});
    CHECK(a.parts == std::vector<int>({3, 2, 1}));
    CHECK(a.str() == "321");
    CHECK(TypeInvariants{}.str() == "0");
    CHECK(TypeInvariants({10, 9}).str() == "(10,9)");
    CHECK(TypeInvariants({1, 1, 1}).str() == "111");
}

TEST_CASE("invariant parsing round-trips") {
    for (auto s : {"321", "0", "(10,9)", "111", "21"}) {
        TypeInvariants t = parse_invariants(s);
        CHECK(t.str() == s);
    }
    CHECK(parse_invariants("12") == TypeInvariants({2, 1}));  // normalized on parse
    CHECK_THROWS(parse_invariants("1x"));
    CHECK_THROWS(parse_invariants("10"));  // 0 must stand alone
}

TEST_CASE("display order puts polarization first") {
    std::vector<TypeInvariants> q = {{2, 1}, {1, 1, 1}, {3, 2}, {2, 1}};
    std::stable_sort(q.begin(), q.end(), display_before);
    CHECK(quad_str(q) == "[32,111,21,21]");
}

TEST_CASE("quadruple grammar") {
    auto q = parse_quad("[43,21,21,21]");
    REQUIRE(q.size() == 4);
    CHECK(q[0] == TypeInvariants({4, 3}));
    CHECK(quad_str(q) == "[43,21,21,21]");
}

TEST_CASE("bracket grammar with compression") {
    Ati2Bracket b;
    b.head = TypeInvariants({2, 1});
    TypeInvariants a0({2, 2, 1});
    b.tail = {TypeInvariants({2, 1}), a0, TypeInvariants({2, 1}), TypeInvariants({2, 1})};
    std::string s = bracket_str(b, &a0);
    CHECK(s == "[21;221,(21)^3]");
    Ati2Bracket p = parse_bracket(s);
    CHECK(p == b);
    Ati2Bracket p2 = parse_bracket("[21;221,21,21,21]");
    CHECK(p2 == b);
}

TEST_CASE("full second-order pattern grammar") {
    TypeInvariants a0({2, 2, 1});
    Ati2 a;
    Ati2Bracket pol{TypeInvariants({3, 2}),
                    {a0, {3, 1, 1}, {3, 1, 1}, {3, 1, 1}}};
    Ati2Bracket reg{TypeInvariants({2, 1}), {a0, {2, 1}, {2, 1}, {2, 1}}};
    a.brackets = {pol, reg, reg, reg};
    std::string s = ati2_str(a, &a0);
    CHECK(s == "([32;221,(311)^3],[21;221,(21)^3]^3)");
    CHECK(parse_ati2(s) == a);
    CHECK(parse_ati2("([21;221,(21)^3],[32;221,311,311,311],[21;221,(21)^3]^2)") == a);
}
