#include "doctest.h"

#include "towers3/families.hpp"
#include "towers3/sigma.hpp"

using namespace towers3;

namespace {

PcPresentation family_group(Tree t, int c, Variant v) {
    GroupDescriptor d{GroupDescriptor::MetabelianFamily, t, c, 2};
    d.variant = v;
    return *build_cached(d);
}

} // namespace

TEST_CASE("inversion is a sigma witness on the elementary bicyclic group") {
    auto g = PcPresentation::make(3, 2);
    auto w = find_sigma(g);
    REQUIRE(w.has_value());
    CHECK(w->images[0] == g.inverse(g.gen(0)));
    // squared, the witness fixes all generators
    auto S = with_standard_tags(g);
    for (int i = 0; i < S.ngens; ++i)
        CHECK(sigdetail::apply_map(S, w->images, w->images[i]) == S.gen(i));
}

TEST_CASE("sigma parity across the family variants") {
    for (Tree t : {Tree::Q, Tree::U}) {
        for (int c : {5, 6}) {
            for (Variant v : all_variants()) {
                auto g = family_group(t, c, v);
                bool has = find_sigma(g).has_value();
                bool expect = (c % 2 == 1) || v == Variant::MainlinePair;
                CHECK_MESSAGE(has == expect, "sigma mismatch for c=" << c << " variant "
                                                                     << variant_name(t, v));
            }
        }
    }
}

TEST_CASE("sigma witnesses are deterministic and involutory") {
    auto g = family_group(Tree::Q, 5, Variant::E6_E8);
    auto w1 = find_sigma(g);
    auto w2 = find_sigma(g);
    REQUIRE(w1.has_value());
    REQUIRE(w2.has_value());
    CHECK(w1->images == w2->images);
    auto S = with_standard_tags(g);
    for (int i = 0; i < S.ngens; ++i)
        CHECK(sigdetail::apply_map(S, w1->images, w1->images[i]) == S.gen(i));
    // images reduce to generator inverses modulo the Frattini subgroup
    auto F = frattini(S);
    for (int i = 0; i < 2; ++i)
        CHECK(contains(S, F, S.mul(S.gen(i), w1->images[i])));
}

TEST_CASE("schur classification of covers and metabelianizations") {
    GroupDescriptor cov{GroupDescriptor::CoverQuotient, Tree::U, 5, 2};
    cov.ell = 0;
    auto st = schur_status(*build_cached(cov));
    CHECK(st.d1 == 2);
    CHECK(st.d2 == 2);
    CHECK(st.sigma);
    CHECK(st.cls == SchurStatus::Schur);

    auto fam = schur_status(family_group(Tree::U, 5, Variant::E6_E8));
    CHECK(fam.d1 == 2);
    CHECK(fam.d2 == 3);
    CHECK(fam.sigma);
    CHECK(fam.cls == SchurStatus::SchurPlusOne);

    // abelian groups can be Schur+1 sigma groups
    auto ab = schur_status(PcPresentation::make(3, 2));
    CHECK(ab.d2 == 3);
    CHECK(ab.cls == SchurStatus::SchurPlusOne);

    // the family leaves are terminal: nuclear rank 0 at odd class
    CHECK(fam.nu == 0);
}

TEST_CASE("capacity ceiling is a named error") {
    GroupDescriptor d{GroupDescriptor::MetabelianFamily, Tree::Q, 9, 2};
    d.variant = Variant::E6_E8;
    auto g = *build_cached(d);  // log order 11
    CHECK_THROWS_AS(find_sigma(g), SigmaCapacityError);
    CHECK(find_sigma(g, false, 11).has_value());
}

TEST_CASE("shafarevich bound") {
    auto im = FieldSignature::imaginary_quadratic();
    auto re = FieldSignature::real_quadratic();
    CHECK(shafarevich_admissible(2, 2, im).admissible);
    CHECK(!shafarevich_admissible(2, 3, im).admissible);
    CHECK(shafarevich_admissible(2, 3, re).admissible);
    CHECK(shafarevich_admissible(2, 3, re).slack == 0);
    CHECK(!shafarevich_admissible(2, 4, re).admissible);
    CHECK(shafarevich_admissible(2, 2, re).slack == 1);
    CHECK(!shafarevich_admissible(3, 2, im).admissible);  // d1 <= d2 must hold
}

TEST_CASE("h2 inversion check on a ground-state cover") {
    GroupDescriptor cov{GroupDescriptor::CoverQuotient, Tree::Q, 5, 2};
    cov.ell = 0;
    auto w = find_sigma(*build_cached(cov), true);
    CHECK(w.has_value());
    if (w) CHECK(w->inverts_h2);
}

TEST_CASE("h2 inversion across the menagerie") {
    // the one-parameter leaves and covers admit a witness inverting the
    // multiplicator as well
    for (Tree t : {Tree::Q, Tree::U}) {
        GroupDescriptor d{GroupDescriptor::MetabelianFamily, t, 5, 2};
        d.variant = Variant::E6_E8;
        auto w = find_sigma(*build_cached(d), true);
        REQUIRE(w.has_value());
        CHECK(w->inverts_h2);
    }
    // the elementary bicyclic group does not: inversion fixes the
    // commutator part of the multiplicator pointwise
    auto w = find_sigma(PcPresentation::make(3, 2), true);
    CHECK(!w.has_value());
}

TEST_CASE("multiplicator rank of elementary abelian groups") {
    for (int n = 1; n <= 4; ++n) {
        auto cov = p_cover(with_standard_tags(PcPresentation::make(3, n)));
        CHECK(cov.ranks.d2 == n + n * (n - 1) / 2);
    }
}
