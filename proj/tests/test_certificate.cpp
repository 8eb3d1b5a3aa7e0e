#include <dynalg/cert_json.hpp>
#include <dynalg/certificate.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace dynalg;

namespace {

Polynomial P(const std::string& s) { return parse_polynomial(s); }

// Presentation (x^3-y^3 = 0, (x-y)^2 > 0, x = 0) in ordered fields.
Presentation ex1_presentation() {
    return parse_presentation(
        "theory ordered_field\n"
        "vars x y\n"
        "eq x^3 - y^3\n"
        "gt (x-y)^2\n"
        "eq x\n");
}

// Certificate of (Ex_1): (x-y)^4 + y*(x^3-y^3) - (x^3-3x^2y+6xy^2-4y^3)*x == 0.
CollapseCertificate ex1_certificate() {
    CollapseCertificate c;
    c.theory = TheoryId::OrderedField;
    OrderedCollapse o;
    o.monoid.factors = {{RelationRef{Predicate::Gt0, 0}, 2}};
    o.ideal.combination = {{P("y"), RelationRef{Predicate::Eq0, 0}},
                           {P("-(x^3-3*x^2*y+6*x*y^2-4*y^3)"), RelationRef{Predicate::Eq0, 1}}};
    c.shape = std::move(o);
    return c;
}

// Presentation (x^3-y^3 = 0, (x-y)^2 > 0, x^2 > 0) in ordered fields.
Presentation ex2_presentation() {
    return parse_presentation(
        "theory ordered_field\n"
        "vars x y\n"
        "eq x^3 - y^3\n"
        "gt (x-y)^2\n"
        "gt x^2\n");
}

// Certificate of (Ex_2):
//   (x-y)^2 x^2 + 2(x-y)^2 x^2 + (x-y)^2 (2y+x)^2 - 4(x-y)(x^3-y^3) == 0.
CollapseCertificate ex2_certificate() {
    CollapseCertificate c;
    c.theory = TheoryId::OrderedField;
    OrderedCollapse o;
    o.monoid.factors = {{RelationRef{Predicate::Gt0, 0}, 1}, {RelationRef{Predicate::Gt0, 1}, 1}};
    ConeSummand s1;
    s1.weight = rat(2);
    s1.base = P("x");
    s1.mask = {RelationRef{Predicate::Gt0, 0}};
    ConeSummand s2;
    s2.weight = rat(1);
    s2.base = P("2*y+x");
    s2.mask = {RelationRef{Predicate::Gt0, 0}};
    o.cone.summands = {s1, s2};
    o.ideal.combination = {{P("-4*(x-y)"), RelationRef{Predicate::Eq0, 0}}};
    c.shape = std::move(o);
    return c;
}

}  // namespace

TEST(Certificate, Ex1Verifies) {
    auto res = verify_collapse(ex1_presentation(), ex1_certificate());
    EXPECT_TRUE(res.valid) << res.message << " residual=" << to_string(res.residual);
    EXPECT_TRUE(res.residual.is_zero());
}

TEST(Certificate, Ex2Verifies) {
    auto res = verify_collapse(ex2_presentation(), ex2_certificate());
    EXPECT_TRUE(res.valid) << res.message << " residual=" << to_string(res.residual);
}

TEST(Certificate, Ex1TamperedFails) {
    CollapseCertificate c = ex1_certificate();
    auto& o = std::get<OrderedCollapse>(c.shape);
    o.ideal.combination[0].first = P("y+1");
    auto res = verify_collapse(ex1_presentation(), c);
    EXPECT_FALSE(res.valid);
    EXPECT_FALSE(res.residual.is_zero());
}

TEST(Certificate, FieldFactExample) {
    // theory field, R_eq = {x^2, y^2}, claim xy = 0 via (xy)^2 = y^2 * x^2.
    Presentation p = parse_presentation("theory field\nvars x y\neq x^2\neq y^2\n");
    FactCertificate c;
    c.theory = TheoryId::Field;
    c.claim = {Predicate::Eq0, P("x*y")};
    FieldEqFact f;
    f.n = 2;
    f.ideal.combination = {{P("-y^2"), RelationRef{Predicate::Eq0, 0}}};
    c.shape = f;
    auto res = verify_fact(p, c);
    EXPECT_TRUE(res.valid) << res.message << " residual=" << to_string(res.residual);
}

TEST(Certificate, GroupFactExample) {
    // S = {x - 1 >= 0}, claim 2x - 1 > 0: 1 + 2*(x-1) + 0 == 1*(2x-1).
    Presentation p = parse_presentation("theory divisible_ordered_group\nvars x\ngeq x - 1\n");
    FactCertificate c;
    c.theory = TheoryId::DivisibleOrderedGroup;
    c.claim = {Predicate::Gt0, P("2*x-1")};
    GroupGtFact f;
    f.strict.scalar = rat(1);
    f.monoid.entries = {{2, RelationRef{Predicate::Geq0, 0}}};
    f.multiplier = 1;
    c.shape = f;
    auto res = verify_fact(p, c);
    EXPECT_TRUE(res.valid) << res.message << " residual=" << to_string(res.residual);
}

TEST(Certificate, ValuedCollapseExample) {
    // R_u = {u}, R_rn = {j}, R_eq = {u+j}: 1*(u + j) - (u+j) == 0.
    Presentation p = parse_presentation("theory valued_field\nvars u j\nu u\nrn j\neq u+j\n");
    CollapseCertificate c;
    c.theory = TheoryId::ValuedField;
    ValuedCollapse v;
    v.unit.factors = {{RelationRef{Predicate::U, 0}, 1}};
    v.rn.combination = {{SubringTerm::constant(rat(1)), RelationRef{Predicate::Rn, 0}}};
    v.ideal.combination = {{P("-1"), RelationRef{Predicate::Eq0, 0}}};
    c.shape = v;
    auto res = verify_collapse(p, c);
    EXPECT_TRUE(res.valid) << res.message << " residual=" << to_string(res.residual);
}

TEST(Certificate, PositivityDiscipline) {
    // Weight <= 0 must be rejected even when the identity expands to zero.
    Presentation p = parse_presentation("theory ordered_field\nvars x\ngt x\neq x\n");
    CollapseCertificate c;
    c.theory = TheoryId::OrderedField;
    OrderedCollapse o;
    o.monoid.factors = {{RelationRef{Predicate::Gt0, 0}, 1}};
    ConeSummand s;
    s.weight = rat(-1);
    s.base = P("1");
    s.mask = {RelationRef{Predicate::Gt0, 0}};
    o.cone.summands = {s};
    c.shape = o;
    // x + (-1)*x + 0 == 0 expands to zero but the weight is illegal.
    auto res = verify_collapse(p, c);
    EXPECT_FALSE(res.valid);

    CollapseCertificate c2;
    c2.theory = TheoryId::OrderedField;
    OrderedCollapse o2;
    o2.monoid.scalar = rat(-1);
    o2.monoid.factors = {{RelationRef{Predicate::Gt0, 0}, 1}};
    o2.ideal.combination = {{P("1"), RelationRef{Predicate::Eq0, 0}}};
    c2.shape = o2;
    auto res2 = verify_collapse(p, c2);
    EXPECT_FALSE(res2.valid);
}

TEST(Certificate, ShapeTheoryMismatch) {
    Presentation p = parse_presentation("theory field\nvars x\neq x\n");
    CollapseCertificate c;
    c.theory = TheoryId::OrderedField;
    c.shape = OrderedCollapse{};
    EXPECT_FALSE(verify_collapse(p, c).valid);

    c.theory = TheoryId::Field;
    EXPECT_FALSE(verify_collapse(p, c).valid);  // ordered shape on field theory
}

TEST(Certificate, DanglingReference) {
    Presentation p = parse_presentation("theory field\nvars x\neq x\n");
    CollapseCertificate c;
    c.theory = TheoryId::Field;
    FieldCollapse f;
    f.monoid.factors = {{RelationRef{Predicate::Neq0, 3}, 1}};
    c.shape = f;
    EXPECT_FALSE(verify_collapse(p, c).valid);
}

TEST(Certificate, RandomEvaluationAgreesWithCanonicalCheck) {
    // Whenever verify_* returns true the expansion evaluates to zero at
    // random rational points; this re-checks independently of the
    // canonical-form equality.
    std::mt19937 rng(31);
    std::uniform_int_distribution<int> num(-50, 50);
    std::uniform_int_distribution<int> den(1, 9);
    Presentation pres = ex1_presentation();
    auto cert = ex1_certificate();
    auto res = verify_collapse(pres, cert);
    ASSERT_TRUE(res.valid);
    auto& o = std::get<OrderedCollapse>(cert.shape);
    for (int i = 0; i < 200; ++i) {
        std::map<std::string, Rational> pt{{"x", rat(num(rng), den(rng))},
                                           {"y", rat(num(rng), den(rng))}};
        Polynomial expansion =
            o.monoid.expand(pres) + o.cone.expand(pres) + o.ideal.expand(pres);
        EXPECT_EQ(eval(expansion, pt), rat(0));
    }
}

TEST(Certificate, JsonRoundTrip) {
    for (auto& cert : {ex1_certificate(), ex2_certificate()}) {
        Json j = to_json(cert);
        CollapseCertificate back = collapse_from_json(j);
        EXPECT_EQ(to_json(back), j);
        EXPECT_TRUE(verify_collapse(cert.theory == TheoryId::OrderedField &&
                                            std::get<OrderedCollapse>(cert.shape)
                                                    .monoid.factors.size() == 2
                                        ? ex2_presentation()
                                        : ex1_presentation(),
                                    back)
                        .valid);
    }
}

TEST(Certificate, JsonCanonicalKeyOrder) {
    Json j = to_json(ex1_certificate());
    std::string s = j.dump();
    // theory, shape, parts in that order; parts monoid/cone/ideal.
    EXPECT_LT(s.find("\"theory\""), s.find("\"shape\""));
    EXPECT_LT(s.find("\"shape\""), s.find("\"parts\""));
    EXPECT_LT(s.find("\"monoid\""), s.find("\"cone\""));
    EXPECT_LT(s.find("\"cone\""), s.find("\"ideal\""));
}

TEST(Certificate, TamperCompletenessOnParts) {
    // Perturbing any single coefficient, weight, exponent, or reference
    // of the verifying Ex2 certificate makes it fail.
    Presentation pres = ex2_presentation();
    CollapseCertificate base = ex2_certificate();
    ASSERT_TRUE(verify_collapse(pres, base).valid);

    int rejected = 0, total = 0;
    auto expect_invalid = [&](CollapseCertificate mutated) {
        ++total;
        if (!verify_collapse(pres, mutated).valid) ++rejected;
    };

    for (int k = 0; k < 2; ++k) {
        CollapseCertificate m = base;
        auto& o = std::get<OrderedCollapse>(m.shape);
        o.monoid.factors[k].second += 1;
        expect_invalid(m);
    }
    for (int k = 0; k < 2; ++k) {
        CollapseCertificate m = base;
        auto& o = std::get<OrderedCollapse>(m.shape);
        o.cone.summands[k].weight += 1;
        expect_invalid(m);
        CollapseCertificate m2 = base;
        auto& o2 = std::get<OrderedCollapse>(m2.shape);
        o2.cone.summands[k].base = o2.cone.summands[k].base + P("1");
        expect_invalid(m2);
    }
    {
        CollapseCertificate m = base;
        auto& o = std::get<OrderedCollapse>(m.shape);
        o.ideal.combination[0].first = o.ideal.combination[0].first + P("1");
        expect_invalid(m);
        CollapseCertificate m2 = base;
        auto& o2 = std::get<OrderedCollapse>(m2.shape);
        o2.ideal.combination[0].second.index = 0;  // same; flip pred instead
        o2.ideal.combination[0].second.pred = Predicate::Eq0;
        o2.ideal.combination[0].second.index = 1;  // out of range -> invalid
        expect_invalid(m2);
        CollapseCertificate m3 = base;
        auto& o3 = std::get<OrderedCollapse>(m3.shape);
        o3.monoid.scalar = rat(2);
        expect_invalid(m3);
    }
    EXPECT_EQ(rejected, total);
}
