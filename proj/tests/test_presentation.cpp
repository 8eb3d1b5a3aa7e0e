#include <dynalg/presentation.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace dynalg;

TEST(Presentation, ParseAcfExample) {
    Presentation p = parse_presentation(
        "theory acf\n"
        "vars x y\n"
        "eq x^2 - 1\n"
        "neq x - 1\n"
        "neq x + 1\n");
    EXPECT_EQ(p.theory(), TheoryId::Acf);
    EXPECT_EQ(p.generators(), (std::vector<std::string>{"x", "y"}));
    ASSERT_EQ(p.relations(Predicate::Eq0).size(), 1u);
    EXPECT_EQ(p.relations(Predicate::Eq0)[0], parse_polynomial("x^2-1"));
    ASSERT_EQ(p.relations(Predicate::Neq0).size(), 2u);
}

TEST(Presentation, ParseOrderedFieldExample) {
    Presentation p = parse_presentation(
        "theory ordered_field\n"
        "vars x y\n"
        "eq x^3 - y^3\n"
        "gt (x-y)^2\n");
    EXPECT_EQ(p.theory(), TheoryId::OrderedField);
    EXPECT_EQ(p.relations(Predicate::Gt0)[0], parse_polynomial("x^2 - 2*x*y + y^2"));
}

TEST(Presentation, PredicateValidation) {
    EXPECT_THROW(parse_presentation("theory acf\nvars x\ngeq x\n"), PresentationError);
    EXPECT_THROW(parse_presentation("theory ordered_group\nvars x\nneq x\n"), PresentationError);
    EXPECT_THROW(parse_presentation("theory nontrivial_ring\nvars x\nneq x\n"), PresentationError);
    EXPECT_THROW(parse_presentation("theory field\nvars x\nvr x\n"), PresentationError);
}

TEST(Presentation, HeaderValidation) {
    EXPECT_THROW(parse_presentation("vars x\n"), PresentationError);
    EXPECT_THROW(parse_presentation("theory acf\n"), PresentationError);
    EXPECT_THROW(parse_presentation("theory acf\ntheory acf\nvars x\n"), PresentationError);
    EXPECT_THROW(parse_presentation("theory acf\nvars x\nvars y\n"), PresentationError);
    EXPECT_THROW(parse_presentation("theory bogus\nvars x\n"), PresentationError);
    EXPECT_THROW(parse_presentation("theory acf\nvars x\neq y\n"), PresentationError);
    EXPECT_THROW(parse_presentation("theory acf\nvars x x\n"), PresentationError);
    EXPECT_THROW(parse_presentation("theory acf\nvars x\neq x +\n"), PresentationError);
}

TEST(Presentation, CommentsAndBlankLines) {
    Presentation p = parse_presentation(
        "# a comment\n"
        "theory field\n"
        "\n"
        "vars x   # trailing comment\n"
        "eq x # another\n");
    EXPECT_EQ(p.relation_count(), 1u);
}

TEST(Presentation, PrintRoundTrip) {
    std::mt19937 rng(23);
    std::vector<TheoryId> theories = {TheoryId::Acf,
                                      TheoryId::Field,
                                      TheoryId::OrderedField,
                                      TheoryId::Rcf,
                                      TheoryId::ValuedField,
                                      TheoryId::DivisibleOrderedGroup,
                                      TheoryId::NontrivialRing};
    std::uniform_int_distribution<int> coeff(-9, 9);
    std::uniform_int_distribution<int> deg(0, 3);
    std::uniform_int_distribution<int> nrel(0, 5);
    for (int round = 0; round < 100; ++round) {
        TheoryId t = theories[round % theories.size()];
        Presentation p(t, {"x", "y"});
        int n = nrel(rng);
        for (int i = 0; i < n; ++i) {
            Polynomial poly = Polynomial(rat(coeff(rng))) +
                              Polynomial::variable("x") * rat(coeff(rng)) +
                              Polynomial::variable("y") * rat(coeff(rng));
            if (family_of(t) != TheoryFamily::Group)
                poly = poly + Polynomial::term(rat(coeff(rng)), Monomial::var("x", deg(rng) + 1));
            std::vector<Predicate> legal;
            for (Predicate pred : all_predicates())
                if (predicate_allowed(t, pred)) legal.push_back(pred);
            p.add_relation(legal[static_cast<std::size_t>(round + i) % legal.size()], poly);
        }
        Presentation back = parse_presentation(print_presentation(p));
        EXPECT_EQ(back, p);
    }
}

TEST(Presentation, EmptyRelationSets) {
    Presentation p(TheoryId::Acf, {"x"});
    std::string text = print_presentation(p);
    EXPECT_EQ(text, "theory acf\nvars x\n");
    EXPECT_EQ(parse_presentation(text), p);
}

TEST(AffineForm, Conversions) {
    AffineForm a = to_affine(parse_polynomial("2*x - y + 1/2"));
    EXPECT_EQ(a.constant, rat(1, 2));
    EXPECT_EQ(a.coefficient("x"), rat(2));
    EXPECT_EQ(a.coefficient("y"), rat(-1));
    EXPECT_EQ(a.to_polynomial(), parse_polynomial("2*x - y + 1/2"));

    AffineForm z = to_affine(Polynomial());
    EXPECT_TRUE(z.is_zero());

    EXPECT_THROW(to_affine(parse_polynomial("x*y")), PolynomialError);
}

TEST(AffineForm, Arithmetic) {
    AffineForm a = to_affine(parse_polynomial("x + 1"));
    AffineForm b = to_affine(parse_polynomial("-x + 2"));
    EXPECT_EQ((a + b).to_polynomial(), parse_polynomial("3"));
    EXPECT_EQ((a * rat(3)).to_polynomial(), parse_polynomial("3*x + 3"));
    EXPECT_EQ(a.eval({{"x", rat(2)}}), rat(3));
}
