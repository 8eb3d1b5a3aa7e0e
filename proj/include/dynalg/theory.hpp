#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dynalg {

enum class TheoryFamily { Ring, Field, Ordered, Valued, Group };

enum class TheoryId {
    NontrivialRing,
    RingProperMonoid,
    QuasiDomain,
    Field,
    Acf,
    ProtoOrderedRing,
    QuasiOrderedRing,
    OrderedDomain,
    OrderedField,
    Rcf,
    ProtoValuedRing,
    QuasiValuedRing,
    ValuedField,
    Acvf,
    ProtoOrderedGroup,
    QuasiOrderedGroup,
    OrderedGroup,
    DivisibleOrderedGroup,
};

enum class Predicate { Eq0, Neq0, Geq0, Gt0, Vr, Rn, U };

inline const std::array<Predicate, 7>& all_predicates() {
    static const std::array<Predicate, 7> preds = {
        Predicate::Eq0, Predicate::Neq0, Predicate::Geq0, Predicate::Gt0,
        Predicate::Vr,  Predicate::Rn,   Predicate::U};
    return preds;
}

inline std::string to_string(Predicate p) {
    switch (p) {
        case Predicate::Eq0: return "eq";
        case Predicate::Neq0: return "neq";
        case Predicate::Geq0: return "geq";
        case Predicate::Gt0: return "gt";
        case Predicate::Vr: return "vr";
        case Predicate::Rn: return "rn";
        case Predicate::U: return "u";
    }
    return "?";
}

inline std::optional<Predicate> predicate_from_string(const std::string& s) {
    if (s == "eq") return Predicate::Eq0;
    if (s == "neq") return Predicate::Neq0;
    if (s == "geq") return Predicate::Geq0;
    if (s == "gt") return Predicate::Gt0;
    if (s == "vr") return Predicate::Vr;
    if (s == "rn") return Predicate::Rn;
    if (s == "u") return Predicate::U;
    return std::nullopt;
}

inline std::string to_string(TheoryId t) {
    switch (t) {
        case TheoryId::NontrivialRing: return "nontrivial_ring";
        case TheoryId::RingProperMonoid: return "ring_proper_monoid";
        case TheoryId::QuasiDomain: return "quasi_domain";
        case TheoryId::Field: return "field";
        case TheoryId::Acf: return "acf";
        case TheoryId::ProtoOrderedRing: return "proto_ordered_ring";
        case TheoryId::QuasiOrderedRing: return "quasi_ordered_ring";
        case TheoryId::OrderedDomain: return "ordered_domain";
        case TheoryId::OrderedField: return "ordered_field";
        case TheoryId::Rcf: return "rcf";
        case TheoryId::ProtoValuedRing: return "proto_valued_ring";
        case TheoryId::QuasiValuedRing: return "quasi_valued_ring";
        case TheoryId::ValuedField: return "valued_field";
        case TheoryId::Acvf: return "acvf";
        case TheoryId::ProtoOrderedGroup: return "proto_ordered_group";
        case TheoryId::QuasiOrderedGroup: return "quasi_ordered_group";
        case TheoryId::OrderedGroup: return "ordered_group";
        case TheoryId::DivisibleOrderedGroup: return "divisible_ordered_group";
    }
    return "?";
}

inline std::optional<TheoryId> theory_from_string(const std::string& s) {
    static const std::vector<TheoryId> all = {
        TheoryId::NontrivialRing,   TheoryId::RingProperMonoid, TheoryId::QuasiDomain,
        TheoryId::Field,            TheoryId::Acf,              TheoryId::ProtoOrderedRing,
        TheoryId::QuasiOrderedRing, TheoryId::OrderedDomain,    TheoryId::OrderedField,
        TheoryId::Rcf,              TheoryId::ProtoValuedRing,  TheoryId::QuasiValuedRing,
        TheoryId::ValuedField,      TheoryId::Acvf,             TheoryId::ProtoOrderedGroup,
        TheoryId::QuasiOrderedGroup, TheoryId::OrderedGroup,    TheoryId::DivisibleOrderedGroup};
    for (TheoryId t : all)
        if (to_string(t) == s) return t;
    return std::nullopt;
}

inline TheoryFamily family_of(TheoryId t) {
    switch (t) {
        case TheoryId::NontrivialRing:
            return TheoryFamily::Ring;
        case TheoryId::RingProperMonoid:
        case TheoryId::QuasiDomain:
        case TheoryId::Field:
        case TheoryId::Acf:
            return TheoryFamily::Field;
        case TheoryId::ProtoOrderedRing:
        case TheoryId::QuasiOrderedRing:
        case TheoryId::OrderedDomain:
        case TheoryId::OrderedField:
        case TheoryId::Rcf:
            return TheoryFamily::Ordered;
        case TheoryId::ProtoValuedRing:
        case TheoryId::QuasiValuedRing:
        case TheoryId::ValuedField:
        case TheoryId::Acvf:
            return TheoryFamily::Valued;
        case TheoryId::ProtoOrderedGroup:
        case TheoryId::QuasiOrderedGroup:
        case TheoryId::OrderedGroup:
        case TheoryId::DivisibleOrderedGroup:
            return TheoryFamily::Group;
    }
    throw std::logic_error("unknown theory");
}

// The unary language of each family.
inline bool predicate_allowed(TheoryId t, Predicate p) {
    switch (family_of(t)) {
        case TheoryFamily::Ring:
            return p == Predicate::Eq0;
        case TheoryFamily::Field:
            return p == Predicate::Eq0 || p == Predicate::Neq0;
        case TheoryFamily::Ordered:
            if (t == TheoryId::OrderedDomain)
                return p == Predicate::Eq0 || p == Predicate::Geq0;
            return p == Predicate::Eq0 || p == Predicate::Geq0 || p == Predicate::Gt0;
        case TheoryFamily::Valued:
            return p == Predicate::Eq0 || p == Predicate::Neq0 || p == Predicate::Vr ||
                   p == Predicate::Rn || p == Predicate::U;
        case TheoryFamily::Group:
            return p == Predicate::Eq0 || p == Predicate::Geq0 || p == Predicate::Gt0;
    }
    return false;
}

}  // namespace dynalg
