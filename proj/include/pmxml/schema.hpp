#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pmxml/infoset.hpp"

// RELAX-NG pattern graph for the polymake data format and a
// derivative-based validator over it.
namespace pmxml::schema {

inline constexpr std::string_view kPolymakeNamespace =
    "http://www.math.tu-berlin.de/polymake/#3";

enum class PatternKind {
    Empty,
    NotAllowed,
    Text,
    Choice,
    Group,
    Interleave,
    OneOrMore,
    Element,
    Attribute,
    Data,
    ValueLiteral,
    NamedRef,
};

enum class BaseType { String, NonNegativeInteger, HexBinary, Token };

struct DatatypeSpec {
    BaseType base = BaseType::String;
    std::optional<std::string> regex_facet;  // anchored; only with String
};

struct Pattern;
using PatternPtr = std::shared_ptr<const Pattern>;

struct Pattern {
    PatternKind kind = PatternKind::Empty;
    PatternPtr a;             // first operand / element or attribute content
    PatternPtr b;             // second operand of binary nodes
    std::string name;         // element/attribute local name or ref target
    DatatypeSpec data;        // Data
    std::string literal;      // ValueLiteral
    std::string production;   // defining production, used in diagnostics
};

struct PatternGraph {
    std::map<std::string, PatternPtr> definitions;
    PatternPtr start;
};

struct Violation {
    std::string path;     // element path, e.g. /object/property[2]/m
    std::string rule;     // production name
    std::string message;
};

struct ValidationReport {
    bool valid = false;
    std::vector<Violation> violations;
};

struct ValidateOptions {
    // Accept a missing root namespace; the grammar text itself does not
    // encode namespaces.
    bool lax_namespace = false;
};

/// The fixed pattern graph transcribing the format grammar.
const PatternGraph& polymake_schema();

/// True iff p matches the empty sequence of nodes and attributes.
bool nullable(const PatternPtr& p, const PatternGraph& graph);

bool match_datatype(const DatatypeSpec& spec, std::string_view text);

ValidationReport validate(const infoset::XmlTree& tree, const PatternGraph& graph,
                          const ValidateOptions& opts = {});

/// The grammar in RELAX-NG compact syntax, as a documentation artifact.
std::string compact_syntax();

// Pattern constructors with the usual simplifications (NotAllowed and Empty
// absorption).  Exposed for tests that build patterns directly.
namespace build {
PatternPtr empty();
PatternPtr not_allowed();
PatternPtr text();
PatternPtr choice(PatternPtr a, PatternPtr b);
PatternPtr group(PatternPtr a, PatternPtr b);
PatternPtr interleave(PatternPtr a, PatternPtr b);
PatternPtr one_or_more(PatternPtr p);
PatternPtr optional(PatternPtr p);      // Choice(p, Empty)
PatternPtr zero_or_more(PatternPtr p);  // Choice(OneOrMore(p), Empty)
PatternPtr element(std::string name, PatternPtr content);
PatternPtr attribute(std::string name, PatternPtr content);
PatternPtr data(BaseType base, std::optional<std::string> regex = {});
PatternPtr value_literal(std::string literal);
PatternPtr ref(std::string name);
}  // namespace build

}  // namespace pmxml::schema
