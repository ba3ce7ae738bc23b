#include <doctest.h>

#include <fstream>
#include <sstream>

#include "oracle_matcher.hpp"
#include "generators.hpp"
#include "pmxml/infoset.hpp"
#include "pmxml/schema.hpp"

using namespace pmxml;
using namespace pmxml::schema;

namespace {

infoset::XmlTree load_fixture(const std::string& name) {
    std::ifstream in(std::string(PMXML_FIXTURES_DIR) + "/" + name, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return infoset::read_document(buffer.str());
}

ValidationReport check(const std::string& xml) {
    return validate(infoset::read_document(xml), polymake_schema());
}

const char* kNs = "http://www.math.tu-berlin.de/polymake/#3";

std::string wrap(const std::string& inner) {
    return "<object type=\"polytope::Polytope&lt;Rational&gt;\" xmlns=\"" +
           std::string(kNs) + "\">" + inner + "</object>";
}

}  // namespace

TEST_CASE("pattern graph covers every production") {
    const PatternGraph& g = polymake_schema();
    for (const char* name :
         {"TopObject", "TopAttribs", "ObjectContent", "Property", "SubObject",
          "Attachment", "LooseData", "SimpleName", "PropertyData", "AttachmentData",
          "Text", "Complex", "VectorContents", "ElementIndex", "IdReference", "Vector",
          "MatrixContents", "Matrix", "TupleContents", "Tuple"}) {
        CHECK_MESSAGE(g.definitions.count(name) == 1, name);
    }
    CHECK(g.definitions.size() == 20);
    REQUIRE(g.start != nullptr);
}

TEST_CASE("start accepts object and data roots only") {
    CHECK(check(wrap("")).valid);
    CHECK(check("<data type=\"Array&lt;Int&gt;\" value=\"1\" xmlns=\"" + std::string(kNs) +
                "\"/>")
              .valid);
    CHECK_FALSE(check("<property name=\"X\" value=\"1\" xmlns=\"" + std::string(kNs) +
                      "\"/>")
                    .valid);
}

TEST_CASE("nullable basics") {
    const PatternGraph& g = polymake_schema();
    using namespace build;
    CHECK(nullable(empty(), g));
    CHECK_FALSE(nullable(not_allowed(), g));
    CHECK(nullable(text(), g));
    CHECK(nullable(zero_or_more(element("v", text())), g));
    CHECK_FALSE(nullable(one_or_more(element("v", text())), g));
    CHECK(nullable(choice(not_allowed(), empty()), g));
    CHECK_FALSE(nullable(group(empty(), attribute("x", text())), g));
    CHECK(nullable(interleave(empty(), optional(element("v", text()))), g));
    // named productions: content models only, so none of them are nullable
    CHECK_FALSE(nullable(g.definitions.at("TopObject"), g));
    CHECK(nullable(g.definitions.at("ObjectContent"), g));
}

TEST_CASE("datatype matching") {
    DatatypeSpec qualified{BaseType::String, std::string("[a-zA-Z][a-zA-Z_0-9]*::.*")};
    CHECK(match_datatype(qualified, "polytope::Polytope<Rational>"));
    CHECK_FALSE(match_datatype(qualified, "Polytope<Rational>"));
    CHECK_FALSE(match_datatype(qualified, "::x"));
    CHECK_FALSE(match_datatype(qualified, "9a::x"));
    CHECK(match_datatype(qualified, "a::"));

    DatatypeSpec version{BaseType::String, std::string("[\\d.]+")};
    CHECK(match_datatype(version, "3.0"));
    CHECK(match_datatype(version, "2.9.9"));
    CHECK_FALSE(match_datatype(version, ""));
    CHECK_FALSE(match_datatype(version, "3.0-beta"));

    DatatypeSpec simple{BaseType::String, std::string("[a-zA-Z][a-zA-Z_0-9]*")};
    CHECK(match_datatype(simple, "F_VECTOR"));
    CHECK(match_datatype(simple, "unnamed"));
    CHECK_FALSE(match_datatype(simple, "unnamed#0"));
    CHECK_FALSE(match_datatype(simple, "2fast"));

    DatatypeSpec nni{BaseType::NonNegativeInteger};
    CHECK(match_datatype(nni, "0"));
    CHECK(match_datatype(nni, "42"));
    CHECK(match_datatype(nni, " 7 "));
    CHECK_FALSE(match_datatype(nni, "-1"));
    CHECK_FALSE(match_datatype(nni, "1.5"));

    DatatypeSpec hex{BaseType::HexBinary};
    CHECK(match_datatype(hex, "56e977e8"));
    CHECK_FALSE(match_datatype(hex, "56e977e"));
    CHECK_FALSE(match_datatype(hex, "xyzw"));
}

TEST_CASE("fixtures validate") {
    CHECK(validate(load_fixture("square.xml"), polymake_schema()).valid);
    CHECK(validate(load_fixture("polynomial.xml"), polymake_schema()).valid);
}

TEST_CASE("namespace strictness and the lax option") {
    std::string no_ns = "<object type=\"a::b\"/>";
    CHECK_FALSE(check(no_ns).valid);
    ValidateOptions lax;
    lax.lax_namespace = true;
    CHECK(validate(infoset::read_document(no_ns), polymake_schema(), lax).valid);
    std::string wrong = "<object type=\"a::b\" xmlns=\"urn:other\"/>";
    CHECK_FALSE(validate(infoset::read_document(wrong), polymake_schema(), lax).valid);
}

TEST_CASE("violations carry a path and a production") {
    ValidationReport report = check("<object xmlns=\"" + std::string(kNs) + "\"/>");
    REQUIRE_FALSE(report.valid);
    REQUIRE_FALSE(report.violations.empty());
    CHECK(report.violations[0].path == "/object");
    CHECK(report.violations[0].rule == "TopAttribs");
    CHECK(report.violations[0].message.find("type") != std::string::npos);
}

TEST_CASE("representative invalid structures") {
    // property outside an object
    CHECK_FALSE(check("<data type=\"X\" xmlns=\"" + std::string(kNs) +
                      "\"><property name=\"A\" value=\"1\"/></data>")
                    .valid);
    // value attribute plus child content
    CHECK_FALSE(check(wrap("<property name=\"A\" value=\"1\"><v>1</v></property>")).valid);
    // r inside e
    CHECK_FALSE(check(wrap("<property name=\"A\"><v><e i=\"0\"><r/></e></v></property>"))
                    .valid);
    // sparse entry without its index
    CHECK_FALSE(check(wrap("<property name=\"A\"><v><e>1</e></v></property>")).valid);
    // non-integer dim
    CHECK_FALSE(check(wrap("<property name=\"A\"><v dim=\"x\"/></property>")).valid);
    // all fine when well-shaped
    CHECK(check(wrap("<property name=\"A\"><v><e i=\"0\">1</e></v></property>")).valid);
}

TEST_CASE("interleaved properties and attachments validate in any order") {
    CHECK(check(wrap("<attachment name=\"A\" value=\"1\"/>"
                     "<property name=\"P\" value=\"2\"/>"
                     "<attachment name=\"B\" value=\"3\"/>"))
              .valid);
}

TEST_CASE("compact syntax lists the whole grammar") {
    std::string text = compact_syntax();
    CHECK(text.find("start = TopObject | LooseData") != std::string::npos);
    for (const auto& [name, unused] : polymake_schema().definitions) {
        CHECK_MESSAGE(text.find(name + " =") != std::string::npos, name);
    }
    CHECK(text.find("Property* & Attachment*") != std::string::npos);
}

TEST_CASE("derivative validator agrees with the brute-force oracle") {
    gen::Rng rng(20260823);
    const PatternGraph& g = polymake_schema();
    for (int i = 0; i < 300; ++i) {
        infoset::XmlTree tree = gen::random_tree(rng);
        bool expected = oracle::oracle_valid(tree, g);
        bool actual = validate(tree, g).valid;
        CAPTURE(i);
        CAPTURE(infoset::write_document(tree));
        CHECK(actual == expected);
    }
}
