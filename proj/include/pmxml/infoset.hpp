#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

// Minimal XML document model for the polymake data format.  Covers exactly
// what the format needs: UTF-8, the five predefined entities plus numeric
// character references, CDATA, processing instructions and a default
// namespace.  DTDs, external entities and non-UTF-8 encodings are rejected.
namespace pmxml::infoset {

class WellFormednessError : public std::runtime_error {
public:
    WellFormednessError(std::string msg, std::size_t line, std::size_t column)
        : std::runtime_error(std::move(msg) + " at line " + std::to_string(line) +
                             ", column " + std::to_string(column)),
          line(line), column(column) {}

    std::size_t line;
    std::size_t column;
};

struct XmlElement;

/// Character data with entity references already decoded.
struct TextChild {
    std::string text;
    bool operator==(const TextChild&) const = default;
};

/// CDATA section content, kept verbatim.
struct CDataChild {
    std::string text;
    bool operator==(const CDataChild&) const = default;
};

struct XmlNode;

struct XmlElement {
    std::string name;  // local name
    std::string ns;    // default-namespace URI in scope, possibly empty
    std::vector<std::pair<std::string, std::string>> attributes;
    std::vector<XmlNode> children;

    bool operator==(const XmlElement&) const = default;

    /// Attribute lookup; nullptr when absent.
    const std::string* attribute(std::string_view name) const;
    /// Concatenated character data of all text/CDATA children.
    std::string text() const;
    bool has_element_children() const;
};

struct XmlNode {
    std::variant<XmlElement, TextChild, CDataChild> value;
    bool operator==(const XmlNode&) const = default;

    bool is_element() const { return std::holds_alternative<XmlElement>(value); }
    const XmlElement& element() const { return std::get<XmlElement>(value); }
};

struct XmlTree {
    XmlElement root;
    // (target, content) pairs appearing before the root element.
    std::vector<std::pair<std::string, std::string>> leading_pis;
    std::string declared_encoding = "utf-8";

    bool operator==(const XmlTree&) const = default;
};

/// Parses a UTF-8 XML 1.0 document.  Comments are discarded; whitespace-only
/// text between element children is dropped.  Throws WellFormednessError.
XmlTree read_document(std::string_view bytes);

/// Serializes a tree with a fixed layout: XML declaration, PIs, 2-space
/// indentation, self-closing empty elements, inline text-only content.
std::string write_document(const XmlTree& tree);

/// Equality up to attribute order, insignificant whitespace and the
/// CDATA-vs-text distinction.  PIs are compared verbatim.
bool infoset_equal(const XmlTree& a, const XmlTree& b);
bool infoset_equal(const XmlElement& a, const XmlElement& b);

}  // namespace pmxml::infoset
