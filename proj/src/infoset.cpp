#include "pmxml/infoset.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace pmxml::infoset {

namespace {

bool is_ws(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
}

bool is_ws_only(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return is_ws(c); });
}

bool is_name_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':';
}

bool is_name_char(char c) {
    return is_name_start(c) || std::isdigit(static_cast<unsigned char>(c)) ||
           c == '-' || c == '.';
}

class Reader {
public:
    explicit Reader(std::string_view input) : in_(input) { check_utf8(); }

    XmlTree parse() {
        XmlTree tree;
        parse_prolog(tree);
        tree.root = parse_element("");
        parse_epilog();
        return tree;
    }

private:
    std::string_view in_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;

    [[noreturn]] void fail(const std::string& msg) const {
        throw WellFormednessError(msg, line_, col_);
    }

    void check_utf8() {
        std::size_t i = 0, line = 1, col = 1;
        auto bad = [&] {
            throw WellFormednessError("invalid UTF-8 sequence", line, col);
        };
        while (i < in_.size()) {
            unsigned char c = static_cast<unsigned char>(in_[i]);
            std::size_t extra;
            if (c < 0x80) {
                if (c == '\n') { ++line; col = 1; } else { ++col; }
                ++i;
                continue;
            } else if ((c & 0xE0) == 0xC0 && c >= 0xC2) {
                extra = 1;
            } else if ((c & 0xF0) == 0xE0) {
                extra = 2;
            } else if ((c & 0xF8) == 0xF0 && c <= 0xF4) {
                extra = 3;
            } else {
                bad();
            }
            if (i + extra >= in_.size()) bad();
            for (std::size_t k = 1; k <= extra; ++k) {
                if ((static_cast<unsigned char>(in_[i + k]) & 0xC0) != 0x80) bad();
            }
            i += extra + 1;
            ++col;
        }
    }

    bool eof() const { return pos_ >= in_.size(); }

    char peek() const {
        if (eof()) return '\0';
        return in_[pos_];
    }

    bool starts_with(std::string_view s) const {
        return in_.substr(pos_, s.size()) == s;
    }

    char get() {
        if (eof()) fail("unexpected end of input");
        char c = in_[pos_++];
        if (c == '\n') { ++line_; col_ = 1; } else { ++col_; }
        return c;
    }

    void expect(std::string_view s) {
        for (char c : s) {
            if (eof() || get() != c) fail("expected '" + std::string(s) + "'");
        }
    }

    void skip_ws() {
        while (!eof() && is_ws(peek())) get();
    }

    std::string read_name() {
        if (eof() || !is_name_start(peek())) fail("expected a name");
        std::string name;
        name += get();
        while (!eof() && is_name_char(peek())) name += get();
        return name;
    }

    std::string decode_entity() {
        // positioned just after '&'
        std::string ent;
        while (!eof() && peek() != ';') {
            ent += get();
            if (ent.size() > 8) fail("malformed entity reference");
        }
        expect(";");
        if (ent == "lt") return "<";
        if (ent == "gt") return ">";
        if (ent == "amp") return "&";
        if (ent == "quot") return "\"";
        if (ent == "apos") return "'";
        if (!ent.empty() && ent[0] == '#') {
            unsigned long cp = 0;
            try {
                cp = ent[1] == 'x' || ent[1] == 'X'
                         ? std::stoul(ent.substr(2), nullptr, 16)
                         : std::stoul(ent.substr(1), nullptr, 10);
            } catch (const std::exception&) {
                fail("malformed character reference '&" + ent + ";'");
            }
            return encode_utf8(cp);
        }
        fail("unknown entity '&" + ent + ";'");
    }

    std::string encode_utf8(unsigned long cp) const {
        std::string out;
        if (cp < 0x80) {
            out += static_cast<char>(cp);
        } else if (cp < 0x800) {
            out += static_cast<char>(0xC0 | (cp >> 6));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        } else if (cp < 0x10000) {
            out += static_cast<char>(0xE0 | (cp >> 12));
            out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        } else if (cp < 0x110000) {
            out += static_cast<char>(0xF0 | (cp >> 18));
            out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
            out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        } else {
            throw WellFormednessError("character reference out of range", line_, col_);
        }
        return out;
    }

    std::string read_attribute_value() {
        char quote = get();
        if (quote != '"' && quote != '\'') fail("expected quoted attribute value");
        std::string value;
        while (true) {
            if (eof()) fail("unterminated attribute value");
            char c = peek();
            if (c == quote) { get(); break; }
            if (c == '<') fail("'<' in attribute value");
            if (c == '&') { get(); value += decode_entity(); continue; }
            value += get();
        }
        return value;
    }

    // PI or comment; returns true when a PI was read into (target, content).
    bool parse_misc(std::pair<std::string, std::string>* pi) {
        if (starts_with("<!--")) {
            expect("<!--");
            while (!starts_with("-->")) {
                if (eof()) fail("unterminated comment");
                get();
            }
            expect("-->");
            return false;
        }
        expect("<?");
        std::string target = read_name();
        std::string content;
        skip_ws();
        while (!starts_with("?>")) {
            if (eof()) fail("unterminated processing instruction");
            content += get();
        }
        expect("?>");
        if (pi) *pi = {target, content};
        return true;
    }

    void parse_prolog(XmlTree& tree) {
        if (starts_with("<?xml") &&
            (pos_ + 5 >= in_.size() || !is_name_char(in_[pos_ + 5]))) {
            expect("<?xml");
            skip_ws();
            while (!starts_with("?>")) {
                std::string name = read_name();
                skip_ws();
                expect("=");
                skip_ws();
                std::string value = read_attribute_value();
                if (name == "encoding") {
                    std::string lower = value;
                    std::transform(lower.begin(), lower.end(), lower.begin(),
                                   [](unsigned char c) { return std::tolower(c); });
                    if (lower != "utf-8")
                        fail("unsupported encoding '" + value + "'");
                    tree.declared_encoding = value;
                }
                skip_ws();
            }
            expect("?>");
        }
        while (true) {
            skip_ws();
            if (eof()) fail("missing root element");
            if (starts_with("<!DOCTYPE")) fail("DOCTYPE declarations are not supported");
            if (starts_with("<?") || starts_with("<!--")) {
                std::pair<std::string, std::string> pi;
                if (parse_misc(&pi)) tree.leading_pis.push_back(std::move(pi));
                continue;
            }
            if (peek() == '<') return;
            fail("content before root element");
        }
    }

    void parse_epilog() {
        while (!eof()) {
            if (is_ws(peek())) { get(); continue; }
            if (starts_with("<?") || starts_with("<!--")) {
                parse_misc(nullptr);
                continue;
            }
            fail("content after root element");
        }
    }

    XmlElement parse_element(const std::string& inherited_ns) {
        expect("<");
        XmlElement elem;
        elem.name = read_name();
        elem.ns = inherited_ns;
        while (true) {
            bool had_ws = !eof() && is_ws(peek());
            skip_ws();
            if (eof()) fail("unterminated start tag");
            if (peek() == '>' || starts_with("/>")) break;
            if (!had_ws) fail("expected whitespace before attribute");
            std::string name = read_name();
            skip_ws();
            expect("=");
            skip_ws();
            std::string value = read_attribute_value();
            if (name == "xmlns") {
                elem.ns = value;
                continue;
            }
            for (const auto& [n, _] : elem.attributes) {
                if (n == name) fail("duplicate attribute '" + name + "'");
            }
            elem.attributes.emplace_back(std::move(name), std::move(value));
        }
        if (starts_with("/>")) {
            expect("/>");
            return elem;
        }
        expect(">");
        parse_content(elem);
        return elem;
    }

    void parse_content(XmlElement& elem) {
        std::string text;
        auto flush_text = [&] {
            if (!text.empty()) {
                elem.children.push_back(XmlNode{TextChild{std::move(text)}});
                text.clear();
            }
        };
        while (true) {
            if (eof()) fail("unterminated element '" + elem.name + "'");
            if (starts_with("</")) {
                flush_text();
                expect("</");
                std::string name = read_name();
                if (name != elem.name)
                    fail("mismatched end tag '</" + name + ">' for '<" + elem.name + ">'");
                skip_ws();
                expect(">");
                break;
            }
            if (starts_with("<![CDATA[")) {
                flush_text();
                expect("<![CDATA[");
                std::string cdata;
                while (!starts_with("]]>")) {
                    if (eof()) fail("unterminated CDATA section");
                    cdata += get();
                }
                expect("]]>");
                elem.children.push_back(XmlNode{CDataChild{std::move(cdata)}});
                continue;
            }
            if (starts_with("<!--") || starts_with("<?")) {
                parse_misc(nullptr);
                continue;
            }
            if (peek() == '<') {
                flush_text();
                elem.children.push_back(XmlNode{parse_element(elem.ns)});
                continue;
            }
            if (peek() == '&') {
                get();
                text += decode_entity();
                continue;
            }
            if (starts_with("]]>")) fail("']]>' in character data");
            text += get();
        }
        strip_formatting_whitespace(elem);
    }

    // Indentation between element children is formatting, not content.
    static void strip_formatting_whitespace(XmlElement& elem) {
        if (!elem.has_element_children()) return;
        std::erase_if(elem.children, [](const XmlNode& n) {
            const auto* t = std::get_if<TextChild>(&n.value);
            return t != nullptr && is_ws_only(t->text);
        });
    }
};

void escape_text(const std::string& s, std::string& out) {
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
}

void escape_attribute(const std::string& s, std::string& out) {
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
}

class Writer {
public:
    std::string write(const XmlTree& tree) {
        out_ += "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n";
        for (const auto& [target, content] : tree.leading_pis) {
            out_ += "<?" + target;
            if (!content.empty()) out_ += " " + content;
            out_ += "?>\n";
        }
        write_element(tree.root, "", 0);
        out_ += "\n";
        return std::move(out_);
    }

private:
    std::string out_;

    void write_element(const XmlElement& e, const std::string& parent_ns, int depth) {
        out_ += "<" + e.name;
        for (const auto& [name, value] : e.attributes) {
            out_ += " " + name + "=\"";
            escape_attribute(value, out_);
            out_ += "\"";
        }
        if (e.ns != parent_ns) {
            out_ += " xmlns=\"";
            escape_attribute(e.ns, out_);
            out_ += "\"";
        }
        if (e.children.empty()) {
            out_ += " />";
            return;
        }
        out_ += ">";
        bool inline_content = !e.has_element_children() || has_mixed_content(e);
        if (inline_content) {
            for (const auto& child : e.children) write_node(child, e.ns, depth);
        } else {
            std::string indent(2 * (depth + 1), ' ');
            for (const auto& child : e.children) {
                out_ += "\n" + indent;
                write_node(child, e.ns, depth + 1);
            }
            out_ += "\n" + std::string(2 * depth, ' ');
        }
        out_ += "</" + e.name + ">";
    }

    void write_node(const XmlNode& n, const std::string& ns, int depth) {
        if (const auto* t = std::get_if<TextChild>(&n.value)) {
            escape_text(t->text, out_);
        } else if (const auto* c = std::get_if<CDataChild>(&n.value)) {
            out_ += "<![CDATA[" + c->text + "]]>";
        } else {
            write_element(n.element(), ns, depth);
        }
    }

    static bool has_mixed_content(const XmlElement& e) {
        for (const auto& child : e.children) {
            const auto* t = std::get_if<TextChild>(&child.value);
            if (t && !is_ws_only(t->text)) return true;
            if (std::holds_alternative<CDataChild>(child.value)) return true;
        }
        return false;
    }
};

}  // namespace

const std::string* XmlElement::attribute(std::string_view name) const {
    for (const auto& [n, v] : attributes) {
        if (n == name) return &v;
    }
    return nullptr;
}

std::string XmlElement::text() const {
    std::string out;
    for (const auto& child : children) {
        if (const auto* t = std::get_if<TextChild>(&child.value)) out += t->text;
        if (const auto* c = std::get_if<CDataChild>(&child.value)) out += c->text;
    }
    return out;
}

bool XmlElement::has_element_children() const {
    return std::any_of(children.begin(), children.end(),
                       [](const XmlNode& n) { return n.is_element(); });
}

XmlTree read_document(std::string_view bytes) {
    return Reader(bytes).parse();
}

std::string write_document(const XmlTree& tree) {
    return Writer().write(tree);
}

namespace {

// Normalized child list: CDATA folded into text, adjacent text merged,
// whitespace-only text dropped when element children are present.
struct NormalChild {
    const XmlElement* element = nullptr;
    std::string text;
};

std::vector<NormalChild> normalize_children(const XmlElement& e) {
    std::vector<NormalChild> out;
    for (const auto& child : e.children) {
        if (child.is_element()) {
            out.push_back({&child.element(), ""});
            continue;
        }
        std::string t = child.is_element() ? ""
                        : std::holds_alternative<TextChild>(child.value)
                            ? std::get<TextChild>(child.value).text
                            : std::get<CDataChild>(child.value).text;
        if (!out.empty() && out.back().element == nullptr) {
            out.back().text += t;
        } else {
            out.push_back({nullptr, std::move(t)});
        }
    }
    bool has_elements = std::any_of(out.begin(), out.end(),
                                    [](const NormalChild& c) { return c.element; });
    if (has_elements) {
        std::erase_if(out, [](const NormalChild& c) {
            return c.element == nullptr && is_ws_only(c.text);
        });
    }
    return out;
}

}  // namespace

bool infoset_equal(const XmlElement& a, const XmlElement& b) {
    if (a.name != b.name || a.ns != b.ns) return false;
    if (a.attributes.size() != b.attributes.size()) return false;
    auto sorted = [](const XmlElement& e) {
        auto attrs = e.attributes;
        std::sort(attrs.begin(), attrs.end());
        return attrs;
    };
    if (sorted(a) != sorted(b)) return false;
    auto ca = normalize_children(a);
    auto cb = normalize_children(b);
    if (ca.size() != cb.size()) return false;
    for (std::size_t i = 0; i < ca.size(); ++i) {
        if ((ca[i].element == nullptr) != (cb[i].element == nullptr)) return false;
        if (ca[i].element) {
            if (!infoset_equal(*ca[i].element, *cb[i].element)) return false;
        } else if (ca[i].text != cb[i].text) {
            return false;
        }
    }
    return true;
}

bool infoset_equal(const XmlTree& a, const XmlTree& b) {
    return a.leading_pis == b.leading_pis && infoset_equal(a.root, b.root);
}

}  // namespace pmxml::infoset
