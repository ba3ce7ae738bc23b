#include "pmxml/schema.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <set>
#include <unordered_map>

namespace pmxml::schema {

namespace build {

namespace {
thread_local const std::string* current_production = nullptr;

PatternPtr make(Pattern p) {
    if (current_production) p.production = *current_production;
    return std::make_shared<const Pattern>(std::move(p));
}

const PatternPtr& empty_singleton() {
    static const PatternPtr p = std::make_shared<const Pattern>(Pattern{PatternKind::Empty});
    return p;
}

const PatternPtr& not_allowed_singleton() {
    static const PatternPtr p =
        std::make_shared<const Pattern>(Pattern{PatternKind::NotAllowed});
    return p;
}

const PatternPtr& text_singleton() {
    static const PatternPtr p = std::make_shared<const Pattern>(Pattern{PatternKind::Text});
    return p;
}
}  // namespace

PatternPtr empty() { return empty_singleton(); }
PatternPtr not_allowed() { return not_allowed_singleton(); }
PatternPtr text() { return text_singleton(); }

PatternPtr choice(PatternPtr a, PatternPtr b) {
    if (a->kind == PatternKind::NotAllowed) return b;
    if (b->kind == PatternKind::NotAllowed) return a;
    if (a == b) return a;
    // Collapses the frequent Choice(Empty, Empty) residuals.
    if (a->kind == PatternKind::Empty && b->kind == PatternKind::Empty) return a;
    Pattern p{PatternKind::Choice};
    p.a = std::move(a);
    p.b = std::move(b);
    return make(std::move(p));
}

PatternPtr group(PatternPtr a, PatternPtr b) {
    if (a->kind == PatternKind::NotAllowed || b->kind == PatternKind::NotAllowed)
        return not_allowed();
    if (a->kind == PatternKind::Empty) return b;
    if (b->kind == PatternKind::Empty) return a;
    Pattern p{PatternKind::Group};
    p.a = std::move(a);
    p.b = std::move(b);
    return make(std::move(p));
}

PatternPtr interleave(PatternPtr a, PatternPtr b) {
    if (a->kind == PatternKind::NotAllowed || b->kind == PatternKind::NotAllowed)
        return not_allowed();
    if (a->kind == PatternKind::Empty) return b;
    if (b->kind == PatternKind::Empty) return a;
    Pattern p{PatternKind::Interleave};
    p.a = std::move(a);
    p.b = std::move(b);
    return make(std::move(p));
}

PatternPtr one_or_more(PatternPtr p) {
    if (p->kind == PatternKind::NotAllowed) return not_allowed();
    Pattern q{PatternKind::OneOrMore};
    q.a = std::move(p);
    return make(std::move(q));
}

PatternPtr optional(PatternPtr p) { return choice(std::move(p), empty()); }

PatternPtr zero_or_more(PatternPtr p) { return choice(one_or_more(std::move(p)), empty()); }

PatternPtr element(std::string name, PatternPtr content) {
    Pattern p{PatternKind::Element};
    p.name = std::move(name);
    p.a = std::move(content);
    return make(std::move(p));
}

PatternPtr attribute(std::string name, PatternPtr content) {
    Pattern p{PatternKind::Attribute};
    p.name = std::move(name);
    p.a = std::move(content);
    return make(std::move(p));
}

PatternPtr data(BaseType base, std::optional<std::string> regex) {
    Pattern p{PatternKind::Data};
    p.data = DatatypeSpec{base, std::move(regex)};
    return make(std::move(p));
}

PatternPtr value_literal(std::string literal) {
    Pattern p{PatternKind::ValueLiteral};
    p.literal = std::move(literal);
    return make(std::move(p));
}

PatternPtr ref(std::string name) {
    Pattern p{PatternKind::NamedRef};
    p.name = std::move(name);
    return make(std::move(p));
}

}  // namespace build

namespace {

using namespace build;

const PatternPtr& resolve(const Pattern& p, const PatternGraph& g) {
    auto it = g.definitions.find(p.name);
    if (it == g.definitions.end())
        throw std::logic_error("dangling pattern reference '" + p.name + "'");
    return it->second;
}

PatternGraph build_polymake_schema() {
    PatternGraph g;
    std::string prod;
    build::current_production = &prod;
    auto define = [&](const std::string& name, auto builder) {
        prod = name;
        g.definitions[name] = builder();
    };

    auto grp = [](std::initializer_list<PatternPtr> ps) {
        PatternPtr out;
        for (const auto& p : ps) out = out ? group(out, p) : p;
        return out;
    };
    auto alt = [](std::initializer_list<PatternPtr> ps) {
        PatternPtr out;
        for (const auto& p : ps) out = out ? choice(out, p) : p;
        return out;
    };
    auto text_attr = [](const std::string& name) { return attribute(name, text()); };
    auto nni_attr = [](const std::string& name) {
        return attribute(name, data(BaseType::NonNegativeInteger));
    };

    define("TopObject", [&] {
        return element("object", group(ref("TopAttribs"), ref("ObjectContent")));
    });
    define("TopAttribs", [&] {
        // The app-qualified "[a-zA-Z][a-zA-Z_0-9]*::.*" pattern only fits
        // object types; loose data uses plain template type names, so the
        // shared production accepts any string and the object decoder
        // enforces the qualified form.
        return grp({
            attribute("type", data(BaseType::String)),
            optional(attribute("version", data(BaseType::String, "[\\d.]+"))),
            optional(attribute("tm", data(BaseType::HexBinary))),
        });
    });
    define("ObjectContent", [&] {
        return grp({
            optional(text_attr("name")),
            optional(text_attr("ext")),
            optional(element("description", text())),
            zero_or_more(element("credit", group(text_attr("product"), text()))),
            interleave(zero_or_more(ref("Property")), zero_or_more(ref("Attachment"))),
        });
    });
    define("Property", [&] {
        return element("property",
                       grp({ref("SimpleName"), optional(text_attr("ext")),
                            alt({
                                group(attribute("undef", value_literal("true")), empty()),
                                group(optional(text_attr("type")), ref("PropertyData")),
                                ref("Text"),
                                one_or_more(ref("SubObject")),
                            })}));
    });
    define("SubObject", [&] {
        return element("object", group(optional(text_attr("type")), ref("ObjectContent")));
    });
    define("Attachment", [&] {
        return element("attachment", grp({ref("SimpleName"), optional(text_attr("ext")),
                                          ref("AttachmentData")}));
    });
    define("LooseData", [&] {
        return element("data", grp({ref("TopAttribs"), optional(text_attr("ext")),
                                    optional(element("description", text())),
                                    ref("PropertyData")}));
    });
    define("SimpleName", [&] {
        return attribute("name", data(BaseType::String, "[a-zA-Z][a-zA-Z_0-9]*"));
    });
    define("PropertyData", [&] {
        return alt({
            group(text_attr("value"), empty()),
            ref("IdReference"),
            ref("Complex"),
            element("m", one_or_more(ref("SubObject"))),
        });
    });
    define("AttachmentData", [&] {
        return alt({
            grp({optional(text_attr("type")), text_attr("value"), empty()}),
            grp({text_attr("type"), optional(text_attr("construct")), ref("Complex")}),
            ref("Text"),
        });
    });
    define("Text", [&] {
        return group(attribute("type", value_literal("text")), text());
    });
    define("Complex", [&] { return alt({ref("Vector"), ref("Matrix"), ref("Tuple")}); });
    define("VectorContents", [&] {
        return choice(
            text(),
            group(optional(nni_attr("dim")),
                  choice(zero_or_more(element("e", group(ref("ElementIndex"), text()))),
                         one_or_more(element(
                             "t", group(optional(ref("ElementIndex")), ref("TupleContents")))))));
    });
    define("ElementIndex", [&] { return nni_attr("i"); });
    define("IdReference", [&] {
        return element("r", group(optional(nni_attr("id")), empty()));
    });
    define("Vector", [&] { return element("v", ref("VectorContents")); });
    define("MatrixContents", [&] {
        return alt({
            group(optional(nni_attr("cols")), zero_or_more(ref("Vector"))),
            group(nni_attr("dim"),
                  zero_or_more(element("v", group(ref("ElementIndex"), ref("VectorContents"))))),
            one_or_more(ref("Matrix")),
            one_or_more(ref("Tuple")),
        });
    });
    define("Matrix", [&] { return element("m", ref("MatrixContents")); });
    define("TupleContents", [&] {
        return group(optional(nni_attr("id")),
                     choice(text(), one_or_more(alt({
                                        ref("Vector"),
                                        ref("Matrix"),
                                        ref("Tuple"),
                                        ref("IdReference"),
                                        element("e", text()),
                                    }))));
    });
    define("Tuple", [&] { return element("t", ref("TupleContents")); });

    prod = "start";
    g.start = choice(ref("TopObject"), ref("LooseData"));
    build::current_production = nullptr;
    return g;
}

bool nullable_impl(const Pattern& p, const PatternGraph& g, std::set<const Pattern*>& seen) {
    switch (p.kind) {
        case PatternKind::Empty:
        case PatternKind::Text:
            return true;
        case PatternKind::NotAllowed:
        case PatternKind::Element:
        case PatternKind::Attribute:
        case PatternKind::Data:
        case PatternKind::ValueLiteral:
        case PatternKind::OneOrMore:
            return p.kind == PatternKind::OneOrMore ? nullable_impl(*p.a, g, seen) : false;
        case PatternKind::Choice:
            return nullable_impl(*p.a, g, seen) || nullable_impl(*p.b, g, seen);
        case PatternKind::Group:
        case PatternKind::Interleave:
            return nullable_impl(*p.a, g, seen) && nullable_impl(*p.b, g, seen);
        case PatternKind::NamedRef: {
            if (!seen.insert(&p).second) return false;  // in-flight cycle
            return nullable_impl(*resolve(p, g), g, seen);
        }
    }
    return false;
}

bool is_hex_digit(char c) {
    return std::isxdigit(static_cast<unsigned char>(c)) != 0;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// The XML Schema regex dialect, restricted to what the grammar's facets use:
// literals, character classes, \d, '.', and the ?/+/* quantifiers, always
// anchored at both ends.
struct RegexAtom {
    enum Kind { Literal, Class, Any, Digit } kind = Literal;
    char literal = '\0';
    std::set<char> chars;          // Class
    enum Quant { One, Opt, Star, Plus } quant = One;
};

std::vector<RegexAtom> parse_regex(std::string_view pattern) {
    std::vector<RegexAtom> atoms;
    std::size_t i = 0;
    while (i < pattern.size()) {
        RegexAtom atom;
        char c = pattern[i++];
        if (c == '[') {
            atom.kind = RegexAtom::Class;
            while (i < pattern.size() && pattern[i] != ']') {
                char first = pattern[i++];
                if (first == '\\' && i < pattern.size()) {
                    char esc = pattern[i++];
                    if (esc == 'd') {
                        for (char d = '0'; d <= '9'; ++d) atom.chars.insert(d);
                    } else {
                        atom.chars.insert(esc);
                    }
                    continue;
                }
                if (i + 1 < pattern.size() && pattern[i] == '-' && pattern[i + 1] != ']') {
                    char last = pattern[i + 1];
                    i += 2;
                    for (char d = first; d <= last; ++d) atom.chars.insert(d);
                } else {
                    atom.chars.insert(first);
                }
            }
            if (i >= pattern.size()) throw std::logic_error("unterminated character class");
            ++i;  // ']'
        } else if (c == '\\') {
            if (i >= pattern.size()) throw std::logic_error("trailing backslash in regex facet");
            char esc = pattern[i++];
            if (esc == 'd') {
                atom.kind = RegexAtom::Digit;
            } else {
                atom.kind = RegexAtom::Literal;
                atom.literal = esc;
            }
        } else if (c == '.') {
            atom.kind = RegexAtom::Any;
        } else {
            atom.kind = RegexAtom::Literal;
            atom.literal = c;
        }
        if (i < pattern.size()) {
            if (pattern[i] == '*') { atom.quant = RegexAtom::Star; ++i; }
            else if (pattern[i] == '+') { atom.quant = RegexAtom::Plus; ++i; }
            else if (pattern[i] == '?') { atom.quant = RegexAtom::Opt; ++i; }
        }
        atoms.push_back(std::move(atom));
    }
    return atoms;
}

bool atom_matches(const RegexAtom& a, char c) {
    switch (a.kind) {
        case RegexAtom::Literal: return c == a.literal;
        case RegexAtom::Class: return a.chars.count(c) > 0;
        case RegexAtom::Any: return c != '\n' && c != '\r';
        case RegexAtom::Digit: return c >= '0' && c <= '9';
    }
    return false;
}

bool regex_match_from(const std::vector<RegexAtom>& atoms, std::size_t ai,
                      std::string_view s, std::size_t si) {
    if (ai == atoms.size()) return si == s.size();
    const RegexAtom& a = atoms[ai];
    switch (a.quant) {
        case RegexAtom::One:
            return si < s.size() && atom_matches(a, s[si]) &&
                   regex_match_from(atoms, ai + 1, s, si + 1);
        case RegexAtom::Opt:
            if (si < s.size() && atom_matches(a, s[si]) &&
                regex_match_from(atoms, ai + 1, s, si + 1))
                return true;
            return regex_match_from(atoms, ai + 1, s, si);
        case RegexAtom::Plus:
            if (si >= s.size() || !atom_matches(a, s[si])) return false;
            ++si;
            [[fallthrough]];
        case RegexAtom::Star: {
            std::size_t max = si;
            while (max < s.size() && atom_matches(a, s[max])) ++max;
            for (std::size_t k = max + 1; k-- > si;) {
                if (regex_match_from(atoms, ai + 1, s, k)) return true;
            }
            return false;
        }
    }
    return false;
}

bool regex_full_match(const std::string& pattern, std::string_view s) {
    static thread_local std::unordered_map<std::string, std::vector<RegexAtom>> cache;
    auto it = cache.find(pattern);
    if (it == cache.end()) it = cache.emplace(pattern, parse_regex(pattern)).first;
    return regex_match_from(it->second, 0, s, 0);
}

}  // namespace

const PatternGraph& polymake_schema() {
    static const PatternGraph graph = build_polymake_schema();
    return graph;
}

bool nullable(const PatternPtr& p, const PatternGraph& graph) {
    std::set<const Pattern*> seen;
    return nullable_impl(*p, graph, seen);
}

bool match_datatype(const DatatypeSpec& spec, std::string_view text) {
    switch (spec.base) {
        case BaseType::String:
            return !spec.regex_facet || regex_full_match(*spec.regex_facet, text);
        case BaseType::NonNegativeInteger: {
            std::string_view t = trim(text);
            if (!t.empty() && t.front() == '+') t.remove_prefix(1);
            if (t.empty()) return false;
            return std::all_of(t.begin(), t.end(),
                               [](char c) { return c >= '0' && c <= '9'; });
        }
        case BaseType::HexBinary: {
            std::string_view t = trim(text);
            if (t.size() % 2 != 0) return false;
            return std::all_of(t.begin(), t.end(), is_hex_digit);
        }
        case BaseType::Token:
            return true;
    }
    return false;
}

namespace {

using infoset::XmlElement;
using infoset::XmlNode;

bool ws_only(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) {
        return c == ' ' || c == '\t' || c == '\r' || c == '\n';
    });
}

class Matcher {
public:
    Matcher(const PatternGraph& g, std::string expected_ns)
        : g_(g), ns_(std::move(expected_ns)) {}

    ValidationReport run(const XmlElement& root) {
        ValidationReport report;
        std::string path = "/" + root.name;
        PatternPtr residual = elem_deriv(g_.start, root, path);
        report.valid = nullable(residual, g_);
        if (!report.valid) {
            if (best_.path.empty()) {
                best_ = {path, "start", "element '" + root.name + "' is not a valid root"};
            }
            report.violations.push_back(best_);
        }
        return report;
    }

private:
    const PatternGraph& g_;
    std::string ns_;
    Violation best_;
    std::size_t best_depth_ = 0;
    std::map<std::pair<const Pattern*, const XmlElement*>, bool> content_memo_;

    void record(const std::string& path, const std::string& rule, std::string message) {
        std::size_t depth = std::count(path.begin(), path.end(), '/');
        if (depth >= best_depth_) {
            best_depth_ = depth;
            best_ = {path, rule, std::move(message)};
        }
    }

    const PatternPtr& deref(const PatternPtr& p) { return resolve(*p, g_); }

    bool null(const PatternPtr& p) { return nullable(p, g_); }

    bool attr_value_match(const PatternPtr& content, const std::string& value) {
        if (null(text_deriv(content, value))) return true;
        return value.empty() && null(content);
    }

    PatternPtr text_deriv(const PatternPtr& p, const std::string& s) {
        switch (p->kind) {
            case PatternKind::Text:
                return p;
            case PatternKind::Data:
                return match_datatype(p->data, s) ? empty() : not_allowed();
            case PatternKind::ValueLiteral:
                return s == p->literal ? empty() : not_allowed();
            case PatternKind::Choice:
                return choice(text_deriv(p->a, s), text_deriv(p->b, s));
            case PatternKind::Group: {
                PatternPtr x = group(text_deriv(p->a, s), p->b);
                return null(p->a) ? choice(x, text_deriv(p->b, s)) : x;
            }
            case PatternKind::Interleave:
                return choice(interleave(text_deriv(p->a, s), p->b),
                              interleave(p->a, text_deriv(p->b, s)));
            case PatternKind::OneOrMore:
                return group(text_deriv(p->a, s), optional(one_or_more(p->a)));
            case PatternKind::NamedRef:
                return text_deriv(deref(p), s);
            default:
                return not_allowed();
        }
    }

    PatternPtr att_deriv(const PatternPtr& p, const std::string& name,
                         const std::string& value) {
        switch (p->kind) {
            case PatternKind::Attribute:
                return p->name == name && attr_value_match(p->a, value) ? empty()
                                                                        : not_allowed();
            case PatternKind::Choice:
                return choice(att_deriv(p->a, name, value), att_deriv(p->b, name, value));
            case PatternKind::Group:
                return choice(group(att_deriv(p->a, name, value), p->b),
                              group(p->a, att_deriv(p->b, name, value)));
            case PatternKind::Interleave:
                return choice(interleave(att_deriv(p->a, name, value), p->b),
                              interleave(p->a, att_deriv(p->b, name, value)));
            case PatternKind::OneOrMore:
                return group(att_deriv(p->a, name, value), optional(one_or_more(p->a)));
            case PatternKind::NamedRef:
                return att_deriv(deref(p), name, value);
            default:
                return not_allowed();
        }
    }

    PatternPtr start_tag_close(const PatternPtr& p) {
        switch (p->kind) {
            case PatternKind::Attribute:
                return not_allowed();
            case PatternKind::Choice:
                return choice(start_tag_close(p->a), start_tag_close(p->b));
            case PatternKind::Group:
                return group(start_tag_close(p->a), start_tag_close(p->b));
            case PatternKind::Interleave:
                return interleave(start_tag_close(p->a), start_tag_close(p->b));
            case PatternKind::OneOrMore:
                return one_or_more(start_tag_close(p->a));
            case PatternKind::NamedRef:
                return start_tag_close(deref(p));
            default:
                return p;
        }
    }

    PatternPtr elem_deriv(const PatternPtr& p, const XmlElement& e, const std::string& path) {
        switch (p->kind) {
            case PatternKind::Element:
                if (p->name != e.name || e.ns != ns_) return not_allowed();
                return match_content(p->a, e, path, p->production) ? empty() : not_allowed();
            case PatternKind::Choice:
                return choice(elem_deriv(p->a, e, path), elem_deriv(p->b, e, path));
            case PatternKind::Group: {
                PatternPtr x = group(elem_deriv(p->a, e, path), p->b);
                return null(p->a) ? choice(x, elem_deriv(p->b, e, path)) : x;
            }
            case PatternKind::Interleave:
                return choice(interleave(elem_deriv(p->a, e, path), p->b),
                              interleave(p->a, elem_deriv(p->b, e, path)));
            case PatternKind::OneOrMore:
                return group(elem_deriv(p->a, e, path), optional(one_or_more(p->a)));
            case PatternKind::NamedRef:
                return elem_deriv(deref(p), e, path);
            default:
                return not_allowed();
        }
    }

    // Required attribute names (present in every alternative) with the
    // production that defines them, for missing-attribute diagnostics.
    void required_attrs(const PatternPtr& p, std::map<std::string, std::string>& out,
                        std::set<const Pattern*>& guard) {
        switch (p->kind) {
            case PatternKind::Attribute:
                out.emplace(p->name, p->production);
                return;
            case PatternKind::Group:
            case PatternKind::Interleave:
                required_attrs(p->a, out, guard);
                required_attrs(p->b, out, guard);
                return;
            case PatternKind::Choice: {
                std::map<std::string, std::string> left, right;
                required_attrs(p->a, left, guard);
                required_attrs(p->b, right, guard);
                for (const auto& [name, prod] : left) {
                    if (right.count(name)) out.emplace(name, prod);
                }
                return;
            }
            case PatternKind::OneOrMore:
                required_attrs(p->a, out, guard);
                return;
            case PatternKind::NamedRef:
                if (guard.insert(p.get()).second) required_attrs(deref(p), out, guard);
                return;
            default:
                return;
        }
    }

    std::string find_attr_rule(const PatternPtr& p, const std::string& name,
                               std::set<const Pattern*>& guard) {
        switch (p->kind) {
            case PatternKind::Attribute:
                return p->name == name ? p->production : "";
            case PatternKind::Choice:
            case PatternKind::Group:
            case PatternKind::Interleave: {
                std::string rule = find_attr_rule(p->a, name, guard);
                return rule.empty() ? find_attr_rule(p->b, name, guard) : rule;
            }
            case PatternKind::OneOrMore:
                return find_attr_rule(p->a, name, guard);
            case PatternKind::NamedRef:
                return guard.insert(p.get()).second ? find_attr_rule(deref(p), name, guard)
                                                    : "";
            default:
                return "";
        }
    }

    bool match_content(const PatternPtr& content, const XmlElement& e,
                       const std::string& path, const std::string& elem_rule) {
        auto key = std::make_pair(content.get(), &e);
        if (auto it = content_memo_.find(key); it != content_memo_.end()) return it->second;
        bool ok = match_content_uncached(content, e, path, elem_rule);
        content_memo_[key] = ok;
        return ok;
    }

    bool match_content_uncached(const PatternPtr& content, const XmlElement& e,
                                const std::string& path, const std::string& elem_rule) {
        PatternPtr p = content;
        for (const auto& [name, value] : e.attributes) {
            p = att_deriv(p, name, value);
            if (p->kind == PatternKind::NotAllowed) {
                std::set<const Pattern*> guard;
                std::string rule = find_attr_rule(content, name, guard);
                record(path, rule.empty() ? elem_rule : rule,
                       rule.empty()
                           ? "attribute '" + name + "' not allowed on element '" + e.name + "'"
                           : "attribute '" + name + "' with value '" + value + "' not allowed");
                return false;
            }
        }
        p = start_tag_close(p);
        if (p->kind == PatternKind::NotAllowed) {
            std::map<std::string, std::string> required;
            std::set<const Pattern*> guard;
            required_attrs(content, required, guard);
            for (const auto& [name, rule] : required) {
                if (!e.attribute(name)) {
                    record(path, rule, "missing required attribute '" + name + "'");
                    return false;
                }
            }
            record(path, elem_rule, "attribute combination not allowed on '" + e.name + "'");
            return false;
        }

        std::size_t elem_index = 0;
        bool saw_any_node = false;
        for (const auto& child : e.children) {
            saw_any_node = true;
            if (child.is_element()) {
                const XmlElement& ce = child.element();
                ++elem_index;
                std::string child_path =
                    path + "/" + ce.name +
                    (e.children.size() > 1 ? "[" + std::to_string(elem_index) + "]" : "");
                PatternPtr next = elem_deriv(p, ce, child_path);
                if (next->kind == PatternKind::NotAllowed) {
                    record(child_path, elem_rule,
                           "element '" + ce.name + "' not allowed here");
                    return false;
                }
                p = next;
            } else {
                const std::string& s =
                    std::holds_alternative<infoset::TextChild>(child.value)
                        ? std::get<infoset::TextChild>(child.value).text
                        : std::get<infoset::CDataChild>(child.value).text;
                PatternPtr consumed = text_deriv(p, s);
                p = ws_only(s) ? choice(consumed, p) : consumed;
                if (p->kind == PatternKind::NotAllowed) {
                    record(path, elem_rule,
                           "text content not allowed in element '" + e.name + "'");
                    return false;
                }
            }
        }
        if (!saw_any_node) {
            // An empty element matches like a single empty text node.
            p = choice(p, text_deriv(p, ""));
        }
        if (!null(p)) {
            record(path, elem_rule, "incomplete content in element '" + e.name + "'");
            return false;
        }
        return true;
    }
};

}  // namespace

ValidationReport validate(const infoset::XmlTree& tree, const PatternGraph& graph,
                          const ValidateOptions& opts) {
    const XmlElement& root = tree.root;
    if (root.ns != kPolymakeNamespace && !(opts.lax_namespace && root.ns.empty())) {
        ValidationReport report;
        report.valid = false;
        report.violations.push_back(
            {"/" + root.name, "start",
             root.ns.empty() ? "missing polymake namespace declaration"
                             : "unexpected namespace '" + root.ns + "'"});
        return report;
    }
    return Matcher(graph, root.ns).run(root);
}

std::string compact_syntax() {
    return R"(start = TopObject | LooseData

TopObject = element object { TopAttribs, ObjectContent }

TopAttribs = attribute type {
    xsd:string { pattern = "[a-zA-Z][a-zA-Z_0-9]*::.*" } },
  attribute version { xsd:string { pattern = "[\d.]+" } }?,
  attribute tm { xsd:hexBinary }?

ObjectContent =
  attribute name { text }?,
  attribute ext { text }?,
  element description { text }?,
  element credit { attribute product { text }, text }*,
  ( Property* & Attachment* )

Property = element property {
    SimpleName,
    attribute ext { text }?,
    ( ( attribute undef { "true" }, empty )
      | ( attribute type { text }?, PropertyData )
      | Text | SubObject+ ) }

SubObject = element object
  { attribute type { text }?, ObjectContent }

Attachment = element attachment {
  SimpleName, attribute ext { text }?, AttachmentData }

LooseData = element data {
  TopAttribs, attribute ext { text }?,
  element description { text }?, PropertyData }

SimpleName = attribute name
  { xsd:string { pattern = "[a-zA-Z][a-zA-Z_0-9]*" } }

PropertyData = ( attribute value { text }, empty )
  | IdReference | Complex | element m { SubObject+ }

AttachmentData =
  ( attribute type { text }?, attribute value { text }, empty )
  | ( attribute type { text }, attribute construct { text }?,
    Complex ) | Text

Text = attribute type { "text" }, text

Complex = Vector | Matrix | Tuple

VectorContents = text
  | ( attribute dim { xsd:nonNegativeInteger }?,
      ( element e { ElementIndex, text }*
      | element t { ElementIndex?, TupleContents }+ ) )

ElementIndex = attribute i { xsd:nonNegativeInteger }

IdReference = element r {
  attribute id { xsd:nonNegativeInteger }?, empty }

Vector = element v { VectorContents }

MatrixContents =
  ( attribute cols { xsd:nonNegativeInteger }?, Vector* )
  | ( attribute dim { xsd:nonNegativeInteger },
      element v { ElementIndex, VectorContents }*)
  | Matrix+ | Tuple+

Matrix = element m { MatrixContents }

TupleContents = attribute id { xsd:nonNegativeInteger }?,
  ( text | ( Vector | Matrix | Tuple
	    | IdReference | element e { text } )+ )

Tuple = element t { TupleContents }
)";
}

}  // namespace pmxml::schema
