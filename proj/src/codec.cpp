#include "pmxml/codec.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include <json.hpp>

namespace pmxml::codec {

using infoset::CDataChild;
using infoset::TextChild;
using infoset::XmlElement;
using infoset::XmlNode;
using infoset::XmlTree;
using namespace model;

namespace {

std::string violations_summary(const schema::ValidationReport& report) {
    std::ostringstream out;
    out << "document does not conform to the schema";
    for (const auto& v : report.violations) {
        out << "; " << v.path << ": " << v.rule << ": " << v.message;
    }
    return out.str();
}

std::uint64_t parse_u64(const std::string& text, const std::string& what) {
    std::uint64_t value = 0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    while (begin < end && (*begin == ' ' || *begin == '\t' || *begin == '\n' || *begin == '\r'))
        ++begin;
    if (begin < end && *begin == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    while (ptr < end && (*ptr == ' ' || *ptr == '\t' || *ptr == '\n' || *ptr == '\r')) ++ptr;
    if (ec != std::errc{} || ptr != end)
        throw ModelError("malformed " + what + " '" + text + "'");
    return value;
}

std::optional<std::string> opt_attr(const XmlElement& e, std::string_view name) {
    const std::string* v = e.attribute(name);
    return v ? std::optional<std::string>(*v) : std::nullopt;
}

std::optional<std::uint64_t> opt_u64_attr(const XmlElement& e, const std::string& name) {
    const std::string* v = e.attribute(name);
    if (!v) return std::nullopt;
    return parse_u64(*v, "'" + name + "' attribute");
}

bool ws_only(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) {
        return c == ' ' || c == '\t' || c == '\r' || c == '\n';
    });
}

std::vector<const XmlElement*> element_children(const XmlElement& e) {
    std::vector<const XmlElement*> out;
    for (const auto& child : e.children) {
        if (child.is_element()) out.push_back(&child.element());
    }
    return out;
}

// ---------------------------------------------------------------- decoding

Value decode_value(const XmlElement& e);

TupleV decode_tuple(const XmlElement& e) {
    TupleV t;
    t.id = opt_u64_attr(e, "id");
    auto children = element_children(e);
    if (children.empty()) {
        t.items = TupleRaw{e.text()};
        return t;
    }
    std::vector<Value> items;
    for (const XmlElement* child : children) items.push_back(decode_value(*child));
    t.items = std::move(items);
    return t;
}

VectorV decode_vector(const XmlElement& e) {
    VectorV v;
    v.dim = opt_u64_attr(e, "dim");
    auto children = element_children(e);
    if (children.empty()) {
        if (v.dim) {
            if (!ws_only(e.text()))
                throw ModelError("vector with dim attribute cannot carry raw text");
            v.entries = SparseE{};
        } else {
            v.entries = DenseText{e.text()};
        }
        return v;
    }
    if (children.front()->name == "e") {
        SparseE sparse;
        std::optional<std::uint64_t> last;
        for (const XmlElement* child : children) {
            if (child->name != "e") throw ModelError("mixed entry kinds in sparse vector");
            const std::string* i = child->attribute("i");
            if (!i) throw ModelError("sparse entry without an 'i' index");
            std::uint64_t index = parse_u64(*i, "'i' attribute");
            if (last && index <= *last)
                throw ModelError(index == *last
                                     ? "duplicate sparse index " + std::to_string(index)
                                     : "sparse indices not strictly increasing");
            if (v.dim && index >= *v.dim)
                throw ModelError("sparse index " + std::to_string(index) +
                                 " exceeds dim " + std::to_string(*v.dim));
            last = index;
            sparse.entries.push_back({index, child->text()});
        }
        v.entries = std::move(sparse);
        return v;
    }
    if (children.front()->name == "t") {
        TupleEntries tuples;
        for (const XmlElement* child : children) {
            if (child->name != "t") throw ModelError("mixed entry kinds in vector");
            TupleEntry entry;
            entry.index = opt_u64_attr(*child, "i");
            entry.value = decode_tuple(*child);
            tuples.entries.push_back(std::move(entry));
        }
        v.entries = std::move(tuples);
        return v;
    }
    throw ModelError("element '" + children.front()->name + "' not allowed inside a vector");
}

MatrixM decode_matrix(const XmlElement& e) {
    MatrixM m;
    m.cols = opt_u64_attr(e, "cols");
    m.dim = opt_u64_attr(e, "dim");
    auto children = element_children(e);
    if (!children.empty() && children.front()->name == "object")
        throw ModelError("matrix of subobjects is not representable in the value model");
    if (children.empty()) {
        if (m.dim) m.rows = SparseRows{};
        else m.rows = DenseRows{};
        return m;
    }
    const std::string& kind = children.front()->name;
    for (const XmlElement* child : children) {
        if (child->name != kind) throw ModelError("mixed row kinds in matrix");
    }
    if (kind == "v") {
        if (m.dim) {
            SparseRows rows;
            std::optional<std::uint64_t> last;
            for (const XmlElement* child : children) {
                const std::string* i = child->attribute("i");
                if (!i) throw ModelError("sparse matrix row without an 'i' index");
                std::uint64_t index = parse_u64(*i, "'i' attribute");
                if (last && index <= *last)
                    throw ModelError(index == *last
                                         ? "duplicate sparse row index " + std::to_string(index)
                                         : "sparse row indices not strictly increasing");
                last = index;
                // The i attribute belongs to the matrix, not the row vector.
                XmlElement row = *child;
                std::erase_if(row.attributes,
                              [](const auto& a) { return a.first == "i"; });
                rows.rows.push_back({index, decode_vector(row)});
            }
            m.rows = std::move(rows);
        } else {
            DenseRows rows;
            for (const XmlElement* child : children) {
                if (child->attribute("i"))
                    throw ModelError("row index attribute on a matrix without dim");
                VectorV row = decode_vector(*child);
                if (m.cols) {
                    if (const auto* dense = std::get_if<DenseText>(&row.entries)) {
                        if (tokenize_dense(dense->raw).size() != *m.cols)
                            throw ModelError("dense row width disagrees with cols attribute");
                    }
                }
                rows.rows.push_back(std::move(row));
            }
            m.rows = std::move(rows);
        }
        return m;
    }
    if (kind == "m") {
        MatrixRows rows;
        for (const XmlElement* child : children) rows.rows.push_back(decode_matrix(*child));
        m.rows = std::move(rows);
        return m;
    }
    if (kind == "t") {
        TupleRows rows;
        for (const XmlElement* child : children) rows.rows.push_back(decode_tuple(*child));
        m.rows = std::move(rows);
        return m;
    }
    throw ModelError("element '" + kind + "' not allowed inside a matrix");
}

Value decode_value(const XmlElement& e) {
    if (e.name == "v") return Value{decode_vector(e)};
    if (e.name == "m") return Value{decode_matrix(e)};
    if (e.name == "t") return Value{decode_tuple(e)};
    if (e.name == "r") return Value{RefR{opt_u64_attr(e, "id")}};
    if (e.name == "e") return Value{ElementE{e.text()}};
    throw ModelError("element '" + e.name + "' is not a value");
}

ObjectNode decode_object(const XmlElement& e, bool top);

Property decode_property(const XmlElement& e) {
    Property p;
    const std::string* name = e.attribute("name");
    if (!name) throw ModelError("property without a name");
    p.name = *name;
    p.ext = opt_attr(e, "ext");
    auto children = element_children(e);
    const std::string* undef = e.attribute("undef");
    const std::string* value = e.attribute("value");
    const std::string* type = e.attribute("type");
    if (undef && *undef == "true") {
        p.payload = Undefined{};
        return p;
    }
    if (value) {
        if (type) p.payload = TypedData{*type, Value{ScalarText{*value}}};
        else p.payload = ScalarValue{*value};
        return p;
    }
    if (!children.empty() && children.front()->name == "object") {
        Subobjects subs;
        for (const XmlElement* child : children) {
            if (child->name != "object")
                throw ModelError("subobject list mixed with other content");
            subs.objects.push_back(decode_object(*child, false));
        }
        p.payload = std::move(subs);
        return p;
    }
    if (children.size() == 1) {
        p.payload = TypedData{opt_attr(e, "type"), decode_value(*children.front())};
        return p;
    }
    if (!children.empty())
        throw ModelError("property '" + p.name + "' carries more than one value element");
    if (type && *type == "text") {
        p.payload = TextPayload{e.text()};
        return p;
    }
    throw ModelError("property '" + p.name + "' has no recognizable payload");
}

Attachment decode_attachment(const XmlElement& e) {
    Attachment a;
    const std::string* name = e.attribute("name");
    if (!name) throw ModelError("attachment without a name");
    a.name = *name;
    a.ext = opt_attr(e, "ext");
    auto children = element_children(e);
    const std::string* value = e.attribute("value");
    const std::string* type = e.attribute("type");
    if (value) {
        a.payload = AttachmentScalar{opt_attr(e, "type"), *value};
        return a;
    }
    if (!children.empty()) {
        if (children.size() != 1)
            throw ModelError("attachment '" + a.name + "' carries more than one value element");
        if (!type)
            throw ModelError("attachment '" + a.name + "' with complex value needs a type");
        a.payload = AttachmentComplex{*type, opt_attr(e, "construct"),
                                      decode_value(*children.front())};
        return a;
    }
    if (type && *type == "text") {
        a.payload = TextPayload{e.text()};
        return a;
    }
    throw ModelError("attachment '" + a.name + "' has no recognizable payload");
}

ObjectNode decode_object(const XmlElement& e, bool top) {
    ObjectNode obj;
    obj.name = opt_attr(e, "name");
    obj.ext = opt_attr(e, "ext");
    if (!top) obj.type_name = opt_attr(e, "type");
    for (const XmlElement* child : element_children(e)) {
        if (child->name == "description") {
            obj.description = child->text();
        } else if (child->name == "credit") {
            const std::string* product = child->attribute("product");
            if (!product) throw ModelError("credit without a product attribute");
            obj.credits.emplace_back(*product, child->text());
        } else if (child->name == "property") {
            obj.properties.push_back(decode_property(*child));
        } else if (child->name == "attachment") {
            obj.attachments.push_back(decode_attachment(*child));
        } else {
            throw ModelError("element '" + child->name + "' not allowed inside an object");
        }
    }
    for (std::size_t i = 0; i < obj.attachments.size(); ++i) {
        for (std::size_t j = i + 1; j < obj.attachments.size(); ++j) {
            if (obj.attachments[i].name == obj.attachments[j].name)
                throw ModelError("duplicate attachment name '" + obj.attachments[i].name + "'");
        }
    }
    return obj;
}

void check_value_ids(const ObjectNode& obj) {
    for (const Property& p : obj.properties) {
        if (const auto* data = std::get_if<TypedData>(&p.payload)) collect_ids(data->value);
        if (const auto* subs = std::get_if<Subobjects>(&p.payload)) {
            for (const ObjectNode& child : subs->objects) check_value_ids(child);
        }
    }
    for (const Attachment& a : obj.attachments) {
        if (const auto* data = std::get_if<AttachmentComplex>(&a.payload))
            collect_ids(data->value);
    }
}

Value decode_loose_value(const XmlElement& root) {
    const std::string* value = root.attribute("value");
    if (value) return Value{ScalarText{*value}};
    std::vector<const XmlElement*> payload;
    for (const XmlElement* child : element_children(root)) {
        if (child->name == "description") continue;
        payload.push_back(child);
    }
    if (payload.size() != 1)
        throw ModelError("loose data must carry exactly one value element");
    return decode_value(*payload.front());
}

// ---------------------------------------------------------------- encoding

// Canonical attribute order shared by every element the encoder emits; the
// writer appends xmlns after these.
constexpr const char* kAttrOrder[] = {"name", "type",      "value", "undef",
                                      "ext",  "construct", "cols",  "dim",
                                      "i",    "id",        "version", "tm"};

class AttrBuilder {
public:
    void set(const std::string& name, std::string value) {
        attrs_.emplace_back(name, std::move(value));
    }
    void set(const std::string& name, const std::optional<std::string>& value) {
        if (value) attrs_.emplace_back(name, *value);
    }
    void set(const std::string& name, const std::optional<std::uint64_t>& value) {
        if (value) attrs_.emplace_back(name, std::to_string(*value));
    }

    std::vector<std::pair<std::string, std::string>> finish() {
        std::stable_sort(attrs_.begin(), attrs_.end(), [](const auto& a, const auto& b) {
            return rank(a.first) < rank(b.first);
        });
        return std::move(attrs_);
    }

private:
    static std::size_t rank(const std::string& name) {
        for (std::size_t i = 0; i < std::size(kAttrOrder); ++i) {
            if (name == kAttrOrder[i]) return i;
        }
        return std::size(kAttrOrder);
    }
    std::vector<std::pair<std::string, std::string>> attrs_;
};

XmlElement make_element(std::string name) {
    XmlElement e;
    e.name = std::move(name);
    e.ns = std::string(schema::kPolymakeNamespace);
    return e;
}

void add_text(XmlElement& e, const std::string& text) {
    if (!text.empty()) e.children.push_back(XmlNode{TextChild{text}});
}

XmlElement encode_value(const Value& v);

XmlElement encode_tuple(const TupleV& t, std::optional<std::uint64_t> index = {}) {
    XmlElement e = make_element("t");
    AttrBuilder attrs;
    attrs.set("i", index);
    attrs.set("id", t.id);
    e.attributes = attrs.finish();
    if (t.is_raw()) {
        add_text(e, t.raw());
    } else {
        for (const Value& item : t.item_list()) e.children.push_back(XmlNode{encode_value(item)});
    }
    return e;
}

XmlElement encode_vector(const VectorV& v, std::optional<std::uint64_t> row_index = {}) {
    XmlElement e = make_element("v");
    AttrBuilder attrs;
    // A dense text vector has no place for dim in the grammar.
    if (!std::holds_alternative<DenseText>(v.entries)) attrs.set("dim", v.dim);
    attrs.set("i", row_index);
    e.attributes = attrs.finish();
    if (const auto* dense = std::get_if<DenseText>(&v.entries)) {
        add_text(e, dense->raw);
    } else if (const auto* sparse = std::get_if<SparseE>(&v.entries)) {
        for (const SparseEntry& entry : sparse->entries) {
            XmlElement cell = make_element("e");
            cell.attributes = {{"i", std::to_string(entry.index)}};
            add_text(cell, entry.text);
            e.children.push_back(XmlNode{std::move(cell)});
        }
    } else {
        for (const TupleEntry& entry : std::get<TupleEntries>(v.entries).entries) {
            e.children.push_back(XmlNode{encode_tuple(entry.value, entry.index)});
        }
    }
    return e;
}

XmlElement encode_matrix(const MatrixM& m) {
    XmlElement e = make_element("m");
    AttrBuilder attrs;
    attrs.set("cols", m.cols);
    attrs.set("dim", m.dim);
    e.attributes = attrs.finish();
    std::visit(
        [&](const auto& rows) {
            using T = std::decay_t<decltype(rows)>;
            for (const auto& row : rows.rows) {
                if constexpr (std::is_same_v<T, DenseRows>) {
                    e.children.push_back(XmlNode{encode_vector(row)});
                } else if constexpr (std::is_same_v<T, SparseRows>) {
                    e.children.push_back(XmlNode{encode_vector(row.row, row.index)});
                } else if constexpr (std::is_same_v<T, MatrixRows>) {
                    e.children.push_back(XmlNode{encode_matrix(row)});
                } else {
                    e.children.push_back(XmlNode{encode_tuple(row)});
                }
            }
        },
        m.rows);
    return e;
}

XmlElement encode_value(const Value& v) {
    return std::visit(
        [](const auto& node) -> XmlElement {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, ScalarText>) {
                throw CodecError("a scalar value has no element form");
            } else if constexpr (std::is_same_v<T, VectorV>) {
                return encode_vector(node);
            } else if constexpr (std::is_same_v<T, MatrixM>) {
                return encode_matrix(node);
            } else if constexpr (std::is_same_v<T, TupleV>) {
                return encode_tuple(node);
            } else if constexpr (std::is_same_v<T, RefR>) {
                XmlElement e = make_element("r");
                AttrBuilder attrs;
                attrs.set("id", node.id);
                e.attributes = attrs.finish();
                return e;
            } else {
                XmlElement e = make_element("e");
                add_text(e, node.text);
                return e;
            }
        },
        v.node);
}

XmlElement encode_object(const ObjectNode& obj, bool top, const Document& doc);

XmlElement encode_property(const Property& p, const Document& doc) {
    XmlElement e = make_element("property");
    AttrBuilder attrs;
    attrs.set("name", p.name);
    attrs.set("ext", p.ext);
    std::visit(
        [&](const auto& payload) {
            using T = std::decay_t<decltype(payload)>;
            if constexpr (std::is_same_v<T, Undefined>) {
                attrs.set("undef", std::string("true"));
            } else if constexpr (std::is_same_v<T, ScalarValue>) {
                attrs.set("value", payload.text);
            } else if constexpr (std::is_same_v<T, TypedData>) {
                attrs.set("type", payload.declared_type);
                if (const auto* scalar = std::get_if<ScalarText>(&payload.value.node)) {
                    attrs.set("value", scalar->raw);
                } else {
                    e.children.push_back(XmlNode{encode_value(payload.value)});
                }
            } else if constexpr (std::is_same_v<T, TextPayload>) {
                attrs.set("type", std::string("text"));
                add_text(e, payload.text);
            } else {
                for (const ObjectNode& obj : payload.objects) {
                    e.children.push_back(XmlNode{encode_object(obj, false, doc)});
                }
            }
        },
        p.payload);
    e.attributes = attrs.finish();
    return e;
}

XmlElement encode_attachment(const Attachment& a) {
    XmlElement e = make_element("attachment");
    AttrBuilder attrs;
    attrs.set("name", a.name);
    attrs.set("ext", a.ext);
    std::visit(
        [&](const auto& payload) {
            using T = std::decay_t<decltype(payload)>;
            if constexpr (std::is_same_v<T, AttachmentScalar>) {
                attrs.set("type", payload.declared_type);
                attrs.set("value", payload.text);
            } else if constexpr (std::is_same_v<T, AttachmentComplex>) {
                attrs.set("type", payload.declared_type);
                attrs.set("construct", payload.construct);
                e.children.push_back(XmlNode{encode_value(payload.value)});
            } else {
                attrs.set("type", std::string("text"));
                add_text(e, payload.text);
            }
        },
        a.payload);
    e.attributes = attrs.finish();
    return e;
}

XmlElement encode_object(const ObjectNode& obj, bool top, const Document& doc) {
    XmlElement e = make_element("object");
    AttrBuilder attrs;
    attrs.set("name", obj.name);
    if (top) {
        attrs.set("type", doc.type_name);
        attrs.set("version", doc.version);
        attrs.set("tm", doc.tm);
    } else {
        attrs.set("type", obj.type_name);
    }
    attrs.set("ext", obj.ext);
    e.attributes = attrs.finish();
    if (obj.description) {
        XmlElement desc = make_element("description");
        add_text(desc, *obj.description);
        e.children.push_back(XmlNode{std::move(desc)});
    }
    for (const auto& [product, text] : obj.credits) {
        XmlElement credit = make_element("credit");
        credit.attributes = {{"product", product}};
        add_text(credit, text);
        e.children.push_back(XmlNode{std::move(credit)});
    }
    for (const Property& p : obj.properties)
        e.children.push_back(XmlNode{encode_property(p, doc)});
    for (const Attachment& a : obj.attachments)
        e.children.push_back(XmlNode{encode_attachment(a)});
    return e;
}

// ------------------------------------------------------------------- JSON

using json = nlohmann::ordered_json;

json json_of_value(const Value& v);

json json_of_vector(const VectorV& v) {
    if (const auto* dense = std::get_if<DenseText>(&v.entries)) {
        return json(tokenize_dense(dense->raw));
    }
    if (const auto* sparse = std::get_if<SparseE>(&v.entries)) {
        json entries = json::object();
        for (const SparseEntry& entry : sparse->entries)
            entries[std::to_string(entry.index)] = entry.text;
        return json{{"dim", v.dim ? json(*v.dim) : json(nullptr)}, {"entries", entries}};
    }
    json tuples = json::array();
    for (const TupleEntry& entry : std::get<TupleEntries>(v.entries).entries) {
        json t = json::object();
        t["i"] = entry.index ? json(*entry.index) : json(nullptr);
        t["tuple"] = json_of_value(Value{entry.value});
        tuples.push_back(std::move(t));
    }
    return json{{"dim", v.dim ? json(*v.dim) : json(nullptr)}, {"tuples", tuples}};
}

json json_of_matrix(const MatrixM& m) {
    return std::visit(
        [&](const auto& rows) -> json {
            using T = std::decay_t<decltype(rows)>;
            if constexpr (std::is_same_v<T, DenseRows>) {
                json out = json::object();
                json arr = json::array();
                for (const VectorV& row : rows.rows) arr.push_back(json_of_vector(row));
                out["rows"] = std::move(arr);
                out["cols"] = m.cols ? json(*m.cols) : json(nullptr);
                return out;
            } else if constexpr (std::is_same_v<T, SparseRows>) {
                json out = json::object();
                out["dim"] = m.dim ? json(*m.dim) : json(nullptr);
                out["cols"] = m.cols ? json(*m.cols) : json(nullptr);
                json byindex = json::object();
                for (const SparseRow& row : rows.rows)
                    byindex[std::to_string(row.index)] = json_of_vector(row.row);
                out["rows"] = std::move(byindex);
                return out;
            } else if constexpr (std::is_same_v<T, MatrixRows>) {
                json arr = json::array();
                for (const MatrixM& row : rows.rows) arr.push_back(json_of_matrix(row));
                return json{{"matrices", arr}};
            } else {
                json arr = json::array();
                for (const TupleV& row : rows.rows) arr.push_back(json_of_value(Value{row}));
                return json{{"tuples", arr}};
            }
        },
        m.rows);
}

json json_of_value(const Value& v) {
    return std::visit(
        [](const auto& node) -> json {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, ScalarText>) {
                return json(node.raw);
            } else if constexpr (std::is_same_v<T, VectorV>) {
                return json_of_vector(node);
            } else if constexpr (std::is_same_v<T, MatrixM>) {
                return json_of_matrix(node);
            } else if constexpr (std::is_same_v<T, TupleV>) {
                json out = json::object();
                out["id"] = node.id ? json(*node.id) : json(nullptr);
                if (node.is_raw()) {
                    out["text"] = node.raw();
                } else {
                    json items = json::array();
                    for (const Value& item : node.item_list())
                        items.push_back(json_of_value(item));
                    out["items"] = std::move(items);
                }
                return out;
            } else if constexpr (std::is_same_v<T, RefR>) {
                return json{{"ref", node.id ? json(*node.id) : json(nullptr)}};
            } else {
                return json{{"e", node.text}};
            }
        },
        v.node);
}

json json_of_object(const ObjectNode& obj);

json json_of_property(const Property& p) {
    json out = json::object();
    out["name"] = p.name;
    std::visit(
        [&](const auto& payload) {
            using T = std::decay_t<decltype(payload)>;
            if constexpr (std::is_same_v<T, Undefined>) {
                out["undef"] = true;
            } else if constexpr (std::is_same_v<T, ScalarValue>) {
                out["value"] = payload.text;
            } else if constexpr (std::is_same_v<T, TypedData>) {
                if (const auto* scalar = std::get_if<ScalarText>(&payload.value.node)) {
                    out["type"] = payload.declared_type ? json(*payload.declared_type)
                                                        : json(nullptr);
                    out["value"] = scalar->raw;
                } else {
                    out["type"] = payload.declared_type ? json(*payload.declared_type)
                                                        : json(nullptr);
                    out["data"] = json_of_value(payload.value);
                }
            } else if constexpr (std::is_same_v<T, TextPayload>) {
                out["text"] = payload.text;
            } else {
                json objects = json::array();
                for (const ObjectNode& child : payload.objects)
                    objects.push_back(json_of_object(child));
                out["objects"] = std::move(objects);
            }
        },
        p.payload);
    return out;
}

json json_of_attachment(const Attachment& a) {
    json out = json::object();
    out["name"] = a.name;
    std::visit(
        [&](const auto& payload) {
            using T = std::decay_t<decltype(payload)>;
            if constexpr (std::is_same_v<T, AttachmentScalar>) {
                out["type"] = payload.declared_type ? json(*payload.declared_type)
                                                    : json(nullptr);
                out["value"] = payload.text;
            } else if constexpr (std::is_same_v<T, AttachmentComplex>) {
                out["type"] = payload.declared_type;
                if (payload.construct) out["construct"] = *payload.construct;
                out["data"] = json_of_value(payload.value);
            } else {
                out["text"] = payload.text;
            }
        },
        a.payload);
    return out;
}

json json_of_object(const ObjectNode& obj) {
    json out = json::object();
    out["name"] = obj.name ? json(*obj.name) : json(nullptr);
    if (obj.type_name) out["type"] = *obj.type_name;
    out["description"] = obj.description ? json(*obj.description) : json(nullptr);
    if (!obj.credits.empty()) {
        json credits = json::array();
        for (const auto& [product, text] : obj.credits)
            credits.push_back(json{{"product", product}, {"text", text}});
        out["credits"] = std::move(credits);
    }
    json properties = json::array();
    for (const Property& p : obj.properties) properties.push_back(json_of_property(p));
    out["properties"] = std::move(properties);
    json attachments = json::array();
    for (const Attachment& a : obj.attachments) attachments.push_back(json_of_attachment(a));
    out["attachments"] = std::move(attachments);
    return out;
}

}  // namespace

SchemaViolationError::SchemaViolationError(schema::ValidationReport report)
    : CodecError(violations_summary(report)), report(std::move(report)) {}

model::Document decode(const XmlTree& tree, const DecodeOptions& opts) {
    if (opts.validate_first) {
        schema::ValidateOptions vopts;
        vopts.lax_namespace = opts.lax_namespace;
        schema::ValidationReport report = schema::validate(tree, schema::polymake_schema(), vopts);
        if (!report.valid) throw SchemaViolationError(std::move(report));
    }
    const XmlElement& root = tree.root;
    Document doc;
    doc.pis = tree.leading_pis;
    const std::string* type = root.attribute("type");
    if (!type) throw ModelError("root element without a type attribute");
    doc.type_name = *type;
    doc.version = opt_attr(root, "version");
    doc.tm = opt_attr(root, "tm");
    if (root.name == "object") {
        doc.kind = DocumentKind::TopObject;
        if (!schema::match_datatype(
                schema::DatatypeSpec{schema::BaseType::String,
                                     std::string("[a-zA-Z][a-zA-Z_0-9]*::.*")},
                doc.type_name))
            throw ModelError("object type '" + doc.type_name + "' is not qualified");
        doc.body = decode_object(root, true);
        check_value_ids(doc.body);
    } else if (root.name == "data") {
        doc.kind = DocumentKind::LooseData;
        doc.ext = opt_attr(root, "ext");
        for (const XmlElement* child : element_children(root)) {
            if (child->name == "description") doc.loose.description = child->text();
        }
        doc.loose.data = decode_loose_value(root);
        collect_ids(doc.loose.data);
    } else {
        throw ModelError("root element '" + root.name + "' is not a polymake document");
    }
    if (doc.version &&
        !schema::match_datatype(
            schema::DatatypeSpec{schema::BaseType::String, std::string("[\\d.]+")},
            *doc.version))
        throw ModelError("malformed version '" + *doc.version + "'");
    return doc;
}

XmlTree encode(const model::Document& doc) {
    XmlTree tree;
    tree.leading_pis = doc.pis;
    if (doc.kind == DocumentKind::TopObject) {
        tree.root = encode_object(doc.body, true, doc);
    } else {
        XmlElement root = make_element("data");
        AttrBuilder attrs;
        attrs.set("type", doc.type_name);
        if (const auto* scalar = std::get_if<ScalarText>(&doc.loose.data.node))
            attrs.set("value", scalar->raw);
        attrs.set("ext", doc.ext);
        attrs.set("version", doc.version);
        attrs.set("tm", doc.tm);
        root.attributes = attrs.finish();
        if (doc.loose.description) {
            XmlElement desc = make_element("description");
            add_text(desc, *doc.loose.description);
            root.children.push_back(XmlNode{std::move(desc)});
        }
        if (!std::holds_alternative<ScalarText>(doc.loose.data.node))
            root.children.push_back(XmlNode{encode_value(doc.loose.data)});
        tree.root = std::move(root);
    }
    return tree;
}

std::vector<std::string> tokenize_dense(std::string_view raw) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (i < raw.size()) {
        while (i < raw.size() && is_space(raw[i])) ++i;
        std::size_t start = i;
        while (i < raw.size() && !is_space(raw[i])) ++i;
        if (i > start) tokens.emplace_back(raw.substr(start, i - start));
    }
    return tokens;
}

DenseVector densify_vector(const model::VectorV& v, std::optional<std::size_t> length_hint,
                           const std::string& zero) {
    if (const auto* dense = std::get_if<DenseText>(&v.entries)) {
        return DenseVector{tokenize_dense(dense->raw)};
    }
    const auto* sparse = std::get_if<SparseE>(&v.entries);
    if (!sparse) throw CodecError("vector of tuples cannot be densified");
    std::optional<std::size_t> length =
        v.dim ? std::optional<std::size_t>(*v.dim) : length_hint;
    if (!length) throw MissingDimensionError();
    DenseVector out;
    out.entries.assign(*length, zero);
    for (const SparseEntry& entry : sparse->entries) {
        if (entry.index >= *length) throw IndexOutOfRangeError(entry.index, *length);
        out.entries[entry.index] = entry.text;
    }
    return out;
}

namespace {

// Column count derivable from a row without densifying it.
std::optional<std::size_t> row_width(const model::VectorV& row) {
    if (const auto* dense = std::get_if<DenseText>(&row.entries))
        return tokenize_dense(dense->raw).size();
    if (row.dim) return *row.dim;
    return std::nullopt;
}

}  // namespace

DenseMatrix densify_matrix(const model::MatrixM& m, const std::string& zero) {
    const auto* dense = std::get_if<DenseRows>(&m.rows);
    const auto* sparse = std::get_if<SparseRows>(&m.rows);
    if (!dense && !sparse) throw CodecError("nested matrices cannot be densified");

    std::vector<const model::VectorV*> rows;
    if (dense) {
        for (const auto& row : dense->rows) rows.push_back(&row);
    } else {
        for (const auto& row : sparse->rows) rows.push_back(&row.row);
    }

    std::optional<std::size_t> width =
        m.cols ? std::optional<std::size_t>(*m.cols) : std::nullopt;
    if (!width) {
        for (const model::VectorV* row : rows) {
            std::optional<std::size_t> w = row_width(*row);
            if (!w) throw MissingDimensionError();
            if (width && *width != *w) throw RaggedRowsError();
            width = w;
        }
    }
    std::size_t cols = width.value_or(0);

    DenseMatrix out;
    out.cols = cols;
    if (dense) {
        for (const model::VectorV* row : rows)
            out.rows.push_back(densify_vector(*row, cols, zero));
    } else {
        if (!m.dim) throw MissingDimensionError();
        DenseVector zero_row;
        zero_row.entries.assign(cols, zero);
        out.rows.assign(*m.dim, zero_row);
        for (const auto& row : sparse->rows) {
            if (row.index >= *m.dim) throw IndexOutOfRangeError(row.index, *m.dim);
            out.rows[row.index] = densify_vector(row.row, cols, zero);
        }
    }
    return out;
}

model::VectorV sparsify_vector(const DenseVector& d, const std::string& zero) {
    model::VectorV v;
    v.dim = d.entries.size();
    SparseE sparse;
    for (std::size_t i = 0; i < d.entries.size(); ++i) {
        if (d.entries[i] != zero) sparse.entries.push_back({i, d.entries[i]});
    }
    v.entries = std::move(sparse);
    return v;
}

std::string to_json(const model::Document& doc) {
    json out = json::object();
    if (doc.kind == DocumentKind::TopObject) {
        out["kind"] = "object";
        out["type"] = doc.type_name;
        out["name"] = doc.body.name ? json(*doc.body.name) : json(nullptr);
        out["version"] = doc.version ? json(*doc.version) : json(nullptr);
        out["description"] = doc.body.description ? json(*doc.body.description) : json(nullptr);
        json properties = json::array();
        for (const Property& p : doc.body.properties)
            properties.push_back(json_of_property(p));
        out["properties"] = std::move(properties);
        json attachments = json::array();
        for (const Attachment& a : doc.body.attachments)
            attachments.push_back(json_of_attachment(a));
        out["attachments"] = std::move(attachments);
    } else {
        out["kind"] = "data";
        out["type"] = doc.type_name;
        out["version"] = doc.version ? json(*doc.version) : json(nullptr);
        out["description"] =
            doc.loose.description ? json(*doc.loose.description) : json(nullptr);
        out["data"] = json_of_value(doc.loose.data);
    }
    return out.dump(2) + "\n";
}

}  // namespace pmxml::codec
