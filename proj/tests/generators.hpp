#pragma once

// Random inputs for the property-based suites: token vectors, sparse
// vectors, whole Documents that encode to schema-valid trees, and arbitrary
// small XML trees over the format's vocabulary for validator comparison.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pmxml/codec.hpp"
#include "pmxml/infoset.hpp"
#include "pmxml/model.hpp"
#include "pmxml/schema.hpp"

namespace gen {

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline bool chance(Rng& rng, double p) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

// A scalar token: integers, fractions, the occasional symbol.
inline std::string token(Rng& rng) {
    switch (pick(rng, 6)) {
        case 0: return std::to_string(static_cast<long>(pick(rng, 20)) - 10);
        case 1: return std::to_string(pick(rng, 9) + 1) + "/" + std::to_string(pick(rng, 9) + 2);
        case 2: return "0";
        case 3: return "-" + std::to_string(pick(rng, 9) + 1) + "/" + std::to_string(pick(rng, 7) + 2);
        case 4: return std::string(1, static_cast<char>('a' + pick(rng, 26)));
        default: return std::to_string(pick(rng, 1000));
    }
}

inline std::vector<std::string> token_vector(Rng& rng, std::size_t max_len = 12) {
    std::vector<std::string> out;
    std::size_t n = pick(rng, max_len + 1);
    for (std::size_t i = 0; i < n; ++i) out.push_back(token(rng));
    return out;
}

inline std::string join(const std::vector<std::string>& tokens) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out += ' ';
        out += tokens[i];
    }
    return out;
}

inline std::string nonzero_token(Rng& rng) {
    std::string t = token(rng);
    return t == "0" ? "7" : t;
}

// Sorted sparse vector with dim and strictly increasing indices.
inline pmxml::model::VectorV sparse_vector(Rng& rng, std::size_t max_dim = 16) {
    pmxml::model::VectorV v;
    std::uint64_t dim = pick(rng, max_dim) + 1;
    v.dim = dim;
    pmxml::model::SparseE sparse;
    for (std::uint64_t i = 0; i < dim; ++i) {
        if (chance(rng, 0.35)) sparse.entries.push_back({i, nonzero_token(rng)});
    }
    v.entries = std::move(sparse);
    return v;
}

inline std::string simple_name(Rng& rng) {
    static const char* pool[] = {"VERTICES", "FACETS",  "BOUNDED", "N_RAYS",
                                 "alpha",    "beta_2",  "Gamma",   "F_VECTOR",
                                 "VOLUME",   "payload", "LP",      "extra"};
    return pool[pick(rng, std::size(pool))];
}

inline std::string safe_text(Rng& rng) {
    static const char* pool[] = {"a square",  "cube of dimension 2", "data",
                                 "x y z",     "Produced by hand",    "t_0",
                                 "some text", "alpha beta"};
    return pool[pick(rng, std::size(pool))];
}

inline std::string type_string(Rng& rng) {
    static const char* pool[] = {"Rational", "Matrix<Rational>", "Array<Int>",
                                 "SparseMatrix<Rational,NonSymmetric>", "Bool",
                                 "Vector<Integer>", "Polynomial<Rational>"};
    return pool[pick(rng, std::size(pool))];
}

// ------------------------------------------------------------ Documents

// Shared state for one value tree: ids handed out so far.
struct ValueCtx {
    std::uint64_t next_id = 1;
    std::vector<std::uint64_t> ids;
};

pmxml::model::Value value(Rng& rng, ValueCtx& ctx, int depth);
pmxml::model::TupleV make_tuple(Rng& rng, ValueCtx& ctx, int depth);

inline pmxml::model::VectorV vector_value(Rng& rng, ValueCtx& ctx, int depth) {
    using namespace pmxml::model;
    VectorV v;
    switch (depth <= 0 ? pick(rng, 2) : pick(rng, 3)) {
        case 0:  // dense text; dim has no serialized form here
            v.entries = DenseText{join(token_vector(rng, 6))};
            break;
        case 1: {
            SparseE sparse;
            std::uint64_t dim = pick(rng, 10) + 1;
            for (std::uint64_t i = 0; i < dim; ++i) {
                if (chance(rng, 0.3)) sparse.entries.push_back({i, nonzero_token(rng)});
            }
            // An empty sparse vector is only distinguishable from a dense
            // one by its dim attribute.
            if (sparse.entries.empty() || chance(rng, 0.8)) v.dim = dim;
            v.entries = std::move(sparse);
            break;
        }
        default: {
            TupleEntries tuples;
            std::size_t n = pick(rng, 3) + 1;
            for (std::size_t i = 0; i < n; ++i) {
                TupleEntry entry;
                if (chance(rng, 0.4)) entry.index = i;
                entry.value = make_tuple(rng, ctx, depth - 1);
                tuples.entries.push_back(std::move(entry));
            }
            v.entries = std::move(tuples);
            break;
        }
    }
    return v;
}

inline pmxml::model::TupleV make_tuple(Rng& rng, ValueCtx& ctx, int depth) {
    using namespace pmxml::model;
    TupleV t;
    if (chance(rng, 0.3)) {
        t.id = ctx.next_id++;
        ctx.ids.push_back(*t.id);
    }
    if (depth <= 0 || chance(rng, 0.4)) {
        t.items = TupleRaw{join(token_vector(rng, 4))};
        return t;
    }
    std::vector<Value> items;
    std::size_t n = pick(rng, 3) + 1;
    for (std::size_t i = 0; i < n; ++i) {
        switch (pick(rng, 5)) {
            case 0: items.push_back(Value{ElementE{token(rng)}}); break;
            case 1: items.push_back(value(rng, ctx, depth - 1)); break;
            default: items.push_back(Value{make_tuple(rng, ctx, depth - 1)}); break;
        }
    }
    t.items = std::move(items);
    return t;
}

inline pmxml::model::MatrixM matrix_value(Rng& rng, ValueCtx& ctx, int depth) {
    using namespace pmxml::model;
    MatrixM m;
    switch (depth <= 0 ? pick(rng, 2) : pick(rng, 4)) {
        case 0: {
            DenseRows rows;
            std::size_t n = pick(rng, 4);
            std::size_t width = pick(rng, 4) + 1;
            bool uniform = chance(rng, 0.5);
            for (std::size_t i = 0; i < n; ++i) {
                VectorV row;
                if (uniform || chance(rng, 0.7)) {
                    std::vector<std::string> tokens;
                    for (std::size_t j = 0; j < width; ++j) tokens.push_back(token(rng));
                    row.entries = DenseText{join(tokens)};
                } else {
                    row = sparse_vector(rng, 6);
                }
                rows.rows.push_back(std::move(row));
            }
            if (uniform && n > 0 && chance(rng, 0.5)) m.cols = width;
            m.rows = std::move(rows);
            break;
        }
        case 1: {
            SparseRows rows;
            std::uint64_t dim = pick(rng, 5) + 1;
            m.dim = dim;
            for (std::uint64_t i = 0; i < dim; ++i) {
                if (chance(rng, 0.4)) {
                    VectorV row = sparse_vector(rng, 5);
                    rows.rows.push_back({i, std::move(row)});
                }
            }
            m.rows = std::move(rows);
            break;
        }
        case 2: {
            MatrixRows rows;
            std::size_t n = pick(rng, 2) + 1;
            for (std::size_t i = 0; i < n; ++i)
                rows.rows.push_back(matrix_value(rng, ctx, depth - 1));
            m.rows = std::move(rows);
            break;
        }
        default: {
            TupleRows rows;
            std::size_t n = pick(rng, 2) + 1;
            for (std::size_t i = 0; i < n; ++i)
                rows.rows.push_back(make_tuple(rng, ctx, depth - 1));
            m.rows = std::move(rows);
            break;
        }
    }
    return m;
}

// A property- or data-level value: vector, matrix, tuple or reference.
inline pmxml::model::Value value(Rng& rng, ValueCtx& ctx, int depth) {
    using namespace pmxml::model;
    switch (pick(rng, 7)) {
        case 0:
        case 1: return Value{vector_value(rng, ctx, depth)};
        case 2:
        case 3: return Value{matrix_value(rng, ctx, depth)};
        case 4:
            if (!ctx.ids.empty() && chance(rng, 0.7))
                return Value{RefR{ctx.ids[pick(rng, ctx.ids.size())]}};
            return Value{RefR{std::nullopt}};
        default: return Value{make_tuple(rng, ctx, depth)};
    }
}

inline pmxml::model::Property property(Rng& rng, int depth);

inline pmxml::model::ObjectNode object_node(Rng& rng, int depth, bool top) {
    using namespace pmxml::model;
    ObjectNode obj;
    if (chance(rng, 0.5)) obj.name = safe_text(rng);
    if (!top && chance(rng, 0.5)) obj.type_name = type_string(rng);
    if (chance(rng, 0.4)) obj.description = safe_text(rng);
    if (chance(rng, 0.2)) obj.credits.emplace_back("someTool", safe_text(rng));
    std::size_t props = pick(rng, depth > 0 ? 4 : 2);
    for (std::size_t i = 0; i < props; ++i) obj.properties.push_back(property(rng, depth));
    if (chance(rng, 0.3)) {
        Attachment a;
        a.name = "note" + std::to_string(pick(rng, 100));
        switch (pick(rng, 3)) {
            case 0: a.payload = AttachmentScalar{chance(rng, 0.5)
                                                     ? std::optional<std::string>(type_string(rng))
                                                     : std::nullopt,
                                                 token(rng)};
                break;
            case 1: {
                ValueCtx ctx;
                AttachmentComplex complex;
                complex.declared_type = type_string(rng);
                if (chance(rng, 0.3)) complex.construct = simple_name(rng);
                // attachments allow only the container values
                switch (pick(rng, 3)) {
                    case 0: complex.value = Value{vector_value(rng, ctx, 1)}; break;
                    case 1: complex.value = Value{matrix_value(rng, ctx, 1)}; break;
                    default: complex.value = Value{make_tuple(rng, ctx, 1)}; break;
                }
                a.payload = std::move(complex);
                break;
            }
            default: a.payload = TextPayload{safe_text(rng)}; break;
        }
        obj.attachments.push_back(std::move(a));
    }
    return obj;
}

inline pmxml::model::Property property(Rng& rng, int depth) {
    using namespace pmxml::model;
    Property p;
    p.name = simple_name(rng);
    if (chance(rng, 0.15)) p.ext = "bundled:group";
    switch (pick(rng, depth > 0 ? 6 : 5)) {
        case 0: p.payload = Undefined{}; break;
        case 1: p.payload = ScalarValue{token(rng)}; break;
        case 2: {
            // a scalar with an explicit type keeps both attributes
            p.payload = TypedData{type_string(rng), Value{ScalarText{token(rng)}}};
            break;
        }
        case 3: {
            ValueCtx ctx;
            TypedData data;
            if (chance(rng, 0.6)) data.declared_type = type_string(rng);
            data.value = value(rng, ctx, 2);
            p.payload = std::move(data);
            break;
        }
        case 4: p.payload = TextPayload{safe_text(rng)}; break;
        default: {
            Subobjects subs;
            std::size_t n = pick(rng, 2) + 1;
            for (std::size_t i = 0; i < n; ++i)
                subs.objects.push_back(object_node(rng, depth - 1, false));
            p.payload = std::move(subs);
            break;
        }
    }
    return p;
}

inline pmxml::model::Document document(Rng& rng) {
    using namespace pmxml::model;
    Document doc;
    if (chance(rng, 0.3)) doc.pis.emplace_back("pm", "chk=\"1a2b3c4d\"");
    if (chance(rng, 0.7)) doc.version = chance(rng, 0.5) ? "3.0" : "2.9.9";
    if (chance(rng, 0.2)) doc.tm = "56e977e8";
    if (chance(rng, 0.75)) {
        doc.kind = DocumentKind::TopObject;
        doc.type_name = chance(rng, 0.5) ? "polytope::Polytope<Rational>" : "fan::PolyhedralFan";
        doc.body = object_node(rng, 2, true);
    } else {
        doc.kind = DocumentKind::LooseData;
        doc.type_name = type_string(rng);
        if (chance(rng, 0.3)) doc.ext = "bundled:local";
        if (chance(rng, 0.3)) doc.loose.description = safe_text(rng);
        if (chance(rng, 0.25)) {
            doc.loose.data = Value{ScalarText{token(rng)}};
        } else {
            ValueCtx ctx;
            doc.loose.data = value(rng, ctx, 2);
        }
    }
    return doc;
}

// ------------------------------------------------- trees for the oracle

inline pmxml::infoset::XmlElement random_element(Rng& rng, int depth) {
    using pmxml::infoset::TextChild;
    using pmxml::infoset::XmlElement;
    using pmxml::infoset::XmlNode;
    static const char* names[] = {"object", "data", "property", "attachment",
                                  "description", "credit", "m", "v", "e", "t", "r"};
    static const char* attr_names[] = {"name", "type", "value", "undef", "ext",
                                       "construct", "cols", "dim", "i", "id",
                                       "version", "tm", "product"};
    static const char* attr_values[] = {"true", "0", "3", "3.0", "VERTICES",
                                        "polytope::Polytope<Rational>", "text",
                                        "56e977e8", "abc", "1 0 0", "", "-1"};
    XmlElement e;
    e.name = names[pick(rng, std::size(names))];
    e.ns = std::string(pmxml::schema::kPolymakeNamespace);
    std::size_t attrs = pick(rng, 3);
    for (std::size_t i = 0; i < attrs; ++i) {
        std::string name = attr_names[pick(rng, std::size(attr_names))];
        if (e.attribute(name)) continue;
        e.attributes.emplace_back(name, attr_values[pick(rng, std::size(attr_values))]);
    }
    std::size_t kids = depth > 0 ? pick(rng, 4) : 0;
    for (std::size_t i = 0; i < kids; ++i) {
        if (chance(rng, 0.25)) {
            e.children.push_back(XmlNode{TextChild{
                chance(rng, 0.4) ? std::string("  ") : std::string(token(rng))}});
        } else {
            e.children.push_back(XmlNode{random_element(rng, depth - 1)});
        }
    }
    return e;
}

// Half the comparison corpus: near-valid trees obtained by mutating the
// encoding of a random Document, so both matchers see hard cases.
inline pmxml::infoset::XmlTree mutated_document_tree(Rng& rng) {
    using pmxml::infoset::XmlElement;
    pmxml::infoset::XmlTree tree = pmxml::codec::encode(document(rng));
    // apply 0..2 random edits somewhere in the tree
    std::size_t edits = pick(rng, 3);
    for (std::size_t i = 0; i < edits; ++i) {
        XmlElement* e = &tree.root;
        while (true) {
            std::vector<XmlElement*> kids;
            for (auto& child : e->children) {
                if (child.is_element())
                    kids.push_back(&std::get<XmlElement>(child.value));
            }
            if (kids.empty() || chance(rng, 0.4)) break;
            e = kids[pick(rng, kids.size())];
        }
        switch (pick(rng, 4)) {
            case 0:
                if (!e->attributes.empty())
                    e->attributes.erase(e->attributes.begin() +
                                        static_cast<long>(pick(rng, e->attributes.size())));
                break;
            case 1:
                e->attributes.emplace_back("undef", chance(rng, 0.5) ? "true" : "yes");
                break;
            case 2:
                e->name = chance(rng, 0.5) ? "property" : "x";
                break;
            default:
                e->children.push_back(pmxml::infoset::XmlNode{
                    pmxml::infoset::TextChild{chance(rng, 0.5) ? " " : "stray"}});
                break;
        }
    }
    return tree;
}

inline pmxml::infoset::XmlTree random_tree(Rng& rng) {
    if (chance(rng, 0.5)) return mutated_document_tree(rng);
    pmxml::infoset::XmlTree tree;
    tree.root = random_element(rng, 3);
    if (chance(rng, 0.5)) tree.root.name = chance(rng, 0.5) ? "object" : "data";
    return tree;
}

}  // namespace gen
