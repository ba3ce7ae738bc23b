#include "pmxml/model.hpp"

#include <sstream>

namespace pmxml::model {

namespace {

std::string path_string(const NodePath& path) {
    std::ostringstream out;
    out << "$";
    for (std::size_t i : path) out << "." << i;
    return out.str();
}

struct IdWalker {
    IdTable table;
    NodePath path;

    void enter(std::size_t index, auto&& walk) {
        path.push_back(index);
        walk();
        path.pop_back();
    }

    void visit(const Value& v) {
        std::visit([&](const auto& node) { visit_node(node); }, v.node);
    }

    void visit_node(const ScalarText&) {}
    void visit_node(const RefR&) {}
    void visit_node(const ElementE&) {}

    void visit_node(const VectorV& v) {
        if (const auto* tuples = std::get_if<TupleEntries>(&v.entries)) {
            for (std::size_t i = 0; i < tuples->entries.size(); ++i) {
                enter(i, [&] { visit_node(tuples->entries[i].value); });
            }
        }
    }

    void visit_node(const MatrixM& m) {
        std::visit(
            [&](const auto& rows) {
                for (std::size_t i = 0; i < rows.rows.size(); ++i) {
                    enter(i, [&] { visit_row(rows.rows[i]); });
                }
            },
            m.rows);
    }

    void visit_row(const VectorV& v) { visit_node(v); }
    void visit_row(const SparseRow& r) { visit_node(r.row); }
    void visit_row(const MatrixM& m) { visit_node(m); }
    void visit_row(const TupleV& t) { visit_node(t); }

    void visit_node(const TupleV& t) {
        if (t.id) {
            auto [it, inserted] = table.paths.emplace(*t.id, path);
            if (!inserted)
                throw DuplicateIdError(*t.id, path_string(it->second), path_string(path));
        }
        if (!t.is_raw()) {
            const auto& items = t.item_list();
            for (std::size_t i = 0; i < items.size(); ++i) {
                enter(i, [&] { visit(items[i]); });
            }
        }
    }
};

// Child-index navigation mirroring IdWalker's traversal order.
struct Navigator {
    const NodePath& path;
    std::size_t depth = 0;

    const TupleV* visit(const Value& v) {
        return std::visit([&](const auto& node) { return visit_node(node); }, v.node);
    }

    const TupleV* visit_node(const ScalarText&) { return nullptr; }
    const TupleV* visit_node(const RefR&) { return nullptr; }
    const TupleV* visit_node(const ElementE&) { return nullptr; }

    const TupleV* visit_node(const VectorV& v) {
        if (depth == path.size()) return nullptr;
        const auto* tuples = std::get_if<TupleEntries>(&v.entries);
        if (!tuples || path[depth] >= tuples->entries.size()) return nullptr;
        ++depth;
        return visit_node(tuples->entries[path[depth - 1]].value);
    }

    const TupleV* visit_node(const MatrixM& m) {
        if (depth == path.size()) return nullptr;
        std::size_t index = path[depth];
        ++depth;
        return std::visit(
            [&](const auto& rows) -> const TupleV* {
                if (index >= rows.rows.size()) return nullptr;
                return visit_row(rows.rows[index]);
            },
            m.rows);
    }

    const TupleV* visit_row(const VectorV& v) { return visit_node(v); }
    const TupleV* visit_row(const SparseRow& r) { return visit_node(r.row); }
    const TupleV* visit_row(const MatrixM& m) { return visit_node(m); }
    const TupleV* visit_row(const TupleV& t) { return visit_node(t); }

    const TupleV* visit_node(const TupleV& t) {
        if (depth == path.size()) return &t;
        if (t.is_raw()) return nullptr;
        const auto& items = t.item_list();
        if (path[depth] >= items.size()) return nullptr;
        ++depth;
        return visit(items[path[depth - 1]]);
    }
};

}  // namespace

std::vector<const Property*> find_properties(const ObjectNode& obj, std::string_view name) {
    std::vector<const Property*> out;
    for (const Property& p : obj.properties) {
        if (p.name == name) out.push_back(&p);
    }
    return out;
}

IdTable collect_ids(const Value& root) {
    IdWalker walker;
    walker.visit(root);
    return std::move(walker.table);
}

NodePath resolve_reference(const IdTable& table, const RefR& r) {
    if (!r.id) throw MissingIdError();
    auto it = table.paths.find(*r.id);
    if (it == table.paths.end()) throw DanglingReferenceError(*r.id);
    return it->second;
}

const TupleV* tuple_at(const Value& root, const NodePath& path) {
    Navigator nav{path};
    return nav.visit(root);
}

}  // namespace pmxml::model
