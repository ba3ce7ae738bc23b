#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

// Typed document model for the polymake data format: objects with properties
// and attachments, loose data, and the recursive value tree with references.
// All scalar content is carried as exact, uninterpreted token strings.
namespace pmxml::model {

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DuplicateIdError : public ModelError {
public:
    DuplicateIdError(std::uint64_t id, std::string path1, std::string path2)
        : ModelError("duplicate tuple id " + std::to_string(id) + " at " + path1 +
                     " and " + path2),
          id(id) {}
    std::uint64_t id;
};

class DanglingReferenceError : public ModelError {
public:
    explicit DanglingReferenceError(std::uint64_t id)
        : ModelError("reference to unknown id " + std::to_string(id)), id(id) {}
    std::uint64_t id;
};

class MissingIdError : public ModelError {
public:
    MissingIdError() : ModelError("<r> element without an id attribute") {}
};

struct Value;

/// Reference to a tuple with the given id elsewhere in the same value tree.
/// The grammar permits <r/> without an id; resolving one is refused.
struct RefR {
    std::optional<std::uint64_t> id;
    bool operator==(const RefR&) const = default;
};

/// A bare <e> entry inside a tuple.
struct ElementE {
    std::string text;
    bool operator==(const ElementE&) const = default;
};

struct TupleRaw {
    std::string text;
    bool operator==(const TupleRaw&) const = default;
};

struct TupleV {
    std::optional<std::uint64_t> id;
    // Either raw text or a nonempty item list.
    std::variant<TupleRaw, std::vector<Value>> items;
    bool operator==(const TupleV&) const = default;

    bool is_raw() const { return std::holds_alternative<TupleRaw>(items); }
    const std::string& raw() const { return std::get<TupleRaw>(items).text; }
    const std::vector<Value>& item_list() const { return std::get<std::vector<Value>>(items); }
};

struct DenseText {
    std::string raw;
    bool operator==(const DenseText&) const = default;
};

struct SparseEntry {
    std::uint64_t index;
    std::string text;
    bool operator==(const SparseEntry&) const = default;
};

struct SparseE {
    std::vector<SparseEntry> entries;  // indices strictly increasing
    bool operator==(const SparseE&) const = default;
};

struct TupleEntry {
    std::optional<std::uint64_t> index;
    TupleV value;
    bool operator==(const TupleEntry&) const = default;
};

struct TupleEntries {
    std::vector<TupleEntry> entries;
    bool operator==(const TupleEntries&) const = default;
};

struct VectorV {
    std::optional<std::uint64_t> dim;
    std::variant<DenseText, SparseE, TupleEntries> entries;
    bool operator==(const VectorV&) const = default;
};

struct MatrixM;

struct SparseRow {
    std::uint64_t index;
    VectorV row;
    bool operator==(const SparseRow&) const = default;
};

struct DenseRows {
    std::vector<VectorV> rows;
    bool operator==(const DenseRows&) const = default;
};

struct SparseRows {
    std::vector<SparseRow> rows;  // indices strictly increasing
    bool operator==(const SparseRows&) const = default;
};

struct MatrixRows {
    std::vector<MatrixM> rows;  // nonempty
    bool operator==(const MatrixRows&) const = default;
};

struct TupleRows {
    std::vector<TupleV> rows;  // nonempty
    bool operator==(const TupleRows&) const = default;
};

struct MatrixM {
    std::optional<std::uint64_t> cols;
    std::optional<std::uint64_t> dim;  // row count, required for sparse rows
    std::variant<DenseRows, SparseRows, MatrixRows, TupleRows> rows;
    bool operator==(const MatrixM&) const = default;
};

/// Scalar carried in a `value` attribute (loose data or typed property).
struct ScalarText {
    std::string raw;
    bool operator==(const ScalarText&) const = default;
};

struct Value {
    std::variant<ScalarText, VectorV, MatrixM, TupleV, RefR, ElementE> node;
    bool operator==(const Value&) const = default;
};

struct ObjectNode;

struct Undefined {
    bool operator==(const Undefined&) const = default;
};

struct ScalarValue {
    std::string text;
    bool operator==(const ScalarValue&) const = default;
};

struct TypedData {
    std::optional<std::string> declared_type;
    Value value;
    bool operator==(const TypedData&) const = default;
};

struct TextPayload {
    std::string text;
    bool operator==(const TextPayload&) const = default;
};

struct Subobjects {
    std::vector<ObjectNode> objects;  // nonempty
    bool operator==(const Subobjects&) const = default;
};

struct Property {
    std::string name;  // SimpleName
    std::optional<std::string> ext;
    std::variant<Undefined, ScalarValue, TypedData, TextPayload, Subobjects> payload;
    bool operator==(const Property&) const = default;
};

struct AttachmentScalar {
    std::optional<std::string> declared_type;
    std::string text;
    bool operator==(const AttachmentScalar&) const = default;
};

struct AttachmentComplex {
    std::string declared_type;
    std::optional<std::string> construct;
    Value value;
    bool operator==(const AttachmentComplex&) const = default;
};

struct Attachment {
    std::string name;  // unique within one object
    std::optional<std::string> ext;
    std::variant<AttachmentScalar, AttachmentComplex, TextPayload> payload;
    bool operator==(const Attachment&) const = default;
};

struct ObjectNode {
    std::optional<std::string> name;
    std::optional<std::string> ext;
    std::optional<std::string> type_name;  // subobjects only
    std::optional<std::string> description;
    std::vector<std::pair<std::string, std::string>> credits;  // (product, text)
    std::vector<Property> properties;
    std::vector<Attachment> attachments;
    bool operator==(const ObjectNode&) const = default;
};

enum class DocumentKind { TopObject, LooseData };

struct LooseBody {
    std::optional<std::string> description;
    Value data;
    bool operator==(const LooseBody&) const = default;
};

struct Document {
    DocumentKind kind = DocumentKind::TopObject;
    std::string type_name;
    std::optional<std::string> version;
    std::optional<std::string> tm;
    std::optional<std::string> ext;  // loose data only
    std::vector<std::pair<std::string, std::string>> pis;
    ObjectNode body;       // TopObject
    LooseBody loose;       // LooseData
    bool operator==(const Document&) const = default;
};

/// All properties with exactly this name, in document order.
std::vector<const Property*> find_properties(const ObjectNode& obj, std::string_view name);

/// Path of child indices from a value root to a node.
using NodePath = std::vector<std::size_t>;

struct IdTable {
    std::map<std::uint64_t, NodePath> paths;
    bool operator==(const IdTable&) const = default;
};

/// Records every tuple id in the tree.  Throws DuplicateIdError.
IdTable collect_ids(const Value& root);

/// Throws DanglingReferenceError / MissingIdError.
NodePath resolve_reference(const IdTable& table, const RefR& r);

/// The tuple at a path produced by collect_ids; nullptr when the path does
/// not lead to a tuple.
const TupleV* tuple_at(const Value& root, const NodePath& path);

}  // namespace pmxml::model
