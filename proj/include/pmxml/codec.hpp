#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pmxml/infoset.hpp"
#include "pmxml/model.hpp"
#include "pmxml/schema.hpp"

// Bidirectional mapping between XML trees and documents, canonical
// serialization, dense/sparse conversion and JSON export.
namespace pmxml::codec {

class CodecError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SchemaViolationError : public CodecError {
public:
    explicit SchemaViolationError(schema::ValidationReport report);
    schema::ValidationReport report;
};

class MissingDimensionError : public CodecError {
public:
    MissingDimensionError() : CodecError("sparse container without a known dimension") {}
};

class IndexOutOfRangeError : public CodecError {
public:
    IndexOutOfRangeError(std::uint64_t index, std::uint64_t length)
        : CodecError("sparse index " + std::to_string(index) +
                     " out of range for length " + std::to_string(length)) {}
};

class RaggedRowsError : public CodecError {
public:
    RaggedRowsError() : CodecError("dense rows of unequal width and no cols attribute") {}
};

struct DecodeOptions {
    bool lax_namespace = false;
    bool validate_first = true;
};

struct DenseVector {
    std::vector<std::string> entries;
    std::size_t length() const { return entries.size(); }
    bool operator==(const DenseVector&) const = default;
};

struct DenseMatrix {
    std::vector<DenseVector> rows;
    std::size_t cols = 0;
    bool operator==(const DenseMatrix&) const = default;
};

/// Maps a schema-valid tree onto a Document.  With validate_first unset the
/// mapping is attempted directly and only model-level rules are enforced.
model::Document decode(const infoset::XmlTree& tree, const DecodeOptions& opts = {});

/// Canonical tree: fixed attribute order, `value` attribute form for
/// primitive properties, self-closing empty elements, polymake namespace on
/// the root.  decode(encode(d)) == d.
infoset::XmlTree encode(const model::Document& doc);

/// Splits on runs of ASCII whitespace; no empty tokens.
std::vector<std::string> tokenize_dense(std::string_view raw);

DenseVector densify_vector(const model::VectorV& v,
                           std::optional<std::size_t> length_hint = {},
                           const std::string& zero = "0");

DenseMatrix densify_matrix(const model::MatrixM& m, const std::string& zero = "0");

/// Sparse form with exactly the non-`zero` entries and dim = input length.
model::VectorV sparsify_vector(const DenseVector& d, const std::string& zero = "0");

/// Deterministic JSON mapping; see docs/json-mapping.md for the contract.
std::string to_json(const model::Document& doc);

}  // namespace pmxml::codec
