#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "pmxml/codec.hpp"
#include "pmxml/infoset.hpp"
#include "pmxml/model.hpp"
#include "pmxml/schema.hpp"
#include "pmxml/semantics.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInvalidInput = 1;
constexpr int kIoError = 2;
constexpr int kSemanticDiscrepancy = 3;

bool color_enabled() {
    const char* env = std::getenv("PMXML_COLOR");
    return env == nullptr || std::string(env) != "0";
}

void diagnostic(const std::string& message) {
    if (color_enabled()) {
        std::cerr << "\033[31mpmxml:\033[0m " << message << "\n";
    } else {
        std::cerr << "pmxml: " << message << "\n";
    }
}

bool read_file(const std::string& path, std::string& out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::ostringstream buffer;
    buffer << in.rdbuf();
    out = buffer.str();
    return true;
}

int load_tree(const std::string& path, pmxml::infoset::XmlTree& tree) {
    std::string bytes;
    if (!read_file(path, bytes)) {
        diagnostic("cannot read '" + path + "'");
        return kIoError;
    }
    try {
        tree = pmxml::infoset::read_document(bytes);
    } catch (const pmxml::infoset::WellFormednessError& e) {
        diagnostic(path + ": " + e.what());
        return kInvalidInput;
    }
    return kOk;
}

int load_document(const std::string& path, bool lax, pmxml::model::Document& doc) {
    pmxml::infoset::XmlTree tree;
    if (int rc = load_tree(path, tree); rc != kOk) return rc;
    try {
        pmxml::codec::DecodeOptions opts;
        opts.lax_namespace = lax;
        doc = pmxml::codec::decode(tree, opts);
    } catch (const pmxml::codec::CodecError& e) {
        diagnostic(path + ": " + e.what());
        return kInvalidInput;
    } catch (const pmxml::model::ModelError& e) {
        diagnostic(path + ": " + e.what());
        return kInvalidInput;
    }
    return kOk;
}

int cmd_validate(const std::string& path, bool lax) {
    pmxml::infoset::XmlTree tree;
    if (int rc = load_tree(path, tree); rc != kOk) return rc;
    pmxml::schema::ValidateOptions opts;
    opts.lax_namespace = lax;
    auto report = pmxml::schema::validate(tree, pmxml::schema::polymake_schema(), opts);
    if (report.valid) {
        std::cout << "VALID\n";
        return kOk;
    }
    for (const auto& violation : report.violations) {
        std::cout << violation.path << ": " << violation.rule << ": " << violation.message
                  << "\n";
    }
    return kInvalidInput;
}

std::string describe_vector(const pmxml::model::VectorV& v) {
    using namespace pmxml::model;
    if (const auto* dense = std::get_if<DenseText>(&v.entries)) {
        auto tokens = pmxml::codec::tokenize_dense(dense->raw);
        return "vector of " + std::to_string(tokens.size()) + " entries";
    }
    if (const auto* sparse = std::get_if<SparseE>(&v.entries)) {
        std::string dim = v.dim ? std::to_string(*v.dim) : "?";
        return "sparse vector dim " + dim + " with " +
               std::to_string(sparse->entries.size()) + " entries";
    }
    const auto& tuples = std::get<TupleEntries>(v.entries);
    return "vector of " + std::to_string(tuples.entries.size()) +
           (tuples.entries.size() == 1 ? " tuple" : " tuples");
}

std::string describe_matrix(const pmxml::model::MatrixM& m) {
    using namespace pmxml::model;
    if (const auto* dense = std::get_if<DenseRows>(&m.rows)) {
        std::size_t rows = dense->rows.size();
        std::string cols = "0";
        bool sparse_rows = false;
        if (m.cols) {
            cols = std::to_string(*m.cols);
        } else if (!dense->rows.empty()) {
            try {
                cols = std::to_string(pmxml::codec::densify_matrix(m).cols);
            } catch (const pmxml::codec::CodecError&) {
                cols = "?";
            }
        }
        for (const auto& row : dense->rows) {
            if (std::holds_alternative<SparseE>(row.entries)) sparse_rows = true;
        }
        return "matrix " + std::to_string(rows) + "×" + cols +
               (rows == 0 ? "" : sparse_rows ? " sparse" : " dense");
    }
    if (const auto* sparse = std::get_if<SparseRows>(&m.rows)) {
        std::string rows = m.dim ? std::to_string(*m.dim) : "?";
        std::string cols = m.cols ? std::to_string(*m.cols) : "?";
        return "matrix " + rows + "×" + cols + " sparse (" +
               std::to_string(sparse->rows.size()) + " stored rows)";
    }
    if (const auto* nested = std::get_if<MatrixRows>(&m.rows))
        return "matrix of " + std::to_string(nested->rows.size()) + " matrices";
    const auto& tuples = std::get<TupleRows>(m.rows);
    return "matrix of " + std::to_string(tuples.rows.size()) + " tuples";
}

std::string describe_value(const pmxml::model::Value& value) {
    using namespace pmxml::model;
    return std::visit(
        [](const auto& node) -> std::string {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, ScalarText>) {
                return "scalar " + node.raw;
            } else if constexpr (std::is_same_v<T, VectorV>) {
                return describe_vector(node);
            } else if constexpr (std::is_same_v<T, MatrixM>) {
                return describe_matrix(node);
            } else if constexpr (std::is_same_v<T, TupleV>) {
                return "tuple";
            } else if constexpr (std::is_same_v<T, RefR>) {
                return node.id ? "reference to id " + std::to_string(*node.id)
                               : "reference without id";
            } else {
                return "entry";
            }
        },
        value.node);
}

std::string describe_property(const pmxml::model::Property& p) {
    using namespace pmxml::model;
    return std::visit(
        [](const auto& payload) -> std::string {
            using T = std::decay_t<decltype(payload)>;
            if constexpr (std::is_same_v<T, Undefined>) {
                return "undef";
            } else if constexpr (std::is_same_v<T, ScalarValue>) {
                return "scalar " + payload.text;
            } else if constexpr (std::is_same_v<T, TypedData>) {
                return describe_value(payload.value);
            } else if constexpr (std::is_same_v<T, TextPayload>) {
                return "text";
            } else {
                std::size_t n = payload.objects.size();
                return std::to_string(n) + (n == 1 ? " subobject" : " subobjects");
            }
        },
        p.payload);
}

void print_object(const pmxml::model::ObjectNode& obj, const std::string& indent) {
    for (const auto& p : obj.properties) {
        std::cout << indent << p.name << ": " << describe_property(p) << "\n";
    }
    for (const auto& a : obj.attachments) {
        std::cout << indent << "attachment " << a.name << "\n";
    }
}

int cmd_inspect(const std::string& path, bool lax) {
    pmxml::model::Document doc;
    if (int rc = load_document(path, lax, doc); rc != kOk) return rc;
    if (doc.kind == pmxml::model::DocumentKind::TopObject) {
        std::cout << "type: " << doc.type_name << "\n";
        if (doc.version) std::cout << "version: " << *doc.version << "\n";
        if (doc.body.name) std::cout << "name: " << *doc.body.name << "\n";
        if (doc.body.description)
            std::cout << "description: " << *doc.body.description << "\n";
        std::cout << "properties:\n";
        print_object(doc.body, "  ");
    } else {
        std::cout << "data: " << doc.type_name << "; " << describe_value(doc.loose.data)
                  << "\n";
    }
    return kOk;
}

int cmd_to_json(const std::string& path, bool lax, const std::string& out_path) {
    pmxml::model::Document doc;
    if (int rc = load_document(path, lax, doc); rc != kOk) return rc;
    std::string json = pmxml::codec::to_json(doc);
    if (out_path.empty()) {
        std::cout << json;
        return kOk;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        diagnostic("cannot write '" + out_path + "'");
        return kIoError;
    }
    out << json;
    return out.good() ? kOk : kIoError;
}

int cmd_roundtrip(const std::string& path, bool lax, bool check) {
    pmxml::model::Document doc;
    if (int rc = load_document(path, lax, doc); rc != kOk) return rc;
    pmxml::infoset::XmlTree canonical = pmxml::codec::encode(doc);
    if (!check) {
        std::cout << pmxml::infoset::write_document(canonical);
        return kOk;
    }
    try {
        pmxml::codec::DecodeOptions opts;
        opts.lax_namespace = lax;
        pmxml::model::Document again = pmxml::codec::decode(canonical, opts);
        pmxml::infoset::XmlTree recanonical = pmxml::codec::encode(again);
        if (!(again == doc) ||
            !pmxml::infoset::infoset_equal(recanonical, canonical)) {
            diagnostic(path + ": canonical form is not a fixed point");
            return kInvalidInput;
        }
    } catch (const std::runtime_error& e) {
        diagnostic(path + ": round-trip failed: " + e.what());
        return kInvalidInput;
    }
    std::cout << "ROUNDTRIP OK\n";
    return kOk;
}

std::optional<pmxml::codec::DenseMatrix> dense_property(
    const pmxml::model::ObjectNode& obj, const std::string& name) {
    auto props = pmxml::model::find_properties(obj, name);
    if (props.empty()) return std::nullopt;
    const auto* data = std::get_if<pmxml::model::TypedData>(&props.front()->payload);
    if (!data) return std::nullopt;
    const auto* m = std::get_if<pmxml::model::MatrixM>(&data->value.node);
    if (!m) return std::nullopt;
    return pmxml::codec::densify_matrix(*m);
}

int cmd_check(const std::string& path, bool lax) {
    pmxml::model::Document doc;
    if (int rc = load_document(path, lax, doc); rc != kOk) return rc;
    if (doc.kind != pmxml::model::DocumentKind::TopObject) {
        std::cout << "no semantic checks for loose data\n";
        return kOk;
    }
    std::vector<std::string> discrepancies;
    try {
        auto vertices = dense_property(doc.body, "VERTICES");
        auto facets = dense_property(doc.body, "FACETS");
        if (vertices && facets) {
            auto report = pmxml::semantics::incidence_check(*vertices, *facets);
            for (const auto& [vi, fi] : report.violations) {
                discrepancies.push_back(
                    "vertex " + std::to_string(vi) + " violates facet " +
                    std::to_string(fi) + ": product " + report.products[vi][fi].str());
            }
            std::cout << "incidence: " << vertices->rows.size() * facets->rows.size()
                      << " products checked, " << report.violations.size()
                      << " negative\n";
        }
        for (std::string& message : pmxml::semantics::check_counts(doc.body)) {
            discrepancies.push_back(std::move(message));
        }
        // TRIANGULATION facet entries index rows of the parent's VERTICES.
        if (vertices) {
            for (const auto* prop :
                 pmxml::model::find_properties(doc.body, "TRIANGULATION")) {
                const auto* subs = std::get_if<pmxml::model::Subobjects>(&prop->payload);
                if (!subs) continue;
                for (const auto& sub : subs->objects) {
                    auto cells = dense_property(sub, "FACETS");
                    if (!cells) continue;
                    for (const auto& row : cells->rows) {
                        for (const std::string& token : row.entries) {
                            auto index = pmxml::semantics::parse_rational(token);
                            if (index.sign() < 0 || index.denominator() != 1 ||
                                index.numerator() >= vertices->rows.size()) {
                                discrepancies.push_back(
                                    "triangulation facet index " + token +
                                    " out of range for " +
                                    std::to_string(vertices->rows.size()) + " vertices");
                            }
                        }
                    }
                }
            }
        }
    } catch (const std::runtime_error& e) {
        discrepancies.push_back(std::string("semantic check failed: ") + e.what());
    }
    if (discrepancies.empty()) {
        std::cout << "CLEAN\n";
        return kOk;
    }
    for (const auto& message : discrepancies) std::cout << message << "\n";
    return kSemanticDiscrepancy;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"polymake XML toolkit"};
    app.require_subcommand(1);

    std::string path;
    std::string out_path;
    bool lax = false;
    bool check = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("file", path, "input XML file")->required();
        cmd->add_flag("--lax", lax, "accept a missing root namespace");
    };

    CLI::App* validate = app.add_subcommand("validate", "validate against the schema");
    add_common(validate);
    CLI::App* inspect = app.add_subcommand("inspect", "summarize a document");
    add_common(inspect);
    CLI::App* to_json = app.add_subcommand("to-json", "convert to JSON");
    add_common(to_json);
    to_json->add_option("--out", out_path, "output path (default: standard output)");
    CLI::App* roundtrip = app.add_subcommand("roundtrip", "canonicalize a document");
    add_common(roundtrip);
    roundtrip->add_flag("--check", check, "verify the canonical fixed point");
    CLI::App* check_cmd = app.add_subcommand("check", "run semantic checks");
    add_common(check_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kIoError;
    }

    if (validate->parsed()) return cmd_validate(path, lax);
    if (inspect->parsed()) return cmd_inspect(path, lax);
    if (to_json->parsed()) return cmd_to_json(path, lax, out_path);
    if (roundtrip->parsed()) return cmd_roundtrip(path, lax, check);
    if (check_cmd->parsed()) return cmd_check(path, lax);
    return kIoError;
}
