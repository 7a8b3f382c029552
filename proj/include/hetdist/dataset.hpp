#ifndef HETDIST_DATASET_HPP
#define HETDIST_DATASET_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

/**
 * @file dataset.hpp
 *
 * @brief Schema and data file parsing, value encoding and per-attribute statistics.
 */

namespace hetdist {

/// Raised for malformed schema or data files. Carries the 1-based line number when known.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& message, std::size_t line = 0);

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

enum class attribute_kind { continuous, linear_discrete, nominal };

/// Keyword used in schema files: `continuous`, `discrete` or `nominal`.
std::string_view to_keyword(attribute_kind kind) noexcept;
std::optional<attribute_kind> attribute_kind_from_keyword(std::string_view keyword) noexcept;

/// Linear attributes (continuous or linear discrete) carry numbers; nominal attributes carry codes.
constexpr bool is_linear(attribute_kind kind) noexcept { return kind != attribute_kind::nominal; }

struct attribute {
    std::string name;
    attribute_kind kind;

    bool operator==(const attribute&) const = default;
};

/**
 * @brief Attribute names and kinds in column order, plus the class declaration.
 *
 * `class_labels` is empty when the schema file only names the class column; labels are then
 * discovered in order of first appearance by parse_data().
 */
struct schema {
    std::vector<attribute> attributes;
    std::string class_name;
    std::vector<std::string> class_labels;

    std::size_t attribute_count() const noexcept { return attributes.size(); }
    std::size_t class_count() const noexcept { return class_labels.size(); }
    std::optional<std::size_t> find_class(std::string_view label) const;

    bool operator==(const schema&) const = default;
};

/// Index into an attribute's nominal dictionary.
using nominal_code = std::uint32_t;

/// A single attribute value: a number, a nominal code, or unknown.
class value {
public:
    value() = default;

    static value number(double x) { return value(x); }
    static value code(nominal_code c) { return value(c); }
    static value unknown() { return value(); }

    bool is_unknown() const noexcept { return std::holds_alternative<std::monostate>(data_); }
    bool is_number() const noexcept { return std::holds_alternative<double>(data_); }
    bool is_code() const noexcept { return std::holds_alternative<nominal_code>(data_); }

    double as_number() const { return std::get<double>(data_); }
    nominal_code as_code() const { return std::get<nominal_code>(data_); }

    /// The number, or the code converted to a real. Only the Euclidean baseline reads codes this way.
    double numeric() const;

    bool operator==(const value&) const = default;

private:
    explicit value(double x) : data_(x) {}
    explicit value(nominal_code c) : data_(c) {}

    std::variant<std::monostate, double, nominal_code> data_;
};

struct instance {
    std::vector<value> values;
    std::size_t class_index = 0;

    bool operator==(const instance&) const = default;
};

/**
 * @brief Statistics over the known values of one attribute.
 *
 * For nominal attributes min/max/mean/sigma are taken over the integer codes; the Euclidean
 * baseline is the only consumer of those. `sigma` is the population standard deviation.
 */
struct attribute_stats {
    double min = 0.0;
    double max = 0.0;
    double range = 0.0;
    double mean = 0.0;
    double sigma = 0.0;
    std::size_t known_count = 0;
    std::size_t observed_codes = 0;
    /// True when the attribute has no known values; every numeric field is then 0.
    bool degenerate = false;

    bool operator==(const attribute_stats&) const = default;
};

std::vector<attribute_stats> compute_stats(const schema& s, std::span<const instance> instances);

/**
 * @brief An immutable table of encoded instances with its schema, nominal dictionaries and statistics.
 *
 * Nominal dictionaries map codes back to the tokens of the data file; codes are assigned in
 * order of first appearance.
 */
class dataset {
public:
    dataset(hetdist::schema s, std::vector<instance> instances, std::vector<std::vector<std::string>> dictionaries = {});

    const hetdist::schema& schema() const noexcept { return schema_; }
    std::span<const instance> instances() const noexcept { return instances_; }
    const instance& operator[](std::size_t i) const { return instances_[i]; }
    std::size_t size() const noexcept { return instances_.size(); }
    bool empty() const noexcept { return instances_.empty(); }

    std::span<const attribute_stats> stats() const noexcept { return stats_; }
    const attribute_stats& stats(std::size_t attribute) const { return stats_[attribute]; }

    /// Token for a nominal code, or the decimal code when the dataset was built without dictionaries.
    std::string nominal_token(std::size_t attribute, nominal_code code) const;
    const std::vector<std::vector<std::string>>& dictionaries() const noexcept { return dictionaries_; }

    /// Instances at `indices` in the given order, with statistics recomputed over them.
    dataset subset(std::span<const std::size_t> indices) const;

private:
    hetdist::schema schema_;
    std::vector<instance> instances_;
    std::vector<std::vector<std::string>> dictionaries_;
    std::vector<attribute_stats> stats_;
};

schema parse_schema(std::string_view text);

/**
 * @brief Parses comma-separated rows against `s`. The class label is the last column, `?` is unknown.
 *
 * If `s` enumerates class labels, any other label is an error; otherwise labels are
 * discovered in order of first appearance. At least two class labels are required.
 */
dataset parse_data(std::string_view text, const schema& s);

/// Inverse of parse_schema(); class labels are always enumerated.
std::string format_schema(const schema& s);
/// Inverse of parse_data(). Numbers are written with round-trip precision.
std::string format_data(const dataset& data);

std::string read_file(const std::string& path);
dataset load_dataset(const std::string& data_path, const std::string& schema_path);

}  // namespace hetdist

#endif
