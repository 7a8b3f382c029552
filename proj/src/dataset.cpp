#include "hetdist/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

namespace hetdist {

namespace {

constexpr std::string_view unknown_token = "?";

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

std::vector<std::string_view> split_whitespace(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) {
            ++i;
        }
        const auto start = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t') {
            ++i;
        }
        if (i > start) {
            out.push_back(s.substr(start, i - start));
        }
    }
    return out;
}

// Calls fn(line_number, trimmed_line) for every non-blank line.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        ++line_no;
        const auto line = trim(text.substr(start, end - start));
        if (!line.empty()) {
            fn(line_no, line);
        }
        start = end + 1;
    }
}

std::optional<double> parse_number(std::string_view token) {
    if (!token.empty() && token.front() == '+') {
        token.remove_prefix(1);
    }
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), x);
    if (ec != std::errc{} || ptr != token.data() + token.size() || !std::isfinite(x)) {
        return std::nullopt;
    }
    return x;
}

std::string format_number(double x) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, ptr);
}

}  // namespace

parse_error::parse_error(const std::string& message, std::size_t line)
    : std::runtime_error(line == 0 ? message : "line " + std::to_string(line) + ": " + message), line_(line) {}

std::string_view to_keyword(attribute_kind kind) noexcept {
    switch (kind) {
    case attribute_kind::continuous:
        return "continuous";
    case attribute_kind::linear_discrete:
        return "discrete";
    case attribute_kind::nominal:
        return "nominal";
    }
    return "continuous";
}

std::optional<attribute_kind> attribute_kind_from_keyword(std::string_view keyword) noexcept {
    if (keyword == "continuous") {
        return attribute_kind::continuous;
    }
    if (keyword == "discrete") {
        return attribute_kind::linear_discrete;
    }
    if (keyword == "nominal") {
        return attribute_kind::nominal;
    }
    return std::nullopt;
}

std::optional<std::size_t> schema::find_class(std::string_view label) const {
    const auto it = std::find(class_labels.begin(), class_labels.end(), label);
    if (it == class_labels.end()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - class_labels.begin());
}

double value::numeric() const {
    if (is_number()) {
        return as_number();
    }
    return static_cast<double>(as_code());
}

std::vector<attribute_stats> compute_stats(const schema& s, std::span<const instance> instances) {
    const auto m = s.attribute_count();
    std::vector<attribute_stats> stats(m);
    for (std::size_t a = 0; a < m; ++a) {
        auto& st = stats[a];
        double sum = 0.0;
        std::set<nominal_code> codes;
        for (const auto& inst : instances) {
            const auto& v = inst.values[a];
            if (v.is_unknown()) {
                continue;
            }
            const double x = v.numeric();
            if (st.known_count == 0) {
                st.min = st.max = x;
            } else {
                st.min = std::min(st.min, x);
                st.max = std::max(st.max, x);
            }
            sum += x;
            ++st.known_count;
            if (v.is_code()) {
                codes.insert(v.as_code());
            }
        }
        st.observed_codes = codes.size();
        if (st.known_count == 0) {
            st.degenerate = true;
            continue;
        }
        st.range = st.max - st.min;
        st.mean = sum / static_cast<double>(st.known_count);
        // Rounding can push the mean a hair outside [min, max] for constant columns.
        st.mean = std::clamp(st.mean, st.min, st.max);
        double ss = 0.0;
        for (const auto& inst : instances) {
            const auto& v = inst.values[a];
            if (!v.is_unknown()) {
                const double d = v.numeric() - st.mean;
                ss += d * d;
            }
        }
        st.sigma = std::sqrt(ss / static_cast<double>(st.known_count));
    }
    return stats;
}

dataset::dataset(hetdist::schema s, std::vector<instance> instances, std::vector<std::vector<std::string>> dictionaries)
    : schema_(std::move(s)), instances_(std::move(instances)), dictionaries_(std::move(dictionaries)) {
    const auto m = schema_.attribute_count();
    dictionaries_.resize(m);
    for (std::size_t i = 0; i < instances_.size(); ++i) {
        const auto& inst = instances_[i];
        if (inst.values.size() != m) {
            throw std::invalid_argument("instance " + std::to_string(i) + " has " + std::to_string(inst.values.size()) +
                                        " values, schema has " + std::to_string(m));
        }
        if (inst.class_index >= schema_.class_count()) {
            throw std::invalid_argument("instance " + std::to_string(i) + " has an out-of-range class index");
        }
        for (std::size_t a = 0; a < m; ++a) {
            const auto& v = inst.values[a];
            const bool nominal = schema_.attributes[a].kind == attribute_kind::nominal;
            if ((nominal && v.is_number()) || (!nominal && v.is_code())) {
                throw std::invalid_argument("instance " + std::to_string(i) + ": value kind does not match attribute '" +
                                            schema_.attributes[a].name + "'");
            }
        }
    }
    stats_ = compute_stats(schema_, instances_);
}

std::string dataset::nominal_token(std::size_t attribute, nominal_code code) const {
    const auto& dict = dictionaries_.at(attribute);
    if (code < dict.size()) {
        return dict[code];
    }
    return std::to_string(code);
}

dataset dataset::subset(std::span<const std::size_t> indices) const {
    std::vector<instance> picked;
    picked.reserve(indices.size());
    for (const auto i : indices) {
        picked.push_back(instances_.at(i));
    }
    return dataset(schema_, std::move(picked), dictionaries_);
}

schema parse_schema(std::string_view text) {
    schema s;
    bool have_class = false;
    std::set<std::string, std::less<>> names;
    for_each_line(text, [&](std::size_t line_no, std::string_view line) {
        if (line.front() == '#') {
            return;
        }
        const auto words = split_whitespace(line);
        if (words[0] == "attribute") {
            if (words.size() != 3) {
                throw parse_error("expected 'attribute <name> <continuous|discrete|nominal>'", line_no);
            }
            const auto kind = attribute_kind_from_keyword(words[2]);
            if (!kind) {
                throw parse_error("unknown attribute kind '" + std::string(words[2]) + "'", line_no);
            }
            if (!names.emplace(words[1]).second) {
                throw parse_error("duplicate attribute name '" + std::string(words[1]) + "'", line_no);
            }
            s.attributes.push_back({std::string(words[1]), *kind});
        } else if (words[0] == "class") {
            if (have_class) {
                throw parse_error("more than one class declaration", line_no);
            }
            if (words.size() < 2) {
                throw parse_error("expected 'class <name> [label,label,...]'", line_no);
            }
            have_class = true;
            s.class_name = std::string(words[1]);
            if (words.size() > 2) {
                // Labels may be separated by commas and/or whitespace.
                const auto rest = trim(line.substr(words[2].data() - line.data()));
                for (auto part : split(rest, ',')) {
                    for (auto label : split_whitespace(part)) {
                        if (s.find_class(label)) {
                            throw parse_error("duplicate class label '" + std::string(label) + "'", line_no);
                        }
                        s.class_labels.emplace_back(label);
                    }
                }
            }
        } else {
            throw parse_error("unrecognized line '" + std::string(line) + "'", line_no);
        }
    });
    if (!have_class) {
        throw parse_error("missing class declaration");
    }
    if (s.attributes.empty()) {
        throw parse_error("schema declares no attributes");
    }
    if (names.contains(s.class_name)) {
        throw parse_error("class name '" + s.class_name + "' collides with an attribute name");
    }
    return s;
}

dataset parse_data(std::string_view text, const schema& s) {
    const auto m = s.attribute_count();
    schema out_schema = s;
    const bool discover_classes = s.class_labels.empty();
    std::vector<std::vector<std::string>> dictionaries(m);
    std::vector<std::unordered_map<std::string, nominal_code>> lookup(m);
    std::vector<instance> instances;

    for_each_line(text, [&](std::size_t line_no, std::string_view line) {
        const auto tokens = split(line, ',');
        if (tokens.size() != m + 1) {
            throw parse_error("expected " + std::to_string(m + 1) + " columns, found " + std::to_string(tokens.size()),
                              line_no);
        }
        instance inst;
        inst.values.reserve(m);
        for (std::size_t a = 0; a < m; ++a) {
            const auto token = trim(tokens[a]);
            if (token == unknown_token) {
                inst.values.push_back(value::unknown());
                continue;
            }
            if (s.attributes[a].kind == attribute_kind::nominal) {
                std::string key(token);
                auto [it, inserted] = lookup[a].try_emplace(key, static_cast<nominal_code>(dictionaries[a].size()));
                if (inserted) {
                    dictionaries[a].push_back(std::move(key));
                }
                inst.values.push_back(value::code(it->second));
            } else {
                const auto x = parse_number(token);
                if (!x) {
                    throw parse_error("non-numeric value '" + std::string(token) + "' for attribute '" +
                                          s.attributes[a].name + "'",
                                      line_no);
                }
                inst.values.push_back(value::number(*x));
            }
        }
        const auto label = trim(tokens[m]);
        if (label == unknown_token || label.empty()) {
            throw parse_error("missing class label", line_no);
        }
        auto cls = out_schema.find_class(label);
        if (!cls) {
            if (!discover_classes) {
                throw parse_error("unknown class label '" + std::string(label) + "'", line_no);
            }
            out_schema.class_labels.emplace_back(label);
            cls = out_schema.class_labels.size() - 1;
        }
        inst.class_index = *cls;
        instances.push_back(std::move(inst));
    });
    if (out_schema.class_count() < 2) {
        throw parse_error("at least two class labels are required");
    }
    return dataset(std::move(out_schema), std::move(instances), std::move(dictionaries));
}

std::string format_schema(const schema& s) {
    std::ostringstream out;
    for (const auto& attr : s.attributes) {
        out << "attribute " << attr.name << ' ' << to_keyword(attr.kind) << '\n';
    }
    out << "class " << s.class_name;
    for (std::size_t c = 0; c < s.class_labels.size(); ++c) {
        out << (c == 0 ? ' ' : ',') << s.class_labels[c];
    }
    out << '\n';
    return out.str();
}

std::string format_data(const dataset& data) {
    std::ostringstream out;
    const auto& s = data.schema();
    for (const auto& inst : data.instances()) {
        for (std::size_t a = 0; a < s.attribute_count(); ++a) {
            const auto& v = inst.values[a];
            if (v.is_unknown()) {
                out << unknown_token;
            } else if (v.is_code()) {
                out << data.nominal_token(a, v.as_code());
            } else {
                out << format_number(v.as_number());
            }
            out << ',';
        }
        out << s.class_labels[inst.class_index] << '\n';
    }
    return out.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

dataset load_dataset(const std::string& data_path, const std::string& schema_path) {
    return parse_data(read_file(data_path), parse_schema(read_file(schema_path)));
}

}  // namespace hetdist
