#ifndef HETDIST_VDM_STATS_HPP
#define HETDIST_VDM_STATS_HPP

#include "hetdist/dataset.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

/**
 * @file vdm_stats.hpp
 *
 * @brief Class-conditional probability tables behind the value difference metrics:
 * equal-width discretization, midpoint interpolation and sliding-window estimation.
 */

namespace hetdist {

struct discretization_config {
    /// Number of equal-width intervals for continuous attributes. When absent, max(5, C).
    std::optional<int> s_override;

    int effective_s(std::size_t class_count) const;
};

/// |max - min| / s; 0 for a constant (or fully unknown) attribute.
double interval_width(const attribute_stats& stats, int s);

/**
 * @brief Maps a continuous value to its interval in [1, s].
 *
 * Values outside the training range clamp to 1 or s; a zero width maps everything to 1.
 * An unknown input (nullopt) maps to nullopt, the unknown bucket.
 */
std::optional<int> discretize(std::optional<double> x, const attribute_stats& stats, int s, double width);

/// Center of interval u. Defined for any integer u, so 0 and s + 1 give the virtual outer midpoints.
double midpoint(const attribute_stats& stats, double width, int u);

/**
 * @brief Class probabilities at x, linear between the midpoints of consecutive intervals.
 *
 * `interval_probs` holds s rows of `out.size()` probabilities, row u - 1 for interval u. The
 * probability is 0 at the virtual midpoints 0 and s + 1 and stays 0 beyond them. A zero width
 * returns row 1.
 */
void interpolate_p(double x, const attribute_stats& stats, int s, double width, std::span<const double> interval_probs,
                   std::span<double> out);

/**
 * @brief Counts N(a,v,c), totals N(a,v) and probabilities P(a,v,c) for every attribute.
 *
 * Continuous attributes are binned into intervals 1..s; linear discrete attributes use their raw
 * values as bins and nominal attributes their codes. Unknown values of any attribute land in a
 * dedicated bucket that behaves like one more discrete value. Values never seen in training get
 * the all-zero probability vector.
 */
class vdm_table {
public:
    static vdm_table learn(const dataset& train, const discretization_config& config = {});

    std::size_t class_count() const noexcept { return class_count_; }
    std::size_t attribute_count() const noexcept { return attributes_.size(); }
    attribute_kind kind(std::size_t a) const { return attributes_.at(a).kind; }

    /// s for continuous attributes, 0 otherwise.
    int intervals(std::size_t a) const { return attributes_.at(a).s; }
    /// Interval width for continuous attributes, 0 otherwise.
    double width(std::size_t a) const { return attributes_.at(a).width; }
    const attribute_stats& stats(std::size_t a) const { return attributes_.at(a).stats; }

    /// Discretized lookup: the probability vector DVDM uses for `v`.
    std::span<const double> probabilities(std::size_t a, const value& v) const;
    /// Probability vector of interval u of a continuous attribute; zeros for u outside [1, s].
    std::span<const double> interval_probabilities(std::size_t a, int u) const;
    std::span<const double> unknown_probabilities(std::size_t a) const;

    std::uint32_t count(std::size_t a, const value& v, std::size_t c) const;
    std::uint32_t total(std::size_t a, const value& v) const;

    /// Rows of attribute a, unknown bucket last. Used for whole-table invariant checks.
    std::size_t row_count(std::size_t a) const { return attributes_.at(a).totals.size(); }
    std::span<const double> row_probabilities(std::size_t a, std::size_t row) const;
    std::span<const std::uint32_t> row_counts(std::size_t a, std::size_t row) const;
    std::uint32_t row_total(std::size_t a, std::size_t row) const { return attributes_.at(a).totals.at(row); }

    /**
     * @brief Interpolated class probabilities p(a,c)(x) of a continuous attribute, written to `out`.
     *
     * Linear between the midpoints of consecutive intervals, falling to 0 at the virtual
     * midpoints 0 and s + 1 and staying 0 beyond them. A zero-width attribute returns the
     * probabilities of its single interval.
     */
    void interpolate(std::size_t a, double x, std::span<double> out) const;
    std::vector<double> interpolate(std::size_t a, double x) const;

private:
    struct attribute_table {
        attribute_kind kind = attribute_kind::continuous;
        int s = 0;
        double width = 0.0;
        attribute_stats stats;
        std::map<double, std::size_t> discrete_rows;
        std::size_t unknown_row = 0;
        std::vector<std::uint32_t> counts;
        std::vector<std::uint32_t> totals;
        std::vector<double> probs;
    };

    std::optional<std::size_t> row_of(std::size_t a, const value& v) const;
    std::span<const double> zeros() const { return zeros_; }

    std::size_t class_count_ = 0;
    std::vector<attribute_table> attributes_;
    std::vector<double> zeros_;
};

/**
 * @brief Sliding-window class probabilities for every continuous attribute.
 *
 * For each distinct training value x the window [x - w/2, x + w/2) is counted and N(c)/N stored.
 * Queries between stored values interpolate linearly, and fall to 0 at min - w/2 and max + w/2.
 * Non-continuous attributes have no entries.
 */
class window_table {
public:
    static window_table learn(const dataset& train, const discretization_config& config = {});
    /// Same as learn() with explicit window widths, one per attribute (ignored for non-continuous ones).
    static window_table learn_with_widths(const dataset& train, std::span<const double> widths);

    std::size_t class_count() const noexcept { return class_count_; }
    std::size_t attribute_count() const noexcept { return attributes_.size(); }
    bool covers(std::size_t a) const { return attributes_.at(a).present; }
    std::size_t stored_entries() const;

    std::span<const double> values(std::size_t a) const { return attributes_.at(a).values; }
    std::span<const double> probabilities(std::size_t a, std::size_t i) const;
    double width(std::size_t a) const { return attributes_.at(a).width; }
    double min(std::size_t a) const { return attributes_.at(a).min; }
    double max(std::size_t a) const { return attributes_.at(a).max; }

    void find_p(std::size_t a, double x, std::span<double> out) const;
    std::vector<double> find_p(std::size_t a, double x) const;

private:
    struct attribute_windows {
        bool present = false;
        double width = 0.0;
        double min = 0.0;
        double max = 0.0;
        std::vector<double> values;
        std::vector<double> probs;
    };

    std::size_t class_count_ = 0;
    std::vector<attribute_windows> attributes_;
};

/// How a probability landscape is sampled.
enum class landscape { discretized, interpolated, windowed };

/**
 * @brief Comma-separated rows `x,p_1,...,p_C` on a uniform grid of `grid` points over
 * [min - w, max + w] of a continuous attribute.
 *
 * `windows` is required for landscape::windowed and ignored otherwise.
 */
std::string probability_map(const vdm_table& vdm, const window_table* windows, std::size_t a, landscape kind,
                            std::size_t grid = 256);

}  // namespace hetdist

#endif
