#ifndef HETDIST_METRICS_HPP
#define HETDIST_METRICS_HPP

#include "hetdist/dataset.hpp"
#include "hetdist/vdm_stats.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

/**
 * @file metrics.hpp
 *
 * @brief The six heterogeneous distance functions and their per-attribute kernels.
 *
 * Every distance is returned in squared-sum form, sum over attributes of the attribute
 * contribution. Neighbor ranking uses that form; present_distance() takes the square root.
 */

namespace hetdist {

enum class metric_tag { euclidean_sigma, heom, hvdm, dvdm, ivdm, wvdm };

/// Normalization of the value difference for nominal attributes under HVDM.
enum class vdm_norm { n1, n2, n3 };

struct metric_kind {
    metric_tag tag = metric_tag::hvdm;
    /// Only meaningful for metric_tag::hvdm.
    vdm_norm norm = vdm_norm::n2;

    /// Accepts euclid, heom, hvdm, hvdm-n1, hvdm-n3, dvdm, ivdm, wvdm.
    static std::optional<metric_kind> parse(std::string_view name);
    std::string name() const;

    bool uses_vdm() const noexcept { return tag != metric_tag::euclidean_sigma && tag != metric_tag::heom; }

    bool operator==(const metric_kind& other) const noexcept;
};

/// Names accepted by metric_kind::parse(), in canonical order.
std::span<const std::string_view> metric_names() noexcept;

/// Sum over classes of squared probability differences.
double vdm_a(std::span<const double> p_x, std::span<const double> p_y);

/// N1 = sum |d|, N2 = sqrt(sum d^2), N3 = sqrt(C * sum d^2).
double normalized_vdm(std::span<const double> p_x, std::span<const double> p_y, vdm_norm norm, std::size_t class_count);

inline double overlap(nominal_code x, nominal_code y) noexcept { return x == y ? 0.0 : 1.0; }

/// |x - y| / range; a zero range gives 0 for equal values and 1 otherwise.
double rn_diff(double x, double y, double range) noexcept;

/// |x - y| / (4 sigma); a zero sigma gives 0 for equal values and 1 otherwise.
double normalized_diff(double x, double y, double sigma) noexcept;

/// Square root of a squared-sum distance.
double present_distance(double squared_sum);

/**
 * @brief A distance function bound to the statistics of one training set.
 *
 * Holds the per-attribute statistics and, depending on the kind, the value difference table
 * and the window table. Immutable once prepared; distance() is safe to call concurrently.
 */
class prepared_metric {
public:
    static prepared_metric prepare(metric_kind kind, const dataset& train, const discretization_config& config = {});

    const metric_kind& kind() const noexcept { return kind_; }
    const hetdist::schema& schema() const noexcept { return schema_; }
    std::span<const attribute_stats> stats() const noexcept { return stats_; }
    const std::optional<vdm_table>& vdm() const noexcept { return vdm_; }
    const std::optional<window_table>& windows() const noexcept { return windows_; }

    /// Squared-sum distance between two instances of the prepared schema.
    double distance(const instance& x, const instance& y) const;

    /**
     * @brief Contribution of attribute a to distance().
     *
     * Scalar attribute distances (Euclidean, HEOM, HVDM) are squared here; the VDM-family
     * contributions are already sums of squared probability differences and are used as is.
     */
    double attribute_contribution(std::size_t a, const value& x, const value& y) const;

private:
    prepared_metric() = default;

    /// Probability vector a VDM-family metric uses for one value; may point into `scratch`.
    std::span<const double> profile(std::size_t a, const value& v, std::span<double> scratch) const;

    metric_kind kind_;
    hetdist::schema schema_;
    std::vector<attribute_stats> stats_;
    std::optional<vdm_table> vdm_;
    std::optional<window_table> windows_;
};

}  // namespace hetdist

#endif
