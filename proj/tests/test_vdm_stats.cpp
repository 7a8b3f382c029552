#include "hetdist/vdm_stats.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

using namespace hetdist;
using doctest::Approx;

namespace {

attribute_stats range_stats(double lo, double hi) {
    attribute_stats st;
    st.min = lo;
    st.max = hi;
    st.range = hi - lo;
    st.mean = (lo + hi) / 2.0;
    st.known_count = 2;
    return st;
}

double sum(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

dataset one_attribute(attribute_kind kind, const std::vector<std::pair<double, std::size_t>>& rows, std::size_t classes) {
    std::vector<instance> inst;
    for (const auto& [x, c] : rows) {
        inst.push_back({{kind == attribute_kind::nominal ? value::code(static_cast<nominal_code>(x)) : value::number(x)}, c});
    }
    return dataset(testing::make_schema({kind}, classes), std::move(inst));
}

}  // namespace

TEST_CASE("effective s") {
    CHECK(discretization_config{}.effective_s(3) == 5);
    CHECK(discretization_config{}.effective_s(7) == 7);
    CHECK(discretization_config{8}.effective_s(3) == 8);
}

TEST_CASE("interval_width") {
    CHECK(interval_width(range_stats(4.3, 7.9), 5) == Approx(0.72));
    CHECK(interval_width(range_stats(0, 10), 5) == Approx(2.0));
    CHECK(interval_width(range_stats(3, 3), 5) == 0.0);
}

TEST_CASE("discretize") {
    const auto st = range_stats(4.3, 7.9);
    const double w = interval_width(st, 5);
    CHECK(discretize(5.0, st, 5, w) == 1);
    CHECK(discretize(5.1, st, 5, w) == 2);
    CHECK(discretize(5.7, st, 5, w) == 2);
    CHECK(discretize(7.9, st, 5, w) == 5);
    CHECK(discretize(4.3, st, 5, w) == 1);
    CHECK(discretize(std::nullopt, st, 5, w) == std::nullopt);
    // outside the training range
    CHECK(discretize(1.0, st, 5, w) == 1);
    CHECK(discretize(100.0, st, 5, w) == 5);
    // zero width
    CHECK(discretize(3.0, range_stats(3, 3), 5, 0.0) == 1);
    CHECK(discretize(9.0, range_stats(3, 3), 5, 0.0) == 1);
}

TEST_CASE("property: discretize is monotone and in range") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int trial = 0; trial < 200; ++trial) {
        double lo = u(rng);
        double hi = u(rng);
        if (lo > hi) std::swap(lo, hi);
        const auto st = range_stats(lo, hi);
        const int s = 1 + static_cast<int>(rng() % 10);
        const double w = interval_width(st, s);
        double x = u(rng) * 2.0;
        double y = u(rng) * 2.0;
        if (x > y) std::swap(x, y);
        const int dx = *discretize(x, st, s, w);
        const int dy = *discretize(y, st, s, w);
        CHECK(dx <= dy);
        CHECK(dx >= 1);
        CHECK(dy <= s);
    }
}

TEST_CASE("midpoint") {
    const auto st = range_stats(4.3, 7.9);
    CHECK(midpoint(st, 0.72, 1) == Approx(4.66));
    CHECK(midpoint(st, 0.72, 2) == Approx(5.38));
    CHECK(midpoint(st, 0.72, 0) == Approx(3.94));
    CHECK(midpoint(st, 0.72, 6) == Approx(8.26));
}

TEST_CASE("learn_p counts values per class") {
    SUBCASE("nominal {1,1,2} with classes {A,B,B}") {
        const auto t = vdm_table::learn(one_attribute(attribute_kind::nominal, {{1, 0}, {1, 1}, {2, 1}}, 2));
        const auto p1 = t.probabilities(0, value::code(1));
        const auto p2 = t.probabilities(0, value::code(2));
        CHECK(p1[0] == 0.5);
        CHECK(p1[1] == 0.5);
        CHECK(p2[0] == 0.0);
        CHECK(p2[1] == 1.0);
        CHECK(t.count(0, value::code(1), 1) == 1);
        CHECK(t.total(0, value::code(1)) == 2);
        CHECK(t.intervals(0) == 0);
    }
    SUBCASE("unseen value gives zeros") {
        const auto t = vdm_table::learn(one_attribute(attribute_kind::nominal, {{1, 0}, {2, 1}}, 2));
        const auto p = t.probabilities(0, value::code(7));
        CHECK(p.size() == 2);
        CHECK(sum(p) == 0.0);
        CHECK(t.total(0, value::code(7)) == 0);
        CHECK(sum(t.unknown_probabilities(0)) == 0.0);
    }
    SUBCASE("linear discrete values are their own bins") {
        const auto t = vdm_table::learn(one_attribute(attribute_kind::linear_discrete, {{3, 0}, {3, 1}, {10, 1}}, 2));
        CHECK(t.probabilities(0, value::number(3))[0] == 0.5);
        CHECK(t.probabilities(0, value::number(10))[1] == 1.0);
        CHECK(sum(t.probabilities(0, value::number(4))) == 0.0);
    }
    SUBCASE("unknown values form their own bucket") {
        std::vector<instance> rows{{{value::unknown()}, 1}, {{value::number(1.0)}, 0}, {{value::number(2.0)}, 0}};
        const auto t = vdm_table::learn(dataset(testing::make_schema({attribute_kind::continuous}, 2), rows));
        const auto pu = t.probabilities(0, value::unknown());
        CHECK(pu[0] == 0.0);
        CHECK(pu[1] == 1.0);
        CHECK(t.probabilities(0, value::number(1.0))[0] == 1.0);
        CHECK(t.row_count(0) == 6);
    }
}

TEST_CASE("learn_p with a single class") {
    std::vector<instance> rows;
    for (int i = 0; i < 12; ++i) {
        rows.push_back({{value::number(i * 0.7), value::code(static_cast<nominal_code>(i % 3))}, 0});
    }
    auto s = testing::make_schema({attribute_kind::continuous, attribute_kind::nominal}, 2);
    const auto t = vdm_table::learn(dataset(s, rows));
    for (std::size_t a = 0; a < 2; ++a) {
        for (std::size_t r = 0; r < t.row_count(a); ++r) {
            const auto p = t.row_probabilities(a, r);
            if (t.row_total(a, r) > 0) {
                CHECK(p[0] == 1.0);
                CHECK(p[1] == 0.0);
            }
        }
    }
}

TEST_CASE("continuous rows on the sepal length fixture") {
    const auto data = testing::sepal_length_fixture();
    const auto t = vdm_table::learn(data);
    CHECK(t.intervals(0) == 5);
    CHECK(t.width(0) == Approx(0.72));
    const auto p1 = t.interval_probabilities(0, 1);
    const auto p2 = t.interval_probabilities(0, 2);
    CHECK(p1[0] == Approx(26.0 / 30.0));
    CHECK(p1[2] == Approx(1.0 / 30.0));
    CHECK(p2[1] == Approx(15.0 / 33.0));
    CHECK(sum(t.interval_probabilities(0, 0)) == 0.0);
    CHECK(sum(t.interval_probabilities(0, 6)) == 0.0);
    // discretized lookup
    const auto py = t.probabilities(0, value::number(5.1));
    CHECK(std::equal(py.begin(), py.end(), p2.begin()));
}

TEST_CASE("interpolate between interval midpoints") {
    const std::vector<double> rows{.867, .100, .033, .485, .455, .061, .2, .4, .4, 0, .5, .5, 0, 0, 1};
    const auto st = range_stats(4.3, 7.9);
    std::vector<double> out(3);

    interpolate_p(5.1, st, 5, 0.72, rows, out);
    CHECK(out[0] == Approx(.634).epsilon(0.001));
    CHECK(out[1] == Approx(.317).epsilon(0.001));
    CHECK(out[2] == Approx(.050).epsilon(0.001));

    interpolate_p(5.0, st, 5, 0.72, rows, out);
    CHECK(std::abs(out[0] - .687) < 0.001);
    CHECK(std::abs(out[1] - .268) < 0.001);
    CHECK(std::abs(out[2] - .046) < 0.001);

    interpolate_p(4.66, st, 5, 0.72, rows, out);
    CHECK(out[0] == Approx(.867));
    CHECK(out[1] == Approx(.100));
    CHECK(out[2] == Approx(.033));

    interpolate_p(4.3, st, 5, 0.72, rows, out);
    CHECK(out[0] == Approx(.4335));
    CHECK(out[1] == Approx(.05));

    // beyond the virtual outer midpoints
    interpolate_p(2.0, st, 5, 0.72, rows, out);
    CHECK(sum(out) == 0.0);
    interpolate_p(9.0, st, 5, 0.72, rows, out);
    CHECK(sum(out) == 0.0);
    interpolate_p(7.9, st, 5, 0.72, rows, out);
    CHECK(out[2] == Approx(0.5));
}

TEST_CASE("interpolate with zero width returns the single interval") {
    std::vector<instance> rows{{{value::number(3.0)}, 0}, {{value::number(3.0)}, 1}, {{value::number(3.0)}, 1}};
    const auto t = vdm_table::learn(dataset(testing::make_schema({attribute_kind::continuous}, 2), rows));
    const auto p = t.interpolate(0, 100.0);
    CHECK(p[0] == Approx(1.0 / 3.0));
    CHECK(p[1] == Approx(2.0 / 3.0));
}

TEST_CASE("learn_wvdm") {
    SUBCASE("{1..5} with w = 0.8 counts only the center") {
        const auto data = one_attribute(attribute_kind::continuous, {{1, 0}, {2, 0}, {3, 1}, {4, 1}, {5, 1}}, 2);
        const std::vector<double> widths{0.8};
        const auto t = window_table::learn_with_widths(data, widths);
        REQUIRE(t.values(0).size() == 5);
        CHECK(t.probabilities(0, 2)[0] == 0.0);
        CHECK(t.probabilities(0, 2)[1] == 1.0);
        CHECK(t.probabilities(0, 1)[0] == 1.0);
        CHECK(t.stored_entries() == 5);
    }
    SUBCASE("{1,1,2} with w = 0.5 shares duplicates") {
        const auto data = one_attribute(attribute_kind::continuous, {{1, 0}, {1, 1}, {2, 1}}, 2);
        const std::vector<double> widths{0.5};
        const auto t = window_table::learn_with_widths(data, widths);
        REQUIRE(t.values(0).size() == 2);
        CHECK(t.probabilities(0, 0)[0] == 0.5);
        CHECK(t.probabilities(0, 0)[1] == 0.5);
        CHECK(t.probabilities(0, 1)[0] == 0.0);
        CHECK(t.probabilities(0, 1)[1] == 1.0);
    }
    SUBCASE("single class gives indicator vectors") {
        const auto data = one_attribute(attribute_kind::continuous, {{1, 1}, {1.5, 1}, {2, 1}, {7, 1}}, 3);
        const auto t = window_table::learn(data);
        for (std::size_t i = 0; i < t.values(0).size(); ++i) {
            const auto p = t.probabilities(0, i);
            CHECK(p[0] == 0.0);
            CHECK(p[1] == 1.0);
            CHECK(p[2] == 0.0);
        }
    }
    SUBCASE("wide windows see neighbors") {
        const auto data = one_attribute(attribute_kind::continuous, {{0, 0}, {1, 1}, {2, 1}, {3, 0}}, 2);
        const std::vector<double> widths{2.5};
        const auto t = window_table::learn_with_widths(data, widths);
        // window around 1 is [-0.25, 2.25): 0, 1, 2
        CHECK(t.probabilities(0, 1)[0] == Approx(1.0 / 3.0));
        // window around 3 is [1.75, 4.25): 2, 3
        CHECK(t.probabilities(0, 3)[0] == 0.5);
    }
    SUBCASE("non-continuous attributes have no entries") {
        const auto data = one_attribute(attribute_kind::nominal, {{1, 0}, {2, 1}}, 2);
        const auto t = window_table::learn(data);
        CHECK_FALSE(t.covers(0));
        CHECK(t.stored_entries() == 0);
    }
    SUBCASE("mismatched width list throws") {
        const auto data = one_attribute(attribute_kind::continuous, {{1, 0}, {2, 1}}, 2);
        const std::vector<double> widths{0.5, 0.5};
        CHECK_THROWS_AS(window_table::learn_with_widths(data, widths), std::invalid_argument);
    }
}

TEST_CASE("find_p") {
    const auto data = one_attribute(attribute_kind::continuous, {{1, 0}, {1, 1}, {2, 1}}, 2);
    const std::vector<double> widths{0.5};
    const auto t = window_table::learn_with_widths(data, widths);

    auto p = t.find_p(0, 1.5);
    CHECK(p[0] == Approx(0.25));
    CHECK(p[1] == Approx(0.75));

    p = t.find_p(0, 2.0);
    CHECK(p[0] == 0.0);
    CHECK(p[1] == 1.0);

    p = t.find_p(0, 0.75);
    CHECK(p[0] == 0.0);
    CHECK(p[1] == 0.0);

    p = t.find_p(0, 0.875);
    CHECK(p[0] == Approx(0.25));

    p = t.find_p(0, 2.25);
    CHECK(sum(p) == 0.0);
    p = t.find_p(0, 2.125);
    CHECK(p[1] == Approx(0.5));
    p = t.find_p(0, -50.0);
    CHECK(sum(p) == 0.0);
}

TEST_CASE("property: stored vectors match the brute-force window recount") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 40; ++trial) {
        testing::random_spec spec;
        spec.n = 1 + rng() % 80;
        spec.kinds = {attribute_kind::continuous, attribute_kind::continuous};
        spec.classes = 2 + rng() % 3;
        spec.unknown_rate = 0.1;
        spec.decimals = static_cast<int>(rng() % 3);
        const auto data = testing::random_dataset(rng, spec);
        const auto t = window_table::learn(data);
        for (std::size_t a = 0; a < 2; ++a) {
            std::vector<std::pair<double, std::size_t>> samples;
            for (const auto& inst : data.instances()) {
                if (inst.values[a].is_number()) samples.emplace_back(inst.values[a].as_number(), inst.class_index);
            }
            const auto values = t.values(a);
            for (std::size_t i = 0; i < values.size(); ++i) {
                const auto expect = testing::brute_window(samples, values[i], t.width(a), spec.classes);
                const auto got = t.probabilities(a, i);
                CHECK(std::equal(got.begin(), got.end(), expect.begin()));
            }
        }
    }
}

TEST_CASE("probability_map") {
    const auto data = testing::sepal_length_fixture();
    const auto vdm = vdm_table::learn(data);
    const auto windows = window_table::learn(data);
    const auto text = probability_map(vdm, &windows, 0, landscape::windowed, 5);
    CHECK(std::count(text.begin(), text.end(), '\n') == 5);
    CHECK(text.rfind("3.580000,", 0) == 0);
    CHECK_THROWS_AS(probability_map(vdm, nullptr, 0, landscape::windowed, 5), std::invalid_argument);
    const auto interp = probability_map(vdm, nullptr, 0, landscape::interpolated, 11);
    CHECK(std::count(interp.begin(), interp.end(), '\n') == 11);
}
