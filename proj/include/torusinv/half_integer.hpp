#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace torusinv {

// Exact value in (1/2)Z, stored as twice the value.
struct HalfInteger {
    std::int64_t twice = 0;

    static constexpr HalfInteger from_int(std::int64_t v) { return {2 * v}; }
    static constexpr HalfInteger from_twice(std::int64_t t) { return {t}; }

    constexpr double value() const { return static_cast<double>(twice) / 2.0; }
    constexpr bool is_integer() const { return twice % 2 == 0; }

    friend constexpr auto operator<=>(HalfInteger, HalfInteger) = default;
    friend constexpr HalfInteger operator+(HalfInteger a, HalfInteger b) { return {a.twice + b.twice}; }
    friend constexpr HalfInteger operator-(HalfInteger a, HalfInteger b) { return {a.twice - b.twice}; }
    friend constexpr HalfInteger operator*(std::int64_t s, HalfInteger a) { return {s * a.twice}; }
};

// "9/2", "-3", "1/2"
std::string to_string(HalfInteger h);

}  // namespace torusinv
