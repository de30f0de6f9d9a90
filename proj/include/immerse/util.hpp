#pragma once

#include <cstdint>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include "immerse/graph.hpp"

namespace immerse {

/// Parses "0.1", "1/10", "3" exactly. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);
std::int64_t floor_r(const Rational& q);
std::int64_t ceil_r(const Rational& q);
double to_double(const Rational& q);
std::string to_string(const Rational& q);

inline std::string kv(std::string_view s) { return std::string(s); }
inline std::string kv(const char* s) { return s; }
inline std::string kv(const std::string& s) { return s; }
inline std::string kv(bool b) { return b ? "true" : "false"; }
inline std::string kv(const Rational& q) { return to_string(q); }
std::string kv(double x);
template <typename T>
    requires std::is_integral_v<T>
std::string kv(T x) {
    return std::to_string(x);
}

/// Line-oriented diagnostics: each record is "event key=value ...".
class RunLog {
public:
    using Field = std::pair<std::string, std::string>;

    void record(std::string_view event, std::initializer_list<Field> fields = {});
    void append(const RunLog& other, std::string_view prefix = {});
    const std::vector<std::string>& lines() const noexcept { return lines_; }
    std::size_t count(std::string_view event) const;
    void write(std::ostream& out) const;

private:
    std::vector<std::string> lines_;
};

}  // namespace immerse
