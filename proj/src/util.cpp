#include "immerse/util.hpp"

#include <charconv>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace immerse {

namespace {

std::int64_t parse_int(std::string_view s, std::string_view whole) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw std::invalid_argument("not a rational number: '" + std::string(whole) + "'");
    return v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    const std::string_view whole = text;
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        const auto den = parse_int(text.substr(slash + 1), whole);
        if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(whole) + "'");
        return Rational(parse_int(text.substr(0, slash), whole), den);
    }
    bool negative = false;
    if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    const auto dot = text.find('.');
    std::string digits(text.substr(0, dot));
    std::int64_t den = 1;
    if (dot != std::string_view::npos) {
        const auto frac = text.substr(dot + 1);
        if (frac.size() > 15) throw std::invalid_argument("too many decimals in '" + std::string(whole) + "'");
        digits += frac;
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    }
    if (digits.empty()) throw std::invalid_argument("not a rational number: '" + std::string(whole) + "'");
    const auto num = parse_int(digits, whole);
    return Rational(negative ? -num : num, den);
}

std::int64_t floor_r(const Rational& q) {
    auto n = q.numerator(), d = q.denominator();  // d > 0
    return n >= 0 ? n / d : -((-n + d - 1) / d);
}

std::int64_t ceil_r(const Rational& q) { return -floor_r(-q); }

double to_double(const Rational& q) {
    return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator());
}

std::string to_string(const Rational& q) {
    if (q.denominator() == 1) return std::to_string(q.numerator());
    return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

std::string kv(double x) {
    std::ostringstream out;
    out << std::setprecision(6) << x;
    return out.str();
}

void RunLog::record(std::string_view event, std::initializer_list<Field> fields) {
    std::string line(event);
    for (const auto& [k, v] : fields) {
        line += ' ';
        line += k;
        line += '=';
        line += v;
    }
    lines_.push_back(std::move(line));
}

void RunLog::append(const RunLog& other, std::string_view prefix) {
    for (const auto& l : other.lines_) lines_.push_back(std::string(prefix) + l);
}

std::size_t RunLog::count(std::string_view event) const {
    std::size_t c = 0;
    for (const auto& l : lines_)
        if (l.compare(0, event.size(), event) == 0 && (l.size() == event.size() || l[event.size()] == ' ')) ++c;
    return c;
}

void RunLog::write(std::ostream& out) const {
    for (const auto& l : lines_) out << l << '\n';
}

}  // namespace immerse
