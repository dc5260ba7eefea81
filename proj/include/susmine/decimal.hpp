#pragma once

#include "susmine/error.hpp"

#include <charconv>
#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <string_view>

namespace susmine {

/// Exact fixed-point decimal with 18 fractional digits, backed by a 128-bit integer.
///
/// Flow quantities stay in this representation through binding and inventory
/// aggregation so that sums and per-instance expansions are exact. Conversion to
/// binary floating point happens only at the characterization boundary.
class Decimal {
public:
    static constexpr int scale_digits = 18;

    constexpr Decimal() = default;

    static Decimal from_integer(std::int64_t value)
    {
        Decimal d;
        d.raw_ = static_cast<__int128>(value) * unit();
        return d;
    }

    /// Parses `[-+]digits[.digits][e[-+]digits]`. Rejects values that would lose
    /// precision at 18 fractional digits or overflow the 128-bit range.
    static Decimal parse(std::string_view text)
    {
        auto fail = [&](const char* why) -> Decimal {
            throw DecimalError("cannot parse decimal '" + std::string(text) + "': " + why);
        };
        std::size_t i = 0;
        bool negative = false;
        if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
            negative = text[i] == '-';
            ++i;
        }
        std::string digits;
        int frac_digits = 0;
        bool seen_point = false;
        bool any_digit = false;
        for (; i < text.size(); ++i) {
            char c = text[i];
            if (c >= '0' && c <= '9') {
                digits.push_back(c);
                any_digit = true;
                if (seen_point) {
                    ++frac_digits;
                }
            } else if (c == '.' && !seen_point) {
                seen_point = true;
            } else {
                break;
            }
        }
        if (!any_digit) {
            return fail("no digits");
        }
        int exponent = 0;
        if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
            ++i;
            if (i < text.size() && text[i] == '+') {
                ++i;
            }
            auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + text.size(), exponent);
            if (ec != std::errc()) {
                return fail("bad exponent");
            }
            i = static_cast<std::size_t>(ptr - text.data());
        }
        if (i != text.size()) {
            return fail("trailing characters");
        }
        if (exponent > 100 || exponent < -100) {
            return fail("exponent out of range");
        }

        // value = digits * 10^(exponent - frac_digits); shift to scale 18
        int shift = scale_digits + exponent - frac_digits;
        while (shift < 0) {
            if (digits.empty() || digits.back() != '0') {
                if (digits.find_first_not_of('0') == std::string::npos) {
                    digits = "0";
                    shift = 0;
                    break;
                }
                return fail("more than 18 fractional digits");
            }
            digits.pop_back();
            ++shift;
        }
        digits.append(static_cast<std::size_t>(shift), '0');

        __int128 raw = 0;
        for (char c : digits) {
            if (__builtin_mul_overflow(raw, static_cast<__int128>(10), &raw) ||
                __builtin_add_overflow(raw, static_cast<__int128>(c - '0'), &raw)) {
                return fail("out of range");
            }
        }
        Decimal d;
        d.raw_ = negative ? -raw : raw;
        return d;
    }

    /// Shortest round-trip text of `value`, then parsed exactly; a JSON literal such
    /// as 0.00001 therefore maps to exactly 1e-5.
    static Decimal from_double(double value)
    {
        if (!std::isfinite(value)) {
            throw DecimalError("non-finite amount");
        }
        char buf[64];
        auto res = std::to_chars(buf, buf + sizeof(buf), value);
        return parse(std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)));
    }

    std::string to_string() const
    {
        __int128 v = raw_;
        bool negative = v < 0;
        unsigned __int128 mag = negative ? static_cast<unsigned __int128>(-(v + 1)) + 1
                                         : static_cast<unsigned __int128>(v);
        std::string digits;
        do {
            digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(mag % 10)));
            mag /= 10;
        } while (mag != 0);
        if (digits.size() <= static_cast<std::size_t>(scale_digits)) {
            digits.insert(0, static_cast<std::size_t>(scale_digits) + 1 - digits.size(), '0');
        }
        std::string int_part = digits.substr(0, digits.size() - scale_digits);
        std::string frac_part = digits.substr(digits.size() - scale_digits);
        while (!frac_part.empty() && frac_part.back() == '0') {
            frac_part.pop_back();
        }
        std::string out = negative ? "-" : "";
        out += int_part;
        if (!frac_part.empty()) {
            out += "." + frac_part;
        }
        return out;
    }

    double to_double() const
    {
        std::string s = to_string();
        return std::strtod(s.c_str(), nullptr);
    }

    bool is_zero() const { return raw_ == 0; }
    bool is_negative() const { return raw_ < 0; }
    bool is_positive() const { return raw_ > 0; }

    Decimal operator-() const
    {
        Decimal d;
        d.raw_ = -raw_;
        return d;
    }

    Decimal& operator+=(const Decimal& other)
    {
        if (__builtin_add_overflow(raw_, other.raw_, &raw_)) {
            throw DecimalError("overflow in addition");
        }
        return *this;
    }

    Decimal& operator-=(const Decimal& other) { return *this += -other; }

    friend Decimal operator+(Decimal a, const Decimal& b) { return a += b; }
    friend Decimal operator-(Decimal a, const Decimal& b) { return a -= b; }

    friend Decimal operator*(Decimal a, std::int64_t n)
    {
        if (__builtin_mul_overflow(a.raw_, static_cast<__int128>(n), &a.raw_)) {
            throw DecimalError("overflow in multiplication");
        }
        return a;
    }
    friend Decimal operator*(std::int64_t n, const Decimal& a) { return a * n; }

    friend bool operator==(const Decimal&, const Decimal&) = default;
    friend std::strong_ordering operator<=>(const Decimal& a, const Decimal& b)
    {
        return a.raw_ <=> b.raw_;
    }

private:
    static constexpr __int128 unit()
    {
        __int128 u = 1;
        for (int i = 0; i < scale_digits; ++i) {
            u *= 10;
        }
        return u;
    }

    __int128 raw_ = 0;
};

}  // namespace susmine
