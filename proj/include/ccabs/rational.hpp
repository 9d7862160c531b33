#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ccabs {

// Raised when a rational operation would leave the exactly representable range.
struct ArithmeticError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exact rational number. Always kept in lowest terms with a positive
// denominator, so equality is plain field comparison.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(std::int64_t value) : num_(value), den_(1) {}
    Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
        if (den_ == 0) {
            throw ArithmeticError("rational with zero denominator");
        }
        normalize();
    }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_negative() const { return num_ < 0; }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return Rational(checked(i128(a.num_) * b.den_ + i128(b.num_) * a.den_),
                        checked(i128(a.den_) * b.den_));
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return a + Rational(-b.num_, b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return Rational(checked(i128(a.num_) * b.num_),
                        checked(i128(a.den_) * b.den_));
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) {
            throw ArithmeticError("division by zero rational");
        }
        return Rational(checked(i128(a.num_) * b.den_),
                        checked(i128(a.den_) * b.num_));
    }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
    }
    friend bool operator<=(const Rational& a, const Rational& b) { return a < b || a == b; }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator>=(const Rational& a, const Rational& b) { return b <= a; }

    // Canonical form: "p" when the denominator is 1, otherwise "p/q".
    std::string str() const {
        if (den_ == 1) {
            return std::to_string(num_);
        }
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    // Parses "p" or "p/q" with an optional leading minus. "p/0" is rejected.
    static Rational parse(const std::string& text) {
        const auto bad = [&]() -> ArithmeticError {
            return ArithmeticError("malformed rational '" + text + "'");
        };
        std::size_t slash = text.find('/');
        std::string num_part = text.substr(0, slash);
        std::string den_part = slash == std::string::npos ? "1" : text.substr(slash + 1);
        if (num_part.empty() || den_part.empty()) {
            throw bad();
        }
        // stoll tolerates leading whitespace and '+'; the file format does not.
        if (num_part.find_first_not_of("-0123456789") != std::string::npos ||
            den_part.find_first_not_of("0123456789") != std::string::npos) {
            throw bad();
        }
        std::int64_t num = 0;
        std::int64_t den = 0;
        try {
            std::size_t used = 0;
            num = std::stoll(num_part, &used);
            if (used != num_part.size()) throw bad();
            den = std::stoll(den_part, &used);
            if (used != den_part.size()) throw bad();
        } catch (const ArithmeticError&) {
            throw;
        } catch (const std::exception&) {
            throw bad();
        }
        if (den == 0) {
            throw ArithmeticError("malformed rational '" + text + "': zero denominator");
        }
        return Rational(num, den);
    }

private:
    using i128 = __int128;

    static std::int64_t checked(i128 v) {
        if (v > INT64_MAX || v < INT64_MIN) {
            throw ArithmeticError("rational arithmetic overflow");
        }
        return static_cast<std::int64_t>(v);
    }

    void normalize() {
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
        if (num_ == 0) {
            den_ = 1;
        }
    }

    std::int64_t num_;
    std::int64_t den_;
};

}  // namespace ccabs
