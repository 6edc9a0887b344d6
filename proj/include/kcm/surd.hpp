/*
   Copyright 2026 The kcm-expander Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>

namespace kcm {

using Rational = boost::rational<std::int64_t>;

/// Exact number a + b*sqrt(r) with rational a, b and a nonnegative integer
/// radicand r. Two surds can be combined only if they share r or one of them
/// is rational.
class Surd {
public:
    Surd() = default;
    Surd(std::int64_t value) : a_(value) {}  // NOLINT(google-explicit-constructor)
    Surd(Rational value) : a_(value) {}      // NOLINT(google-explicit-constructor)
    Surd(Rational a, Rational b, std::int64_t r);

    /// sqrt(q) for a nonnegative rational q, with square factors pulled out.
    static Surd sqrt(Rational q);

    const Rational& rational_part() const { return a_; }
    const Rational& surd_part() const { return b_; }
    std::int64_t radicand() const { return r_; }
    bool is_rational() const { return b_.numerator() == 0 || r_ == 0; }

    /// Exact sign in {-1, 0, 1}.
    int sign() const;
    double value() const;
    std::string str() const;

    Surd operator-() const { return {-a_, -b_, r_}; }
    Surd& operator+=(const Surd& o);
    Surd& operator-=(const Surd& o) { return *this += -o; }
    Surd& operator*=(const Rational& k);
    Surd& operator/=(const Rational& k);

    friend Surd operator+(Surd x, const Surd& y) { return x += y; }
    friend Surd operator-(Surd x, const Surd& y) { return x -= y; }
    friend Surd operator*(Surd x, const Rational& k) { return x *= k; }
    friend Surd operator*(const Rational& k, Surd x) { return x *= k; }
    friend Surd operator*(Surd x, std::int64_t k) { return x *= Rational(k); }
    friend Surd operator*(std::int64_t k, Surd x) { return x *= Rational(k); }
    friend Surd operator/(Surd x, const Rational& k) { return x /= k; }

    friend bool operator<(const Surd& x, const Surd& y) { return (x - y).sign() < 0; }
    friend bool operator<=(const Surd& x, const Surd& y) { return (x - y).sign() <= 0; }
    friend bool operator>(const Surd& x, const Surd& y) { return (x - y).sign() > 0; }
    friend bool operator>=(const Surd& x, const Surd& y) { return (x - y).sign() >= 0; }
    friend bool operator==(const Surd& x, const Surd& y) { return (x - y).sign() == 0; }

private:
    void normalize();

    Rational a_{0};
    Rational b_{0};
    std::int64_t r_ = 0;
};

}  // namespace kcm
