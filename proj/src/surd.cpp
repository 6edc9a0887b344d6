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

#include "kcm/surd.hpp"

#include <cmath>
#include <stdexcept>

namespace kcm {

namespace {

// Splits n = s*s*rest with rest squarefree.
void split_square(std::int64_t n, std::int64_t& s, std::int64_t& rest) {
    s = 1;
    rest = n;
    for (std::int64_t p = 2; p * p <= rest; ++p)
        while (rest % (p * p) == 0) {
            rest /= p * p;
            s *= p;
        }
}

int rational_sign(const Rational& q) { return q.numerator() > 0 ? 1 : (q.numerator() < 0 ? -1 : 0); }

}  // namespace

Surd::Surd(Rational a, Rational b, std::int64_t r) : a_(a), b_(b), r_(r) {
    if (r < 0) throw std::domain_error("negative radicand");
    normalize();
}

void Surd::normalize() {
    if (r_ == 0 || b_.numerator() == 0) {
        b_ = 0;
        r_ = 0;
        return;
    }
    std::int64_t s = 1, rest = r_;
    split_square(r_, s, rest);
    b_ *= s;
    r_ = rest;
    if (r_ == 1) {
        a_ += b_;
        b_ = 0;
        r_ = 0;
    }
}

Surd Surd::sqrt(Rational q) {
    if (q.numerator() < 0) throw std::domain_error("square root of a negative rational");
    // sqrt(n/m) = sqrt(n*m)/m
    return {Rational(0), Rational(1, q.denominator()), q.numerator() * q.denominator()};
}

int Surd::sign() const {
    const int sa = rational_sign(a_);
    const int sb = rational_sign(b_);
    if (sb == 0) return sa;
    if (sa == 0 || sa == sb) return sb;
    // opposite signs: compare a^2 with b^2 r
    const Rational lhs = a_ * a_;
    const Rational rhs = b_ * b_ * Rational(r_);
    if (lhs == rhs) return 0;
    return lhs > rhs ? sa : sb;
}

double Surd::value() const {
    return boost::rational_cast<double>(a_) +
           boost::rational_cast<double>(b_) * std::sqrt(static_cast<double>(r_));
}

std::string Surd::str() const {
    auto rat = [](const Rational& q) {
        std::string s = std::to_string(q.numerator());
        if (q.denominator() != 1) s += "/" + std::to_string(q.denominator());
        return s;
    };
    if (b_.numerator() == 0) return rat(a_);
    std::string root = (b_ == Rational(1) ? "" : rat(abs(b_)) + "*") + "sqrt(" + std::to_string(r_) + ")";
    if (a_.numerator() == 0) return (b_.numerator() < 0 ? "-" : "") + root;
    return rat(a_) + (b_.numerator() > 0 ? " + " : " - ") + root;
}

Surd& Surd::operator+=(const Surd& o) {
    if (o.b_.numerator() != 0) {
        if (b_.numerator() != 0 && r_ != o.r_) throw std::domain_error("mixing surds with different radicands");
        r_ = o.r_;
    }
    a_ += o.a_;
    b_ += o.b_;
    if (b_.numerator() == 0) r_ = 0;
    return *this;
}

Surd& Surd::operator*=(const Rational& k) {
    a_ *= k;
    b_ *= k;
    if (b_.numerator() == 0) r_ = 0;
    return *this;
}

Surd& Surd::operator/=(const Rational& k) {
    if (k.numerator() == 0) throw std::domain_error("division by zero");
    a_ /= k;
    b_ /= k;
    return *this;
}

}  // namespace kcm
