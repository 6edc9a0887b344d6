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

#include "kcm/stats.hpp"

#include <boost/math/distributions/normal.hpp>

#include <cmath>
#include <stdexcept>

namespace kcm {

Interval wilson(std::int64_t k, std::int64_t n, double level) {
    if (n <= 0) return {0.0, 1.0};
    const double z = boost::math::quantile(boost::math::normal(), 0.5 + level / 2);
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(k) / nn;
    const double z2 = z * z;
    const double denom = 1 + z2 / nn;
    const double centre = (p + z2 / (2 * nn)) / denom;
    const double half = z * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn)) / denom;
    Interval ci{centre - half, centre + half};
    if (k == 0) ci.lo = 0;
    if (k == n) ci.hi = 1;
    return ci;
}

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("x and y differ in length");
    LinearFit fit;
    fit.n = static_cast<int>(x.size());
    if (fit.n < 2) throw std::invalid_argument("need at least two points");
    double mx = 0, my = 0;
    for (int i = 0; i < fit.n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= fit.n;
    my /= fit.n;
    double sxx = 0, sxy = 0, syy = 0;
    for (int i = 0; i < fit.n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0) throw std::invalid_argument("x values are all equal");
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = syy == 0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return fit;
}

}  // namespace kcm
