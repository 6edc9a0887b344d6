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

#include <cstdint>
#include <vector>

namespace kcm {

struct Interval {
    double lo = 0;
    double hi = 0;
};

/// Wilson score interval for k successes out of n at the given two-sided level.
Interval wilson(std::int64_t k, std::int64_t n, double level = 0.95);

struct LinearFit {
    double slope = 0;
    double intercept = 0;
    double r2 = 0;
    int n = 0;
};

/// Ordinary least squares of y on x. Needs at least two distinct x values.
LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace kcm
