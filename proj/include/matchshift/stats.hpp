#pragma once

#include <matchshift/errors.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

namespace matchshift {

inline double mean(const std::vector<double> & xs)
{
    if (xs.empty())
        throw EmptyInput("mean of an empty sample");
    double s = 0;
    for (double x : xs)
        s += x;
    return s / static_cast<double>(xs.size());
}

// Product-moment correlation coefficient.
inline double pearson(const std::vector<double> & xs, const std::vector<double> & ys)
{
    if (xs.size() != ys.size())
        throw Error("pearson needs samples of equal length");
    if (xs.size() < 2)
        throw DegenerateInput("pearson needs at least two points");
    const double mx = mean(xs), my = mean(ys);
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0 || syy == 0)
        throw DegenerateInput("pearson is undefined for zero variance");
    return sxy / std::sqrt(sxx * syy);
}

// Linear-interpolation quantile on sorted values (type-7 convention).
inline double quantile(std::vector<double> xs, double q)
{
    if (xs.empty())
        throw EmptyInput("quantile of an empty sample");
    if (q < 0 || q > 1)
        throw Error("quantile level must lie in [0,1]");
    std::sort(xs.begin(), xs.end());
    const double h = q * (static_cast<double>(xs.size()) - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= xs.size())
        return xs.back();
    return xs[lo] + (h - std::floor(h)) * (xs[lo + 1] - xs[lo]);
}

} // namespace matchshift
