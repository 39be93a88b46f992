#include "arviz/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/binomial.hpp>

namespace arviz {

double mean(std::span<const double> xs) {
    if (xs.empty()) return 0.0;
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double stdev(std::span<const double> xs) {
    if (xs.size() < 2) return 0.0;
    const double m = mean(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

SignTestResult sign_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("sign_test: samples differ in length");
    SignTestResult r;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) {
            ++r.lower;
        } else if (a[i] > b[i]) {
            ++r.higher;
        } else {
            ++r.ties;
        }
    }
    const int n = r.lower + r.higher;
    if (n == 0) return r;
    const boost::math::binomial dist(n, 0.5);
    const int k = std::min(r.lower, r.higher);
    r.pValue = std::min(1.0, 2.0 * boost::math::cdf(dist, k));
    return r;
}

}  // namespace arviz
