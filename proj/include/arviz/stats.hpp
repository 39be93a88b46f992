#pragma once

#include <span>

namespace arviz {

double mean(std::span<const double> xs);
/// Sample standard deviation (n - 1); 0 for fewer than two values.
double stdev(std::span<const double> xs);

struct SignTestResult {
    int lower = 0;    // pairs where a < b
    int higher = 0;   // pairs where a > b
    int ties = 0;
    double pValue = 1.0;  // two-sided exact binomial, ties dropped
};

/// Paired two-sided sign test of a against b.
SignTestResult sign_test(std::span<const double> a, std::span<const double> b);

}  // namespace arviz
