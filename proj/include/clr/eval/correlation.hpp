#pragma once

#include <span>
#include <vector>

namespace clr {

// Average ranks, 1-based; tied values share the mean of their rank range.
std::vector<double> average_ranks(std::span<const double> xs);

// Product-moment correlation. Throws std::invalid_argument("zero variance")
// when either input is constant, and requires len >= 2 with equal lengths.
double pearson(std::span<const double> xs, std::span<const double> ys);

// Pearson correlation of the average-ranked data.
double spearman(std::span<const double> xs, std::span<const double> ys);

}  // namespace clr
