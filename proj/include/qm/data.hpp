#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

namespace qm {

struct Dataset {
    std::vector<std::array<double, 2>> points;
    std::vector<int> labels;
    int n_classes = 2;

    std::size_t size() const { return points.size(); }
};

/// Two moons: the first n/2 samples (class 0) lie on the arc
/// (cos t, sin t), the rest (class 1) on (1 - cos t, 0.5 - sin t), with t on
/// a uniform grid over [0, pi] per moon. Gaussian noise of the given
/// standard deviation is then added to every coordinate, in sample order,
/// x before y. Deterministic given the seed.
Dataset make_moons(std::size_t n_samples, double noise, std::uint64_t seed);

struct SplitConfig {
    std::size_t train_size = 200;
    std::size_t test_size = 100;
    std::uint64_t seed = 0;
};

/// Stratified seeded shuffle-partition: indices are shuffled within each
/// class, per-class quotas keep the train/test class balance within one
/// sample of the overall balance, and each final set is shuffled once more
/// so it is not class-ordered.
std::pair<Dataset, Dataset> split(const Dataset& dataset, const SplitConfig& config);

/// CSV with header "x1,x2,label"; coordinates carry 17 significant digits
/// so round trips are exact. Written atomically.
void save_csv(const Dataset& dataset, const std::filesystem::path& path);

/// ParseError on malformed rows, naming the line.
Dataset load_csv(const std::filesystem::path& path);

} // namespace qm
