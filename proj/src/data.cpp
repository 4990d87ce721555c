#include "qm/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <string>

#include "qm/errors.hpp"
#include "qm/io.hpp"
#include "qm/rng.hpp"

namespace qm {

namespace {

/// t_i = pi * i / (count - 1); a single point sits at t = 0.
double arc_parameter(std::size_t i, std::size_t count) {
    if (count <= 1) return 0.0;
    return std::numbers::pi * static_cast<double>(i) / static_cast<double>(count - 1);
}

} // namespace

Dataset make_moons(std::size_t n_samples, double noise, std::uint64_t seed) {
    if (n_samples < 2) {
        throw ValidationError("make_moons needs at least 2 samples");
    }
    if (!(noise >= 0.0) || !std::isfinite(noise)) {
        throw ValidationError("noise must be a finite non-negative number");
    }
    const std::size_t n_outer = n_samples / 2;
    const std::size_t n_inner = n_samples - n_outer;

    Dataset d;
    d.points.reserve(n_samples);
    d.labels.reserve(n_samples);
    for (std::size_t i = 0; i < n_outer; ++i) {
        const double t = arc_parameter(i, n_outer);
        d.points.push_back({std::cos(t), std::sin(t)});
        d.labels.push_back(0);
    }
    for (std::size_t i = 0; i < n_inner; ++i) {
        const double t = arc_parameter(i, n_inner);
        d.points.push_back({1.0 - std::cos(t), 0.5 - std::sin(t)});
        d.labels.push_back(1);
    }
    if (noise > 0.0) {
        Rng rng(seed);
        for (auto& p : d.points) {
            p[0] += noise * rng.normal();
            p[1] += noise * rng.normal();
        }
    }
    return d;
}

std::pair<Dataset, Dataset> split(const Dataset& dataset, const SplitConfig& config) {
    if (config.train_size == 0 || config.test_size == 0) {
        throw ValidationError("split sizes must be positive");
    }
    if (dataset.size() < config.train_size + config.test_size) {
        throw ValidationError("dataset has " + std::to_string(dataset.size()) +
                              " samples, need " +
                              std::to_string(config.train_size + config.test_size));
    }

    Rng rng(config.seed);
    std::vector<std::vector<std::size_t>> by_class(dataset.n_classes);
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        by_class.at(dataset.labels[i]).push_back(i);
    }
    for (auto& idx : by_class) rng.shuffle(idx);

    // Per-class quotas by largest remainder, so each side matches the global
    // class balance to within one sample.
    auto quotas = [&](std::size_t want) {
        std::vector<std::size_t> q(by_class.size());
        std::vector<std::pair<double, std::size_t>> rem;
        std::size_t assigned = 0;
        for (std::size_t k = 0; k < by_class.size(); ++k) {
            const double exact = static_cast<double>(want) *
                                 static_cast<double>(by_class[k].size()) /
                                 static_cast<double>(dataset.size());
            q[k] = static_cast<std::size_t>(exact);
            assigned += q[k];
            rem.push_back({exact - static_cast<double>(q[k]), k});
        }
        std::sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) {
            return a.first > b.first || (a.first == b.first && a.second < b.second);
        });
        for (std::size_t i = 0; assigned < want; ++i, ++assigned) {
            ++q[rem[i % rem.size()].second];
        }
        return q;
    };

    const auto train_quota = quotas(config.train_size);
    const auto test_quota = quotas(config.test_size);

    std::vector<std::size_t> train_idx, test_idx;
    for (std::size_t k = 0; k < by_class.size(); ++k) {
        if (train_quota[k] + test_quota[k] > by_class[k].size()) {
            throw ValidationError("class " + std::to_string(k) +
                                  " has too few samples for the requested split");
        }
        for (std::size_t i = 0; i < train_quota[k]; ++i) {
            train_idx.push_back(by_class[k][i]);
        }
        for (std::size_t i = 0; i < test_quota[k]; ++i) {
            test_idx.push_back(by_class[k][train_quota[k] + i]);
        }
    }
    rng.shuffle(train_idx);
    rng.shuffle(test_idx);

    auto take = [&](const std::vector<std::size_t>& idx) {
        Dataset out;
        out.n_classes = dataset.n_classes;
        out.points.reserve(idx.size());
        out.labels.reserve(idx.size());
        for (std::size_t i : idx) {
            out.points.push_back(dataset.points[i]);
            out.labels.push_back(dataset.labels[i]);
        }
        return out;
    };
    return {take(train_idx), take(test_idx)};
}

void save_csv(const Dataset& dataset, const std::filesystem::path& path) {
    std::string out = "x1,x2,label\n";
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        out += fmt_double(dataset.points[i][0]);
        out += ',';
        out += fmt_double(dataset.points[i][1]);
        out += ',';
        out += std::to_string(dataset.labels[i]);
        out += '\n';
    }
    atomic_write(path, out);
}

namespace {

double parse_double(const std::string& field, std::size_t line_no) {
    const char* begin = field.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || !std::isfinite(v)) {
        throw ParseError("line " + std::to_string(line_no) + ": bad number '" + field + "'");
    }
    return v;
}

} // namespace

Dataset load_csv(const std::filesystem::path& path) {
    std::istringstream in(read_file(path));
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) {
        throw ParseError(path.string() + ": empty file, expected header");
    }
    ++line_no;
    if (line == "x1,x2,label\r") line.pop_back();
    if (line != "x1,x2,label") {
        throw ParseError("line 1: expected header 'x1,x2,label'");
    }

    Dataset d;
    int max_label = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string f1, f2, f3;
        if (!std::getline(row, f1, ',') || !std::getline(row, f2, ',') ||
            !std::getline(row, f3)) {
            throw ParseError("line " + std::to_string(line_no) + ": expected 3 fields");
        }
        const double x1 = parse_double(f1, line_no);
        const double x2 = parse_double(f2, line_no);
        char* end = nullptr;
        const long label = std::strtol(f3.c_str(), &end, 10);
        if (end == f3.c_str() || *end != '\0' || label < 0) {
            throw ParseError("line " + std::to_string(line_no) + ": bad label '" + f3 + "'");
        }
        d.points.push_back({x1, x2});
        d.labels.push_back(static_cast<int>(label));
        max_label = std::max(max_label, static_cast<int>(label));
    }
    d.n_classes = max_label + 1;
    return d;
}

} // namespace qm
