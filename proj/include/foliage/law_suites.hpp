#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "foliage/pipeline.hpp"

namespace foliage {

/// Execution mode of a law suite.  Instances are independent, so the
/// parallel mode distributes them over OpenMP threads; the serial mode is
/// the reference implementation and must produce identical results.
enum class ExecMode { serial, parallel };

struct SuiteContext {
    std::uint64_t seed = 0;
    ExecMode mode = ExecMode::parallel;
    TruncParams trunc;
};

struct SuiteResult {
    std::string suite;
    std::size_t instances = 0;
    std::vector<CheckRecord> records;

    bool passed() const {
        for (const auto& r : records)
            if (r.status == Status::fail) return false;
        return true;
    }
};

struct unknown_suite : std::invalid_argument {
    explicit unknown_suite(const std::string& id) : std::invalid_argument("unknown suite: " + id) {}
};

std::vector<std::string> suite_ids();
SuiteResult run_suite(const std::string& id, const SuiteContext& ctx);

/// Independent count oracle for the forest enumerator: brute force over all
/// parent assignments with a DFS cycle check.
std::size_t count_forests_brute_force(std::size_t n);

}  // namespace foliage
