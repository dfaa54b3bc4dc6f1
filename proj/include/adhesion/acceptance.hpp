#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace adhesion {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

constexpr int kCriteria = 11;

// seed drives every randomized sample; only empty runs all criteria
CriterionResult run_criterion(int id, std::uint64_t seed = 1);
std::vector<CriterionResult> run_acceptance(const std::vector<int>& only = {}, std::uint64_t seed = 1);

// "PASS  3  title: detail (1.23 s)"
std::string format_line(const CriterionResult& r);

}  // namespace adhesion
