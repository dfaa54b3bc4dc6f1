#include <cstdio>
#include <algorithm>
#include <cstdlib>
#include <string>
#include <vector>

#include "adhesion/acceptance.hpp"

// usage: acceptance [criterion ids...]
int main(int argc, char** argv) {
    std::vector<int> only;
    for (int k = 1; k < argc; ++k) only.push_back(std::atoi(argv[k]));
    int failed = 0;
    for (int id = 1; id <= adhesion::kCriteria; ++id) {
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
        auto r = adhesion::run_criterion(id);
        std::printf("%s\n", adhesion::format_line(r).c_str());
        std::fflush(stdout);
        failed += !r.pass;
    }
    std::printf("%d of %zu criteria failed\n", failed, only.empty() ? std::size_t(adhesion::kCriteria) : only.size());
    return failed ? 1 : 0;
}
