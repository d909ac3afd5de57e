#pragma once

#include <string>
#include <vector>

namespace spa {

struct SelfCheck {
    std::string name;
    bool passed;
};

/// Quick end-to-end sanity battery, a few milliseconds.
std::vector<SelfCheck> run_selftest();

}  // namespace spa
