#pragma once

#include <string>
#include <vector>

namespace snumlab {

// One verified identity or inequality. `margin` is the worst slack observed:
// non-negative (within tolerance) means the item holds. Items whose
// hypotheses are not met stay applicable = false and do not count against
// the report.
struct CheckItem {
    std::string name;
    bool applicable = true;
    bool pass = true;
    double margin = 0.0;
};

struct PropertyReport {
    std::vector<CheckItem> items;

    bool all_pass() const {
        for (const auto& it : items)
            if (it.applicable && !it.pass) return false;
        return true;
    }

    const CheckItem* find(const std::string& name) const {
        for (const auto& it : items)
            if (it.name == name) return &it;
        return nullptr;
    }
};

}  // namespace snumlab
